//! The `enhance`, `evaluate` and `batch` commands.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use musica_core::{
    cnr_image, enhance, improvement_pct, normalize_minmax, CnrReport, Mode, PipelineConfig,
};
use rayon::prelude::*;

use crate::config::{Command, RunConfig, Settings};
use crate::error::{Error, Result};
use crate::imageio::{load_grayscale, save_grayscale, Format};
use crate::report::{box_plot_svg, sig6, to_csv, Row};

/// Runs the configured command, writing progress to `stdout`.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    match cfg.command {
        Command::Enhance => cmd_enhance(cfg, stdout),
        Command::Evaluate => cmd_evaluate(cfg, stdout),
        Command::Batch => cmd_batch(cfg, stdout),
    }
}

fn say(stdout: &mut dyn Write, text: std::fmt::Arguments) {
    // a closed stdout is not worth failing the run over
    let _ = writeln!(stdout, "{text}");
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".into())
}

/// CNR report, or `None` when the image has no measurable noise.
fn cnr_or_degenerate(img: &musica_core::ImageF, bins: usize) -> Result<Option<CnrReport>> {
    match cnr_image(img, bins) {
        Ok(r) => Ok(Some(r)),
        Err(musica_core::Error::DegenerateNoise) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn row(
    image: &str,
    method: &str,
    report: Option<&CnrReport>,
    baseline: Option<&CnrReport>,
    elapsed: Option<f64>,
) -> Row {
    let improvement = match (baseline, report) {
        (Some(b), Some(r)) => improvement_pct(b, r).ok(),
        _ => None,
    };
    Row {
        image: image.into(),
        method: method.into(),
        stats: report.map(|r| r.stats),
        noise_level: report.map(|r| r.noise_level),
        improvement_pct: improvement,
        elapsed_ms: elapsed,
    }
}

fn cmd_enhance(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let input = &cfg.inputs[0];
    let pipeline = cfg.settings.pipeline()?;
    let out = cfg
        .out
        .clone()
        .unwrap_or_else(|| input.with_file_name(format!("{}_{}.png", stem(input), pipeline.mode)));
    Format::from_path(&out)?;
    let src = load_grayscale(input)?;
    let result = enhance(&src.pixels, &pipeline)?;
    save_grayscale(&result, &out, cfg.settings.depth)?;
    let _ = write!(stdout, "{}", cfg.settings);
    say(stdout, format_args!("wrote {}", out.display()));
    Ok(())
}

fn cmd_evaluate(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let s = &cfg.settings;
    let out_dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    create_dir(&out_dir)?;
    let mut rows = Vec::new();
    let mut scale = String::from("image,cnr_min,cnr_max\n");
    for input in &cfg.inputs {
        let src = load_grayscale(input)?;
        let name = file_name(input);
        let t0 = Instant::now();
        let report = cnr_or_degenerate(&src.pixels, s.bins)?;
        let elapsed = s.timing.then(|| t0.elapsed().as_secs_f64() * 1e3);
        match &report {
            Some(r) => {
                // display copy: linear map of [min, max] onto [0, 1]
                let display = normalize_minmax(&r.cnr_image)?;
                let path = out_dir.join(format!("{}_cnr.png", stem(input)));
                save_grayscale(&display, &path, 8)?;
                scale.push_str(&format!(
                    "{},{},{}\n",
                    csv_field(&name),
                    sig6(r.stats.min),
                    sig6(r.stats.max)
                ));
                say(
                    stdout,
                    format_args!(
                        "{name}: mean CNR {} (noise {})",
                        sig6(r.mean()),
                        sig6(r.noise_level)
                    ),
                );
            }
            None => {
                log::warn!("{name}: no measurable noise, CNR undefined");
                say(stdout, format_args!("{name}: degenerate"));
            }
        }
        rows.push(row(&name, "input", report.as_ref(), None, elapsed));
    }
    write_file(&out_dir.join("cnr.csv"), &to_csv(&rows))?;
    write_file(&out_dir.join("cnr_display.csv"), scale.as_bytes())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Image files (`.png`, `.pgm`, `.pnm`) directly inside `dir`, sorted by name.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let io_err = |source| Error::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io_err)? {
        let path = entry.map_err(io_err)?.path();
        if path.is_file() && Format::from_path(&path).is_ok() {
            files.push(path);
        }
    }
    files.sort_by_key(|p| p.file_name().map(|n| n.to_os_string()));
    Ok(files)
}

/// The three batch rows of one image: original, conventional, multistage.
pub fn compare_methods(path: &Path, settings: &Settings) -> Result<Vec<Row>> {
    let name = file_name(path);
    let base: PipelineConfig = settings.pipeline()?;
    let img = load_grayscale(path)?.pixels;
    let timed = |t0: Instant| settings.timing.then(|| t0.elapsed().as_secs_f64() * 1e3);

    let t0 = Instant::now();
    let original = cnr_or_degenerate(&img, settings.bins)?;
    let mut rows = vec![row(
        &name,
        "original",
        original.as_ref(),
        original.as_ref(),
        timed(t0),
    )];
    for mode in [Mode::Conventional, Mode::Multistage] {
        let t0 = Instant::now();
        let enhanced = enhance(&img, &PipelineConfig { mode, ..base })?;
        let report = cnr_or_degenerate(&enhanced, settings.bins)?;
        rows.push(row(
            &name,
            mode.as_str(),
            report.as_ref(),
            original.as_ref(),
            timed(t0),
        ));
    }
    if original.is_none() {
        log::warn!("{name}: original has no measurable noise, improvement left blank");
    }
    Ok(rows)
}

fn cmd_batch(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let dir = &cfg.inputs[0];
    let settings = &cfg.settings;
    let files = list_images(dir)?;
    if files.is_empty() {
        return Err(Error::NoInputs(dir.clone()));
    }
    let out_dir = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("musica-report"));
    create_dir(&out_dir)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.jobs)
        .build()
        .map_err(|e| {
            Error::Usage(format!(
                "cannot start {} worker threads: {e}",
                settings.jobs
            ))
        })?;
    let results: Vec<Result<Vec<Row>>> = pool.install(|| {
        files
            .par_iter()
            .map(|f| compare_methods(f, settings))
            .collect()
    });

    let mut rows = Vec::new();
    let mut last_err = None;
    for (file, result) in files.iter().zip(results) {
        match result {
            Ok(r) => rows.extend(r),
            Err(e) => {
                log::error!("{}: {e}", file.display());
                last_err = Some(e);
            }
        }
    }
    if rows.is_empty() {
        return Err(last_err.expect("at least one file was processed"));
    }
    let csv_path = out_dir.join("report.csv");
    let svg_path = out_dir.join("boxplot.svg");
    write_file(&csv_path, &to_csv(&rows))?;
    write_file(
        &svg_path,
        box_plot_svg(&rows, "CNR per image and method").as_bytes(),
    )?;
    say(
        stdout,
        format_args!(
            "{} images, {} rows -> {}, {}",
            rows.len() / 3,
            rows.len(),
            csv_path.display(),
            svg_path.display()
        ),
    );
    Ok(())
}

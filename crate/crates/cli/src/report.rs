//! CSV statistics tables and SVG box plots.

use std::fmt::Write as _;

use musica_core::metrics::Summary;

/// Fixed CSV header.
pub const CSV_HEADER: [&str; 12] = [
    "image",
    "method",
    "mean",
    "std",
    "median",
    "q1",
    "q3",
    "min",
    "max",
    "noise_level",
    "improvement_pct",
    "elapsed_ms",
];

/// Marker written in the `mean` column when no CNR could be computed.
pub const DEGENERATE: &str = "degenerate";

/// One line of a CNR report.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub image: String,
    pub method: String,
    /// `None` for a degenerate (constant) image.
    pub stats: Option<Summary>,
    pub noise_level: Option<f64>,
    pub improvement_pct: Option<f64>,
    pub elapsed_ms: Option<f64>,
}

/// Formats `v` with six significant digits: fixed notation for
/// magnitudes in `[1e-5, 1e6)`, scientific otherwise.
pub fn sig6(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0.00000".into();
    }
    // Exponent after rounding to six digits, so 999999.5 becomes 1e6.
    let sci = format!("{v:.5e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..6).contains(&exp) {
        format!("{:.*}", (5 - exp) as usize, v)
    } else {
        sci
    }
}

/// Renders rows as CSV, header first.
pub fn to_csv(rows: &[Row]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("writing to memory");
    let opt = |v: Option<f64>| v.map(sig6).unwrap_or_default();
    for row in rows {
        let mut rec = vec![row.image.clone(), row.method.clone()];
        match &row.stats {
            Some(s) => rec.extend([s.mean, s.std, s.median, s.q1, s.q3, s.min, s.max].map(sig6)),
            None => {
                rec.push(DEGENERATE.into());
                rec.extend(std::iter::repeat(String::new()).take(6));
            }
        }
        rec.extend([
            opt(row.noise_level),
            opt(row.improvement_pct),
            opt(row.elapsed_ms),
        ]);
        w.write_record(&rec).expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

const PALETTE: [&str; 6] = [
    "#9e9e9e", "#4f81bd", "#c0504d", "#9bbb59", "#8064a2", "#f79646",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Box plot with one box per row (q1, median, q3; whiskers at min and
/// max), grouped by image and coloured by method. Degenerate rows leave
/// an empty slot. Output depends only on `rows`.
pub fn box_plot_svg(rows: &[Row], title: &str) -> String {
    let mut images: Vec<&str> = Vec::new();
    let mut methods: Vec<&str> = Vec::new();
    for r in rows {
        if !images.contains(&r.image.as_str()) {
            images.push(&r.image);
        }
        if !methods.contains(&r.method.as_str()) {
            methods.push(&r.method);
        }
    }
    let (lo, hi) = rows
        .iter()
        .filter_map(|r| r.stats)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s.min), hi.max(s.max))
        });
    let (lo, hi) = if lo.is_finite() {
        (lo.min(0.0), hi.max(lo + 1e-9))
    } else {
        (0.0, 1.0)
    };

    let box_w = 14.0;
    let group_w = box_w * (methods.len().max(1) as f64 + 1.0);
    let (left, top, plot_h) = (60.0, 40.0, 300.0);
    let plot_w = group_w * images.len().max(1) as f64;
    let width = left + plot_w + 20.0;
    let height = top + plot_h + 110.0;
    let y = |v: f64| top + plot_h * (1.0 - (v - lo) / (hi - lo));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="20" font-size="14" text-anchor="middle">{}</text>"#,
        width / 2.0,
        escape(title)
    );
    // axis with five ticks
    let _ = writeln!(
        s,
        r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{:.2}" stroke="black"/>"#,
        top + plot_h
    );
    for i in 0..=4 {
        let v = lo + (hi - lo) * i as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{left}" y2="{:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 4.0,
            y(v),
            y(v),
            left - 6.0,
            y(v) + 3.0,
            sig6(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" transform="rotate(-90 14 {:.2})" text-anchor="middle">CNR</text>"#,
        top + plot_h / 2.0,
        top + plot_h / 2.0
    );

    for r in rows {
        let gi = images.iter().position(|i| *i == r.image).unwrap();
        let mi = methods.iter().position(|m| *m == r.method).unwrap();
        let Some(st) = r.stats else { continue };
        let x0 = left + gi as f64 * group_w + box_w * (mi as f64 + 0.5);
        let xc = x0 + box_w / 2.0;
        let colour = PALETTE[mi % PALETTE.len()];
        let _ = writeln!(
            s,
            r#"<g><line x1="{xc:.2}" y1="{:.2}" x2="{xc:.2}" y2="{:.2}" stroke="black"/><rect x="{x0:.2}" y="{:.2}" width="{box_w:.2}" height="{:.2}" fill="{colour}" stroke="black"/><line x1="{x0:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="2"/></g>"#,
            y(st.max),
            y(st.min),
            y(st.q3),
            (y(st.q1) - y(st.q3)).max(0.0),
            y(st.median),
            x0 + box_w,
            y(st.median)
        );
    }
    for (gi, image) in images.iter().enumerate() {
        let xc = left + (gi as f64 + 0.5) * group_w;
        let yl = top + plot_h + 12.0;
        let _ = writeln!(
            s,
            r#"<text x="{xc:.2}" y="{yl:.2}" transform="rotate(45 {xc:.2} {yl:.2})">{}</text>"#,
            escape(image)
        );
    }
    for (mi, method) in methods.iter().enumerate() {
        let x = left + mi as f64 * 110.0;
        let yl = height - 14.0;
        let _ = writeln!(
            s,
            r#"<rect x="{x:.2}" y="{:.2}" width="10" height="10" fill="{}" stroke="black"/><text x="{:.2}" y="{yl:.2}">{}</text>"#,
            yl - 9.0,
            PALETTE[mi % PALETTE.len()],
            x + 14.0,
            escape(method)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(v: f64) -> Summary {
        Summary::of(&[v, v + 1.0, v + 2.0]).unwrap()
    }

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.0), "0.00000");
        assert_eq!(sig6(1.0), "1.00000");
        assert_eq!(sig6(0.123456789), "0.123457");
        assert_eq!(sig6(-57.89473684), "-57.8947");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(999999.6), "1.00000e6");
        assert_eq!(sig6(1.5e-7), "1.50000e-7");
        assert_eq!(sig6(0.000012345678), "0.0000123457");
        assert_eq!(sig6(f64::NAN), "NaN");
    }

    #[test]
    fn csv_layout() {
        let rows = vec![
            Row {
                image: "a,b.png".into(),
                method: "original".into(),
                stats: Some(summary(1.0)),
                noise_level: Some(0.01),
                improvement_pct: Some(0.0),
                elapsed_ms: None,
            },
            Row {
                image: "flat.png".into(),
                method: "original".into(),
                stats: None,
                noise_level: None,
                improvement_pct: None,
                elapsed_ms: None,
            },
        ];
        let text = String::from_utf8(to_csv(&rows)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "image,method,mean,std,median,q1,q3,min,max,noise_level,improvement_pct,elapsed_ms"
        );
        assert_eq!(
            lines[1],
            "\"a,b.png\",original,2.00000,0.816497,2.00000,1.50000,2.50000,1.00000,3.00000,0.0100000,0.00000,"
        );
        assert_eq!(lines[2], "flat.png,original,degenerate,,,,,,,,,");
    }

    #[test]
    fn svg_is_deterministic_and_escaped() {
        let rows: Vec<Row> = ["original", "conventional", "multistage"]
            .iter()
            .enumerate()
            .map(|(i, m)| Row {
                image: "x<y>.png".into(),
                method: (*m).into(),
                stats: Some(summary(i as f64)),
                noise_level: Some(1.0),
                improvement_pct: None,
                elapsed_ms: None,
            })
            .collect();
        let a = box_plot_svg(&rows, "CNR");
        assert_eq!(a, box_plot_svg(&rows, "CNR"));
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
        assert_eq!(a.matches("<rect x=").count(), 3 + 3);
        assert!(a.contains("x&lt;y&gt;.png") && !a.contains("x<y>"));
    }
}

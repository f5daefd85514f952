//! Straightforward reference implementations used as test oracles. They
//! share nothing with the optimized code paths except `ImageF` itself.
#![allow(dead_code)]

use musica_core::ImageF;

/// Symmetric reflection without edge repetition, by repeated folding.
pub fn fold(mut i: isize, n: usize) -> usize {
    let n = n as isize;
    if n == 1 {
        return 0;
    }
    loop {
        if i < 0 {
            i = -i;
        } else if i >= n {
            i = 2 * (n - 1) - i;
        } else {
            return i as usize;
        }
    }
}

pub fn at(img: &ImageF, x: isize, y: isize) -> f64 {
    img.get(fold(x, img.width()), fold(y, img.height()))
}

/// Per-pixel non-local means: every offset, every patch sample.
pub fn brute_nlm(img: &ImageF, patch: usize, search: usize, h: f64) -> ImageF {
    let rp = (patch / 2) as isize;
    let rs = (search / 2) as isize;
    ImageF::from_fn(img.width(), img.height(), |x, y| {
        let (x, y) = (x as isize, y as isize);
        let (mut num, mut den) = (0.0, 0.0);
        for oy in -rs..=rs {
            for ox in -rs..=rs {
                let mut d2 = 0.0;
                for u in -rp..=rp {
                    for v in -rp..=rp {
                        let t = at(img, x + v, y + u) - at(img, x + ox + v, y + oy + u);
                        d2 += t * t;
                    }
                }
                d2 /= (patch * patch) as f64;
                let w = (-d2 / (h * h)).exp();
                num += w * at(img, x + ox, y + oy);
                den += w;
            }
        }
        num / den
    })
    .unwrap()
}

/// Double-loop population standard deviation over a mirrored window.
pub fn naive_sdev(img: &ImageF, window: usize) -> ImageF {
    let r = (window / 2) as isize;
    ImageF::from_fn(img.width(), img.height(), |x, y| {
        let mut vals = Vec::with_capacity(window * window);
        for dy in -r..=r {
            for dx in -r..=r {
                vals.push(at(img, x as isize + dx, y as isize + dy));
            }
        }
        let n = vals.len() as f64;
        let m = vals.iter().sum::<f64>() / n;
        (vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n).sqrt()
    })
    .unwrap()
}

/// Deterministic uniform noise image in `[lo, hi)`.
pub fn random_image(w: usize, h: usize, seed: u64, lo: f64, hi: f64) -> ImageF {
    let mut s = seed ^ 0x9E37_79B9_7F4A_7C15;
    ImageF::from_fn(w, h, |_, _| {
        s = s
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        lo + (hi - lo) * ((s >> 11) as f64 / (1u64 << 53) as f64)
    })
    .unwrap()
}

//! Texture statistics: radial spectral energy split and LBP entropy.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::raster::Image;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyRatio {
    /// Fraction of non-DC spectral energy above the cutoff, in `[0, 1]`.
    pub ratio: f64,
    /// Set when the image has no non-DC energy; `ratio` is then 0.
    pub degenerate: bool,
}

/// Signed normalized frequency of DFT bin `k` out of `n`, in cycles/pixel.
#[inline]
pub fn bin_frequency(k: usize, n: usize) -> f64 {
    if 2 * k <= n {
        k as f64 / n as f64
    } else {
        k as f64 / n as f64 - 1.0
    }
}

/// Radial frequency of bin `(kx, ky)` relative to Nyquist (0.5 cycles/pixel).
#[inline]
pub fn radial_over_nyquist(kx: usize, ky: usize, width: usize, height: usize) -> f64 {
    let fx = bin_frequency(kx, width);
    let fy = bin_frequency(ky, height);
    (fx * fx + fy * fy).sqrt() / 0.5
}

/// Power spectrum `|F(kx, ky)|^2` of the mean-removed image, row-major.
pub fn power_spectrum(x: &Image) -> Vec<f64> {
    let (w, h) = (x.width(), x.height());
    let mean = x.data().iter().map(|&v| v as f64).sum::<f64>() / (w * h) as f64;
    let mut buf: Vec<Complex64> = x
        .data()
        .iter()
        .map(|&v| Complex64::new(v as f64 - mean, 0.0))
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    let row_fft = planner.plan_fft_forward(w);
    for row in buf.chunks_exact_mut(w) {
        row_fft.process(row);
    }
    let col_fft = planner.plan_fft_forward(h);
    let mut col = vec![Complex64::new(0.0, 0.0); h];
    for cx in 0..w {
        for (y, c) in col.iter_mut().enumerate() {
            *c = buf[y * w + cx];
        }
        col_fft.process(&mut col);
        for (y, c) in col.iter().enumerate() {
            buf[y * w + cx] = *c;
        }
    }
    buf.iter().map(|c| c.norm_sqr()).collect()
}

/// Fraction of non-DC spectral energy at radial frequency strictly above
/// `cutoff_frac * f_max`, with `f_max` the Nyquist frequency.
pub fn frequency_energy_ratio(x: &Image, cutoff_frac: f64) -> Result<FrequencyRatio> {
    if !(cutoff_frac > 0.0 && cutoff_frac < 1.0) {
        return Err(Error::Domain(format!(
            "cutoff fraction must lie in (0, 1), got {cutoff_frac}"
        )));
    }
    let (w, h) = (x.width(), x.height());
    let power = power_spectrum(x);
    let mut total = 0.0;
    let mut high = 0.0;
    for ky in 0..h {
        for kx in 0..w {
            if kx == 0 && ky == 0 {
                continue;
            }
            let p = power[ky * w + kx];
            total += p;
            if radial_over_nyquist(kx, ky, w, h) > cutoff_frac {
                high += p;
            }
        }
    }
    let scale = x.energy().max(f64::MIN_POSITIVE) * (w * h) as f64;
    if total <= 1e-24 * scale {
        return Ok(FrequencyRatio {
            ratio: 0.0,
            degenerate: true,
        });
    }
    Ok(FrequencyRatio {
        ratio: (high / total).clamp(0.0, 1.0),
        degenerate: false,
    })
}

/// Neighbor offsets in bit order, clockwise from the top-left.
const LBP_OFFSETS: [(isize, isize); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
];

/// 8-neighbor, radius-1 LBP code: bit `i` is set when neighbor `i` is `>=`
/// the center.
pub fn lbp_code(x: &Image, cx: usize, cy: usize) -> u8 {
    let c = x.get(cx, cy);
    let mut code = 0u8;
    for (bit, (dx, dy)) in LBP_OFFSETS.iter().enumerate() {
        let v = x.get((cx as isize + dx) as usize, (cy as isize + dy) as usize);
        if v >= c {
            code |= 1 << bit;
        }
    }
    code
}

/// Shannon entropy, in bits, of the LBP code histogram over interior pixels.
pub fn lbp_entropy(x: &Image) -> Result<f64> {
    let (w, h) = (x.width(), x.height());
    if w < 3 || h < 3 {
        return Err(Error::Dimension(format!("LBP needs at least 3x3, got {w}x{h}")));
    }
    let mut hist = [0u64; 256];
    for y in 1..h - 1 {
        for xx in 1..w - 1 {
            hist[lbp_code(x, xx, y) as usize] += 1;
        }
    }
    let n = ((w - 2) * (h - 2)) as f64;
    Ok(hist
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_is_degenerate() {
        let r = frequency_energy_ratio(&Image::filled(16, 16, 3.0), 0.1).unwrap();
        assert_eq!(r, FrequencyRatio { ratio: 0.0, degenerate: true });
        assert_eq!(lbp_entropy(&Image::filled(5, 5, 3.0)).unwrap(), 0.0);
    }

    #[test]
    fn low_frequency_sinusoid() {
        // 0.05 f_max = 0.025 cycles/pixel = 4 cycles over 160 pixels.
        let n = 160;
        let img = Image::from_fn(n, n, |x, _| {
            (2.0 * std::f64::consts::PI * 4.0 * x as f64 / n as f64).sin() as f32
        })
        .unwrap();
        let r = frequency_energy_ratio(&img, 0.1).unwrap();
        assert!(!r.degenerate);
        assert!(r.ratio < 1e-6, "{}", r.ratio);
    }

    #[test]
    fn checkerboard_has_more_lbp_entropy() {
        let cb = Image::from_fn(8, 8, |x, y| ((x + y) % 2) as f32).unwrap();
        let flat = Image::filled(8, 8, 1.0);
        assert!(lbp_entropy(&cb).unwrap() > lbp_entropy(&flat).unwrap());
    }

    #[test]
    fn bad_arguments() {
        assert!(lbp_entropy(&Image::zeros(2, 5)).is_err());
        assert!(frequency_energy_ratio(&Image::zeros(4, 4), 0.0).is_err());
        assert!(frequency_energy_ratio(&Image::zeros(4, 4), 1.0).is_err());
    }
}

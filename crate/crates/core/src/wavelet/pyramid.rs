use crate::error::{Error, Result};
use crate::raster::Image;

use super::haar::{wt_plane, HaarBands};
use super::plane::{PaddingMode, Plane};

/// Cascading Haar decomposition: only the low band is recursed.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletPyramid {
    /// `levels[i - 1]` holds level `i`, at `1 / 2^i` of the padded size.
    pub levels: Vec<HaarBands>,
    pub padded_width: usize,
    pub padded_height: usize,
    pub source_width: usize,
    pub source_height: usize,
}

impl WaveletPyramid {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Deepest low band.
    pub fn coarsest(&self) -> &Image {
        &self.levels.last().expect("pyramid has at least one level").low
    }

    /// Energy of every stored coefficient: all detail bands plus the deepest
    /// low band.
    pub fn energy(&self) -> f64 {
        let detail: f64 = self
            .levels
            .iter()
            .map(|b| b.high().iter().map(|i| i.energy()).sum::<f64>())
            .sum();
        detail + self.coarsest().energy()
    }
}

/// Smallest multiple of `2^levels` that is `>= n`.
pub fn padded_len(n: usize, levels: usize) -> usize {
    let m = 1usize << levels;
    n.div_ceil(m) * m
}

/// Pads `x` to a multiple of `2^levels` on both axes.
pub fn pad_for_levels(x: &Image, levels: usize, mode: PaddingMode) -> Result<Image> {
    let p = Plane::from_image(x);
    p.pad_to(padded_len(x.width(), levels), padded_len(x.height(), levels), mode)
        .to_image()
}

/// Decomposes `x` into `levels` cascaded Haar levels after padding it to a
/// multiple of `2^levels`.
pub fn cascade_decompose(x: &Image, levels: usize, mode: PaddingMode) -> Result<WaveletPyramid> {
    if levels < 1 {
        return Err(Error::Domain("cascade_decompose needs at least one level".into()));
    }
    if levels >= usize::BITS as usize - 1 {
        return Err(Error::Domain(format!("{levels} levels is out of range")));
    }
    let pw = padded_len(x.width(), levels);
    let ph = padded_len(x.height(), levels);
    let mut current = Plane::from_image(x).pad_to(pw, ph, mode);
    let mut out = Vec::with_capacity(levels);
    for _ in 0..levels {
        let [a, h, v, d] = wt_plane(&current);
        out.push(HaarBands {
            low: a.to_image()?,
            horizontal: h.to_image()?,
            vertical: v.to_image()?,
            diagonal: d.to_image()?,
        });
        current = a;
    }
    Ok(WaveletPyramid {
        levels: out,
        padded_width: pw,
        padded_height: ph,
        source_width: x.width(),
        source_height: x.height(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet::haar_wt;

    #[test]
    fn single_level_matches_haar_wt() {
        let x = Image::from_fn(6, 4, |x, y| (x * 3 + y * 7) as f32 * 0.25).unwrap();
        let p = cascade_decompose(&x, 1, PaddingMode::Reflect).unwrap();
        assert_eq!(p.levels[0], haar_wt(&x).unwrap());
    }

    #[test]
    fn constant_three_levels() {
        let p = cascade_decompose(&Image::filled(16, 8, 0.5), 3, PaddingMode::Reflect).unwrap();
        assert!(p.coarsest().data().iter().all(|&v| v == 4.0));
        for b in &p.levels {
            for band in b.high() {
                assert!(band.data().iter().all(|&v| v == 0.0));
            }
        }
        assert_eq!((p.coarsest().width(), p.coarsest().height()), (2, 1));
    }

    #[test]
    fn pads_to_multiple() {
        let x = Image::filled(5, 9, 1.0);
        let p = cascade_decompose(&x, 2, PaddingMode::Periodic).unwrap();
        assert_eq!((p.padded_width, p.padded_height), (8, 12));
        assert_eq!(padded_len(8, 3), 8);
        assert_eq!(padded_len(9, 3), 16);
    }

    #[test]
    fn zero_levels_rejected() {
        assert!(matches!(
            cascade_decompose(&Image::zeros(4, 4), 0, PaddingMode::Reflect),
            Err(Error::Domain(_))
        ));
    }
}

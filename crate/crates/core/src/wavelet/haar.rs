use crate::error::{Error, Result};
use crate::raster::Image;

use super::plane::Plane;

/// The orthonormal 2-D Haar analysis bank, applied as stride-2 correlation.
///
/// Each kernel is indexed `[row][col]` over a 2x2 block. `A` averages, `H`
/// differences columns, `V` differences rows, `D` differences diagonals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaarFilterBank {
    pub approx: [[f64; 2]; 2],
    pub horizontal: [[f64; 2]; 2],
    pub vertical: [[f64; 2]; 2],
    pub diagonal: [[f64; 2]; 2],
}

pub const HAAR: HaarFilterBank = HaarFilterBank {
    approx: [[0.5, 0.5], [0.5, 0.5]],
    horizontal: [[0.5, -0.5], [0.5, -0.5]],
    vertical: [[0.5, 0.5], [-0.5, -0.5]],
    diagonal: [[0.5, -0.5], [-0.5, 0.5]],
};

impl HaarFilterBank {
    pub fn kernels(&self) -> [[[f64; 2]; 2]; 4] {
        [self.approx, self.horizontal, self.vertical, self.diagonal]
    }
}

/// One level of Haar coefficients: the low band and the three detail bands,
/// each at half the input resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarBands {
    pub low: Image,
    pub horizontal: Image,
    pub vertical: Image,
    pub diagonal: Image,
}

impl HaarBands {
    pub fn high(&self) -> [&Image; 3] {
        [&self.horizontal, &self.vertical, &self.diagonal]
    }

    pub fn energy(&self) -> f64 {
        self.low.energy() + self.horizontal.energy() + self.vertical.energy() + self.diagonal.energy()
    }
}

pub(crate) fn wt_plane(x: &Plane) -> [Plane; 4] {
    debug_assert!(x.width % 2 == 0 && x.height % 2 == 0);
    let (w, h) = (x.width / 2, x.height / 2);
    let mut out = [
        Plane::zeros(w, h),
        Plane::zeros(w, h),
        Plane::zeros(w, h),
        Plane::zeros(w, h),
    ];
    for y in 0..h {
        for xx in 0..w {
            let a = x.get(2 * xx, 2 * y);
            let b = x.get(2 * xx + 1, 2 * y);
            let c = x.get(2 * xx, 2 * y + 1);
            let d = x.get(2 * xx + 1, 2 * y + 1);
            let i = y * w + xx;
            out[0].data[i] = 0.5 * (a + b + c + d);
            out[1].data[i] = 0.5 * (a - b + c - d);
            out[2].data[i] = 0.5 * (a + b - c - d);
            out[3].data[i] = 0.5 * (a - b - c + d);
        }
    }
    out
}

/// Transposed stride-2 correlation with the same bank; exact inverse of
/// [`wt_plane`].
pub(crate) fn iwt_plane(low: &Plane, h: &Plane, v: &Plane, d: &Plane) -> Plane {
    let (w, hh) = (low.width, low.height);
    let mut out = Plane::zeros(2 * w, 2 * hh);
    for y in 0..hh {
        for x in 0..w {
            let i = y * w + x;
            let (sa, sh, sv, sd) = (low.data[i], h.data[i], v.data[i], d.data[i]);
            out.set(2 * x, 2 * y, 0.5 * (sa + sh + sv + sd));
            out.set(2 * x + 1, 2 * y, 0.5 * (sa - sh + sv - sd));
            out.set(2 * x, 2 * y + 1, 0.5 * (sa + sh - sv - sd));
            out.set(2 * x + 1, 2 * y + 1, 0.5 * (sa - sh - sv + sd));
        }
    }
    out
}

/// Single-level 2-D Haar analysis. Both dimensions must be even.
pub fn haar_wt(x: &Image) -> Result<HaarBands> {
    if x.width() % 2 != 0 || x.height() % 2 != 0 {
        return Err(Error::Dimension(format!(
            "haar_wt needs even dimensions, got {}x{} (pad first)",
            x.width(),
            x.height()
        )));
    }
    let [a, h, v, d] = wt_plane(&Plane::from_image(x));
    Ok(HaarBands {
        low: a.to_image()?,
        horizontal: h.to_image()?,
        vertical: v.to_image()?,
        diagonal: d.to_image()?,
    })
}

/// Single-level 2-D Haar synthesis from four equally-sized bands.
pub fn haar_iwt(low: &Image, high: [&Image; 3]) -> Result<Image> {
    if high.iter().any(|b| !b.same_shape(low)) {
        return Err(Error::Dimension(format!(
            "haar_iwt bands disagree in shape: low {}x{}, high {:?}",
            low.width(),
            low.height(),
            high.map(|b| (b.width(), b.height()))
        )));
    }
    iwt_plane(
        &Plane::from_image(low),
        &Plane::from_image(high[0]),
        &Plane::from_image(high[1]),
        &Plane::from_image(high[2]),
    )
    .to_image()
}

impl HaarBands {
    pub fn reconstruct(&self) -> Result<Image> {
        haar_iwt(&self.low, self.high())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block() -> Image {
        Image::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap()
    }

    #[test]
    fn bank_is_orthonormal() {
        let ks = HAAR.kernels();
        for (i, a) in ks.iter().enumerate() {
            for (j, b) in ks.iter().enumerate() {
                let dot: f64 = (0..2).flat_map(|r| (0..2).map(move |c| (r, c))).map(|(r, c)| a[r][c] * b[r][c]).sum();
                assert_eq!(dot, if i == j { 1.0 } else { 0.0 });
            }
        }
        for k in &ks[1..] {
            assert_eq!(k.iter().flatten().sum::<f64>(), 0.0);
        }
    }

    #[test]
    fn two_by_two_block() {
        let b = haar_wt(&block()).unwrap();
        assert_eq!(b.low.data(), &[5.0]);
        assert_eq!(b.horizontal.data(), &[-1.0]);
        assert_eq!(b.vertical.data(), &[-2.0]);
        assert_eq!(b.diagonal.data(), &[0.0]);
        assert_eq!(b.energy(), 30.0);
        assert_eq!(block().energy(), 30.0);
    }

    #[test]
    fn inverse_of_block() {
        let one = |v| Image::new(1, 1, vec![v]).unwrap();
        let x = haar_iwt(&one(5.0), [&one(-1.0), &one(-2.0), &one(0.0)]).unwrap();
        assert_eq!(x, block());
    }

    #[test]
    fn constant_image() {
        let b = haar_wt(&Image::filled(6, 4, 1.5)).unwrap();
        assert!(b.low.data().iter().all(|&v| v == 3.0));
        for band in b.high() {
            assert!(band.data().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn zero_bands_give_zero_image() {
        let z = Image::zeros(3, 2);
        assert_eq!(haar_iwt(&z, [&z, &z, &z]).unwrap(), Image::zeros(6, 4));
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(haar_wt(&Image::zeros(3, 2)), Err(Error::Dimension(_))));
        let a = Image::zeros(2, 2);
        let b = Image::zeros(2, 3);
        assert!(matches!(haar_iwt(&a, [&a, &b, &a]), Err(Error::Dimension(_))));
    }
}

//! Raster containers shared by every module.
//!
//! Pixel `(x, y)` lives at index `y * width + x`; pixel centers sit at integer
//! coordinates. Validity is always carried by an explicit mask, never by a
//! sentinel stored in the value grid. Invalid slots hold `0.0`.

use crate::error::{Error, Result};

fn check_len(width: usize, height: usize, len: usize, what: &str) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::Dimension(format!(
            "{what}: zero-sized raster {width}x{height}"
        )));
    }
    let expected = width.checked_mul(height).ok_or_else(|| {
        Error::Dimension(format!("{what}: {width}x{height} overflows"))
    })?;
    if len != expected {
        return Err(Error::Dimension(format!(
            "{what}: data length {len} != {width}x{height}"
        )));
    }
    Ok(())
}

/// Single-channel floating-point image.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    data: Vec<f32>,
}

impl Image {
    pub fn new(width: usize, height: usize, data: Vec<f32>) -> Result<Self> {
        check_len(width, height, data.len(), "image")?;
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!(
                "image value at ({}, {}) is not finite",
                i % width,
                i / width
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self::filled(width, height, 0.0)
    }

    pub fn filled(width: usize, height: usize, value: f32) -> Self {
        assert!(width > 0 && height > 0, "zero-sized image");
        assert!(value.is_finite());
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f32) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    /// Converts a row-major `f64` grid, rejecting non-finite values.
    pub fn from_f64(width: usize, height: usize, data: &[f64]) -> Result<Self> {
        Self::new(width, height, data.iter().map(|&v| v as f32).collect())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f32> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f32 {
        self.data[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[f32] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(|&v| v as f64).collect()
    }

    /// Sum of squared values, accumulated in `f64`.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|&v| (v as f64) * (v as f64)).sum()
    }

    pub fn same_shape(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height
    }
}

/// Per-pixel boolean flags (validity, occlusion, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        check_len(width, height, bits.len(), "mask")?;
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn filled(width: usize, height: usize, value: bool) -> Self {
        Self {
            width,
            height,
            bits: vec![value; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// A scalar field with a validity mask. Shared storage behind [`DepthMap`]
/// and [`DisparityMap`].
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
    mask: Vec<bool>,
}

impl MaskedMap {
    fn build(
        width: usize,
        height: usize,
        mut values: Vec<f64>,
        mask: Vec<bool>,
        what: &str,
        positive: bool,
    ) -> Result<Self> {
        check_len(width, height, values.len(), what)?;
        check_len(width, height, mask.len(), what)?;
        for (i, (v, &m)) in values.iter_mut().zip(&mask).enumerate() {
            if m {
                let ok = v.is_finite() && if positive { *v > 0.0 } else { *v >= 0.0 };
                if !ok {
                    return Err(Error::Data(format!(
                        "{what}: valid pixel ({}, {}) has value {v}",
                        i % width,
                        i / width
                    )));
                }
            } else {
                *v = 0.0;
            }
        }
        Ok(Self {
            width,
            height,
            values,
            mask,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<f64> {
        let i = y * self.width + x;
        self.mask[i].then(|| self.values[i])
    }

    #[inline]
    pub fn is_valid(&self, x: usize, y: usize) -> bool {
        self.mask[y * self.width + x]
    }

    pub fn valid_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn same_shape(&self, other: &MaskedMap) -> bool {
        self.width == other.width && self.height == other.height
    }
}

macro_rules! masked_newtype {
    ($(#[$meta:meta])* $name:ident, $what:literal, $positive:expr) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name(MaskedMap);

        impl $name {
            pub fn new(width: usize, height: usize, values: Vec<f64>, mask: Vec<bool>) -> Result<Self> {
                MaskedMap::build(width, height, values, mask, $what, $positive).map(Self)
            }

            /// Every pixel valid.
            pub fn dense(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
                let mask = vec![true; values.len()];
                Self::new(width, height, values, mask)
            }

            /// Builds a map from `f(x, y)`; `None` marks the pixel invalid.
            pub fn from_fn(
                width: usize,
                height: usize,
                mut f: impl FnMut(usize, usize) -> Option<f64>,
            ) -> Result<Self> {
                let n = width * height;
                let mut values = Vec::with_capacity(n);
                let mut mask = Vec::with_capacity(n);
                for y in 0..height {
                    for x in 0..width {
                        match f(x, y) {
                            Some(v) => {
                                values.push(v);
                                mask.push(true);
                            }
                            None => {
                                values.push(0.0);
                                mask.push(false);
                            }
                        }
                    }
                }
                Self::new(width, height, values, mask)
            }

            pub fn as_map(&self) -> &MaskedMap {
                &self.0
            }
        }

        impl std::ops::Deref for $name {
            type Target = MaskedMap;

            fn deref(&self) -> &MaskedMap {
                &self.0
            }
        }
    };
}

masked_newtype!(
    /// Metric depth in meters; valid pixels are finite and strictly positive.
    DepthMap,
    "depth map",
    true
);

masked_newtype!(
    /// Horizontal disparity in pixels; valid pixels are finite and `>= 0`
    /// (winner-take-all legitimately returns disparity 0).
    DisparityMap,
    "disparity map",
    false
);

/// Tolerance on `| |n| - 1 |` for valid normals.
pub const UNIT_TOLERANCE: f64 = 1e-6;

/// Per-pixel unit surface normals in the camera frame. The camera looks along
/// `+Z`; valid normals face it, so `n_z <= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalMap {
    width: usize,
    height: usize,
    vectors: Vec<[f64; 3]>,
    mask: Vec<bool>,
}

impl NormalMap {
    pub fn new(width: usize, height: usize, mut vectors: Vec<[f64; 3]>, mask: Vec<bool>) -> Result<Self> {
        check_len(width, height, vectors.len(), "normal map")?;
        check_len(width, height, mask.len(), "normal map")?;
        for (i, (n, &m)) in vectors.iter_mut().zip(&mask).enumerate() {
            if !m {
                *n = [0.0; 3];
                continue;
            }
            let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
            if !norm.is_finite() || (norm - 1.0).abs() >= UNIT_TOLERANCE {
                return Err(Error::Data(format!(
                    "normal at ({}, {}) has norm {norm}",
                    i % width,
                    i / width
                )));
            }
            if n[2] > 0.0 {
                return Err(Error::Data(format!(
                    "normal at ({}, {}) faces away from the camera (n_z = {})",
                    i % width,
                    i / width,
                    n[2]
                )));
            }
        }
        Ok(Self {
            width,
            height,
            vectors,
            mask,
        })
    }

    /// Builds a map from `f(x, y)`; vectors are normalized and flipped to face
    /// the camera. `None` or a zero vector marks the pixel invalid.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> Option<[f64; 3]>,
    ) -> Result<Self> {
        let mut vectors = Vec::with_capacity(width * height);
        let mut mask = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                match f(x, y).and_then(orient_unit) {
                    Some(n) => {
                        vectors.push(n);
                        mask.push(true);
                    }
                    None => {
                        vectors.push([0.0; 3]);
                        mask.push(false);
                    }
                }
            }
        }
        Self::new(width, height, vectors, mask)
    }

    /// Same normal at every pixel.
    pub fn uniform(width: usize, height: usize, n: [f64; 3]) -> Result<Self> {
        Self::from_fn(width, height, |_, _| Some(n))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn vectors(&self) -> &[[f64; 3]] {
        &self.vectors
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<[f64; 3]> {
        let i = y * self.width + x;
        self.mask[i].then(|| self.vectors[i])
    }

    pub fn valid_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }
}

/// Normalizes `n` and flips it so that `n_z <= 0`. Returns `None` for
/// zero-length or non-finite input.
pub fn orient_unit(n: [f64; 3]) -> Option<[f64; 3]> {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if !norm.is_finite() || norm <= f64::MIN_POSITIVE {
        return None;
    }
    let s = if n[2] > 0.0 { -1.0 / norm } else { 1.0 / norm };
    Some([n[0] * s, n[1] * s, n[2] * s])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn image_rejects_bad_length_and_nan() {
        assert!(Image::new(2, 2, vec![0.0; 3]).is_err());
        assert!(Image::new(2, 1, vec![0.0, f32::NAN]).is_err());
        assert!(Image::new(0, 1, vec![]).is_err());
        assert!(Image::new(2, 1, vec![1.0, 2.0]).is_ok());
    }

    #[test]
    fn depth_requires_positive_valid_values() {
        assert!(DepthMap::new(2, 1, vec![1.0, 0.0], vec![true, true]).is_err());
        let d = DepthMap::new(2, 1, vec![1.0, -3.0], vec![true, false]).unwrap();
        assert_eq!(d.values(), &[1.0, 0.0]);
        assert_eq!(d.get(1, 0), None);
    }

    #[test]
    fn disparity_allows_zero() {
        assert!(DisparityMap::dense(2, 1, vec![0.0, 1.5]).is_ok());
        assert!(DisparityMap::dense(2, 1, vec![0.0, -1.0]).is_err());
    }

    #[test]
    fn normals_must_be_unit_and_camera_facing() {
        assert!(NormalMap::new(1, 1, vec![[0.0, 0.0, -1.0]], vec![true]).is_ok());
        assert!(NormalMap::new(1, 1, vec![[0.0, 0.0, 1.0]], vec![true]).is_err());
        assert!(NormalMap::new(1, 1, vec![[0.0, 0.0, -0.9]], vec![true]).is_err());
        let m = NormalMap::from_fn(1, 1, |_, _| Some([0.0, 3.0, 4.0])).unwrap();
        let n = m.get(0, 0).unwrap();
        assert!((n[1] + 0.6).abs() < 1e-12 && (n[2] + 0.8).abs() < 1e-12);
    }
}

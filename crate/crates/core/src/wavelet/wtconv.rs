//! Wavelet-enhanced convolution.
//!
//! The input is decomposed level by level with the Haar bank, each band gets
//! a depth-wise `k x k` correlation, and the levels are merged back coarse to
//! fine with a per-level gain `beta` on the low-frequency path:
//!
//! ```text
//! Y_A(0)      = W(0) * X
//! [Y(i)]      = W(i) * WT(X_A(i-1))                     i = 1..=levels
//! Z(levels+1) = 0
//! Z(i)        = IWT(beta(i) * (Y_A(i) + Z(i+1)), Y_HF(i))   i = levels..=1
//! Z(0)        = Y_A(0) + Z(1)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::Image;

use super::haar::{iwt_plane, wt_plane};
use super::plane::{PaddingMode, Plane};
use super::pyramid::padded_len;

/// Parameters of [`wtconv_forward`].
///
/// `weights[0]` holds the single level-0 kernel; `weights[i]` for `i >= 1`
/// holds either one kernel shared by all four bands or four kernels in
/// `A, H, V, D` order. Kernels are row-major `k * k` slices. `betas[i - 1]`
/// is the low-frequency gain of level `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WtConvParams {
    pub levels: usize,
    pub kernel_size: usize,
    pub betas: Vec<f64>,
    pub weights: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    pub padding_mode: PaddingMode,
}

/// Text form of [`WtConvParams`]; omitted betas default to 1 and omitted
/// weights to identity kernels.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WtConvConfig {
    levels: usize,
    kernel_size: usize,
    betas: Option<Vec<f64>>,
    weights: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default)]
    padding_mode: PaddingMode,
}

pub const DEFAULT_LEVELS: usize = 3;
pub const DEFAULT_KERNEL_SIZE: usize = 3;

/// Kronecker delta at the kernel anchor `((k-1)/2, (k-1)/2)`.
pub fn delta_kernel(k: usize) -> Vec<f64> {
    let mut w = vec![0.0; k * k];
    let a = (k - 1) / 2;
    w[a * k + a] = 1.0;
    w
}

impl Default for WtConvParams {
    fn default() -> Self {
        Self::identity(DEFAULT_LEVELS, DEFAULT_KERNEL_SIZE)
    }
}

impl WtConvParams {
    /// Delta kernels at every level and unit gains: a pure multi-scale
    /// low-frequency amplifier.
    pub fn identity(levels: usize, kernel_size: usize) -> Self {
        let mut weights = vec![vec![delta_kernel(kernel_size)]];
        for _ in 0..levels {
            weights.push(vec![delta_kernel(kernel_size); 4]);
        }
        Self {
            levels,
            kernel_size,
            betas: vec![1.0; levels],
            weights,
            padding_mode: PaddingMode::Reflect,
        }
    }

    pub fn with_padding(mut self, mode: PaddingMode) -> Self {
        self.padding_mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.kernel_size;
        if k < 1 {
            return Err(Error::Domain("kernel_size must be at least 1".into()));
        }
        if self.levels >= 24 {
            return Err(Error::Domain(format!("{} levels is out of range", self.levels)));
        }
        if self.betas.len() != self.levels {
            return Err(Error::Domain(format!(
                "expected {} betas, got {}",
                self.levels,
                self.betas.len()
            )));
        }
        if let Some(b) = self.betas.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
            return Err(Error::Domain(format!("beta must be finite and >= 0, got {b}")));
        }
        if self.weights.len() != self.levels + 1 {
            return Err(Error::Domain(format!(
                "expected {} weight sets, got {}",
                self.levels + 1,
                self.weights.len()
            )));
        }
        for (i, set) in self.weights.iter().enumerate() {
            let ok_count = if i == 0 { set.len() == 1 } else { set.len() == 1 || set.len() == 4 };
            if !ok_count {
                return Err(Error::Domain(format!(
                    "level {i} has {} kernels (level 0 takes 1, others 1 or 4)",
                    set.len()
                )));
            }
            for kern in set {
                if kern.len() != k * k {
                    return Err(Error::Domain(format!(
                        "level {i} kernel has {} taps, expected {}",
                        kern.len(),
                        k * k
                    )));
                }
                if kern.iter().any(|w| !w.is_finite()) {
                    return Err(Error::Domain(format!("level {i} kernel has non-finite taps")));
                }
            }
        }
        Ok(())
    }

    /// Kernel applied to `band` (0 = A, 1 = H, 2 = V, 3 = D) at `level`.
    pub fn kernel(&self, level: usize, band: usize) -> &[f64] {
        let set = &self.weights[level];
        if set.len() == 1 {
            &set[0]
        } else {
            &set[band]
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: WtConvConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut p = Self::identity(raw.levels, raw.kernel_size.max(1));
        p.kernel_size = raw.kernel_size;
        p.padding_mode = raw.padding_mode;
        if let Some(b) = raw.betas {
            p.betas = b;
        }
        if let Some(w) = raw.weights {
            p.weights = w;
        }
        p.validate()?;
        Ok(p)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("wtconv params serialize")
    }
}

/// Effective receptive field, in input pixels, of a `k x k` kernel applied at
/// decomposition level `level`.
pub fn erf_at_level(level: u32, k: usize) -> (usize, usize) {
    let side = (1usize << level) * k;
    (side, side)
}

/// Runs the wavelet-enhanced convolution on one channel. The input is padded
/// to a multiple of `2^levels` and the result cropped back to its size.
pub fn wtconv_forward(x: &Image, params: &WtConvParams) -> Result<Image> {
    params.validate()?;
    let out = wtconv_plane(&Plane::from_image(x), params);
    out.to_image()
}

pub(crate) fn wtconv_plane(x: &Plane, params: &WtConvParams) -> Plane {
    let (w, h) = (x.width, x.height);
    let levels = params.levels;
    let k = params.kernel_size;
    let mode = params.padding_mode;
    let padded = x.pad_to(padded_len(w, levels), padded_len(h, levels), mode);

    let y0 = padded.correlate(params.kernel(0, 0), k, mode);

    // Forward decomposition and per-band feature extraction.
    let mut features: Vec<[Plane; 4]> = Vec::with_capacity(levels);
    let mut low = padded;
    for i in 1..=levels {
        let bands = wt_plane(&low);
        let y = [0, 1, 2, 3].map(|b| bands[b].correlate(params.kernel(i, b), k, mode));
        let [a, ..] = bands;
        low = a;
        features.push(y);
    }

    // Backward integration, coarse to fine.
    let mut z: Option<Plane> = None;
    for i in (1..=levels).rev() {
        let [ya, yh, yv, yd] = &features[i - 1];
        let mut merged = ya.clone();
        if let Some(deeper) = &z {
            merged.add_assign(deeper);
        }
        merged.scale(params.betas[i - 1]);
        z = Some(iwt_plane(&merged, yh, yv, yd));
    }

    let mut out = y0;
    if let Some(z1) = z {
        out.add_assign(&z1);
    }
    out.crop(w, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erf_values() {
        assert_eq!(erf_at_level(2, 2), (8, 8));
        assert_eq!(erf_at_level(0, 5), (5, 5));
        assert_eq!(erf_at_level(3, 3), (24, 24));
    }

    #[test]
    fn zero_in_zero_out() {
        let out = wtconv_forward(&Image::zeros(10, 6), &WtConvParams::default()).unwrap();
        assert_eq!(out, Image::zeros(10, 6));
    }

    #[test]
    fn identity_one_level_doubles() {
        // Z1 = IWT(WT(x)) = x and Z0 = x + x.
        let x = Image::from_fn(4, 4, |x, y| (x + 4 * y) as f32).unwrap();
        let out = wtconv_forward(&x, &WtConvParams::identity(1, 3)).unwrap();
        for (a, b) in out.data().iter().zip(x.data()) {
            assert!((a - 2.0 * b).abs() < 1e-5);
        }
    }

    #[test]
    fn level_zero_is_plain_correlation() {
        let x = Image::from_fn(5, 5, |x, y| (x * x + y) as f32).unwrap();
        let out = wtconv_forward(&x, &WtConvParams::identity(0, 3)).unwrap();
        assert_eq!(out, x);
    }

    #[test]
    fn validation() {
        let mut p = WtConvParams::identity(2, 3);
        assert!(p.validate().is_ok());
        p.betas[0] = -1.0;
        assert!(p.validate().is_err());
        let mut p = WtConvParams::identity(2, 3);
        p.weights.pop();
        assert!(p.validate().is_err());
        let mut p = WtConvParams::identity(2, 3);
        p.weights[1][2] = vec![0.0; 4];
        assert!(p.validate().is_err());
    }

    #[test]
    fn toml_round_trip_and_defaults() {
        let p = WtConvParams::identity(2, 3).with_padding(PaddingMode::Periodic);
        let back = WtConvParams::from_toml_str(&p.to_toml_string()).unwrap();
        assert_eq!(back, p);
        let short = WtConvParams::from_toml_str("levels = 2\nkernel_size = 3\nbetas = [0.5, 2.0]\n").unwrap();
        assert_eq!(short.betas, vec![0.5, 2.0]);
        assert_eq!(short.weights, WtConvParams::identity(2, 3).weights);
        assert!(WtConvParams::from_toml_str("levels = 2\nkernel_size = 3\nbogus = 1\n").is_err());
    }
}

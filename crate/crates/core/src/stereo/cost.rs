use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::Image;

/// Window dissimilarity used to fill a cost volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostMetric {
    /// Mean squared difference over the window.
    Ssd,
    /// Mean absolute difference over the window.
    Sad,
    /// `1 - ncc`, in `[0, 2]`.
    Ncc,
}

impl std::str::FromStr for CostMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ssd" => Ok(CostMetric::Ssd),
            "sad" => Ok(CostMetric::Sad),
            "ncc" => Ok(CostMetric::Ncc),
            other => Err(Error::Config(format!("unknown cost metric '{other}'"))),
        }
    }
}

impl std::fmt::Display for CostMetric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CostMetric::Ssd => "ssd",
            CostMetric::Sad => "sad",
            CostMetric::Ncc => "ncc",
        })
    }
}

/// Number of SGM scanline directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum SgmPaths {
    Four,
    Eight,
}

impl TryFrom<u8> for SgmPaths {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            4 => Ok(SgmPaths::Four),
            8 => Ok(SgmPaths::Eight),
            other => Err(format!("sgm paths must be 4 or 8, got {other}")),
        }
    }
}

impl From<SgmPaths> for u8 {
    fn from(p: SgmPaths) -> u8 {
        match p {
            SgmPaths::Four => 4,
            SgmPaths::Eight => 8,
        }
    }
}

/// Matching parameters.
///
/// `sgm_p1` and `sgm_p2` are expressed relative to the mean in-bounds cost of
/// the volume being aggregated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MatchConfig {
    pub metric: CostMetric,
    /// Odd window side in pixels.
    pub window: usize,
    /// Largest disparity searched; the volume holds `d_max + 1` levels.
    pub d_max: usize,
    pub sgm_p1: f64,
    pub sgm_p2: f64,
    pub paths: SgmPaths,
    pub softmin_temperature: f64,
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self {
            metric: CostMetric::Sad,
            window: 7,
            d_max: 64,
            sgm_p1: 8.0,
            sgm_p2: 32.0,
            paths: SgmPaths::Eight,
            softmin_temperature: 1.0,
        }
    }
}

impl MatchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window % 2 == 0 {
            return Err(Error::Domain(format!("window must be odd, got {}", self.window)));
        }
        if self.d_max < 1 {
            return Err(Error::Domain("d_max must be at least 1".into()));
        }
        if !(self.sgm_p1 > 0.0 && self.sgm_p1 <= self.sgm_p2 && self.sgm_p2.is_finite()) {
            return Err(Error::Domain(format!(
                "SGM penalties must satisfy 0 < P1 <= P2, got P1={} P2={}",
                self.sgm_p1, self.sgm_p2
            )));
        }
        if !(self.softmin_temperature > 0.0 && self.softmin_temperature.is_finite()) {
            return Err(Error::Domain("softmin temperature must be positive".into()));
        }
        Ok(())
    }
}

/// Per-pixel, per-disparity matching costs.
///
/// Storage is pixel-major: the `disparities` costs of pixel `(x, y)` are
/// contiguous. Entries whose warp leaves the image, or whose NCC is undefined,
/// hold `max_penalty` and are flagged.
#[derive(Debug, Clone, PartialEq)]
pub struct CostVolume {
    disparities: usize,
    height: usize,
    width: usize,
    metric: CostMetric,
    costs: Vec<f32>,
    flags: Vec<bool>,
    max_penalty: f32,
}

impl CostVolume {
    /// Wraps explicit costs given in `[d][y][x]` order. No entry is flagged.
    pub fn from_dhw(
        disparities: usize,
        height: usize,
        width: usize,
        metric: CostMetric,
        dhw: &[f64],
    ) -> Result<Self> {
        let n = disparities * height * width;
        if n == 0 || dhw.len() != n {
            return Err(Error::Dimension(format!(
                "cost volume {disparities}x{height}x{width} needs {n} costs, got {}",
                dhw.len()
            )));
        }
        if let Some(c) = dhw.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
            return Err(Error::Data(format!("cost {c} is negative or non-finite")));
        }
        let mut costs = vec![0.0f32; n];
        for d in 0..disparities {
            for p in 0..height * width {
                costs[p * disparities + d] = dhw[d * height * width + p] as f32;
            }
        }
        let max_penalty = costs.iter().copied().fold(0.0f32, f32::max);
        Ok(Self {
            disparities,
            height,
            width,
            metric,
            costs,
            flags: vec![false; n],
            max_penalty,
        })
    }

    pub(crate) fn from_parts(
        disparities: usize,
        height: usize,
        width: usize,
        metric: CostMetric,
        costs: Vec<f32>,
        flags: Vec<bool>,
        max_penalty: f32,
    ) -> Self {
        debug_assert_eq!(costs.len(), disparities * height * width);
        Self {
            disparities,
            height,
            width,
            metric,
            costs,
            flags,
            max_penalty,
        }
    }

    pub fn disparities(&self) -> usize {
        self.disparities
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn metric(&self) -> CostMetric {
        self.metric
    }

    pub fn max_penalty(&self) -> f32 {
        self.max_penalty
    }

    #[inline]
    pub fn cost(&self, d: usize, y: usize, x: usize) -> f32 {
        self.costs[(y * self.width + x) * self.disparities + d]
    }

    #[inline]
    pub fn is_flagged(&self, d: usize, y: usize, x: usize) -> bool {
        self.flags[(y * self.width + x) * self.disparities + d]
    }

    /// Costs of pixel `(x, y)` over all disparities.
    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> &[f32] {
        let i = (y * self.width + x) * self.disparities;
        &self.costs[i..i + self.disparities]
    }

    #[inline]
    pub fn pixel_flags(&self, x: usize, y: usize) -> &[bool] {
        let i = (y * self.width + x) * self.disparities;
        &self.flags[i..i + self.disparities]
    }

    pub(crate) fn costs(&self) -> &[f32] {
        &self.costs
    }

    pub(crate) fn flags(&self) -> &[bool] {
        &self.flags
    }

    /// Mean of unflagged costs, accumulated in `f64`. `None` if every entry is
    /// flagged.
    pub fn mean_unflagged(&self) -> Option<f64> {
        let (sum, n) = self
            .costs
            .iter()
            .zip(&self.flags)
            .filter(|(_, &f)| !f)
            .fold((0.0f64, 0usize), |(s, n), (&c, _)| (s + c as f64, n + 1));
        (n > 0).then(|| sum / n as f64)
    }
}

/// Which view the volume is indexed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reference {
    /// Left pixel `x` is compared with right pixel `x - d`.
    Left,
    /// Right pixel `x` is compared with left pixel `x + d`.
    Right,
}

/// Cost volume indexed by the left view: `cost(d, y, x)` compares the left
/// window at `(x, y)` with the right window at `(x - d, y)`.
pub fn build_cost_volume(left: &Image, right: &Image, cfg: &MatchConfig) -> Result<CostVolume> {
    build(left, right, cfg, Reference::Left)
}

/// Cost volume indexed by the right view: `cost(d, y, x)` compares the right
/// window at `(x, y)` with the left window at `(x + d, y)`.
pub fn build_right_cost_volume(left: &Image, right: &Image, cfg: &MatchConfig) -> Result<CostVolume> {
    build(left, right, cfg, Reference::Right)
}

fn build(left: &Image, right: &Image, cfg: &MatchConfig, reference: Reference) -> Result<CostVolume> {
    if !left.same_shape(right) {
        return Err(Error::Dimension(format!(
            "left {}x{} and right {}x{} differ",
            left.width(),
            left.height(),
            right.width(),
            right.height()
        )));
    }
    if cfg.window % 2 == 0 || cfg.d_max < 1 {
        return Err(Error::Domain(format!(
            "window must be odd and d_max >= 1, got window={} d_max={}",
            cfg.window, cfg.d_max
        )));
    }
    let (w, h) = (left.width(), left.height());
    if cfg.window > w || cfg.window > h {
        return Err(Error::Dimension(format!(
            "window {} exceeds image {w}x{h}",
            cfg.window
        )));
    }
    let nd = cfg.d_max + 1;
    let (base, other) = match reference {
        Reference::Left => (left.to_f64(), right.to_f64()),
        Reference::Right => (right.to_f64(), left.to_f64()),
    };
    let max_penalty = match cfg.metric {
        CostMetric::Ncc => 2.0f32,
        CostMetric::Sad | CostMetric::Ssd => {
            let (lo, hi) = base
                .iter()
                .chain(&other)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            let range = hi - lo;
            let bound = if cfg.metric == CostMetric::Sad { range } else { range * range };
            if bound > 0.0 {
                bound as f32
            } else {
                1.0
            }
        }
    };
    let r = cfg.window / 2;

    // One (costs, flags) slice per disparity, row-major over the image.
    let slices: Vec<(Vec<f32>, Vec<bool>)> = (0..nd)
        .into_par_iter()
        .map(|d| {
            let (lo, hi) = match reference {
                Reference::Left => (d, w as isize - 1),
                Reference::Right => (0, w as isize - 1 - d as isize),
            };
            let mut costs = vec![max_penalty; w * h];
            let mut flags = vec![true; w * h];
            if hi < lo as isize {
                return (costs, flags);
            }
            let hi = hi as usize;
            // Other view sampled at the warped column for each base column.
            let shift = |x: usize| match reference {
                Reference::Left => x - d,
                Reference::Right => x + d,
            };
            let warped = |y: usize, x: usize| other[y * w + shift(x)];
            let at = |y: usize, x: usize| base[y * w + x];
            match cfg.metric {
                CostMetric::Sad | CostMetric::Ssd => {
                    let mut term = vec![0.0f64; w * h];
                    for y in 0..h {
                        for x in lo..=hi {
                            let diff = at(y, x) - warped(y, x);
                            term[y * w + x] = if cfg.metric == CostMetric::Sad { diff.abs() } else { diff * diff };
                        }
                    }
                    let mean = box_mean(&term, w, h, r, lo, hi);
                    for y in 0..h {
                        for x in lo..=hi {
                            let i = y * w + x;
                            costs[i] = mean[i].max(0.0) as f32;
                            flags[i] = false;
                        }
                    }
                }
                CostMetric::Ncc => {
                    let mut t = [(); 5].map(|_| vec![0.0f64; w * h]);
                    for y in 0..h {
                        for x in lo..=hi {
                            let i = y * w + x;
                            let (a, b) = (at(y, x), warped(y, x));
                            t[0][i] = a;
                            t[1][i] = b;
                            t[2][i] = a * a;
                            t[3][i] = b * b;
                            t[4][i] = a * b;
                        }
                    }
                    let m = t.map(|plane| box_mean(&plane, w, h, r, lo, hi));
                    for y in 0..h {
                        for x in lo..=hi {
                            let i = y * w + x;
                            let (ma, mb) = (m[0][i], m[1][i]);
                            let var_a = m[2][i] - ma * ma;
                            let var_b = m[3][i] - mb * mb;
                            let cov = m[4][i] - ma * mb;
                            let floor_a = 1e-10 * m[2][i].max(f64::MIN_POSITIVE);
                            let floor_b = 1e-10 * m[3][i].max(f64::MIN_POSITIVE);
                            if var_a <= floor_a || var_b <= floor_b {
                                continue;
                            }
                            let ncc = (cov / (var_a * var_b).sqrt()).clamp(-1.0, 1.0);
                            costs[i] = (1.0 - ncc) as f32;
                            flags[i] = false;
                        }
                    }
                }
            }
            (costs, flags)
        })
        .collect();

    let n = nd * w * h;
    let mut costs = vec![0.0f32; n];
    let mut flags = vec![false; n];
    for (d, (c, f)) in slices.into_iter().enumerate() {
        for p in 0..w * h {
            costs[p * nd + d] = c[p];
            flags[p * nd + d] = f[p];
        }
    }
    Ok(CostVolume::from_parts(nd, h, w, cfg.metric, costs, flags, max_penalty))
}

/// Mean of `src` over the `(2r+1)^2` window around each pixel, clipped to the
/// image rows and to columns `lo..=hi`. Only columns `lo..=hi` of the result
/// are meaningful.
fn box_mean(src: &[f64], w: usize, h: usize, r: usize, lo: usize, hi: usize) -> Vec<f64> {
    let mut hsum = vec![0.0f64; w * h];
    let mut prefix = vec![0.0f64; w + 1];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        prefix[lo] = 0.0;
        for x in lo..=hi {
            prefix[x + 1] = prefix[x] + row[x];
        }
        for x in lo..=hi {
            let a = x.saturating_sub(r).max(lo);
            let b = (x + r).min(hi);
            hsum[y * w + x] = prefix[b + 1] - prefix[a];
        }
    }
    let mut out = vec![0.0f64; w * h];
    let mut col = vec![0.0f64; h + 1];
    for x in lo..=hi {
        for y in 0..h {
            col[y + 1] = col[y] + hsum[y * w + x];
        }
        let a_cols = x.saturating_sub(r).max(lo);
        let b_cols = (x + r).min(hi);
        let ncols = (b_cols - a_cols + 1) as f64;
        for y in 0..h {
            let a = y.saturating_sub(r);
            let b = (y + r).min(h - 1);
            out[y * w + x] = (col[b + 1] - col[a]) / (ncols * (b - a + 1) as f64);
        }
    }
    out
}

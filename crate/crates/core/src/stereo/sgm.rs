//! Semi-global cost aggregation.
//!
//! This stage stands in for learned cost-volume regularization: each scanline
//! direction runs the usual dynamic program
//!
//! ```text
//! L(p, d) = C(p, d) + min(L(q, d), L(q, d +- 1) + P1, min_k L(q, k) + P2) - min_k L(q, k)
//! ```
//!
//! with `q = p - r`, and the per-direction results are summed in a fixed order.

use super::cost::{CostVolume, MatchConfig, SgmPaths};

/// Scanline direction `(dx, dy)`; `L(p)` reads `L(p - (dx, dy))`.
pub type Direction = (isize, isize);

pub const FOUR_PATHS: [Direction; 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
pub const EIGHT_PATHS: [Direction; 8] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (-1, 1),
    (1, -1),
    (-1, -1),
];

/// Aggregates `cv` along 4 or 8 directions. Penalties in `cfg` are scaled by
/// the mean unflagged cost, so `P1 = P2 = 0` returns `paths * cv`.
pub fn sgm_aggregate(cv: &CostVolume, cfg: &MatchConfig) -> CostVolume {
    let scale = cv.mean_unflagged().filter(|m| *m > 0.0).unwrap_or(1.0);
    let dirs: &[Direction] = match cfg.paths {
        SgmPaths::Four => &FOUR_PATHS,
        SgmPaths::Eight => &EIGHT_PATHS,
    };
    aggregate_directions(cv, dirs, cfg.sgm_p1 * scale, cfg.sgm_p2 * scale)
}

/// Sums single-path aggregations over `dirs` with absolute penalties.
pub fn aggregate_directions(cv: &CostVolume, dirs: &[Direction], p1: f64, p2: f64) -> CostVolume {
    let mut total = vec![0.0f64; cv.costs().len()];
    for &dir in dirs {
        let path = sgm_path(cv, dir, p1, p2);
        for (t, l) in total.iter_mut().zip(&path) {
            *t += *l as f64;
        }
    }
    let costs: Vec<f32> = total.iter().map(|&v| v as f32).collect();
    let max_penalty = costs.iter().copied().fold(0.0f32, f32::max);
    CostVolume::from_parts(
        cv.disparities(),
        cv.height(),
        cv.width(),
        cv.metric(),
        costs,
        cv.flags().to_vec(),
        max_penalty,
    )
}

/// Path costs `L_r` for one direction, pixel-major like the volume.
pub fn sgm_path(cv: &CostVolume, dir: Direction, p1: f64, p2: f64) -> Vec<f32> {
    let (w, h, nd) = (cv.width(), cv.height(), cv.disparities());
    let (dx, dy) = dir;
    let (p1, p2) = (p1 as f32, p2 as f32);
    let mut out = vec![0.0f32; w * h * nd];
    let rows: Vec<usize> = if dy >= 0 { (0..h).collect() } else { (0..h).rev().collect() };
    let cols: Vec<usize> = if dx >= 0 { (0..w).collect() } else { (0..w).rev().collect() };
    let costs = cv.costs();
    let mut prev = vec![0.0f32; nd];
    for &y in &rows {
        for &x in &cols {
            let i = (y * w + x) * nd;
            let px = x as isize - dx;
            let py = y as isize - dy;
            let has_prev = (dx != 0 || dy != 0)
                && px >= 0
                && py >= 0
                && (px as usize) < w
                && (py as usize) < h;
            if !has_prev {
                out[i..i + nd].copy_from_slice(&costs[i..i + nd]);
                continue;
            }
            let j = (py as usize * w + px as usize) * nd;
            prev.copy_from_slice(&out[j..j + nd]);
            let cur = &mut out[i..i + nd];
            let m = prev.iter().copied().fold(f32::INFINITY, f32::min);
            for d in 0..nd {
                let mut best = prev[d];
                if d > 0 {
                    best = best.min(prev[d - 1] + p1);
                }
                if d + 1 < nd {
                    best = best.min(prev[d + 1] + p1);
                }
                best = best.min(m + p2);
                cur[d] = costs[i + d] + best - m;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stereo::{wta_disparity, CostMetric};

    fn vol(nd: usize, h: usize, w: usize, dhw: &[f64]) -> CostVolume {
        CostVolume::from_dhw(nd, h, w, CostMetric::Sad, dhw).unwrap()
    }

    #[test]
    fn hand_unrolled_single_path() {
        // One row, three pixels, two disparities, left-to-right path.
        // C(x=0) = [1, 3], C(x=1) = [4, 0], C(x=2) = [2, 2]; P1 = 1, P2 = 5.
        let cv = vol(2, 1, 3, &[1.0, 4.0, 2.0, 3.0, 0.0, 2.0]);
        let l = sgm_path(&cv, (1, 0), 1.0, 5.0);
        // x=0: L = C = [1, 3]
        // x=1: m = 1; d0: 4 + min(1, 3+1, 1+5) - 1 = 4; d1: 0 + min(3, 1+1, 6) - 1 = 1
        // x=2: m = 1; d0: 2 + min(4, 1+1, 6) - 1 = 3; d1: 2 + min(1, 4+1, 6) - 1 = 2
        assert_eq!(l, vec![1.0, 3.0, 4.0, 1.0, 3.0, 2.0]);
    }

    #[test]
    fn zero_penalties_multiply_raw_cost() {
        let dhw: Vec<f64> = (0..3 * 4 * 5).map(|i| ((i * 37) % 11) as f64).collect();
        let cv = vol(3, 4, 5, &dhw);
        let agg = aggregate_directions(&cv, &EIGHT_PATHS, 0.0, 0.0);
        for d in 0..3 {
            for y in 0..4 {
                for x in 0..5 {
                    assert_eq!(agg.cost(d, y, x), 8.0 * cv.cost(d, y, x));
                }
            }
        }
        assert_eq!(wta_disparity(&agg), wta_disparity(&cv));
    }

    #[test]
    fn smoothing_removes_isolated_jumps() {
        // True surface d = 1 everywhere, but every other pixel has a slightly
        // cheaper wrong minimum at d = 2 (the x mod 2 pattern).
        let (nd, h, w) = (3, 6, 12);
        let mut dhw = vec![0.0; nd * h * w];
        for y in 0..h {
            for x in 0..w {
                let c = if x % 2 == 1 { [1.0, 0.1, 0.0] } else { [1.0, 0.0, 1.0] };
                for d in 0..nd {
                    dhw[(d * h + y) * w + x] = c[d];
                }
            }
        }
        let cv = vol(nd, h, w, &dhw);
        let jumps = |cv: &CostVolume| {
            let disp = wta_disparity(cv);
            let mut n = 0;
            for y in 0..h {
                for x in 1..w {
                    if disp.get(x, y) != disp.get(x - 1, y) {
                        n += 1;
                    }
                }
            }
            n
        };
        let before = jumps(&cv);
        let after = jumps(&aggregate_directions(&cv, &EIGHT_PATHS, 0.5, 2.0));
        assert_eq!(before, h * (w - 1));
        assert!(after < before, "{after} >= {before}");
    }
}

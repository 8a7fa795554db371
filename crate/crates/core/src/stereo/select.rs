use crate::error::{Error, Result};
use crate::raster::DisparityMap;

use super::cost::CostVolume;

/// Winner-take-all over unflagged entries; ties go to the smaller disparity.
/// Pixels with every entry flagged are invalid.
pub fn wta_disparity(cv: &CostVolume) -> DisparityMap {
    let (w, h) = (cv.width(), cv.height());
    DisparityMap::from_fn(w, h, |x, y| {
        let costs = cv.pixel(x, y);
        let flags = cv.pixel_flags(x, y);
        let mut best: Option<(usize, f32)> = None;
        for (d, (&c, &f)) in costs.iter().zip(flags).enumerate() {
            if f {
                continue;
            }
            if best.is_none_or(|(_, b)| c < b) {
                best = Some((d, c));
            }
        }
        best.map(|(d, _)| d as f64)
    })
    .expect("disparities are finite and non-negative")
}

/// Softmax-weighted expected disparity, `sum_d d * softmax(-cost / T)`.
/// Pixels with every entry flagged are invalid.
pub fn soft_argmin(cv: &CostVolume, temperature: f64) -> Result<DisparityMap> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::Domain(format!(
            "soft-argmin temperature must be positive, got {temperature}"
        )));
    }
    let (w, h) = (cv.width(), cv.height());
    DisparityMap::from_fn(w, h, |x, y| {
        if cv.pixel_flags(x, y).iter().all(|&f| f) {
            return None;
        }
        let costs = cv.pixel(x, y);
        let lo = costs.iter().copied().fold(f32::INFINITY, f32::min) as f64;
        let (mut num, mut den) = (0.0f64, 0.0f64);
        for (d, &c) in costs.iter().enumerate() {
            let p = (-(c as f64 - lo) / temperature).exp();
            num += d as f64 * p;
            den += p;
        }
        Some((num / den).clamp(0.0, (costs.len() - 1) as f64))
    })
}

/// Parabola through the costs at `d - 1, d, d + 1`; the vertex offset is
/// clamped to `[-0.5, 0.5]`. Disparities at either end of the range, or with a
/// non-convex neighborhood, are left unchanged.
pub fn subpixel_refine(cv: &CostVolume, disp: &DisparityMap) -> Result<DisparityMap> {
    if disp.width() != cv.width() || disp.height() != cv.height() {
        return Err(Error::Dimension("disparity map and cost volume differ in size".into()));
    }
    let nd = cv.disparities();
    DisparityMap::from_fn(cv.width(), cv.height(), |x, y| {
        let v = disp.get(x, y)?;
        let d = v.round();
        if d < 1.0 || d as usize + 1 >= nd {
            return Some(v);
        }
        let d = d as usize;
        let c = cv.pixel(x, y);
        let (cm, c0, cp) = (c[d - 1] as f64, c[d] as f64, c[d + 1] as f64);
        let denom = cm + cp - 2.0 * c0;
        if denom <= 0.0 {
            return Some(v);
        }
        let offset = ((cm - cp) / (2.0 * denom)).clamp(-0.5, 0.5);
        Some(d as f64 + offset)
    })
}

/// Parabola vertex offset for three costs; exposed for testing.
pub fn parabola_offset(cm: f64, c0: f64, cp: f64) -> Option<f64> {
    let denom = cm + cp - 2.0 * c0;
    (denom > 0.0).then(|| ((cm - cp) / (2.0 * denom)).clamp(-0.5, 0.5))
}

/// Left-right check: left pixel `x` stays valid only if the right map at
/// `round(x - d_L(x))` agrees within `tol`. A lookup that falls outside the
/// image or on an invalid right pixel counts as an infinite deviation.
pub fn lr_consistency(left: &DisparityMap, right: &DisparityMap, tol: f64) -> Result<DisparityMap> {
    if !left.same_shape(right) {
        return Err(Error::Dimension("left and right disparity maps differ in size".into()));
    }
    let w = left.width();
    DisparityMap::from_fn(w, left.height(), |x, y| {
        let dl = left.get(x, y)?;
        let xr = (x as f64 - dl).round();
        let deviation = if xr < 0.0 || xr >= w as f64 {
            f64::INFINITY
        } else {
            right
                .get(xr as usize, y)
                .map_or(f64::INFINITY, |dr| (dl - dr).abs())
        };
        (deviation <= tol).then_some(dl)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stereo::CostMetric;

    fn vol(nd: usize, h: usize, w: usize, dhw: &[f64]) -> CostVolume {
        CostVolume::from_dhw(nd, h, w, CostMetric::Sad, dhw).unwrap()
    }

    #[test]
    fn wta_unique_minimum_and_ties() {
        let mut dhw = vec![1.0; 4 * 2 * 3];
        for p in 0..6 {
            dhw[2 * 6 + p] = 0.0;
        }
        let disp = wta_disparity(&vol(4, 2, 3, &dhw));
        assert!(disp.values().iter().all(|&d| d == 2.0));
        let flat = wta_disparity(&vol(4, 2, 3, &vec![0.7; 24]));
        assert!(flat.values().iter().all(|&d| d == 0.0));
        assert_eq!(flat.valid_count(), 6);
    }

    #[test]
    fn wta_matches_brute_force() {
        // Small integer costs so ties occur.
        let dhw: Vec<f64> = (0..27).map(|i| ((i * 7 + 3) % 5) as f64).collect();
        let disp = wta_disparity(&vol(3, 3, 3, &dhw));
        for y in 0..3 {
            for x in 0..3 {
                let mut best = 0;
                for d in 1..3 {
                    if dhw[(d * 3 + y) * 3 + x] < dhw[(best * 3 + y) * 3 + x] {
                        best = d;
                    }
                }
                assert_eq!(disp.get(x, y), Some(best as f64));
            }
        }
    }

    #[test]
    fn soft_argmin_cases() {
        let uniform = soft_argmin(&vol(3, 1, 1, &[2.0, 2.0, 2.0]), 1.0).unwrap();
        assert!((uniform.values()[0] - 1.0).abs() < 1e-12);

        let ramp = soft_argmin(&vol(3, 1, 1, &[0.0, 1.0, 2.0]), 1.0).unwrap();
        let e = std::f64::consts::E;
        let expect = (e.powi(-1) + 2.0 * e.powi(-2)) / (1.0 + e.powi(-1) + e.powi(-2));
        assert!((ramp.values()[0] - expect).abs() < 1e-7);
        assert!((expect - 0.42479).abs() < 1e-5);

        let sharp = soft_argmin(&vol(3, 1, 1, &[5.0, 0.0, 5.0]), 1e-3).unwrap();
        assert!((sharp.values()[0] - 1.0).abs() < 1e-9);

        assert!(soft_argmin(&vol(3, 1, 1, &[0.0; 3]), 0.0).is_err());
    }

    #[test]
    fn parabola_cases() {
        assert_eq!(parabola_offset(2.0, 1.0, 2.0), Some(0.0));
        assert_eq!(parabola_offset(4.0, 1.0, 2.0), Some(0.25));
        assert_eq!(parabola_offset(1.0, 1.0, 1.0), None);
    }

    #[test]
    fn subpixel_boundaries_unrefined() {
        // d = 0 minimum at the range start stays put; interior minimum moves.
        let cv = vol(3, 1, 2, &[0.0, 4.0, 1.0, 1.0, 2.0, 2.0]);
        let disp = DisparityMap::dense(2, 1, vec![0.0, 1.0]).unwrap();
        let r = subpixel_refine(&cv, &disp).unwrap();
        assert_eq!(r.values()[0], 0.0);
        assert!((r.values()[1] - 1.25).abs() < 1e-12);
    }

    #[test]
    fn lr_checks() {
        let zero = DisparityMap::dense(4, 2, vec![0.0; 8]).unwrap();
        assert_eq!(lr_consistency(&zero, &zero, 0.5).unwrap().valid_count(), 8);

        let left = DisparityMap::dense(4, 1, vec![0.0, 1.0, 1.0, 3.0]).unwrap();
        let right = DisparityMap::dense(4, 1, vec![1.0, 1.0, 2.0, 0.0]).unwrap();
        let checked = lr_consistency(&left, &right, 0.5).unwrap();
        // x=0: right[0]=1 vs 0 -> masked; x=1: right[0]=1 ok; x=2: right[1]=1 ok;
        // x=3: right[0]=1 vs 3 -> masked.
        assert_eq!(checked.mask(), &[false, true, true, false]);
        assert_eq!(lr_consistency(&left, &right, f64::INFINITY).unwrap().valid_count(), 4);
    }
}

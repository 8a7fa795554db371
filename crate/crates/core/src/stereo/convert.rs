use crate::camera::StereoRig;
use crate::raster::{DepthMap, DisparityMap};

/// Disparities at or below this are treated as "at infinity" and masked.
pub const DISPARITY_EPS: f64 = 1e-6;

fn in_range(rig: &StereoRig, depth: f64) -> bool {
    depth >= rig.min_depth && depth <= rig.max_depth
}

/// `D = f * B / d`. Pixels with `d <= 1e-6` or a depth outside the rig's
/// `[min_depth, max_depth]` are masked.
pub fn disparity_to_depth(disp: &DisparityMap, rig: &StereoRig) -> DepthMap {
    let fb = rig.focal_baseline();
    DepthMap::from_fn(disp.width(), disp.height(), |x, y| {
        let d = disp.get(x, y)?;
        if d <= DISPARITY_EPS {
            return None;
        }
        let z = fb / d;
        in_range(rig, z).then_some(z)
    })
    .expect("depths are finite and positive")
}

/// `d = f * B / D`, with the same masking rules as [`disparity_to_depth`].
pub fn depth_to_disparity(depth: &DepthMap, rig: &StereoRig) -> DisparityMap {
    let fb = rig.focal_baseline();
    DisparityMap::from_fn(depth.width(), depth.height(), |x, y| {
        let z = depth.get(x, y)?;
        if !in_range(rig, z) {
            return None;
        }
        let d = fb / z;
        (d > DISPARITY_EPS).then_some(d)
    })
    .expect("disparities are finite and positive")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rover_rig_values() {
        let rig = StereoRig::rover();
        let disp = DisparityMap::dense(3, 1, vec![160.893, 10.7262, 0.0]).unwrap();
        let depth = disparity_to_depth(&disp, &rig);
        assert!((depth.get(0, 0).unwrap() - 1.0).abs() < 1e-9);
        assert!((depth.get(1, 0).unwrap() - 15.0).abs() < 1e-3);
        assert_eq!(depth.get(2, 0), None);

        let d = depth_to_disparity(&DepthMap::dense(2, 1, vec![1.0, 20.0]).unwrap(), &rig);
        assert!((d.get(0, 0).unwrap() - 160.893).abs() < 1e-9);
        assert_eq!(d.get(1, 0), None);
    }

    #[test]
    fn round_trip() {
        let rig = StereoRig::rover();
        let disp = DisparityMap::from_fn(8, 4, |x, y| Some(11.0 + 7.3 * x as f64 + 0.9 * y as f64)).unwrap();
        let back = depth_to_disparity(&disparity_to_depth(&disp, &rig), &rig);
        for (a, b) in disp.values().iter().zip(back.values()) {
            assert!((a - b).abs() <= 1e-6 * a.abs());
        }
        assert_eq!(back.valid_count(), disp.valid_count());
    }
}

//! Pinhole intrinsics and rectified stereo rigs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pinhole intrinsics in pixels. The principal point may be fractional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
}

impl CameraIntrinsics {
    pub fn new(fx: f64, fy: f64, cx: f64, cy: f64) -> Result<Self> {
        let k = Self { fx, fy, cx, cy };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fx.is_finite() && self.fx > 0.0 && self.fy.is_finite() && self.fy > 0.0) {
            return Err(Error::Domain(format!(
                "focal lengths must be positive, got fx={} fy={}",
                self.fx, self.fy
            )));
        }
        if !(self.cx.is_finite() && self.cy.is_finite()) {
            return Err(Error::Domain("principal point must be finite".into()));
        }
        Ok(())
    }

    /// Checks that the principal point falls inside a `width x height` image.
    pub fn validate_for(&self, width: usize, height: usize) -> Result<()> {
        self.validate()?;
        if !(0.0..width as f64).contains(&self.cx) || !(0.0..height as f64).contains(&self.cy) {
            return Err(Error::Domain(format!(
                "principal point ({}, {}) outside {width}x{height} image",
                self.cx, self.cy
            )));
        }
        Ok(())
    }

    /// Projects a camera-frame point to pixel coordinates.
    pub fn project(&self, p: [f64; 3]) -> (f64, f64) {
        (
            self.fx * p[0] / p[2] + self.cx,
            self.fy * p[1] / p[2] + self.cy,
        )
    }
}

/// Intrinsics for a camera with the given full field of view (degrees) on
/// both axes; principal point at the image center.
pub fn intrinsics_from_fov(fov_deg: f64, width: usize, height: usize) -> Result<CameraIntrinsics> {
    if !(fov_deg > 0.0 && fov_deg < 180.0) {
        return Err(Error::Domain(format!(
            "field of view must lie in (0, 180) degrees, got {fov_deg}"
        )));
    }
    if width < 2 || height < 2 {
        return Err(Error::Domain(format!(
            "image must be at least 2x2, got {width}x{height}"
        )));
    }
    let t = (fov_deg.to_radians() / 2.0).tan();
    CameraIntrinsics::new(
        (width as f64 / 2.0) / t,
        (height as f64 / 2.0) / t,
        (width as f64 - 1.0) / 2.0,
        (height as f64 - 1.0) / 2.0,
    )
}

/// Rectified stereo pair: left-camera intrinsics plus a horizontal baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StereoRig {
    pub intrinsics: CameraIntrinsics,
    /// Meters.
    pub baseline: f64,
    /// Pixels.
    pub max_disparity: usize,
    /// Evaluation clip range in meters.
    pub min_depth: f64,
    pub max_depth: f64,
}

/// Focal length of the rover navigation camera, pixels.
pub const ROVER_FOCAL_PX: f64 = 595.90;
/// Stereo baseline of the rover navigation camera, meters.
pub const ROVER_BASELINE_M: f64 = 0.270;
/// Field of view of the rover navigation camera, degrees (both axes).
pub const ROVER_FOV_DEG: f64 = 46.5;
pub const ROVER_IMAGE_SIZE: usize = 512;
pub const ROVER_MIN_DEPTH_M: f64 = 0.5;
pub const ROVER_MAX_DEPTH_M: f64 = 15.0;

impl StereoRig {
    pub fn new(
        intrinsics: CameraIntrinsics,
        baseline: f64,
        max_disparity: usize,
        min_depth: f64,
        max_depth: f64,
    ) -> Result<Self> {
        let rig = Self {
            intrinsics,
            baseline,
            max_disparity,
            min_depth,
            max_depth,
        };
        rig.validate()?;
        Ok(rig)
    }

    pub fn validate(&self) -> Result<()> {
        self.intrinsics.validate()?;
        if !(self.baseline.is_finite() && self.baseline > 0.0) {
            return Err(Error::Domain(format!("baseline must be positive, got {}", self.baseline)));
        }
        if self.max_disparity < 1 {
            return Err(Error::Domain("max_disparity must be at least 1".into()));
        }
        if !(self.min_depth > 0.0 && self.min_depth < self.max_depth && self.max_depth.is_finite()) {
            return Err(Error::Domain(format!(
                "depth range must satisfy 0 < min < max, got [{}, {}]",
                self.min_depth, self.max_depth
            )));
        }
        Ok(())
    }

    /// The rover navigation-camera rig: 512x512, f = 595.90 px, B = 0.270 m,
    /// evaluation range [0.5, 15] m, 64-pixel disparity search.
    pub fn rover() -> Self {
        let c = (ROVER_IMAGE_SIZE as f64 - 1.0) / 2.0;
        Self {
            intrinsics: CameraIntrinsics {
                fx: ROVER_FOCAL_PX,
                fy: ROVER_FOCAL_PX,
                cx: c,
                cy: c,
            },
            baseline: ROVER_BASELINE_M,
            max_disparity: 64,
            min_depth: ROVER_MIN_DEPTH_M,
            max_depth: ROVER_MAX_DEPTH_M,
        }
    }

    /// The rover rig rescaled to a `width x height` image: focal length scales
    /// with width and the principal point moves to the new center.
    pub fn rover_scaled(width: usize, height: usize) -> Self {
        let mut rig = Self::rover();
        let s = width as f64 / ROVER_IMAGE_SIZE as f64;
        rig.intrinsics.fx *= s;
        rig.intrinsics.fy *= height as f64 / ROVER_IMAGE_SIZE as f64;
        rig.intrinsics.cx = (width as f64 - 1.0) / 2.0;
        rig.intrinsics.cy = (height as f64 - 1.0) / 2.0;
        rig
    }

    /// `f * B`, the disparity-depth product in pixel-meters.
    pub fn focal_baseline(&self) -> f64 {
        self.intrinsics.fx * self.baseline
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fov_ninety_degrees() {
        let k = intrinsics_from_fov(90.0, 512, 512).unwrap();
        assert!((k.fx - 256.0).abs() < 1e-9);
        assert!((k.fy - 256.0).abs() < 1e-9);
        assert_eq!((k.cx, k.cy), (255.5, 255.5));
    }

    #[test]
    fn fov_rover() {
        // 256 / tan(23.25 deg) = 595.856; the published calibration is 595.90 px.
        let k = intrinsics_from_fov(46.5, 512, 512).unwrap();
        assert!((k.fx - 595.856).abs() < 1e-3, "{}", k.fx);
        assert!((k.fx - ROVER_FOCAL_PX).abs() < 0.05);
    }

    #[test]
    fn fov_out_of_range() {
        assert!(matches!(intrinsics_from_fov(180.0, 512, 512), Err(Error::Domain(_))));
        assert!(matches!(intrinsics_from_fov(0.0, 512, 512), Err(Error::Domain(_))));
        assert!(intrinsics_from_fov(60.0, 1, 512).is_err());
    }

    #[test]
    fn rig_validation() {
        let rig = StereoRig::rover();
        assert!(rig.validate().is_ok());
        assert!((rig.focal_baseline() - 160.893).abs() < 1e-9);
        assert!(StereoRig::new(rig.intrinsics, 0.0, 64, 0.5, 15.0).is_err());
        assert!(StereoRig::new(rig.intrinsics, 0.27, 0, 0.5, 15.0).is_err());
        assert!(StereoRig::new(rig.intrinsics, 0.27, 64, 15.0, 0.5).is_err());
        assert!(CameraIntrinsics::new(-1.0, 1.0, 0.0, 0.0).is_err());
        assert!(rig.intrinsics.validate_for(512, 512).is_ok());
        assert!(rig.intrinsics.validate_for(100, 100).is_err());
    }
}

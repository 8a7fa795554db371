//! Stereo depth estimation with depth/normal consistency.
//!
//! Modules, bottom-up:
//!
//! - [`raster`], [`camera`]: images, masked maps, normals, pinhole rigs.
//! - [`wavelet`]: Haar transforms and the wavelet-enhanced convolution.
//! - [`stereo`]: cost volumes, WTA/SGM, soft-argmin, disparity/depth.
//! - [`geometry`]: back-projection, plane-fit normals, the two depth-gradient
//!   estimates and their Huber consistency loss.
//! - [`refine`]: supervision losses and alternating depth/normal refinement.
//! - [`metrics`]: depth and angular normal error statistics.
//! - [`synth`]: analytic scenes rendered to textured stereo pairs.
//! - [`io`]: PFM, 16-bit depth PNG, normal PNG, dataset manifests.
//! - [`cli`]: the `wavestereo` command-line pipelines.

pub mod camera;
pub mod error;
pub mod raster;
pub mod stereo;
pub mod wavelet;

pub use camera::{intrinsics_from_fov, CameraIntrinsics, StereoRig};
pub use error::{Error, Result};
pub use raster::{DepthMap, DisparityMap, Image, Mask, MaskedMap, NormalMap};

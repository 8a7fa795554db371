//! Classical stereo correspondence.
//!
//! Matching costs form a `D x H x W` volume. Learned cost regularization is
//! replaced by semi-global aggregation ([`sgm_aggregate`]); disparities come
//! from winner-take-all or soft-argmin regression and convert to metric depth
//! through `D = f * B / d`.

mod convert;
mod cost;
mod select;
mod sgm;

pub use convert::{depth_to_disparity, disparity_to_depth, DISPARITY_EPS};
pub use cost::{
    build_cost_volume, build_right_cost_volume, CostMetric, CostVolume, MatchConfig, SgmPaths,
};
pub use select::{lr_consistency, parabola_offset, soft_argmin, subpixel_refine, wta_disparity};
pub use sgm::{aggregate_directions, sgm_aggregate, sgm_path, Direction, EIGHT_PATHS, FOUR_PATHS};

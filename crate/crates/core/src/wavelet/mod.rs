//! Haar wavelet transforms, cascading decomposition, the wavelet-enhanced
//! convolution operator, and spectral/texture analysis.

mod analysis;
mod haar;
mod plane;
mod pyramid;
mod wtconv;

pub use analysis::{
    bin_frequency, frequency_energy_ratio, lbp_code, lbp_entropy, power_spectrum,
    radial_over_nyquist, FrequencyRatio,
};
pub use haar::{haar_iwt, haar_wt, HaarBands, HaarFilterBank, HAAR};
pub use plane::PaddingMode;
pub use pyramid::{cascade_decompose, pad_for_levels, padded_len, WaveletPyramid};
pub use wtconv::{
    delta_kernel, erf_at_level, wtconv_forward, WtConvParams, DEFAULT_KERNEL_SIZE, DEFAULT_LEVELS,
};

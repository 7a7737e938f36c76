//! Direct-space fundamental solution, layer kernels, truncation and Riesz decay.

pub mod fundamental;
pub mod kernel;
pub mod riesz;
pub mod truncation;

pub use fundamental::{
    calibrate, calibrate_fourier, dphi, phi, Calibration, FundamentalSolution, Probe, RadialLogForm,
};
pub use kernel::{kernel_k, quadrature_tg, quadrature_tg_panels, Kernel, PanelConfig, QuadratureResult};
pub use riesz::{riesz_decay_study, RieszDecay};
pub use truncation::{dyadic_decomposition, moment_truncation, DualFamily, DyadicDecomposition, Truncation};

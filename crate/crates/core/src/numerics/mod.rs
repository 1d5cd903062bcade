//! Special functions, quadrature and Fourier tools on `[-pi, pi)`.

pub mod erf;
pub mod fourier;
pub mod quadrature;

pub use erf::{erf_complex, erf_real, erf_scaled, ERF_ARGUMENT_BOUND};
pub use fourier::{fourier_analyze, fourier_synthesize, FourierSeries, DEFAULT_MAX_INDEX};
pub use quadrature::{integrate, panel_bounds, QuadratureRule, DEFAULT_ORDER};

/// Complex scalar used throughout the crate.
pub type ComplexValue = num_complex::Complex64;

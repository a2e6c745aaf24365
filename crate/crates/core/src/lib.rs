//! Numerics for the offset linear canonical transform (OLCT).
//!
//! The transform with parameters `{a, b, c, d, u0, w0}` (`ad - bc = 1`, `b != 0`) is
//!
//! ```text
//! F(u) = integral of K(u, x) f(x) dx,
//! K(u, x) = sqrt(1/(2 pi i b)) e^{i d u0^2/2b} e^{i (a x^2 + 2x(u0 - u) - 2u(d u0 - b w0) + d u^2)/2b}
//! ```
//!
//! The crate provides a direct-quadrature oracle and an O(N log N) chirp-FFT path,
//! the half-argument convolution and correlation with their spectral-product forms,
//! the derivative-chirp and Boas operators with bandwidth estimators, multiplicative
//! filtering in the transform domain, and test-signal generators. Every identity is
//! checkable numerically through a [`VerificationReport`].

pub mod checks;
pub mod conv;
pub mod error;
pub mod filter;
pub mod gen;
pub mod interp;
pub mod kernel;
pub mod params;
pub mod plan;
pub mod report;
pub mod signal;
pub mod spectral;
pub mod suite;
pub mod tolerance;
pub mod transform;
pub mod window;

pub use error::{OlctError, Result};
pub use kernel::kernel;
pub use num_complex::Complex64;
pub use params::{special_params, Branch, OlctParams, SpecialCase, TupleCompletion};
pub use plan::{native_du, native_u_grid, OlctPlan};
pub use report::{compare, relative_l2, Comparison, VerificationReport};
pub use signal::{Grid, SampledSignal, Spectrum};
pub use tolerance::Tolerances;
pub use transform::{
    olct_b_zero, olct_direct, olct_direct_at, olct_fast, olct_fast_on, olct_inverse,
    olct_inverse_direct, olct_inverse_with, InverseConstant, InverseMethod,
};
pub use conv::{
    convolve, convolve_spectral, convolve_time, correlate, ConvolutionMethod, ConvolutionResult, CorrelationVariant,
};
pub use filter::{
    apply_filter, demo_chirp_denoise, design_mask, mask_from_prototype, snr_db, DemoConfig, FilterKind, FilterSpec,
    Mask, MaskArgument, SnrReport,
};
pub use gen::{generate, GeneratorKind, GeneratorSpec};
pub use spectral::{
    boas_highpass_estimate, boas_op, boas_op_n, delta_op, delta_op_n, pw_bandwidth_estimate, EstimatorOptions,
    OperatorSequence,
};
pub use suite::{default_sweep, run_suite, SuiteReport};

//! Pointwise kernel evaluation.

use num_complex::Complex64;

use crate::error::Result;
use crate::params::OlctParams;

/// Transform kernel `K(u, x)`.
///
/// `A e^{i d u0^2/2b} e^{i (a x^2 + 2x(u0 - u) - 2u(d u0 - b w0) + d u^2)/2b}`
/// with `A` the principal root of `1/(2 pi i b)`.
pub fn kernel(params: &OlctParams, u: f64, x: f64) -> Result<Complex64> {
    params.require_main()?;
    Ok(kernel_unchecked(params, params.amplitude(), u, x))
}

/// Kernel with a precomputed amplitude; caller guarantees the main branch.
#[inline]
pub(crate) fn kernel_unchecked(p: &OlctParams, amp: Complex64, u: f64, x: f64) -> Complex64 {
    let phase = (p.d() * p.u0() * p.u0()
        + p.a() * x * x
        + 2.0 * x * (p.u0() - u)
        - 2.0 * u * p.offset_coupling()
        + p.d() * u * u)
        / (2.0 * p.b());
    amp * Complex64::cis(phase)
}

//! Forward and inverse transforms: direct quadrature (the oracle), the chirp-FFT fast
//! path, and the `b = 0` branch.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{OlctError, Result};
use crate::kernel::kernel_unchecked;
use crate::params::{Branch, OlctParams, TupleCompletion};
use crate::plan::OlctPlan;
use crate::signal::{trapezoid_weight, Grid, SampledSignal, Spectrum};

/// Relative endpoint magnitude above which transforms log a leakage warning.
pub const EDGE_LEAKAGE_THRESHOLD: f64 = 1e-6;

fn warn_on_leakage(f: &SampledSignal, what: &str) {
    let r = f.edge_ratio();
    if r > EDGE_LEAKAGE_THRESHOLD {
        log::warn!("{what}: input edge/peak ratio {r:.3e} exceeds {EDGE_LEAKAGE_THRESHOLD:.0e}; tails are truncated");
    }
}

/// Trapezoid quadrature of the kernel integral at every point of `u_grid`. O(N M).
pub fn olct_direct(params: &OlctParams, f: &SampledSignal, u_grid: &Grid) -> Result<Spectrum> {
    params.require_main()?;
    warn_on_leakage(f, "olct_direct");
    let values = direct_sum(params, f, (0..u_grid.len).map(|j| u_grid.point(j)).collect());
    Spectrum::new(u_grid.start, u_grid.step, values, *params, f.x_start())
}

/// Direct quadrature at arbitrary u points.
pub fn olct_direct_at(params: &OlctParams, f: &SampledSignal, us: &[f64]) -> Result<Vec<Complex64>> {
    params.require_main()?;
    warn_on_leakage(f, "olct_direct");
    Ok(direct_sum(params, f, us.to_vec()))
}

fn direct_sum(params: &OlctParams, f: &SampledSignal, us: Vec<f64>) -> Vec<Complex64> {
    let amp = params.amplitude();
    let n = f.len();
    let dx = f.dx();
    let weighted: Vec<(f64, Complex64)> = f
        .samples()
        .iter()
        .enumerate()
        .filter(|(_, s)| **s != Complex64::new(0.0, 0.0))
        .map(|(k, &s)| (f.x(k), s * trapezoid_weight(k, n) * dx))
        .collect();
    us.into_par_iter()
        .map(|u| weighted.iter().map(|&(x, s)| kernel_unchecked(params, amp, u, x) * s).sum())
        .collect()
}

/// Fast transform: zero-pads to the next power of two and returns the padded native grid
/// `u_j = (j - N/2) du`, `du = 2 pi |b| / (N dx)`.
pub fn olct_fast(params: &OlctParams, f: &SampledSignal) -> Result<Spectrum> {
    params.require_main()?;
    warn_on_leakage(f, "olct_fast");
    let n = f.len().next_power_of_two();
    let plan = OlctPlan::new(*params, Grid::new(f.x_start(), f.dx(), n)?)?;
    plan.forward(f)
}

/// Fast transform onto a caller-forced grid of the padded length; rejects grids whose
/// step breaks the native law.
pub fn olct_fast_on(params: &OlctParams, f: &SampledSignal, u_grid: &Grid) -> Result<Spectrum> {
    params.require_main()?;
    warn_on_leakage(f, "olct_fast");
    let n = f.len().next_power_of_two();
    let plan = OlctPlan::with_u_grid(*params, Grid::new(f.x_start(), f.dx(), n)?, *u_grid)?;
    plan.forward(f)
}

/// Adjoint inverse via the fast path. The output lives on the dual grid
/// `x_origin + k dx`, `dx = 2 pi |b| / (N du)`, of the same length as the spectrum.
pub fn olct_inverse(spectrum: &Spectrum) -> Result<SampledSignal> {
    OlctPlan::for_spectrum(spectrum)?.inverse(spectrum.samples())
}

/// Adjoint inverse by trapezoid quadrature over u, evaluated on `x_grid`.
pub fn olct_inverse_direct(spectrum: &Spectrum, x_grid: &Grid) -> Result<SampledSignal> {
    let params = *spectrum.params();
    params.require_main()?;
    let amp = params.amplitude();
    let m = spectrum.len();
    let du = spectrum.du();
    let weighted: Vec<(f64, Complex64)> = spectrum
        .samples()
        .iter()
        .enumerate()
        .map(|(j, &v)| (spectrum.u(j), v * trapezoid_weight(j, m) * du))
        .collect();
    let values = (0..x_grid.len)
        .into_par_iter()
        .map(|k| {
            let x = x_grid.point(k);
            weighted.iter().map(|&(u, v)| kernel_unchecked(&params, amp, u, x).conj() * v).sum()
        })
        .collect();
    SampledSignal::from_grid(*x_grid, values)
}

/// Constant multiplying the inverse-tuple formula;
/// `Q = c d u0^2 - 2 a d u0 w0 + a b w0^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseConstant {
    /// `exp(i Q / b)`, as attached to the inversion formula.
    InversionFormula,
    /// `exp(i Q / 2)`, as attached to the correlation definition.
    CorrelationDefinition,
}

impl InverseConstant {
    pub fn value(&self, p: &OlctParams) -> Complex64 {
        let q = p.c() * p.d() * p.u0() * p.u0() - 2.0 * p.a() * p.d() * p.u0() * p.w0()
            + p.a() * p.b() * p.w0() * p.w0();
        match self {
            InverseConstant::InversionFormula => Complex64::cis(q / p.b()),
            InverseConstant::CorrelationDefinition => Complex64::cis(q / 2.0),
        }
    }
}

/// How [`olct_inverse_with`] inverts a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseMethod {
    /// Conjugate-kernel inverse (the unitary adjoint). Default.
    Adjoint,
    /// `f(x) = C * integral of K_{M'}(x, u) F(u) du` with `M'` an inverse-tuple completion.
    Tuple { completion: TupleCompletion, constant: InverseConstant },
}

/// Inverse on `x_grid` by the chosen method, both by direct quadrature over u.
pub fn olct_inverse_with(
    spectrum: &Spectrum,
    x_grid: &Grid,
    method: InverseMethod,
) -> Result<SampledSignal> {
    match method {
        InverseMethod::Adjoint => olct_inverse_direct(spectrum, x_grid),
        InverseMethod::Tuple { completion, constant } => {
            let params = *spectrum.params();
            params.require_main()?;
            let inv = params.inverse_tuple(completion)?;
            let c = constant.value(&params);
            let amp = inv.amplitude();
            let m = spectrum.len();
            let du = spectrum.du();
            let weighted: Vec<(f64, Complex64)> = spectrum
                .samples()
                .iter()
                .enumerate()
                .map(|(j, &v)| (spectrum.u(j), v * trapezoid_weight(j, m) * du))
                .collect();
            let values = (0..x_grid.len)
                .into_par_iter()
                .map(|k| {
                    let x = x_grid.point(k);
                    c * weighted
                        .iter()
                        .map(|&(u, v)| kernel_unchecked(&inv, amp, x, u) * v)
                        .sum::<Complex64>()
                })
                .collect();
            SampledSignal::from_grid(*x_grid, values)
        }
    }
}

/// `b = 0` branch: `sqrt(d) exp(i (c d/2)(u - u0)^2 + i w0 u) f(d (u - u0))`, sampled on
/// `u_k = x_k / d + u0` so every argument lands on an input sample.
pub fn olct_b_zero(params: &OlctParams, f: &SampledSignal) -> Result<SampledSignal> {
    if params.branch() != Branch::BZero {
        return Err(OlctError::DegenerateCase(format!(
            "b = {} is not on the b = 0 branch",
            params.b()
        )));
    }
    let d = params.d();
    if d <= 0.0 {
        return Err(OlctError::DegenerateCase(format!("b = 0 branch needs d > 0, got {d}")));
    }
    let (c, u0, w0) = (params.c(), params.u0(), params.w0());
    let start = f.x_start() / d + u0;
    let du = f.dx() / d;
    let scale = d.sqrt();
    let samples = f
        .samples()
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let u = start + k as f64 * du;
            let v = u - u0;
            s * scale * Complex64::cis(0.5 * c * d * v * v + w0 * u)
        })
        .collect();
    SampledSignal::new(start, du, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{special_params, SpecialCase};
    use crate::report::{compare, relative_l2};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn gaussian(grid: Grid) -> SampledSignal {
        SampledSignal::from_fn(grid, |x| Complex64::new((-x * x / 2.0).exp(), 0.0))
    }

    fn p(v: [f64; 6]) -> OlctParams {
        OlctParams::try_from(v).unwrap()
    }

    #[test]
    fn direct_gaussian_parseval() {
        let params = special_params(SpecialCase::Fourier).unwrap();
        let f = gaussian(Grid::span(-12.0, 12.0, 2048).unwrap());
        let ug = Grid::span(-12.0, 12.0, 2048).unwrap();
        let spec = olct_direct(&params, &f, &ug).unwrap();
        assert_relative_eq!(spec.norm_sq(), PI.sqrt(), max_relative = 1e-6);
    }

    #[test]
    fn zero_signal_gives_zero_spectrum() {
        let params = p([1.0, 1.0, 1.0, 2.0, 1.0, 0.0]);
        let f = SampledSignal::zeros(Grid::new(-4.0, 0.1, 64).unwrap());
        assert_eq!(olct_fast(&params, &f).unwrap().max_abs(), 0.0);
        let ug = Grid::span(-1.0, 1.0, 5).unwrap();
        assert_eq!(olct_direct(&params, &f, &ug).unwrap().max_abs(), 0.0);
        let spec = olct_fast(&params, &f).unwrap();
        assert_eq!(olct_inverse(&spec).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn fast_matches_direct_on_random_signal() {
        let params = p([1.0, 1.0, 1.0, 2.0, 1.0, 0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let grid = Grid::new(-8.0, 16.0 / 512.0, 512).unwrap();
        let samples: Vec<Complex64> =
            (0..512).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let f = SampledSignal::from_grid(grid, samples).unwrap();
        let fast = olct_fast(&params, &f).unwrap();
        let direct = olct_direct(&params, &f, &fast.grid()).unwrap();
        let cmp = compare(fast.samples(), direct.samples(), 0.0);
        assert!(cmp.rel_err <= 1e-9, "rel err {}", cmp.rel_err);
    }

    #[test]
    fn fast_handles_negative_b_and_padding() {
        let params = p([2.0, -0.5, 1.0, 0.25, 0.3, -1.0]);
        let f = SampledSignal::from_fn(Grid::new(-6.0, 0.04, 300).unwrap(), |x| {
            Complex64::new((-x * x).exp(), 0.2 * x * (-x * x).exp())
        });
        let fast = olct_fast(&params, &f).unwrap();
        assert_eq!(fast.len(), 512);
        let direct = olct_direct(&params, &f, &fast.grid()).unwrap();
        assert!(compare(fast.samples(), direct.samples(), 0.0).rel_err <= 1e-9);
    }

    #[test]
    fn impulse_has_flat_fourier_spectrum() {
        let params = special_params(SpecialCase::Fourier).unwrap();
        let grid = Grid::centered(0.05, 256).unwrap();
        let mut s = vec![Complex64::new(0.0, 0.0); 256];
        s[128] = Complex64::new(1.0 / 0.05, 0.0);
        let f = SampledSignal::from_grid(grid, s).unwrap();
        let spec = olct_fast(&params, &f).unwrap();
        for v in spec.samples() {
            assert_relative_eq!(v.norm(), 1.0 / (2.0 * PI).sqrt(), max_relative = 1e-6);
        }
    }

    #[test]
    fn round_trip_gaussian() {
        let params = p([1.0, 1.0, 1.0, 2.0, 1.0, 0.0]);
        let f = gaussian(Grid::centered(24.0 / 1024.0, 1024).unwrap());
        let back = olct_inverse(&olct_fast(&params, &f).unwrap()).unwrap();
        assert!(back.grid().same_as(&f.grid()));
        assert!(relative_l2(back.samples(), f.samples()) <= 1e-8);
    }

    #[test]
    fn round_trip_through_padding() {
        let params = p([0.5, 2.0, -0.25, 1.0, -0.7, 0.4]);
        let f = gaussian(Grid::new(-9.0, 0.03, 600).unwrap());
        let back = olct_inverse(&olct_fast(&params, &f).unwrap()).unwrap();
        assert_eq!(back.len(), 1024);
        assert!(relative_l2(&back.samples()[..600], f.samples()) <= 1e-8);
        assert!(back.samples()[600..].iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn fast_inverse_matches_direct_inverse() {
        let params = p([2.0, 1.0, 1.0, 1.0, 0.5, -0.3]);
        let f = gaussian(Grid::centered(0.05, 256).unwrap());
        let spec = olct_fast(&params, &f).unwrap();
        let fast = olct_inverse(&spec).unwrap();
        let direct = olct_inverse_direct(&spec, &fast.grid()).unwrap();
        // the direct inverse halves the two extreme u samples; those are negligible here
        assert!(compare(fast.samples(), direct.samples(), 0.0).rel_err <= 1e-9);
    }

    #[test]
    fn forced_grid_law() {
        let params = p([1.0, 1.0, 1.0, 2.0, 1.0, 0.0]);
        let f = gaussian(Grid::centered(0.1, 128).unwrap());
        let native = olct_fast(&params, &f).unwrap().grid();
        let shifted = Grid::new(native.start + 0.37, native.step, native.len).unwrap();
        let a = olct_fast_on(&params, &f, &shifted).unwrap();
        let b = olct_direct(&params, &f, &shifted).unwrap();
        assert!(compare(a.samples(), b.samples(), 0.0).rel_err <= 1e-9);
        let bad = Grid::new(native.start, native.step * 1.01, native.len).unwrap();
        assert!(matches!(olct_fast_on(&params, &f, &bad), Err(OlctError::GridMismatch(_))));
    }

    #[test]
    fn standard_tuple_with_correlation_constant_is_the_adjoint() {
        let params = p([1.0, 1.0, 1.0, 2.0, 1.0, 0.0]);
        let f = gaussian(Grid::centered(0.1, 128).unwrap());
        let spec = olct_fast(&params, &f).unwrap();
        let xg = f.grid();
        let adj = olct_inverse_with(&spec, &xg, InverseMethod::Adjoint).unwrap();
        let tup = olct_inverse_with(
            &spec,
            &xg,
            InverseMethod::Tuple {
                completion: TupleCompletion::Standard,
                constant: InverseConstant::CorrelationDefinition,
            },
        )
        .unwrap();
        assert!(compare(tup.samples(), adj.samples(), 0.0).rel_err < 1e-12);
    }

    #[test]
    fn b_zero_identity() {
        let params = p([1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let f = gaussian(Grid::new(-3.0, 0.1, 61).unwrap());
        assert_eq!(olct_b_zero(&params, &f).unwrap(), f);
    }

    #[test]
    fn b_zero_dilation_preserves_norm() {
        let params = p([2.0, 0.0, 0.7, 0.5, 0.0, 0.0]);
        let f = gaussian(Grid::new(-10.0, 0.05, 401).unwrap());
        let out = olct_b_zero(&params, &f).unwrap();
        assert_relative_eq!(out.norm_sq(), f.norm_sq(), max_relative = 1e-12);
        assert_relative_eq!(out.dx(), 0.1, max_relative = 1e-15);
    }

    #[test]
    fn b_zero_shift() {
        let params = p([1.0, 0.0, 0.0, 1.0, 1.0, 0.0]);
        let f = gaussian(Grid::new(-3.0, 0.1, 61).unwrap());
        let out = olct_b_zero(&params, &f).unwrap();
        assert_relative_eq!(out.x_start(), -2.0, epsilon = 1e-15);
        assert_eq!(out.samples(), f.samples());
    }

    #[test]
    fn b_zero_rejects_nonpositive_d() {
        let params = p([-1.0, 0.0, 0.0, -1.0, 0.0, 0.0]);
        let f = gaussian(Grid::new(-3.0, 0.1, 61).unwrap());
        assert!(matches!(olct_b_zero(&params, &f), Err(OlctError::DegenerateCase(_))));
        let main = p([0.0, 1.0, -1.0, 0.0, 0.0, 0.0]);
        assert!(olct_b_zero(&main, &f).is_err());
        assert!(olct_fast(&params, &f).is_err());
    }
}

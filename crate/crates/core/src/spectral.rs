//! The derivative-chirp operator `Delta` and the Boas integral operator `B`, their
//! spectral eigen-relations, and the Paley-Wiener / Boas limit estimators.
//!
//! With `phi(x) = exp(i (a x^2 + 2 u0 x) / 2b)`:
//! `Delta f = -(f' + (i/b)(a x + u0) f) = -phi^{-1} (phi f)'` and
//! `B f(x) = phi(x)^{-1} integral_x^inf phi(t) f(t) dt`.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{OlctError, Result};
use crate::params::OlctParams;
use crate::plan::OlctPlan;
use crate::report::{compare_masked, VerificationReport, REFERENCE_FLOOR};
use crate::signal::{Grid, SampledSignal};
use crate::transform::{olct_direct, olct_fast, EDGE_LEAKAGE_THRESHOLD};

/// How `Delta` differentiates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeScheme {
    /// FFT differentiation on the grid zero-padded to a power of two.
    #[default]
    Spectral,
    /// Fourth-order central differences (zero outside the grid), for non-smooth inputs.
    FiniteDifference4,
}

fn input_chirp(params: &OlctParams, f: &SampledSignal) -> Vec<Complex64> {
    (0..f.len()).map(|k| Complex64::cis(params.input_chirp_phase(f.x(k)))).collect()
}

pub fn delta_op(params: &OlctParams, f: &SampledSignal) -> Result<SampledSignal> {
    delta_op_with(params, f, DerivativeScheme::Spectral)
}

pub fn delta_op_with(params: &OlctParams, f: &SampledSignal, scheme: DerivativeScheme) -> Result<SampledSignal> {
    params.require_main()?;
    let phi = input_chirp(params, f);
    let h: Vec<Complex64> = f.samples().iter().zip(&phi).map(|(s, p)| s * p).collect();
    let dh = match scheme {
        DerivativeScheme::Spectral => spectral_derivative(&h, f.dx()),
        DerivativeScheme::FiniteDifference4 => fd4_derivative(&h, f.dx()),
    };
    let out = dh.iter().zip(&phi).map(|(d, p)| -d * p.conj()).collect();
    SampledSignal::from_grid(f.grid(), out)
}

/// `n`-fold application of [`delta_op`]; `n = 0` returns `f`.
pub fn delta_op_n(params: &OlctParams, f: &SampledSignal, n: usize) -> Result<SampledSignal> {
    params.require_main()?;
    let mut g = f.clone();
    for _ in 0..n {
        g = delta_op(params, &g)?;
    }
    Ok(g)
}

fn spectral_derivative(h: &[Complex64], dx: f64) -> Vec<Complex64> {
    let n = h.len();
    let p = n.next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); p];
    buf[..n].copy_from_slice(h);
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(p).process(&mut buf);
    let scale = 2.0 * std::f64::consts::PI / (p as f64 * dx);
    for (q, v) in buf.iter_mut().enumerate() {
        let signed = if q < p / 2 {
            q as f64
        } else if q == p / 2 {
            0.0
        } else {
            q as f64 - p as f64
        };
        *v *= Complex64::new(0.0, signed * scale / p as f64);
    }
    planner.plan_fft_inverse(p).process(&mut buf);
    buf.truncate(n);
    buf
}

fn fd4_derivative(h: &[Complex64], dx: f64) -> Vec<Complex64> {
    let n = h.len() as i64;
    let at = |k: i64| if (0..n).contains(&k) { h[k as usize] } else { Complex64::new(0.0, 0.0) };
    (0..n)
        .map(|k| (-at(k + 2) + 8.0 * at(k + 1) - 8.0 * at(k - 1) + at(k - 2)) / (12.0 * dx))
        .collect()
}

/// Boas operator by reverse cumulative trapezoid integration; `(B f)` vanishes at the
/// right end. Logs a warning when `f` is not negligible there.
pub fn boas_op(params: &OlctParams, f: &SampledSignal) -> Result<SampledSignal> {
    params.require_main()?;
    let peak = f.max_abs();
    if let Some(last) = f.samples().last() {
        if peak > 0.0 && last.norm() > EDGE_LEAKAGE_THRESHOLD * peak {
            log::warn!("boas_op: right-edge magnitude {:.3e} of peak; tail beyond the grid is dropped", last.norm() / peak);
        }
    }
    let phi = input_chirp(params, f);
    let h: Vec<Complex64> = f.samples().iter().zip(&phi).map(|(s, p)| s * p).collect();
    let n = h.len();
    let half_dx = 0.5 * f.dx();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut acc = Complex64::new(0.0, 0.0);
    for i in (0..n - 1).rev() {
        acc += (h[i] + h[i + 1]) * half_dx;
        out[i] = acc * phi[i].conj();
    }
    SampledSignal::from_grid(f.grid(), out)
}

pub fn boas_op_n(params: &OlctParams, f: &SampledSignal, n: usize) -> Result<SampledSignal> {
    params.require_main()?;
    let mut g = f.clone();
    for _ in 0..n {
        g = boas_op(params, &g)?;
    }
    Ok(g)
}

/// Limit extrapolation for root sequences.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extrapolation {
    /// The last computed root.
    LastValue,
    /// Least-squares fit `a_n = L + c / n` over the last half of the sequence.
    #[default]
    Richardson,
}

/// Iterated-operator norms and their `n`-th roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSequence {
    /// `||Op^n f||_2` for `n = 1..`; may read `inf` past the floating-point range.
    pub norms: Vec<f64>,
    /// Natural logarithms of `norms`, always finite.
    pub log_norms: Vec<f64>,
    /// `norms[n-1]^(1/n)`.
    pub roots: Vec<f64>,
    pub estimate: f64,
    pub method: Extrapolation,
    /// Bandwidth measured from the thresholded spectrum: `sup |u/b|` (Paley-Wiener) or
    /// `inf |u/b|` (Boas) over `|F| > threshold * peak`.
    pub gamma_direct: f64,
    /// Set when the sequence stopped early because the norms left the representable range.
    pub capped_at: Option<usize>,
    pub support_guard: bool,
}

impl OperatorSequence {
    pub fn last_root(&self) -> f64 {
        self.roots.last().copied().unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorOptions {
    pub n_max: usize,
    pub method: Extrapolation,
    /// Project every iterate back onto the measured spectral support of `f`. In exact
    /// arithmetic this is the identity (both operators act diagonally on the spectrum);
    /// numerically it stops leakage from growing into the unsupported region.
    pub support_guard: bool,
    pub scheme: DerivativeScheme,
    pub support_threshold: f64,
}

impl EstimatorOptions {
    pub fn paley_wiener(n_max: usize) -> Self {
        Self { n_max, method: Extrapolation::Richardson, support_guard: false, scheme: DerivativeScheme::Spectral, support_threshold: 1e-6 }
    }

    pub fn boas(n_max: usize) -> Self {
        Self { support_guard: true, ..Self::paley_wiener(n_max) }
    }
}

/// Fit `a_n = L + c/n` over the last half of `roots` (indexed from `n = 1`).
pub fn richardson_limit(roots: &[f64]) -> f64 {
    let m = roots.len();
    if m < 2 {
        return roots.last().copied().unwrap_or(f64::NAN);
    }
    let start = m / 2;
    let pts: Vec<(f64, f64)> = (start..m).map(|i| (1.0 / (i + 1) as f64, roots[i])).collect();
    if pts.len() < 2 {
        return roots[m - 1];
    }
    let k = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    (sy - slope * sx) / k
}

/// Measured `sup` or `inf` of `|u/b|` over the thresholded spectral support.
fn measured_support(params: &OlctParams, f: &SampledSignal, threshold: f64, sup: bool) -> Result<(f64, Vec<bool>)> {
    let spec = olct_fast(params, f)?;
    let peak = spec.max_abs();
    let mask: Vec<bool> = spec.samples().iter().map(|v| v.norm() > threshold * peak).collect();
    let w = (0..spec.len()).filter(|&j| mask[j]).map(|j| (spec.u(j) / params.b()).abs());
    let g = if sup { w.fold(0.0, f64::max) } else { w.fold(f64::INFINITY, f64::min) };
    Ok((g, mask))
}

fn project(params: &OlctParams, g: &SampledSignal, plan_grid: Grid, mask: &[bool]) -> Result<SampledSignal> {
    let plan = OlctPlan::new(*params, plan_grid)?;
    let spec = plan.forward(g)?;
    let vals: Vec<Complex64> = spec
        .samples()
        .iter()
        .zip(mask)
        .map(|(v, &keep)| if keep { *v } else { Complex64::new(0.0, 0.0) })
        .collect();
    let back = plan.inverse(&vals)?;
    let mut s = back.into_samples();
    s.truncate(g.len());
    SampledSignal::from_grid(g.grid(), s)
}

fn iterate(
    params: &OlctParams,
    f: &SampledSignal,
    opts: &EstimatorOptions,
    step: impl Fn(&SampledSignal) -> Result<SampledSignal>,
    mask: &[bool],
) -> Result<(Vec<f64>, Option<usize>)> {
    let norm0 = f.norm();
    if norm0 == 0.0 || !norm0.is_finite() {
        return Err(OlctError::DegenerateInput("input has zero (or non-finite) norm".into()));
    }
    let plan_grid = Grid::new(f.x_start(), f.dx(), f.len().next_power_of_two())?;
    let mut g = f.scaled(Complex64::new(1.0 / norm0, 0.0));
    let mut log_acc = norm0.ln();
    let mut logs = Vec::with_capacity(opts.n_max);
    for n in 1..=opts.n_max {
        let mut next = step(&g)?;
        if opts.support_guard {
            next = project(params, &next, plan_grid, mask)?;
        }
        let nu = next.norm();
        if !(nu > 0.0 && nu.is_finite()) {
            let completed = n - 1;
            if completed < 2 {
                return Err(if nu == 0.0 {
                    OlctError::NumericalUnderflow { completed }
                } else {
                    OlctError::NumericalOverflow { completed }
                });
            }
            return Ok((logs, Some(completed)));
        }
        log_acc += nu.ln();
        logs.push(log_acc);
        g = next.scaled(Complex64::new(1.0 / nu, 0.0));
    }
    Ok((logs, None))
}

fn assemble(logs: Vec<f64>, capped_at: Option<usize>, gamma_direct: f64, opts: &EstimatorOptions) -> OperatorSequence {
    let roots: Vec<f64> = logs.iter().enumerate().map(|(i, l)| (l / (i + 1) as f64).exp()).collect();
    let estimate = match opts.method {
        Extrapolation::LastValue => roots.last().copied().unwrap_or(f64::NAN),
        Extrapolation::Richardson => richardson_limit(&roots),
    };
    OperatorSequence {
        norms: logs.iter().map(|l| l.exp()).collect(),
        log_norms: logs,
        roots,
        estimate,
        method: opts.method,
        gamma_direct,
        capped_at,
        support_guard: opts.support_guard,
    }
}

/// `||Delta^n f||^(1/n)` for `n = 1..=n_max` and its extrapolated limit (the bandwidth).
pub fn pw_bandwidth_estimate(params: &OlctParams, f: &SampledSignal, n_max: usize) -> Result<OperatorSequence> {
    pw_bandwidth_estimate_with(params, f, &EstimatorOptions::paley_wiener(n_max))
}

pub fn pw_bandwidth_estimate_with(params: &OlctParams, f: &SampledSignal, opts: &EstimatorOptions) -> Result<OperatorSequence> {
    params.require_main()?;
    check_n_max(opts.n_max)?;
    if f.max_abs() == 0.0 {
        return Err(OlctError::DegenerateInput("zero signal has no bandwidth".into()));
    }
    let (gamma, mask) = measured_support(params, f, opts.support_threshold, true)?;
    let (logs, cap) = iterate(params, f, opts, |g| delta_op_with(params, g, opts.scheme), &mask)?;
    Ok(assemble(logs, cap, gamma, opts))
}

/// `||B^n f||^(1/n)` and its extrapolated limit `R`, expected to equal `1 / gamma_direct`.
pub fn boas_highpass_estimate(params: &OlctParams, f: &SampledSignal, n_max: usize) -> Result<OperatorSequence> {
    boas_highpass_estimate_with(params, f, &EstimatorOptions::boas(n_max))
}

pub fn boas_highpass_estimate_with(params: &OlctParams, f: &SampledSignal, opts: &EstimatorOptions) -> Result<OperatorSequence> {
    params.require_main()?;
    check_n_max(opts.n_max)?;
    if f.max_abs() == 0.0 {
        return Err(OlctError::DegenerateInput("all Boas norms vanish for the zero signal".into()));
    }
    let (gamma, mask) = measured_support(params, f, opts.support_threshold, false)?;
    let (logs, cap) = iterate(params, f, opts, |g| boas_op(params, g), &mask)?;
    Ok(assemble(logs, cap, gamma, opts))
}

fn check_n_max(n_max: usize) -> Result<()> {
    if n_max < 4 {
        return Err(OlctError::ConfigInvalid(format!("n_max must be at least 4, got {n_max}")));
    }
    Ok(())
}

/// `O(Delta^n f)(u)` against `(-i u / b)^n F(u)`, both by direct quadrature on the interior
/// 80% of `f`'s native u-grid.
pub fn verify_delta_eigen(params: &OlctParams, f: &SampledSignal, n: usize, tol: f64) -> Result<VerificationReport> {
    let dn = delta_op_n(params, f, n)?;
    let grid = crate::plan::native_u_grid(params, f.dx(), f.len().next_power_of_two());
    let lhs = olct_direct(params, &dn, &grid)?;
    let big_f = olct_direct(params, f, &grid)?;
    let b = params.b();
    let rhs: Vec<Complex64> = big_f
        .samples()
        .iter()
        .enumerate()
        .map(|(j, v)| Complex64::new(0.0, -grid.point(j) / b).powu(n as u32) * v)
        .collect();
    let m = grid.len;
    let lo = m / 10;
    let hi = m - m / 10;
    let cmp = compare_masked(lhs.samples(), &rhs, REFERENCE_FLOOR, |j| j >= lo && j < hi);
    Ok(VerificationReport::from_comparison(format!("delta_eigen_n{n}"), &cmp, tol)
        .with_params(*params)
        .with_detail("n", n)
        .with_leakage_check(f.edge_ratio(), EDGE_LEAKAGE_THRESHOLD))
}

/// `O(B^n f)(u)` against `(b / (i u))^n F(u)` on `|u/b| >= exclusion`. The detail
/// `ib_over_u_rel_err` compares against `(i b / u)^n F(u)`, the factor obtained by
/// integrating by parts with `B` defined as an integral up to `+inf`.
pub fn verify_boas_relation(
    params: &OlctParams,
    f: &SampledSignal,
    n: usize,
    tol: f64,
    exclusion: f64,
) -> Result<VerificationReport> {
    let bn = boas_op_n(params, f, n)?;
    let lhs = olct_fast(params, &bn)?;
    let big_f = olct_fast(params, f)?;
    let b = params.b();
    let keep = |j: usize| (big_f.u(j) / b).abs() >= exclusion;
    let factor = |j: usize, printed: bool| {
        let u = big_f.u(j);
        let base = if printed { Complex64::new(0.0, -b / u) } else { Complex64::new(0.0, b / u) };
        base.powu(n as u32)
    };
    let rhs: Vec<Complex64> =
        (0..big_f.len()).map(|j| if keep(j) { factor(j, true) * big_f.samples()[j] } else { Complex64::new(0.0, 0.0) }).collect();
    let alt: Vec<Complex64> =
        (0..big_f.len()).map(|j| if keep(j) { factor(j, false) * big_f.samples()[j] } else { Complex64::new(0.0, 0.0) }).collect();
    let cmp = compare_masked(lhs.samples(), &rhs, REFERENCE_FLOOR, keep);
    let cmp_alt = compare_masked(lhs.samples(), &alt, REFERENCE_FLOOR, keep);
    Ok(VerificationReport::from_comparison(format!("boas_relation_n{n}"), &cmp, tol)
        .with_params(*params)
        .with_detail("n", n)
        .with_detail("exclusion", exclusion)
        .with_detail("ib_over_u_rel_err", cmp_alt.rel_err))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: [f64; 6]) -> OlctParams {
        OlctParams::try_from(v).unwrap()
    }

    fn gaussian(grid: Grid) -> SampledSignal {
        SampledSignal::from_fn(grid, |x| Complex64::new((-x * x / 2.0).exp(), 0.0))
    }

    #[test]
    fn delta_of_zero_and_n_zero() {
        let prm = p([1.0, 1.0, 1.0, 2.0, 1.0, 0.0]);
        let g = Grid::centered(1.0 / 32.0, 1024).unwrap();
        assert_eq!(delta_op(&prm, &SampledSignal::zeros(g)).unwrap().max_abs(), 0.0);
        let f = gaussian(g);
        assert_eq!(delta_op_n(&prm, &f, 0).unwrap(), f);
    }

    #[test]
    fn delta_annihilates_conjugate_chirp() {
        let prm = p([1.0, 1.0, 1.0, 2.0, 1.0, 0.0]);
        let g = Grid::centered(1.0 / 32.0, 1024).unwrap();
        let f = SampledSignal::from_fn(g, |x| Complex64::cis(-prm.input_chirp_phase(x)));
        let d = delta_op(&prm, &f).unwrap();
        let n = d.len();
        assert!(d.samples()[n / 10..n - n / 10].iter().all(|v| v.norm() < 1e-8));
    }

    #[test]
    fn delta_matches_analytic_derivative() {
        let prm = p([2.0, 1.0, 1.0, 1.0, 0.5, -0.3]);
        let g = Grid::centered(1.0 / 32.0, 1024).unwrap();
        let f = gaussian(g);
        let want = f.map(|x, s| -(s * (-x)) - Complex64::new(0.0, 1.0 / prm.b()) * (prm.a() * x + prm.u0()) * s);
        for scheme in [DerivativeScheme::Spectral, DerivativeScheme::FiniteDifference4] {
            let got = delta_op_with(&prm, &f, scheme).unwrap();
            let err = got.sub(&want).unwrap().max_abs();
            let bound = if scheme == DerivativeScheme::Spectral { 1e-10 } else { 1e-4 };
            assert!(err < bound, "{scheme:?}: {err}");
        }
    }

    #[test]
    fn delta_eigen_relation_low_orders() {
        let prm = p([1.0, 1.0, 1.0, 2.0, 1.0, 0.0]);
        let f = gaussian(Grid::centered(1.0 / 16.0, 512).unwrap());
        for n in 1..=2 {
            let r = verify_delta_eigen(&prm, &f, n, 1e-6).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn boas_vanishes_right_of_support() {
        let prm = p([1.0, 1.0, 1.0, 2.0, 1.0, 0.0]);
        let g = Grid::new(-16.0, 1.0 / 32.0, 1025).unwrap();
        let f = SampledSignal::from_fn(g, |x| Complex64::new(if x.abs() <= 1.0 { 1.0 - x * x } else { 0.0 }, 0.0));
        let bf = boas_op(&prm, &f).unwrap();
        for k in 0..g.len {
            if g.point(k) > 1.0 + 1e-12 {
                assert_eq!(bf.samples()[k], Complex64::new(0.0, 0.0));
            }
        }
        assert_eq!(boas_op(&prm, &SampledSignal::zeros(g)).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn boas_inverts_delta_on_decaying_input() {
        // B(Delta f) = f when f vanishes at the right end
        let prm = p([0.5, 2.0, -0.25, 1.0, -0.7, 0.4]);
        let f = gaussian(Grid::centered(1.0 / 64.0, 2048).unwrap());
        let back = boas_op(&prm, &delta_op(&prm, &f).unwrap()).unwrap();
        assert!(back.sub(&f).unwrap().max_abs() < 1e-4);
    }

    #[test]
    fn richardson_recovers_limit() {
        let roots: Vec<f64> = (1..=16).map(|n| 2.0 + 0.7 / n as f64).collect();
        assert!((richardson_limit(&roots) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn estimators_reject_zero_input_and_small_n() {
        let prm = p([1.0, 1.0, 1.0, 2.0, 1.0, 0.0]);
        let z = SampledSignal::zeros(Grid::centered(0.1, 128).unwrap());
        assert!(matches!(pw_bandwidth_estimate(&prm, &z, 16), Err(OlctError::DegenerateInput(_))));
        assert!(matches!(boas_highpass_estimate(&prm, &z, 16), Err(OlctError::DegenerateInput(_))));
        let f = gaussian(Grid::centered(0.1, 128).unwrap());
        assert!(matches!(pw_bandwidth_estimate(&prm, &f, 3), Err(OlctError::ConfigInvalid(_))));
    }

    #[test]
    fn roots_scale_with_amplitude() {
        let prm = p([1.0, 1.0, 1.0, 2.0, 1.0, 0.0]);
        let f = gaussian(Grid::centered(1.0 / 8.0, 256).unwrap());
        let alpha = 7.5;
        let a = pw_bandwidth_estimate(&prm, &f, 8).unwrap();
        let b = pw_bandwidth_estimate(&prm, &f.scaled(Complex64::new(alpha, 0.0)), 8).unwrap();
        for (n, (ra, rb)) in a.roots.iter().zip(&b.roots).enumerate() {
            let want = alpha.powf(1.0 / (n + 1) as f64);
            assert!((rb / ra - want).abs() < 1e-10 * want);
        }
    }
}

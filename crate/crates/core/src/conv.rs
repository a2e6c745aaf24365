//! Half-argument convolution and correlation, their spectral-product forms, and the
//! corresponding identity checks.
//!
//! Both operations combine `f(tau)` with `g(x/2 - tau)`. For inputs on
//! `x0 + k dx` (`k < n`, `N = n.next_power_of_two()`) every result lives on
//! `4 x0 + m dx`, `m < 4N`: this covers the full support `x/2 in [2 x0, 2 x_{n-1}]`,
//! and `g(x_m/2 - tau_k)` falls on the half-step lattice of `g` at index `m - 2k`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Result;
use crate::interp::HalfLattice;
use crate::params::OlctParams;
use crate::plan::{native_du, OlctPlan};
use crate::report::{compare, Comparison, VerificationReport, REFERENCE_FLOOR};
use crate::signal::{trapezoid_weight, Grid, SampledSignal, Spectrum};
use crate::transform::{olct_direct_at, olct_fast, olct_inverse};

/// Unit-modulus spectral factor `T(u) = exp(-i (6u (d u0 - b w0) + 7 d u^2) / 2b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChirpFactorT {
    params: OlctParams,
}

impl ChirpFactorT {
    pub fn new(params: OlctParams) -> Result<Self> {
        params.require_main()?;
        Ok(Self { params })
    }

    #[inline]
    pub fn at(&self, u: f64) -> Complex64 {
        let p = &self.params;
        Complex64::cis(-(6.0 * u * p.offset_coupling() + 7.0 * p.d() * u * u) / (2.0 * p.b()))
    }

    /// `exp(i (6u (d u0 - b w0) - 7 d u^2) / 2b)`: the factor the convolution actually
    /// produces when `a = 0` (the linear term carries the opposite sign).
    #[inline]
    pub fn sign_corrected_at(&self, u: f64) -> Complex64 {
        let p = &self.params;
        Complex64::cis((6.0 * u * p.offset_coupling() - 7.0 * p.d() * u * u) / (2.0 * p.b()))
    }
}

pub fn chirp_t(params: &OlctParams, u: f64) -> Result<Complex64> {
    Ok(ChirpFactorT::new(*params)?.at(u))
}

/// Output grid shared by every convolution and correlation of signals on `grid`.
pub fn output_grid(grid: &Grid) -> Grid {
    Grid { start: 4.0 * grid.start, step: grid.step, len: 4 * grid.len.next_power_of_two() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvolutionMethod {
    TimeDomain,
    SpectralProduct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvolutionResult {
    pub signal: SampledSignal,
    pub method: ConvolutionMethod,
    /// Agreement with the other method, when a cross-check was requested.
    pub report: Option<VerificationReport>,
}

/// Convolve by `method`; with `cross_check` the other method also runs and the
/// relative L2 disagreement is reported against `tol`.
pub fn convolve(
    params: &OlctParams,
    f: &SampledSignal,
    g: &SampledSignal,
    method: ConvolutionMethod,
    cross_check: Option<f64>,
) -> Result<ConvolutionResult> {
    let run = |m| match m {
        ConvolutionMethod::TimeDomain => convolve_time(params, f, g),
        ConvolutionMethod::SpectralProduct => convolve_spectral(params, f, g),
    };
    let signal = run(method)?;
    let report = match cross_check {
        None => None,
        Some(tol) => {
            let other = run(match method {
                ConvolutionMethod::TimeDomain => ConvolutionMethod::SpectralProduct,
                ConvolutionMethod::SpectralProduct => ConvolutionMethod::TimeDomain,
            })?;
            let rel = crate::report::relative_l2(signal.samples(), other.samples());
            let max_abs = signal
                .samples()
                .iter()
                .zip(other.samples())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            Some(VerificationReport::new("convolution_methods_agree", max_abs, rel, tol).with_params(*params))
        }
    };
    Ok(ConvolutionResult { signal, method, report })
}

/// Sum `out[m] = outer(x_m) * sum_k pre_k * lat[m - 2k] * exp(i kappa x_m tau_k)` over the
/// output grid, in a fixed order per output sample.
fn half_argument_sum(
    f: &SampledSignal,
    lattice: &HalfLattice,
    pre: &[Complex64],
    kappa: f64,
    outer: impl Fn(f64) -> Complex64 + Sync,
) -> Result<SampledSignal> {
    let out = output_grid(&f.grid());
    let n = f.len() as i64;
    let taus: Vec<f64> = (0..f.len()).map(|k| f.x(k)).collect();
    let values = (0..out.len)
        .into_par_iter()
        .map(|m| {
            let x = out.point(m);
            let mi = m as i64;
            // lattice index m - 2k must lie in [0, 2n - 2]
            let k_lo = ((mi - 2 * n + 3) / 2).max(0);
            let k_hi = (mi / 2).min(n - 1);
            let mut acc = Complex64::new(0.0, 0.0);
            for k in k_lo..=k_hi {
                let ku = k as usize;
                let term = pre[ku] * lattice.get(mi - 2 * k);
                acc += if kappa == 0.0 { term } else { term * Complex64::cis(kappa * x * taus[ku]) };
            }
            outer(x) * acc
        })
        .collect();
    SampledSignal::from_grid(out, values)
}

fn weights_times(f: &SampledSignal, chirp: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
    let n = f.len();
    f.samples()
        .iter()
        .enumerate()
        .map(|(k, &s)| s * chirp(f.x(k)) * (trapezoid_weight(k, n) * f.dx()))
        .collect()
}

/// Time-domain convolution by quadrature over `tau`; O(N^2).
///
/// `(f (+) g)(x) = A e^{i d u0^2/2b} integral f(tau) g(x/2 - tau)
///  e^{-i (a (3x^2/4 + 2x tau - 2 tau^2) + x u0)/2b} dtau`.
pub fn convolve_time(params: &OlctParams, f: &SampledSignal, g: &SampledSignal) -> Result<SampledSignal> {
    params.require_main()?;
    f.require_same_grid(g)?;
    let beta = 1.0 / (2.0 * params.b());
    let (a, u0) = (params.a(), params.u0());
    let lead = params.amplitude() * Complex64::cis(params.offset_phase());
    let pre = weights_times(f, |t| Complex64::cis(2.0 * beta * a * t * t));
    let lattice = HalfLattice::new(g);
    half_argument_sum(f, &lattice, &pre, -2.0 * beta * a, |x| {
        lead * Complex64::cis(-beta * (0.75 * a * x * x + x * u0))
    })
}

/// Spectra on the doubled-density grid (`2N` padding, step `du/2`).
fn doubled_density_spectrum(params: &OlctParams, f: &SampledSignal) -> Result<Spectrum> {
    let n2 = 2 * f.len().next_power_of_two();
    OlctPlan::new(*params, Grid::new(f.x_start(), f.dx(), n2)?)?.forward(f)
}

/// Grid of `H(u')` whose inverse lands on [`output_grid`]: `4N` points, step `du/4`, and
/// `2u'` on the doubled-density grid.
pub fn dilated_u_grid(params: &OlctParams, x_grid: &Grid) -> Grid {
    let n = x_grid.len.next_power_of_two();
    let step = native_du(params, x_grid.step, n) / 4.0;
    Grid { start: -((2 * n) as f64) * step, step, len: 4 * n }
}

/// Value of a doubled-density spectrum at `2u'_j`, zero outside its range.
pub(crate) fn dilated_values(spec2: &Spectrum) -> Vec<Complex64> {
    let n = spec2.len() / 2;
    (0..4 * n)
        .map(|j| if (n..3 * n).contains(&j) { spec2.samples()[j - n] } else { Complex64::new(0.0, 0.0) })
        .collect()
}

/// `F(2u')` on [`dilated_u_grid`], by the fast path.
pub fn dilated_spectrum(params: &OlctParams, f: &SampledSignal) -> Result<Vec<Complex64>> {
    Ok(dilated_values(&doubled_density_spectrum(params, f)?))
}

/// Inverse of `H` given on [`dilated_u_grid`] for inputs on `x_grid`.
pub(crate) fn invert_dilated(params: &OlctParams, x_grid: &Grid, h: Vec<Complex64>) -> Result<SampledSignal> {
    let ug = dilated_u_grid(params, x_grid);
    let spec = Spectrum::new(ug.start, ug.step, h, *params, 4.0 * x_grid.start)?;
    olct_inverse(&spec)
}

/// Spectral-product convolution: inverse of `2 T(u) F(2u) G(2u)`; O(N log N).
pub fn convolve_spectral(params: &OlctParams, f: &SampledSignal, g: &SampledSignal) -> Result<SampledSignal> {
    params.require_main()?;
    f.require_same_grid(g)?;
    let t = ChirpFactorT::new(*params)?;
    let ug = dilated_u_grid(params, &f.grid());
    let ff = dilated_spectrum(params, f)?;
    let gg = dilated_spectrum(params, g)?;
    let h = ff
        .iter()
        .zip(&gg)
        .enumerate()
        .map(|(j, (a, b))| 2.0 * t.at(ug.point(j)) * a * b)
        .collect();
    invert_dilated(params, &f.grid(), h)
}

/// Which exponent term the correlation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationVariant {
    /// `E = -4 (d u0 - b w0)`, a constant.
    AsPrinted,
    /// `E = -x (d u0 - b w0)`.
    ProofConsistent,
}

/// `(p (x) q)(x) = sqrt(i/(2 pi b)) C integral p(tau) q(x/2 - tau)
///  e^{i (d (3x^2/4 + tau x - 2 tau^2) + E)/2b} dtau`,
/// `C = e^{i (c d u0^2 - 2 a d u0 w0 + a b w0^2)/2}`.
pub fn correlate(
    params: &OlctParams,
    p: &SampledSignal,
    q: &SampledSignal,
    variant: CorrelationVariant,
) -> Result<SampledSignal> {
    params.require_main()?;
    p.require_same_grid(q)?;
    let (a, b, c, d, u0, w0) = (params.a(), params.b(), params.c(), params.d(), params.u0(), params.w0());
    let beta = 1.0 / (2.0 * b);
    let k = params.offset_coupling();
    let big_c = Complex64::cis(0.5 * (c * d * u0 * u0 - 2.0 * a * d * u0 * w0 + a * b * w0 * w0));
    let lead = Complex64::new(0.0, 1.0 / (2.0 * std::f64::consts::PI * b)).sqrt() * big_c;
    let pre = weights_times(p, |t| Complex64::cis(-2.0 * beta * d * t * t));
    let lattice = HalfLattice::new(q);
    half_argument_sum(p, &lattice, &pre, beta * d, |x| {
        let e = match variant {
            CorrelationVariant::AsPrinted => -4.0 * k,
            CorrelationVariant::ProofConsistent => -x * k,
        };
        lead * Complex64::cis(beta * (0.75 * d * x * x + e))
    })
}

/// u points for theorem checks: 257 points over `|u| <= 1.1 s / 2`, where `s` bounds the
/// numerical support of `F G` on the fast grid (so `2u` stays inside it).
fn check_points(params: &OlctParams, f: &SampledSignal, g: &SampledSignal) -> Result<Vec<f64>> {
    let ff = olct_fast(params, f)?;
    let gg = olct_fast(params, g)?;
    let prod: Vec<f64> = ff.samples().iter().zip(gg.samples()).map(|(a, b)| (a * b).norm()).collect();
    let peak = prod.iter().cloned().fold(0.0, f64::max);
    let u_nyq = ff.u(0).abs();
    let s = if peak > 0.0 {
        (0..ff.len()).filter(|&j| prod[j] > 1e-12 * peak).map(|j| ff.u(j).abs()).fold(0.0, f64::max)
    } else {
        u_nyq
    };
    let half = (0.55 * s).min(0.5 * u_nyq).max(ff.du());
    Ok((0..257).map(|j| -half + j as f64 * 2.0 * half / 256.0).collect())
}

/// Both sides of the convolution theorem by independent pipelines: the left side as the
/// direct transform of the time-domain convolution, the right side as
/// `2 T(u) F(2u) G(2u)` with `F`, `G` by direct quadrature.
pub fn verify_convolution_theorem(
    params: &OlctParams,
    f: &SampledSignal,
    g: &SampledSignal,
    tol: f64,
) -> Result<VerificationReport> {
    let t = ChirpFactorT::new(*params)?;
    let us = check_points(params, f, g)?;
    let h = convolve_time(params, f, g)?;
    let lhs = olct_direct_at(params, &h, &us)?;
    let u2: Vec<f64> = us.iter().map(|u| 2.0 * u).collect();
    let fu = olct_direct_at(params, f, &u2)?;
    let gu = olct_direct_at(params, g, &u2)?;
    let product: Vec<Complex64> = fu.iter().zip(&gu).map(|(a, b)| 2.0 * a * b).collect();
    let rhs: Vec<Complex64> = us.iter().zip(&product).map(|(&u, v)| t.at(u) * v).collect();
    let rhs_corrected: Vec<Complex64> = us.iter().zip(&product).map(|(&u, v)| t.sign_corrected_at(u) * v).collect();
    let cmp = compare(&lhs, &rhs, REFERENCE_FLOOR);
    let cmp_c = compare(&lhs, &rhs_corrected, REFERENCE_FLOOR);
    Ok(VerificationReport::from_comparison("convolution_theorem", &cmp, tol)
        .with_params(*params)
        .with_detail("u_max", us[us.len() - 1])
        .with_detail("sign_corrected_t_rel_err", cmp_c.rel_err))
}

pub const L1_BOUND_SLACK: f64 = 1e-9;

/// `||f (+) g||_1 <= sqrt(4 / (2 pi |b|)) ||f||_1 ||g||_1`; `rel_err` is the achieved ratio
/// of the left side to the bound. The bound is attained by non-negative pairs when `a = 0`,
/// so the tolerance is `1 + L1_BOUND_SLACK` to absorb rounding.
pub fn verify_l1_bound(params: &OlctParams, f: &SampledSignal, g: &SampledSignal) -> Result<VerificationReport> {
    let h = convolve_time(params, f, g)?;
    let lhs = h.l1_norm();
    let bound = (4.0 / (2.0 * std::f64::consts::PI * params.b().abs())).sqrt() * f.l1_norm() * g.l1_norm();
    let ratio = if bound > 0.0 { lhs / bound } else if lhs > 0.0 { f64::INFINITY } else { 0.0 };
    Ok(VerificationReport::new("l1_bound", (lhs - bound).max(0.0), ratio, 1.0 + L1_BOUND_SLACK)
        .with_params(*params)
        .with_detail("lhs", lhs)
        .with_detail("bound", bound))
}

/// Left-hand chirp of the correlation identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationChirp {
    /// `T(x)` as in the theorem statement.
    Statement,
    /// `2 exp(i (7 a x^2 + 6 u0 x) / 2b)` as derived in the proof.
    Proof,
}

impl CorrelationChirp {
    fn at(&self, params: &OlctParams, t: &ChirpFactorT, x: f64) -> Complex64 {
        match self {
            CorrelationChirp::Statement => t.at(x),
            CorrelationChirp::Proof => {
                2.0 * Complex64::cis((7.0 * params.a() * x * x + 6.0 * params.u0() * x) / (2.0 * params.b()))
            }
        }
    }
}

/// Spectral window used by the correlation check: `F`, `G` sampled on `[-12, 12]`, 512 points.
pub const CORRELATION_U_HALF_WIDTH: f64 = 12.0;
pub const CORRELATION_U_POINTS: usize = 512;

/// One cell of the correlation-identity error matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingResult {
    pub chirp: CorrelationChirp,
    pub variant: CorrelationVariant,
    pub rel_err: f64,
    pub max_abs_err: f64,
    pub passed: bool,
    /// Global phase minimizing the mismatch, and the error left after removing it.
    pub best_phase: f64,
    pub rel_err_after_phase: f64,
}

/// Four-way check of `O[chirp(x) f(2x) g(2x)](w) = (F (x) G)(w)`: both left-hand chirps
/// against both correlation variants. Passes when at least one pairing agrees within `tol`;
/// the matrix is in `details["pairings"]`.
pub fn verify_correlation_theorem(
    params: &OlctParams,
    f: &SampledSignal,
    g: &SampledSignal,
    tol: f64,
) -> Result<VerificationReport> {
    let pairings = correlation_pairings(params, f, g, tol)?;
    let best = pairings
        .iter()
        .min_by(|a, b| a.rel_err.total_cmp(&b.rel_err))
        .expect("four pairings");
    let passing: Vec<String> = pairings.iter().filter(|p| p.passed).map(pairing_label).collect();
    Ok(VerificationReport::new("correlation_theorem", best.max_abs_err, best.rel_err, tol)
        .with_params(*params)
        .with_detail("best", pairing_label(best))
        .with_detail("passing", passing)
        .with_detail("pairings", serde_json::to_value(&pairings).unwrap_or(json!(null))))
}

pub fn pairing_label(p: &PairingResult) -> String {
    let c = match p.chirp {
        CorrelationChirp::Statement => "statement_chirp",
        CorrelationChirp::Proof => "proof_chirp",
    };
    let v = match p.variant {
        CorrelationVariant::AsPrinted => "as_printed",
        CorrelationVariant::ProofConsistent => "proof_consistent",
    };
    format!("{c}/{v}")
}

/// The four-pairing error matrix behind [`verify_correlation_theorem`].
pub fn correlation_pairings(
    params: &OlctParams,
    f: &SampledSignal,
    g: &SampledSignal,
    tol: f64,
) -> Result<Vec<PairingResult>> {
    params.require_main()?;
    f.require_same_grid(g)?;
    let t = ChirpFactorT::new(*params)?;
    let ugrid = Grid::span(-CORRELATION_U_HALF_WIDTH, CORRELATION_U_HALF_WIDTH, CORRELATION_U_POINTS)?;
    let us: Vec<f64> = ugrid.points().collect();
    let big_f = SampledSignal::from_grid(ugrid, olct_direct_at(params, f, &us)?)?;
    let big_g = SampledSignal::from_grid(ugrid, olct_direct_at(params, g, &us)?)?;
    // f(2y), g(2y) sampled exactly on y_k = x_k / 2
    let ygrid = Grid::new(f.x_start() / 2.0, f.dx() / 2.0, f.len())?;
    let fg: Vec<Complex64> = f.samples().iter().zip(g.samples()).map(|(a, b)| a * b).collect();
    let mut out = Vec::with_capacity(4);
    for chirp in [CorrelationChirp::Statement, CorrelationChirp::Proof] {
        let h = SampledSignal::from_grid(
            ygrid,
            fg.iter().enumerate().map(|(k, v)| chirp.at(params, &t, ygrid.point(k)) * v).collect(),
        )?;
        let mut lhs: Option<(Vec<Complex64>, Grid)> = None;
        for variant in [CorrelationVariant::AsPrinted, CorrelationVariant::ProofConsistent] {
            let rhs = correlate(params, &big_f, &big_g, variant)?;
            let ws: Vec<f64> = rhs.grid().points().collect();
            if lhs.is_none() {
                lhs = Some((olct_direct_at(params, &h, &ws)?, rhs.grid()));
            }
            let (l, _) = lhs.as_ref().expect("computed above");
            let cmp = compare(l, rhs.samples(), REFERENCE_FLOOR);
            let (phase, after) = phase_fit(l, rhs.samples());
            out.push(PairingResult {
                chirp,
                variant,
                rel_err: cmp.rel_err,
                max_abs_err: cmp.max_abs_err,
                passed: cmp.rel_err <= tol,
                best_phase: phase,
                rel_err_after_phase: after.rel_err,
            });
        }
    }
    Ok(out)
}

/// Phase `theta` minimizing `|| lhs - e^{i theta} rhs ||` and the residual comparison.
fn phase_fit(lhs: &[Complex64], rhs: &[Complex64]) -> (f64, Comparison) {
    let s: Complex64 = lhs.iter().zip(rhs).map(|(l, r)| r.conj() * l).sum();
    let theta = s.arg();
    let rot: Vec<Complex64> = rhs.iter().map(|r| r * Complex64::cis(theta)).collect();
    (theta, compare(lhs, &rot, REFERENCE_FLOOR))
}

//! Identity checks for the transform itself: unitarity, spectral decay, oracle agreement,
//! round trip, classical reduction and the inverse-tuple comparison.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde_json::json;

use crate::error::Result;
use crate::params::{OlctParams, TupleCompletion};
use crate::report::{compare, relative_l2, VerificationReport, REFERENCE_FLOOR};
use crate::signal::{trapezoid_weight, SampledSignal};
use crate::transform::{
    olct_direct, olct_fast, olct_inverse, olct_inverse_with, InverseConstant, InverseMethod,
    EDGE_LEAKAGE_THRESHOLD,
};

/// `| ||f||^2 - ||F||^2 | / ||f||^2`, plus `|<f,g> - <F,G>| / (||f|| ||g||)` when `g` is given.
pub fn verify_parseval(
    params: &OlctParams,
    f: &SampledSignal,
    g: Option<&SampledSignal>,
    tol: f64,
) -> Result<VerificationReport> {
    let big_f = olct_fast(params, f)?;
    let nf = f.norm_sq();
    let nbig = big_f.norm_sq();
    let abs = (nf - nbig).abs();
    let norm_err = if nf > 0.0 { abs / nf } else { nbig };
    let mut rel = norm_err;
    let mut max_abs = abs;
    let mut report_details = vec![("signal_norm_sq", nf), ("spectrum_norm_sq", nbig), ("norm_rel_err", norm_err)];
    if let Some(g) = g {
        let big_g = olct_fast(params, g)?;
        let lhs = f.inner(g)?;
        let rhs = big_f.inner(&big_g)?;
        let scale = (nf * g.norm_sq()).sqrt();
        let d = (lhs - rhs).norm();
        let inner_err = if scale > 0.0 { d / scale } else { d };
        rel = rel.max(inner_err);
        max_abs = max_abs.max(d);
        report_details.push(("inner_rel_err", inner_err));
    }
    let mut r = VerificationReport::new("parseval", max_abs, rel, tol).with_params(*params);
    for (k, v) in report_details {
        r = r.with_detail(k, v);
    }
    Ok(r.with_leakage_check(f.edge_ratio(), EDGE_LEAKAGE_THRESHOLD))
}

/// Ratio of the largest `|F|` in the outer `edge_fraction` of the u-grid to the peak.
pub fn verify_riemann_lebesgue(
    params: &OlctParams,
    f: &SampledSignal,
    edge_fraction: f64,
    tol: f64,
) -> Result<VerificationReport> {
    let spec = olct_fast(params, f)?;
    let n = spec.len();
    let m = ((edge_fraction.clamp(0.0, 0.5) * n as f64).ceil() as usize).max(1);
    let s = spec.samples();
    let peak = spec.max_abs();
    let edge = s[..m].iter().chain(&s[n - m..]).map(|v| v.norm()).fold(0.0, f64::max);
    let ratio = if peak > 0.0 { edge / peak } else { 0.0 };
    Ok(VerificationReport::new("riemann_lebesgue", edge, ratio, tol)
        .with_params(*params)
        .with_detail("edge_fraction", edge_fraction)
        .with_detail("edge_points", 2 * m)
        .with_detail("u_max", spec.u(n - 1).abs().max(spec.u(0).abs()))
        .with_leakage_check(f.edge_ratio(), EDGE_LEAKAGE_THRESHOLD))
}

/// Fast path against direct quadrature on the fast path's own grid (peak-normalized max error).
pub fn verify_fast_vs_direct(
    params: &OlctParams,
    f: &SampledSignal,
    tol: f64,
) -> Result<VerificationReport> {
    let fast = olct_fast(params, f)?;
    let direct = olct_direct(params, f, &fast.grid())?;
    let cmp = compare(fast.samples(), direct.samples(), 0.0);
    Ok(VerificationReport::from_comparison("fast_vs_direct", &cmp, tol)
        .with_params(*params)
        .with_detail("n", fast.len()))
}

/// Relative L2 error of `inverse(fast(f))` against `f` on `f`'s own samples.
pub fn verify_round_trip(
    params: &OlctParams,
    f: &SampledSignal,
    tol: f64,
) -> Result<VerificationReport> {
    let back = olct_inverse(&olct_fast(params, f)?)?;
    let got = &back.samples()[..f.len()];
    let max_abs = got.iter().zip(f.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let rel = relative_l2(got, f.samples());
    Ok(VerificationReport::new("round_trip", max_abs, rel, tol)
        .with_params(*params)
        .with_leakage_check(f.edge_ratio(), EDGE_LEAKAGE_THRESHOLD))
}

/// Classical unitary Fourier transform `(1/sqrt(2 pi)) integral f(x) e^{-i u x} dx` on the
/// grid `u_j = (j - N/2) 2 pi / (N dx)`, computed by a plain zero-padded DFT.
pub fn classical_fourier(f: &SampledSignal) -> Vec<Complex64> {
    let n = f.len().next_power_of_two();
    let dx = f.dx();
    let half = n / 2;
    let du = 2.0 * std::f64::consts::PI / (n as f64 * dx);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let n_in = f.len();
    for (k, &s) in f.samples().iter().enumerate() {
        buf[k] = s * trapezoid_weight(k, n_in);
    }
    // fftshift on the output: frequency index j - N/2
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let x0 = f.x_start();
    let scale = dx / (2.0 * std::f64::consts::PI).sqrt();
    (0..n)
        .map(|j| {
            let u = (j as f64 - half as f64) * du;
            let bin = (j + n - half) % n;
            buf[bin] * Complex64::cis(-u * x0) * scale
        })
        .collect()
}

/// Fourier-parameter transform against [`classical_fourier`]; passes when the per-point ratio
/// is a single constant, measured as the standard deviation of the ratio over points where the
/// classical value exceeds `1e-6` of its peak.
pub fn verify_fourier_reduction(
    params: &OlctParams,
    f: &SampledSignal,
    tol: f64,
) -> Result<VerificationReport> {
    let spec = olct_fast(params, f)?;
    let classical = classical_fourier(f);
    let peak = classical.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let ratios: Vec<Complex64> = spec
        .samples()
        .iter()
        .zip(&classical)
        .filter(|(_, c)| c.norm() > 1e-6 * peak)
        .map(|(s, c)| s / c)
        .collect();
    let (mean, std) = ratio_spread(&ratios);
    Ok(VerificationReport::new("fourier_reduction", std, std, tol)
        .with_params(*params)
        .with_detail("constant_re", mean.re)
        .with_detail("constant_im", mean.im)
        .with_detail("constant_modulus", mean.norm())
        .with_detail("points_compared", ratios.len()))
}

/// Mean and standard deviation (about the mean) of a complex sample.
pub(crate) fn ratio_spread(v: &[Complex64]) -> (Complex64, f64) {
    if v.is_empty() {
        return (Complex64::new(0.0, 0.0), 0.0);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<Complex64>() / n;
    let var = v.iter().map(|r| (r - mean).norm_sqr()).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Compare each inverse-tuple candidate (two completions x two constants) with the adjoint
/// inverse, both by direct quadrature on `f`'s grid. Passes if at least one candidate agrees.
pub fn verify_inverse_tuple(
    params: &OlctParams,
    f: &SampledSignal,
    tol: f64,
) -> Result<VerificationReport> {
    let spec = olct_fast(params, f)?;
    let xg = f.grid();
    let adjoint = olct_inverse_with(&spec, &xg, InverseMethod::Adjoint)?;
    let mut best: Option<(f64, f64, String)> = None;
    let mut candidates = serde_json::Map::new();
    for completion in [TupleCompletion::Standard, TupleCompletion::Literal] {
        for constant in [InverseConstant::CorrelationDefinition, InverseConstant::InversionFormula] {
            let got = olct_inverse_with(&spec, &xg, InverseMethod::Tuple { completion, constant })?;
            let cmp = compare(got.samples(), adjoint.samples(), REFERENCE_FLOOR);
            let label = format!("{}/{}", name_of(&completion), name_of(&constant));
            candidates.insert(label.clone(), json!(cmp.rel_err));
            if best.as_ref().map_or(true, |b| cmp.rel_err < b.1) {
                best = Some((cmp.max_abs_err, cmp.rel_err, label));
            }
        }
    }
    let (max_abs, rel, label) = best.expect("four candidates evaluated");
    let matching: Vec<String> = candidates
        .iter()
        .filter(|(_, v)| v.as_f64().is_some_and(|e| e <= tol))
        .map(|(k, _)| k.clone())
        .collect();
    Ok(VerificationReport::new("inverse_tuple", max_abs, rel, tol)
        .with_params(*params)
        .with_detail("candidates", serde_json::Value::Object(candidates))
        .with_detail("best", label)
        .with_detail("matching", matching))
}

fn name_of<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{special_params, SpecialCase};
    use crate::signal::Grid;

    fn gaussian(grid: Grid) -> SampledSignal {
        SampledSignal::from_fn(grid, |x| Complex64::new((-x * x / 2.0).exp(), 0.0))
    }

    #[test]
    fn parseval_gaussian_fourier() {
        let p = special_params(SpecialCase::Fourier).unwrap();
        let f = gaussian(Grid::centered(24.0 / 2048.0, 2048).unwrap());
        let r = verify_parseval(&p, &f, Some(&f), 1e-6).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.detail("edge_leakage").is_none());
    }

    #[test]
    fn riemann_lebesgue_zero_and_gaussian() {
        let p = special_params(SpecialCase::Fourier).unwrap();
        let grid = Grid::new(-20.0, 40.0 / 4096.0, 4096).unwrap();
        let zero = SampledSignal::zeros(grid);
        assert!(verify_riemann_lebesgue(&p, &zero, 0.05, 1e-3).unwrap().passed);
        assert!(verify_riemann_lebesgue(&p, &gaussian(grid), 0.05, 1e-3).unwrap().passed);
    }

    #[test]
    fn riemann_lebesgue_rect_pulse_decays_slowly() {
        let p = special_params(SpecialCase::Fourier).unwrap();
        let grid = Grid::new(-20.0, 40.0 / 4096.0, 4096).unwrap();
        let rect = SampledSignal::from_fn(grid, |x| {
            Complex64::new(if x.abs() <= 1.0 { 1.0 } else { 0.0 }, 0.0)
        });
        let r = verify_riemann_lebesgue(&p, &rect, 0.05, 1e-1).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.rel_err > 1e-4, "rect spectrum should decay only algebraically");
    }

    #[test]
    fn fourier_reduction_constant() {
        let p = special_params(SpecialCase::Fourier).unwrap();
        let f = SampledSignal::from_fn(Grid::centered(0.02, 1000).unwrap(), |x| {
            Complex64::new((-(x - 1.0) * (x - 1.0)).exp(), 0.3 * (-x * x / 3.0).exp())
        });
        let r = verify_fourier_reduction(&p, &f, 1e-9).unwrap();
        assert!(r.passed, "{r:?}");
        let angle = r.detail("constant_im").unwrap().as_f64().unwrap()
            .atan2(r.detail("constant_re").unwrap().as_f64().unwrap());
        assert!((angle + std::f64::consts::FRAC_PI_4).abs() < 1e-9);
    }

    #[test]
    fn inverse_tuple_report() {
        let p = OlctParams::new(1.0, 1.0, 1.0, 2.0, 1.0, 0.0).unwrap();
        let f = gaussian(Grid::centered(0.1, 128).unwrap());
        let r = verify_inverse_tuple(&p, &f, 1e-8).unwrap();
        assert!(r.passed);
        assert_eq!(r.detail("best").unwrap(), "standard/correlation_definition");
    }
}

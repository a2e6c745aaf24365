//! The aggregated identity suite behind `olct verify`.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::checks::{
    verify_fast_vs_direct, verify_fourier_reduction, verify_inverse_tuple, verify_parseval, verify_riemann_lebesgue,
    verify_round_trip,
};
use crate::conv::{verify_convolution_theorem, verify_correlation_theorem, verify_l1_bound};
use crate::error::Result;
use crate::gen::fixtures;
use crate::params::{special_params, OlctParams, SpecialCase};
use crate::report::VerificationReport;
use crate::signal::{Grid, SampledSignal};
use crate::spectral::{verify_boas_relation, verify_delta_eigen};
use crate::tolerance::Tolerances;

/// FT, FrFT(pi/3), and two general offset tuples.
pub fn default_sweep() -> Vec<OlctParams> {
    let general = |v: [f64; 6]| OlctParams::try_from(v).expect("unimodular");
    vec![
        special_params(SpecialCase::Fourier).expect("b = 1"),
        special_params(SpecialCase::Fractional { alpha: PI / 3.0 }).expect("b != 0"),
        general([1.0, 1.0, 1.0, 2.0, 1.0, 0.0]),
        general([2.0, 1.0, 1.0, 1.0, 0.5, -0.3]),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub tolerances: Tolerances,
    pub params: Vec<OlctParams>,
    pub reports: Vec<VerificationReport>,
    pub passed: bool,
    pub elapsed_seconds: f64,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &VerificationReport> {
        self.reports.iter().filter(|r| !r.passed)
    }
}

/// Unit Gaussian centred at `c` on `[-16, 16)` with 1024 points.
pub fn gaussian_fixture(c: f64) -> SampledSignal {
    gaussian_on(Grid::centered(1.0 / 32.0, 1024).expect("valid grid"), c)
}

/// Unit Gaussian on `[-64, 64)` with 1024 points: wide enough in u that its spectrum has
/// decayed well before the grid edges for every tuple in [`default_sweep`].
pub fn wide_gaussian_fixture() -> SampledSignal {
    gaussian_on(Grid::centered(0.125, 1024).expect("valid grid"), 0.0)
}

fn gaussian_on(grid: Grid, c: f64) -> SampledSignal {
    SampledSignal::from_fn(grid, |x| Complex64::new((-(x - c) * (x - c) / 2.0).exp(), 0.0))
}

/// Every identity check for one parameter tuple.
pub fn run_params(params: &OlctParams, tol: &Tolerances) -> Result<Vec<VerificationReport>> {
    let f = gaussian_fixture(0.5);
    let g = gaussian_fixture(-0.5);
    let grid512 = Grid::centered(1.0 / 16.0, 512)?;
    let r1 = fixtures::random_smooth(1, grid512);
    let r2 = fixtures::random_smooth(2, grid512);

    let mut out = vec![
        verify_fast_vs_direct(params, &r1, tol.fast_vs_direct)?,
        verify_parseval(params, &r1, Some(&r2), tol.parseval)?,
        verify_round_trip(params, &f, tol.round_trip)?,
        verify_riemann_lebesgue(params, &wide_gaussian_fixture(), tol.edge_fraction, tol.riemann_lebesgue)?,
    ];
    if params.approx_eq(&special_params(SpecialCase::Fourier)?, 1e-12) {
        out.push(verify_fourier_reduction(params, &f, tol.reduction)?);
    }
    out.push(verify_convolution_theorem(params, &f, &g, tol.convolution)?);
    out.push(verify_l1_bound(params, &f, &g)?);
    out.push(verify_correlation_theorem(params, &f, &g, tol.correlation)?);
    for n in 1..=4 {
        out.push(verify_delta_eigen(params, &f, n, tol.delta_for(n))?);
    }
    let packet = fixtures::boas_relation(params)?;
    for n in 1..=2 {
        out.push(verify_boas_relation(params, &packet, n, tol.boas, tol.boas_exclusion)?);
    }
    out.push(verify_inverse_tuple(params, &f, tol.inverse_tuple)?);
    Ok(out)
}

/// Run [`run_params`] over `sweep`; `passed` is the conjunction of every report.
pub fn run_suite(sweep: &[OlctParams], tol: &Tolerances) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut reports = Vec::new();
    for p in sweep {
        reports.extend(run_params(p, tol)?);
    }
    let passed = reports.iter().all(|r| r.passed);
    Ok(SuiteReport {
        tolerances: tol.clone(),
        params: sweep.to_vec(),
        reports,
        passed,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

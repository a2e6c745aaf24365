//! Verification reports and the shared error metric.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::params::OlctParams;

/// Default relative floor below which reference points are ignored by [`compare`].
pub const REFERENCE_FLOOR: f64 = 1e-8;

/// Outcome of one numerical identity check.
///
/// `passed` is always `rel_err <= tolerance`; a NaN error never passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub params: Option<OlctParams>,
    pub max_abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub details: BTreeMap<String, Value>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>, max_abs_err: f64, rel_err: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            params: None,
            max_abs_err,
            rel_err,
            tolerance,
            passed: rel_err <= tolerance,
            details: BTreeMap::new(),
        }
    }

    pub fn from_comparison(name: impl Into<String>, cmp: &Comparison, tolerance: f64) -> Self {
        Self::new(name, cmp.max_abs_err, cmp.rel_err, tolerance)
            .with_detail("reference_peak", cmp.peak)
            .with_detail("points_compared", cmp.points)
    }

    pub fn with_params(mut self, params: OlctParams) -> Self {
        self.params = Some(params);
        self
    }

    pub fn with_detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn detail(&self, key: &str) -> Option<&Value> {
        self.details.get(key)
    }

    /// Attach an edge-leakage warning when `ratio` exceeds `threshold`.
    pub fn with_leakage_check(self, ratio: f64, threshold: f64) -> Self {
        if ratio > threshold {
            log::warn!("{}: edge leakage {ratio:.3e} exceeds {threshold:.1e}", self.name);
            self.with_detail("edge_leakage", ratio)
        } else {
            self
        }
    }
}

/// Peak-normalized comparison of a computed sequence against a reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    /// Largest `|lhs - ref|` over the compared points.
    pub max_abs_err: f64,
    /// `max_abs_err / max|ref|`; equals `max_abs_err` when the reference is identically zero.
    pub rel_err: f64,
    pub peak: f64,
    pub points: usize,
}

/// Compare over points where `|ref| > floor * max|ref|` (all points when the reference is zero).
pub fn compare(lhs: &[Complex64], reference: &[Complex64], floor: f64) -> Comparison {
    compare_masked(lhs, reference, floor, |_| true)
}

/// As [`compare`], additionally restricted to indices accepted by `keep`.
pub fn compare_masked(
    lhs: &[Complex64],
    reference: &[Complex64],
    floor: f64,
    keep: impl Fn(usize) -> bool,
) -> Comparison {
    assert_eq!(lhs.len(), reference.len(), "compared sequences differ in length");
    let peak = reference
        .iter()
        .enumerate()
        .filter(|(j, _)| keep(*j))
        .map(|(_, r)| r.norm())
        .fold(0.0, f64::max);
    let cutoff = floor * peak;
    let mut max_abs_err = 0.0f64;
    let mut points = 0;
    for (j, (l, r)) in lhs.iter().zip(reference).enumerate() {
        if !keep(j) || (peak > 0.0 && r.norm() <= cutoff) {
            continue;
        }
        let e = (l - r).norm();
        max_abs_err = if e.is_nan() { f64::NAN } else { max_abs_err.max(e) };
        points += 1;
    }
    let rel_err = if peak > 0.0 { max_abs_err / peak } else { max_abs_err };
    Comparison { max_abs_err, rel_err, peak, points }
}

/// `||a - b|| / ||b||` in the discrete l2 sense; `||a||` when `b` is zero.
pub fn relative_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "compared sequences differ in length");
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let base: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    if base > 0.0 {
        (diff / base).sqrt()
    } else {
        diff.sqrt()
    }
}

//! Uniformly sampled signals and spectra.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{OlctError, Result};
use crate::params::OlctParams;

/// A uniform grid `start + k * step`, `k = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Grid {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(OlctError::GridInvalid(format!("step must be positive, got {step}")));
        }
        if !start.is_finite() {
            return Err(OlctError::GridInvalid(format!("start must be finite, got {start}")));
        }
        if len < 2 {
            return Err(OlctError::GridInvalid(format!("need at least 2 points, got {len}")));
        }
        Ok(Self { start, step, len })
    }

    /// `len` points spanning `[lo, hi]` inclusive.
    pub fn span(lo: f64, hi: f64, len: usize) -> Result<Self> {
        if len < 2 || hi <= lo {
            return Err(OlctError::GridInvalid(format!(
                "cannot span [{lo}, {hi}] with {len} points"
            )));
        }
        Self::new(lo, (hi - lo) / (len - 1) as f64, len)
    }

    /// Grid of `len` points with spacing `step`, centred so that index `len / 2` sits at zero.
    pub fn centered(step: f64, len: usize) -> Result<Self> {
        Self::new(-((len / 2) as f64) * step, step, len)
    }

    #[inline]
    pub fn point(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.point(self.len - 1)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |k| self.point(k))
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.start && v <= self.end()
    }

    pub(crate) fn same_as(&self, other: &Grid) -> bool {
        self.len == other.len
            && (self.step - other.step).abs() <= 1e-12 * self.step
            && (self.start - other.start).abs() <= 1e-9 * self.step.max(self.start.abs())
    }
}

/// Trapezoid weight for index `k` of an `n`-point grid.
#[inline]
pub(crate) fn trapezoid_weight(k: usize, n: usize) -> f64 {
    if k == 0 || k + 1 == n {
        0.5
    } else {
        1.0
    }
}

/// Trapezoid integral of a sampled real function.
pub(crate) fn trapezoid(values: impl ExactSizeIterator<Item = f64>, step: f64) -> f64 {
    let n = values.len();
    values
        .enumerate()
        .map(|(k, v)| trapezoid_weight(k, n) * v)
        .sum::<f64>()
        * step
}

/// Complex-valued function sampled on the grid `x_start + k * dx`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSignal {
    x_start: f64,
    dx: f64,
    samples: Vec<Complex64>,
}

impl SampledSignal {
    pub fn new(x_start: f64, dx: f64, samples: Vec<Complex64>) -> Result<Self> {
        Grid::new(x_start, dx, samples.len())?;
        Ok(Self { x_start, dx, samples })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self { x_start: grid.start, dx: grid.step, samples: vec![Complex64::new(0.0, 0.0); grid.len] }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Self {
        Self { x_start: grid.start, dx: grid.step, samples: grid.points().map(f).collect() }
    }

    pub fn from_grid(grid: Grid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len {
            return Err(OlctError::GridMismatch(format!(
                "{} samples for a {}-point grid",
                samples.len(),
                grid.len
            )));
        }
        Self::new(grid.start, grid.step, samples)
    }

    pub fn x_start(&self) -> f64 {
        self.x_start
    }
    pub fn dx(&self) -> f64 {
        self.dx
    }
    pub fn len(&self) -> usize {
        self.samples.len()
    }
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }
    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn grid(&self) -> Grid {
        Grid { start: self.x_start, step: self.dx, len: self.samples.len() }
    }

    #[inline]
    pub fn x(&self, k: usize) -> f64 {
        self.x_start + k as f64 * self.dx
    }

    /// Squared L2 norm by the trapezoid rule.
    pub fn norm_sq(&self) -> f64 {
        trapezoid(self.samples.iter().map(|s| s.norm_sqr()), self.dx)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn l1_norm(&self) -> f64 {
        trapezoid(self.samples.iter().map(|s| s.norm()), self.dx)
    }

    /// `<self, other> = integral of self * conj(other)`.
    pub fn inner(&self, other: &SampledSignal) -> Result<Complex64> {
        self.require_same_grid(other)?;
        Ok(inner_trapezoid(&self.samples, &other.samples, self.dx))
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.samples)
    }

    /// Largest endpoint magnitude relative to the peak; zero for the zero signal.
    pub fn edge_ratio(&self) -> f64 {
        edge_ratio(&self.samples)
    }

    pub fn scaled(&self, alpha: Complex64) -> Self {
        self.map(|_, s| s * alpha)
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let samples = self.samples.iter().enumerate().map(|(k, &s)| f(self.x(k), s)).collect();
        Self { x_start: self.x_start, dx: self.dx, samples }
    }

    pub fn add(&self, other: &SampledSignal) -> Result<Self> {
        self.require_same_grid(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect();
        Ok(Self { x_start: self.x_start, dx: self.dx, samples })
    }

    pub fn sub(&self, other: &SampledSignal) -> Result<Self> {
        self.require_same_grid(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a - b).collect();
        Ok(Self { x_start: self.x_start, dx: self.dx, samples })
    }

    pub(crate) fn require_same_grid(&self, other: &SampledSignal) -> Result<()> {
        if self.grid().same_as(&other.grid()) {
            Ok(())
        } else {
            Err(OlctError::GridMismatch(format!(
                "grids differ: ({}, {}, {}) vs ({}, {}, {})",
                self.x_start,
                self.dx,
                self.len(),
                other.x_start,
                other.dx,
                other.len()
            )))
        }
    }
}

/// Transform values on the grid `u_start + j * du`, tagged with the parameters that produced them.
///
/// `x_origin` is the first x-grid point of the signal that was transformed;
/// the fast inverse uses it to place its output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    u_start: f64,
    du: f64,
    samples: Vec<Complex64>,
    params: OlctParams,
    x_origin: f64,
}

impl Spectrum {
    pub fn new(
        u_start: f64,
        du: f64,
        samples: Vec<Complex64>,
        params: OlctParams,
        x_origin: f64,
    ) -> Result<Self> {
        Grid::new(u_start, du, samples.len())?;
        if !x_origin.is_finite() {
            return Err(OlctError::GridInvalid("x origin must be finite".into()));
        }
        Ok(Self { u_start, du, samples, params, x_origin })
    }

    pub fn u_start(&self) -> f64 {
        self.u_start
    }
    pub fn du(&self) -> f64 {
        self.du
    }
    pub fn params(&self) -> &OlctParams {
        &self.params
    }
    pub fn x_origin(&self) -> f64 {
        self.x_origin
    }
    pub fn len(&self) -> usize {
        self.samples.len()
    }
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }
    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn grid(&self) -> Grid {
        Grid { start: self.u_start, step: self.du, len: self.samples.len() }
    }

    #[inline]
    pub fn u(&self, j: usize) -> f64 {
        self.u_start + j as f64 * self.du
    }

    pub fn norm_sq(&self) -> f64 {
        trapezoid(self.samples.iter().map(|s| s.norm_sqr()), self.du)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn inner(&self, other: &Spectrum) -> Result<Complex64> {
        if !self.grid().same_as(&other.grid()) {
            return Err(OlctError::GridMismatch("spectra live on different u-grids".into()));
        }
        Ok(inner_trapezoid(&self.samples, &other.samples, self.du))
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.samples)
    }

    /// Same grid and tags, new values.
    pub fn with_samples(&self, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != self.samples.len() {
            return Err(OlctError::GridMismatch(format!(
                "{} samples for a {}-point spectrum",
                samples.len(),
                self.samples.len()
            )));
        }
        Ok(Self { samples, ..self.clone() })
    }
}

pub(crate) fn inner_trapezoid(a: &[Complex64], b: &[Complex64], step: f64) -> Complex64 {
    let n = a.len();
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(k, (x, y))| x * y.conj() * trapezoid_weight(k, n))
        .sum::<Complex64>()
        * step
}

pub(crate) fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|s| s.norm()).fold(0.0, f64::max)
}

pub(crate) fn edge_ratio(v: &[Complex64]) -> f64 {
    let peak = max_abs(v);
    if peak == 0.0 || v.is_empty() {
        return 0.0;
    }
    v[0].norm().max(v[v.len() - 1].norm()) / peak
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn grid_validation() {
        assert!(Grid::new(0.0, 0.0, 10).is_err());
        assert!(Grid::new(0.0, -1.0, 10).is_err());
        assert!(Grid::new(0.0, 1.0, 1).is_err());
        assert!(SampledSignal::new(0.0, 0.1, vec![Complex64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn centered_grid_has_zero_at_half() {
        let g = Grid::centered(0.25, 8);
        let g = g.unwrap();
        assert_eq!(g.point(4), 0.0);
        assert_eq!(g.start, -1.0);
    }

    #[test]
    fn gaussian_norm_matches_sqrt_pi() {
        let g = Grid::span(-12.0, 12.0, 2049).unwrap();
        let f = SampledSignal::from_fn(g, |x| Complex64::new((-x * x / 2.0).exp(), 0.0));
        assert_relative_eq!(f.norm_sq(), std::f64::consts::PI.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn inner_product_with_self_is_norm() {
        let g = Grid::span(-5.0, 5.0, 101).unwrap();
        let f = SampledSignal::from_fn(g, |x| Complex64::new(x.cos(), x.sin() * 0.3));
        let ip = f.inner(&f).unwrap();
        assert_relative_eq!(ip.re, f.norm_sq(), max_relative = 1e-14);
        assert!(ip.im.abs() < 1e-14);
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let a = SampledSignal::zeros(Grid::new(0.0, 0.1, 10).unwrap());
        let b = SampledSignal::zeros(Grid::new(0.0, 0.2, 10).unwrap());
        assert!(matches!(a.add(&b), Err(OlctError::GridMismatch(_))));
    }
}

//! Precomputed chirp-FFT plan for the fast transform.
//!
//! With `x_k = x0 + k dx` and `u_j = us + j du`, `du dx = 2 pi |b| / N`, the
//! kernel factors as
//!
//! ```text
//! K(u_j, x_k) = post_j * pre_k * exp(-2 pi i s j k / N),   s = sign(b)
//! pre_k  = exp(i (a x_k^2 + 2 u0 x_k) / 2b) * exp(-i us (x_k - x0) / b)
//! post_j = A exp(i (d u0^2 + d u_j^2 - 2 u_j (d u0 - b w0)) / 2b) * exp(-i u_j x0 / b)
//! ```
//!
//! so the transform is a pre-chirp multiply, one length-`N` DFT and a post-chirp multiply.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{OlctError, Result};
use crate::params::OlctParams;
use crate::signal::{trapezoid_weight, Grid, SampledSignal, Spectrum};

/// Relative slack allowed when checking a caller-supplied grid against the `du` law.
const GRID_LAW_TOL: f64 = 1e-9;

/// `du` forced by the FFT frequency axis for `n` samples at spacing `dx`.
pub fn native_du(params: &OlctParams, dx: f64, n: usize) -> f64 {
    2.0 * PI * params.b().abs() / (n as f64 * dx)
}

/// Centred native u-grid: index `n / 2` sits at `u = 0`.
pub fn native_u_grid(params: &OlctParams, dx: f64, n: usize) -> Grid {
    let du = native_du(params, dx, n);
    Grid { start: -((n / 2) as f64) * du, step: du, len: n }
}

/// Read-only transform plan; cheap to share across threads.
#[derive(Clone)]
pub struct OlctPlan {
    params: OlctParams,
    x_grid: Grid,
    u_grid: Grid,
    pre: Vec<Complex64>,
    post: Vec<Complex64>,
    // e^{-2 pi i s jk/N} direction, and its conjugate for the adjoint.
    forward: Arc<dyn Fft<f64>>,
    adjoint: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for OlctPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OlctPlan")
            .field("params", &self.params)
            .field("x_grid", &self.x_grid)
            .field("u_grid", &self.u_grid)
            .finish_non_exhaustive()
    }
}

impl OlctPlan {
    /// Plan for an `x_grid.len`-point FFT on the centred native u-grid.
    pub fn new(params: OlctParams, x_grid: Grid) -> Result<Self> {
        params.require_main()?;
        let u_grid = native_u_grid(&params, x_grid.step, x_grid.len);
        Self::build(params, x_grid, u_grid)
    }

    /// Plan with a caller-chosen u-grid; its step must obey the native law.
    pub fn with_u_grid(params: OlctParams, x_grid: Grid, u_grid: Grid) -> Result<Self> {
        params.require_main()?;
        let du = native_du(&params, x_grid.step, x_grid.len);
        if u_grid.len != x_grid.len || ((u_grid.step - du) / du).abs() > GRID_LAW_TOL {
            return Err(OlctError::GridMismatch(format!(
                "u-grid ({} points, du = {}) violates du = 2 pi |b| / (n dx) = {du} for {} points",
                u_grid.len, u_grid.step, x_grid.len
            )));
        }
        Self::build(params, x_grid, u_grid)
    }

    /// Plan for the dual grid of a spectrum: `dx = 2 pi |b| / (N du)`, starting at its x origin.
    pub fn for_spectrum(spectrum: &Spectrum) -> Result<Self> {
        let params = *spectrum.params();
        params.require_main()?;
        let n = spectrum.len();
        let dx = 2.0 * PI * params.b().abs() / (n as f64 * spectrum.du());
        let x_grid = Grid::new(spectrum.x_origin(), dx, n)?;
        Self::build(params, x_grid, spectrum.grid())
    }

    fn build(params: OlctParams, x_grid: Grid, u_grid: Grid) -> Result<Self> {
        let n = x_grid.len;
        let b = params.b();
        let x0 = x_grid.start;
        let us = u_grid.start;
        let pre = (0..n)
            .map(|k| {
                let x = x_grid.point(k);
                Complex64::cis(params.input_chirp_phase(x) - us * (x - x0) / b)
            })
            .collect();
        let amp = params.amplitude();
        let post = (0..n)
            .map(|j| {
                let u = u_grid.point(j);
                amp * Complex64::cis(params.output_chirp_phase(u) - u * x0 / b)
            })
            .collect();
        let mut planner = FftPlanner::new();
        let (forward, adjoint) = if b > 0.0 {
            (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
        } else {
            (planner.plan_fft_inverse(n), planner.plan_fft_forward(n))
        };
        Ok(Self { params, x_grid, u_grid, pre, post, forward, adjoint })
    }

    pub fn params(&self) -> &OlctParams {
        &self.params
    }
    pub fn x_grid(&self) -> Grid {
        self.x_grid
    }
    pub fn u_grid(&self) -> Grid {
        self.u_grid
    }

    /// Transform `f`, which must start on this plan's x-grid and fit inside it; missing
    /// trailing samples are zero padding. Trapezoid weights apply at `f`'s own endpoints.
    pub fn forward(&self, f: &SampledSignal) -> Result<Spectrum> {
        self.forward_weighted(f, true)
    }

    /// Rectangle-rule forward transform; exactly inverted by [`OlctPlan::inverse`] on the plan grid.
    pub fn forward_rectangle(&self, f: &SampledSignal) -> Result<Spectrum> {
        self.forward_weighted(f, false)
    }

    fn forward_weighted(&self, f: &SampledSignal, trapezoid: bool) -> Result<Spectrum> {
        self.check_input(f)?;
        let n_in = f.len();
        let dx = self.x_grid.step;
        let mut buf = vec![Complex64::new(0.0, 0.0); self.x_grid.len];
        for (k, (slot, &s)) in buf.iter_mut().zip(f.samples()).enumerate() {
            let w = if trapezoid { trapezoid_weight(k, n_in) } else { 1.0 };
            *slot = s * self.pre[k] * (w * dx);
        }
        self.forward.process(&mut buf);
        for (v, p) in buf.iter_mut().zip(&self.post) {
            *v *= p;
        }
        Spectrum::new(self.u_grid.start, self.u_grid.step, buf, self.params, self.x_grid.start)
    }

    /// Adjoint (conjugate-kernel) inverse on the full plan x-grid.
    pub fn inverse(&self, values: &[Complex64]) -> Result<SampledSignal> {
        if values.len() != self.u_grid.len {
            return Err(OlctError::GridMismatch(format!(
                "{} spectral values for a {}-point plan",
                values.len(),
                self.u_grid.len
            )));
        }
        let du = self.u_grid.step;
        let mut buf: Vec<Complex64> =
            values.iter().zip(&self.post).map(|(v, p)| v * p.conj() * du).collect();
        self.adjoint.process(&mut buf);
        for (v, p) in buf.iter_mut().zip(&self.pre) {
            *v *= p.conj();
        }
        SampledSignal::from_grid(self.x_grid, buf)
    }

    fn check_input(&self, f: &SampledSignal) -> Result<()> {
        let g = self.x_grid;
        let same_step = ((f.dx() - g.step) / g.step).abs() <= 1e-12;
        let same_start = (f.x_start() - g.start).abs() <= 1e-9 * g.step;
        if !same_step || !same_start || f.len() > g.len {
            return Err(OlctError::GridMismatch(format!(
                "signal grid ({}, {}, {}) does not fit plan grid ({}, {}, {})",
                f.x_start(),
                f.dx(),
                f.len(),
                g.start,
                g.step,
                g.len
            )));
        }
        Ok(())
    }
}

//! Band-limited evaluation of a sampled signal on its half-step lattice.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::signal::SampledSignal;

/// Values of `g` at `x0 + j dx / 2`, `j = 0 ..= 2(n - 1)`.
///
/// Even `j` are the original samples; odd `j` come from an FFT half-sample shift of the
/// zero-padded signal (the Nyquist bin, whose half-shift is purely imaginary, is dropped).
/// Points outside the sampled interval read as zero.
#[derive(Debug, Clone)]
pub struct HalfLattice {
    values: Vec<Complex64>,
}

impl HalfLattice {
    pub fn new(g: &SampledSignal) -> Self {
        let n = g.len();
        let mid = midpoints(g.samples());
        let mut values = Vec::with_capacity(2 * n - 1);
        for (i, &v) in g.samples().iter().enumerate() {
            values.push(v);
            if i + 1 < n {
                values.push(mid[i]);
            }
        }
        Self { values }
    }

    #[inline]
    pub fn get(&self, j: i64) -> Complex64 {
        if j < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.values.get(j as usize).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Band-limited values halfway between consecutive samples (`n - 1` of them).
pub fn midpoints(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let p = (2 * n).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); p];
    buf[..n].copy_from_slice(samples);
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(p).process(&mut buf);
    for (q, v) in buf.iter_mut().enumerate() {
        let signed = if q < p / 2 {
            q as f64
        } else if q == p / 2 {
            *v = Complex64::new(0.0, 0.0);
            continue;
        } else {
            q as f64 - p as f64
        };
        *v *= Complex64::cis(std::f64::consts::PI * signed / p as f64) / p as f64;
    }
    planner.plan_fft_inverse(p).process(&mut buf);
    buf.truncate(n.saturating_sub(1));
    buf
}

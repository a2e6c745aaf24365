//! Shared inputs for the criterion benches.

use num_complex::Complex64;
use olct_core::{Grid, OlctParams, SampledSignal};

/// The general offset tuple `(1, 1, 1, 2, 1, 0)`.
pub fn params() -> OlctParams {
    OlctParams::new(1.0, 1.0, 1.0, 2.0, 1.0, 0.0).expect("unimodular")
}

/// Unit Gaussian centred at `c` on `n` points spanning `[-16, 16)`.
pub fn gaussian(n: usize, c: f64) -> SampledSignal {
    let grid = Grid::centered(32.0 / n as f64, n).expect("valid grid");
    SampledSignal::from_fn(grid, |x| Complex64::new((-(x - c) * (x - c) / 2.0).exp(), 0.0))
}

//! Central tolerance table; every identity check reads its threshold from here.

use serde::{Deserialize, Serialize};

use crate::error::{OlctError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Fast path vs direct quadrature, peak-normalized max error.
    pub fast_vs_direct: f64,
    pub parseval: f64,
    pub round_trip: f64,
    /// Standard deviation of the per-point ratio against a classical transform.
    pub reduction: f64,
    /// Edge-to-peak spectral magnitude.
    pub riemann_lebesgue: f64,
    /// Fraction of the u-grid treated as the edge.
    pub edge_fraction: f64,
    pub convolution: f64,
    pub correlation: f64,
    /// Eigen-relation tolerances for n = 1, 2, 3, 4; larger n reuse `10^(-6 + (n-1)/2)`.
    pub delta: [f64; 4],
    pub boas: f64,
    /// `|u/b|` below this is excluded from Boas relation checks.
    pub boas_exclusion: f64,
    pub inverse_tuple: f64,
    /// Relative magnitude defining spectral support.
    pub support_threshold: f64,
    /// Edge magnitude (relative to peak) above which leakage is reported.
    pub edge_leakage: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            fast_vs_direct: 1e-9,
            parseval: 1e-6,
            round_trip: 1e-8,
            reduction: 1e-9,
            riemann_lebesgue: 1e-3,
            edge_fraction: 0.05,
            convolution: 1e-6,
            correlation: 1e-6,
            delta: [1e-6, 10f64.powf(-5.5), 1e-5, 1e-4],
            boas: 1e-3,
            boas_exclusion: 0.5,
            inverse_tuple: 1e-8,
            support_threshold: 1e-6,
            edge_leakage: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn delta_for(&self, n: usize) -> f64 {
        match n {
            0 => self.delta[0],
            1..=4 => self.delta[n - 1],
            _ => 10f64.powf(-6.0 + (n as f64 - 1.0) / 2.0),
        }
    }

    /// Override one entry by name (`delta.1` .. `delta.4` for the eigen-relation levels).
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(OlctError::ConfigInvalid(format!(
                "tolerance {name} must be a non-negative number, got {value}"
            )));
        }
        let slot = match name {
            "fast_vs_direct" => &mut self.fast_vs_direct,
            "parseval" => &mut self.parseval,
            "round_trip" => &mut self.round_trip,
            "reduction" => &mut self.reduction,
            "riemann_lebesgue" => &mut self.riemann_lebesgue,
            "edge_fraction" => &mut self.edge_fraction,
            "convolution" => &mut self.convolution,
            "correlation" => &mut self.correlation,
            "delta.1" => &mut self.delta[0],
            "delta.2" => &mut self.delta[1],
            "delta.3" => &mut self.delta[2],
            "delta.4" => &mut self.delta[3],
            "boas" => &mut self.boas,
            "boas_exclusion" => &mut self.boas_exclusion,
            "inverse_tuple" => &mut self.inverse_tuple,
            "support_threshold" => &mut self.support_threshold,
            "edge_leakage" => &mut self.edge_leakage,
            other => {
                return Err(OlctError::ConfigInvalid(format!("unknown tolerance '{other}'")))
            }
        };
        *slot = value;
        Ok(())
    }
}

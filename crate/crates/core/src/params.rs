//! The six-parameter set `{a, b, c, d, u0, w0}` and the classical special cases.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{OlctError, Result};

/// Maximum allowed deviation of `ad - bc` from one.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// `|b|` at or below this value selects the `b = 0` branch.
pub const B_ZERO_THRESHOLD: f64 = 1e-12;

/// Which branch of the transform definition a parameter set falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `b != 0`: integral transform with a chirp kernel.
    Main,
    /// `b = 0`: chirp multiplication plus dilation and shift.
    BZero,
}

/// Validated transform parameters.
///
/// The matrix part `[[a, b], [c, d]]` is unimodular; `u0` is the
/// time-shift offset and `w0` the frequency-modulation offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 6]", into = "[f64; 6]")]
pub struct OlctParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    u0: f64,
    w0: f64,
}

impl OlctParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64, u0: f64, w0: f64) -> Result<Self> {
        let vals = [a, b, c, d, u0, w0];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(OlctError::DegenerateCase(format!(
                "non-finite parameter in {vals:?}"
            )));
        }
        let det = a * d - b * c;
        if (det - 1.0).abs() > UNIMODULAR_TOL {
            return Err(OlctError::UnimodularityViolation { det });
        }
        Ok(Self { a, b, c, d, u0, w0 })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn u0(&self) -> f64 {
        self.u0
    }
    pub fn w0(&self) -> f64 {
        self.w0
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.d, self.u0, self.w0]
    }

    pub fn branch(&self) -> Branch {
        if self.b.abs() > B_ZERO_THRESHOLD {
            Branch::Main
        } else {
            Branch::BZero
        }
    }

    pub fn is_main_branch(&self) -> bool {
        self.branch() == Branch::Main
    }

    pub(crate) fn require_main(&self) -> Result<()> {
        match self.branch() {
            Branch::Main => Ok(()),
            Branch::BZero => Err(OlctError::DegenerateCase(format!(
                "|b| = {} is within the b = 0 threshold",
                self.b.abs()
            ))),
        }
    }

    /// Principal square root of `1 / (2 pi i b)`.
    pub fn amplitude(&self) -> Complex64 {
        Complex64::new(0.0, 2.0 * PI * self.b).inv().sqrt()
    }

    /// `d u0 - b w0`, the coefficient coupling `u` to the offsets.
    pub fn offset_coupling(&self) -> f64 {
        self.d * self.u0 - self.b * self.w0
    }

    /// Phase of the constant factor `exp(i d u0^2 / 2b)`.
    pub fn offset_phase(&self) -> f64 {
        self.d * self.u0 * self.u0 / (2.0 * self.b)
    }

    /// Phase of the input-side chirp `exp(i (a x^2 + 2 u0 x) / 2b)`.
    #[inline]
    pub fn input_chirp_phase(&self, x: f64) -> f64 {
        (self.a * x * x + 2.0 * self.u0 * x) / (2.0 * self.b)
    }

    /// Phase of the output-side chirp `exp(i (d u0^2 + d u^2 - 2u(d u0 - b w0)) / 2b)`.
    #[inline]
    pub fn output_chirp_phase(&self, u: f64) -> f64 {
        (self.d * self.u0 * self.u0 + self.d * u * u - 2.0 * u * self.offset_coupling())
            / (2.0 * self.b)
    }

    /// Reduced-precision check used when comparing parameter sets read from files.
    pub fn approx_eq(&self, other: &OlctParams, tol: f64) -> bool {
        self.to_array()
            .iter()
            .zip(other.to_array().iter())
            .all(|(x, y)| (x - y).abs() <= tol)
    }
}

impl TryFrom<[f64; 6]> for OlctParams {
    type Error = OlctError;

    fn try_from(v: [f64; 6]) -> Result<Self> {
        OlctParams::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }
}

impl From<OlctParams> for [f64; 6] {
    fn from(p: OlctParams) -> Self {
        p.to_array()
    }
}

impl fmt::Display for OlctParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_array();
        write!(f, "{},{},{},{},{},{}", v[0], v[1], v[2], v[3], v[4], v[5])
    }
}

impl FromStr for OlctParams {
    type Err = OlctError;

    /// Parses `a,b,c,d,u0,w0`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(OlctError::ConfigInvalid(format!(
                "expected six comma-separated parameters, got {}",
                parts.len()
            )));
        }
        let mut v = [0.0; 6];
        for (slot, p) in v.iter_mut().zip(parts) {
            *slot = p
                .parse()
                .map_err(|_| OlctError::ConfigInvalid(format!("bad parameter value '{p}'")))?;
        }
        OlctParams::try_from(v)
    }
}

/// Named special cases of the transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpecialCase {
    Fourier,
    /// Fractional Fourier transform with rotation angle `alpha` (radians).
    Fractional { alpha: f64 },
    Canonical { a: f64, b: f64, c: f64, d: f64 },
    Fresnel { z: f64 },
    OffsetFourier { u0: f64, w0: f64 },
}

/// Parameter tuple for a classical transform. Rejects tuples that land on `b = 0`.
pub fn special_params(kind: SpecialCase) -> Result<OlctParams> {
    let p = match kind {
        SpecialCase::Fourier => OlctParams::new(0.0, 1.0, -1.0, 0.0, 0.0, 0.0)?,
        SpecialCase::Fractional { alpha } => {
            let (s, c) = alpha.sin_cos();
            OlctParams::new(c, s, -s, c, 0.0, 0.0)?
        }
        SpecialCase::Canonical { a, b, c, d } => OlctParams::new(a, b, c, d, 0.0, 0.0)?,
        SpecialCase::Fresnel { z } => OlctParams::new(1.0, z, 0.0, 1.0, 0.0, 0.0)?,
        SpecialCase::OffsetFourier { u0, w0 } => OlctParams::new(0.0, 1.0, -1.0, 0.0, u0, w0)?,
    };
    if !p.is_main_branch() {
        return Err(OlctError::DegenerateCase(format!(
            "{kind:?} gives |b| = {} <= {B_ZERO_THRESHOLD}",
            p.b().abs()
        )));
    }
    Ok(p)
}

/// Candidate completions of the five-entry inverse tuple printed alongside the
/// inversion formula. Only used by the inverse-tuple comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TupleCompletion {
    /// `(d, -b, -c, a, b w0 - d u0, c u0 - a w0)`.
    Standard,
    /// `(d, -b, -c, a, b w0 - b u0, c u0 - a w0)`, taking the fifth printed entry literally.
    Literal,
}

impl OlctParams {
    pub fn inverse_tuple(&self, completion: TupleCompletion) -> Result<OlctParams> {
        let (a, b, c, d, u0, w0) = (self.a, self.b, self.c, self.d, self.u0, self.w0);
        let u0_inv = match completion {
            TupleCompletion::Standard => b * w0 - d * u0,
            TupleCompletion::Literal => b * w0 - b * u0,
        };
        OlctParams::new(d, -b, -c, a, u0_inv, c * u0 - a * w0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fourier_tuple_is_valid() {
        let p = OlctParams::new(0.0, 1.0, -1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(p.branch(), Branch::Main);
    }

    #[test]
    fn determinant_one_accepted() {
        assert!(OlctParams::new(1.0, 1.0, 1.0, 2.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn singular_matrix_rejected() {
        let err = OlctParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 0.0).unwrap_err();
        assert!(matches!(err, OlctError::UnimodularityViolation { det } if det == 0.0));
    }

    #[test]
    fn zero_b_is_b_zero_branch() {
        let p = OlctParams::new(2.0, 0.0, 3.0, 0.5, 0.0, 0.0).unwrap();
        assert_eq!(p.branch(), Branch::BZero);
        assert!(p.require_main().is_err());
    }

    #[test]
    fn frft_quarter_turn_is_fourier() {
        let p = special_params(SpecialCase::Fractional { alpha: PI / 2.0 }).unwrap();
        let v = p.to_array();
        let want = [0.0, 1.0, -1.0, 0.0, 0.0, 0.0];
        for (x, y) in v.iter().zip(want) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn frft_integer_turn_is_degenerate() {
        let err = special_params(SpecialCase::Fractional { alpha: 0.0 }).unwrap_err();
        assert!(matches!(err, OlctError::DegenerateCase(_)));
    }

    #[test]
    fn lct_needs_unit_determinant() {
        assert!(matches!(
            special_params(SpecialCase::Canonical { a: 1.0, b: 2.0, c: 0.0, d: 0.5 }),
            Err(OlctError::UnimodularityViolation { .. })
        ));
        assert!(special_params(SpecialCase::Canonical { a: 1.0, b: 2.0, c: 0.0, d: 1.0 }).is_ok());
    }

    #[test]
    fn fresnel_tuple() {
        let p = special_params(SpecialCase::Fresnel { z: 0.5 }).unwrap();
        assert_eq!(p.to_array(), [1.0, 0.5, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn offset_fourier_tuple() {
        let p = special_params(SpecialCase::OffsetFourier { u0: 0.3, w0: -1.0 }).unwrap();
        assert_eq!(p.to_array(), [0.0, 1.0, -1.0, 0.0, 0.3, -1.0]);
    }

    #[test]
    fn amplitude_is_principal_root() {
        let p = special_params(SpecialCase::Fourier).unwrap();
        let amp = p.amplitude();
        assert_relative_eq!(amp.norm(), 0.398_942_280_401_432_7, epsilon = 1e-15);
        assert_relative_eq!(amp.arg(), -PI / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn parse_and_display_round_trip() {
        let p: OlctParams = "2, 1, 1, 1, 0.5, -0.3".parse().unwrap();
        let back: OlctParams = p.to_string().parse().unwrap();
        assert_eq!(p, back);
        assert!("1,2,3".parse::<OlctParams>().is_err());
    }

    #[test]
    fn inverse_tuple_is_unimodular() {
        let p = OlctParams::new(2.0, 1.0, 1.0, 1.0, 0.5, -0.3).unwrap();
        for c in [TupleCompletion::Standard, TupleCompletion::Literal] {
            let inv = p.inverse_tuple(c).unwrap();
            assert_eq!(inv.a(), 1.0);
            assert_eq!(inv.b(), -1.0);
        }
    }
}

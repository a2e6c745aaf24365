//! Deterministic signal generators and the estimator/identity fixtures built from them.
//!
//! Analytic shapes use unit peak. Spectral fixtures (`olct_bandlimited`, `olct_highpass`)
//! are the adjoint inverse of a raised-cosine spectral profile on the fast path's native grid,
//! scaled to unit energy. Noise is complex white Gaussian: a SplitMix64 stream (Steele,
//! Lea & Flood 2014; increment `0x9e3779b97f4a7c15`) feeding ziggurat normal deviates;
//! real and imaginary parts each have variance `level^2 / 2`.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, StandardNormal};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{OlctError, Result};
use crate::params::OlctParams;
use crate::plan::OlctPlan;
use crate::signal::{Grid, SampledSignal};
use crate::window::outward_profile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    /// `exp(-(x - center)^2 / (2 width^2))`.
    Gaussian { center: f64, width: f64 },
    /// `exp(-x^2 / (2 envelope_width^2)) exp(i rate x^2 / 2) exp(i center_freq x)`.
    LfmChirp { rate: f64, center_freq: f64, envelope_width: f64 },
    /// Indicator of `[lo, hi]`.
    Rect { lo: f64, hi: f64 },
    /// `exp(i freq x)`.
    Tone { freq: f64 },
    /// Spectrum flat on `u in [u_lo, u_hi]`, raised-cosine transitions of width `smooth` outside.
    OlctBandlimited { params: OlctParams, u_lo: f64, u_hi: f64, smooth: f64 },
    /// Spectrum flat on `|u| in [u_lo, u_hi]` (both signs), raised-cosine transitions of width
    /// `smooth` outside; requires `u_lo > smooth` so the spectrum vanishes near zero.
    OlctHighpass { params: OlctParams, u_lo: f64, u_hi: f64, smooth: f64 },
    /// `phi(x)^{-1} exp(-x^2 / (2 width^2)) cos(center_freq x)` with the input chirp `phi` of
    /// `params`: a high-pass signal whose spectrum sits near `|u/b| = center_freq` with
    /// Gaussian (rather than algebraic) tails in both domains.
    OlctWavepacket { params: OlctParams, width: f64, center_freq: f64 },
    Noise { seed: u64, level: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub grid: Grid,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, grid: Grid) -> Self {
        Self { kind, grid }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(OlctError::ConfigInvalid(format!("{name} must be positive, got {v}")))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(OlctError::ConfigInvalid(format!("{name} must be finite, got {v}")))
    }
}

fn band(u_lo: f64, u_hi: f64, smooth: f64) -> Result<()> {
    finite("u_lo", u_lo)?;
    finite("u_hi", u_hi)?;
    if u_lo >= u_hi {
        return Err(OlctError::ConfigInvalid(format!("need u_lo < u_hi, got [{u_lo}, {u_hi}]")));
    }
    if !(smooth.is_finite() && smooth >= 0.0) {
        return Err(OlctError::ConfigInvalid(format!("smooth must be >= 0, got {smooth}")));
    }
    Ok(())
}

impl GeneratorKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GeneratorKind::Gaussian { center, width } => {
                finite("center", center)?;
                positive("width", width)
            }
            GeneratorKind::LfmChirp { rate, center_freq, envelope_width } => {
                finite("rate", rate)?;
                finite("center_freq", center_freq)?;
                positive("envelope_width", envelope_width)
            }
            GeneratorKind::Rect { lo, hi } => {
                finite("lo", lo)?;
                finite("hi", hi)?;
                if lo < hi {
                    Ok(())
                } else {
                    Err(OlctError::ConfigInvalid(format!("need lo < hi, got [{lo}, {hi}]")))
                }
            }
            GeneratorKind::Tone { freq } => finite("freq", freq),
            GeneratorKind::OlctBandlimited { params, u_lo, u_hi, smooth } => {
                params.require_main()?;
                band(u_lo, u_hi, smooth)
            }
            GeneratorKind::OlctHighpass { params, u_lo, u_hi, smooth } => {
                params.require_main()?;
                band(u_lo, u_hi, smooth)?;
                if u_lo <= smooth {
                    return Err(OlctError::ConfigInvalid(format!(
                        "high-pass band needs u_lo > smooth, got u_lo = {u_lo}, smooth = {smooth}"
                    )));
                }
                Ok(())
            }
            GeneratorKind::OlctWavepacket { params, width, center_freq } => {
                params.require_main()?;
                positive("width", width)?;
                finite("center_freq", center_freq)
            }
            GeneratorKind::Noise { level, .. } => {
                if level.is_finite() && level >= 0.0 {
                    Ok(())
                } else {
                    Err(OlctError::ConfigInvalid(format!("noise level must be >= 0, got {level}")))
                }
            }
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<SampledSignal> {
    let grid = Grid::new(spec.grid.start, spec.grid.step, spec.grid.len)?;
    spec.kind.validate()?;
    let real = |v: f64| Complex64::new(v, 0.0);
    Ok(match spec.kind {
        GeneratorKind::Gaussian { center, width } => {
            SampledSignal::from_fn(grid, |x| real((-(x - center).powi(2) / (2.0 * width * width)).exp()))
        }
        GeneratorKind::LfmChirp { rate, center_freq, envelope_width } => SampledSignal::from_fn(grid, |x| {
            (-(x * x) / (2.0 * envelope_width.powi(2))).exp() * Complex64::cis(0.5 * rate * x * x + center_freq * x)
        }),
        GeneratorKind::Rect { lo, hi } => SampledSignal::from_fn(grid, |x| real(if x >= lo && x <= hi { 1.0 } else { 0.0 })),
        GeneratorKind::Tone { freq } => SampledSignal::from_fn(grid, |x| Complex64::cis(freq * x)),
        GeneratorKind::OlctBandlimited { params, u_lo, u_hi, smooth } => {
            from_spectral_profile(&params, grid, |u| outward_profile(u, u_lo, u_hi, smooth))?
        }
        GeneratorKind::OlctHighpass { params, u_lo, u_hi, smooth } => {
            from_spectral_profile(&params, grid, |u| outward_profile(u.abs(), u_lo, u_hi, smooth))?
        }
        GeneratorKind::OlctWavepacket { params, width, center_freq } => SampledSignal::from_fn(grid, |x| {
            Complex64::cis(-params.input_chirp_phase(x))
                * ((-(x * x) / (2.0 * width * width)).exp() * (center_freq * x).cos())
        }),
        GeneratorKind::Noise { seed, level } => SampledSignal::from_grid(grid, complex_noise(seed, level, grid.len))?,
    })
}

/// `n` complex Gaussian deviates with `E|z|^2 = level^2`, reproducible from `seed`.
pub fn complex_noise(seed: u64, level: f64, n: usize) -> Vec<Complex64> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let s = level / std::f64::consts::SQRT_2;
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re * s, im * s)
        })
        .collect()
}

fn from_spectral_profile(params: &OlctParams, grid: Grid, profile: impl Fn(f64) -> f64) -> Result<SampledSignal> {
    let plan = OlctPlan::new(*params, grid)?;
    let ug = plan.u_grid();
    let values: Vec<Complex64> = ug.points().map(|u| Complex64::new(profile(u), 0.0)).collect();
    let f = plan.inverse(&values)?;
    let norm = f.norm();
    if norm == 0.0 {
        return Err(OlctError::ConfigInvalid("requested band contains no grid points".into()));
    }
    Ok(f.scaled(Complex64::new(1.0 / norm, 0.0)))
}

/// Parses `kind:key=value;key=value`. Keys are the field names of [`GeneratorKind`];
/// `params` takes `a,b,c,d,u0,w0`.
impl FromStr for GeneratorKind {
    type Err = OlctError;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut fields = Fields::parse(rest)?;
        let g = match kind.trim() {
            "gaussian" => GeneratorKind::Gaussian { center: fields.num_or("center", 0.0)?, width: fields.num_or("width", 1.0)? },
            "lfm_chirp" => GeneratorKind::LfmChirp {
                rate: fields.num("rate")?,
                center_freq: fields.num_or("center_freq", 0.0)?,
                envelope_width: fields.num("envelope_width")?,
            },
            "rect" => GeneratorKind::Rect { lo: fields.num("lo")?, hi: fields.num("hi")? },
            "tone" => GeneratorKind::Tone { freq: fields.num("freq")? },
            "olct_bandlimited" => GeneratorKind::OlctBandlimited {
                params: fields.params()?,
                u_lo: fields.num("u_lo")?,
                u_hi: fields.num("u_hi")?,
                smooth: fields.num_or("smooth", 0.0)?,
            },
            "olct_highpass" => GeneratorKind::OlctHighpass {
                params: fields.params()?,
                u_lo: fields.num("u_lo")?,
                u_hi: fields.num("u_hi")?,
                smooth: fields.num_or("smooth", 0.0)?,
            },
            "olct_wavepacket" => GeneratorKind::OlctWavepacket {
                params: fields.params()?,
                width: fields.num("width")?,
                center_freq: fields.num("center_freq")?,
            },
            "noise" => GeneratorKind::Noise {
                seed: fields.take("seed").map_or(Ok(0), |v| {
                    v.parse().map_err(|_| OlctError::ConfigInvalid(format!("bad seed '{v}'")))
                })?,
                level: fields.num_or("level", 1.0)?,
            },
            other => return Err(OlctError::ConfigInvalid(format!("unknown signal kind '{other}'"))),
        };
        fields.finish()?;
        Ok(g)
    }
}

struct Fields(Vec<(String, String)>);

impl Fields {
    fn parse(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for item in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| OlctError::ConfigInvalid(format!("expected key=value, got '{item}'")))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(Self(out))
    }

    fn take(&mut self, key: &str) -> Option<String> {
        let i = self.0.iter().position(|(k, _)| k == key)?;
        Some(self.0.remove(i).1)
    }

    fn num(&mut self, key: &str) -> Result<f64> {
        let v = self.take(key).ok_or_else(|| OlctError::ConfigInvalid(format!("missing key '{key}'")))?;
        v.parse().map_err(|_| OlctError::ConfigInvalid(format!("bad number for '{key}': '{v}'")))
    }

    fn num_or(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| OlctError::ConfigInvalid(format!("bad number for '{key}': '{v}'"))),
        }
    }

    fn params(&mut self) -> Result<OlctParams> {
        self.take("params").ok_or_else(|| OlctError::ConfigInvalid("missing key 'params'".into()))?.parse()
    }

    fn finish(self) -> Result<()> {
        match self.0.first() {
            None => Ok(()),
            Some((k, _)) => Err(OlctError::ConfigInvalid(format!("unknown key '{k}'"))),
        }
    }
}

/// Ready-made fixtures for the estimators and identity checks.
pub mod fixtures {
    use super::*;

    /// Band-limited signal with designed bandwidth `gamma` (`|u/b| <= gamma`), raised-cosine
    /// width 5% of the band, on 4096 points with Nyquist `|u/b| = 3 gamma`.
    pub fn paley_wiener(params: &OlctParams, gamma: f64) -> Result<SampledSignal> {
        positive("gamma", gamma)?;
        let n = 4096;
        let dx = PI / (3.0 * gamma);
        let grid = Grid::centered(dx, n)?;
        let bu = params.b().abs();
        let kind = GeneratorKind::OlctBandlimited {
            params: *params,
            u_lo: -gamma * bu,
            u_hi: gamma * bu,
            smooth: 0.1 * gamma * bu,
        };
        generate(&GeneratorSpec::new(kind, grid))
    }

    /// High-pass signal supported on `|u/b| in [gamma, gamma + 2]`, raised-cosine width 5% of
    /// the band, on 16384 points at spacing 0.06.
    pub fn boas(params: &OlctParams, gamma: f64) -> Result<SampledSignal> {
        positive("gamma", gamma)?;
        let (n, dx) = (16384, 0.06);
        let bu = params.b().abs();
        let kind = GeneratorKind::OlctHighpass {
            params: *params,
            u_lo: gamma * bu,
            u_hi: (gamma + 2.0) * bu,
            smooth: 0.1 * bu,
        };
        generate(&GeneratorSpec::new(kind, Grid::centered(dx, n)?))
    }

    /// Sum of three Gaussian bumps with random centres in the middle quarter of `grid`,
    /// widths in `[0.5, 1.5]`, complex amplitudes and linear phases; reproducible from `seed`.
    pub fn random_smooth(seed: u64, grid: Grid) -> SampledSignal {
        let mut rng = SplitMix64::seed_from_u64(seed);
        let reach = (grid.end() - grid.start) / 8.0;
        let mid = grid.start + (grid.end() - grid.start) / 2.0;
        let bumps: Vec<(f64, f64, f64, Complex64)> = (0..3)
            .map(|_| {
                let c = mid + rng.random_range(-reach..reach);
                let w = rng.random_range(0.5..1.5);
                let k = rng.random_range(-2.0..2.0);
                let z: [f64; 2] = [StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)];
                (c, w, k, Complex64::new(z[0], z[1]))
            })
            .collect();
        SampledSignal::from_fn(grid, |x| {
            bumps
                .iter()
                .map(|&(c, w, k, amp)| amp * (-(x - c) * (x - c) / (2.0 * w * w)).exp() * Complex64::cis(k * x))
                .sum()
        })
    }

    /// Unit-energy signal whose native-grid spectrum is a sum of four random Gaussian bumps
    /// centred in `|u| <= 0.6 half_band` with width `0.1 half_band`; reproducible from `seed`.
    pub fn random_bandlimited(params: &OlctParams, seed: u64, grid: Grid, half_band: f64) -> Result<SampledSignal> {
        positive("half_band", half_band)?;
        let mut rng = SplitMix64::seed_from_u64(seed);
        let s = 0.1 * half_band;
        let bumps: Vec<(f64, Complex64)> = (0..4)
            .map(|_| {
                let mu = rng.random_range(-0.6 * half_band..0.6 * half_band);
                let z: [f64; 2] = [StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)];
                (mu, Complex64::new(z[0], z[1]))
            })
            .collect();
        let plan = OlctPlan::new(*params, grid)?;
        let values: Vec<Complex64> = plan
            .u_grid()
            .points()
            .map(|u| bumps.iter().map(|&(mu, c)| c * (-(u - mu) * (u - mu) / (2.0 * s * s)).exp()).sum())
            .collect();
        let f = plan.inverse(&values)?;
        Ok(f.scaled(Complex64::new(1.0 / f.norm(), 0.0)))
    }

    /// Wave packet centred at `|u/b| = 3` with envelope width 3 on `[-40, 40)`, 8192 points.
    pub fn boas_relation(params: &OlctParams) -> Result<SampledSignal> {
        let n = 8192;
        let kind = GeneratorKind::OlctWavepacket { params: *params, width: 3.0, center_freq: 3.0 };
        generate(&GeneratorSpec::new(kind, Grid::centered(80.0 / n as f64, n)?))
    }
}

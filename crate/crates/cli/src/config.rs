//! Run configuration: flat `key = value` text, `#` comments, unknown keys rejected.
//!
//! ```text
//! params = 1,1,1,2,1,0
//! seed = 42
//! tol.convolution = 1e-6
//! demo.noise_db = -10
//! demo.interference_db = off
//! ```
//!
//! `OLCT_SEED` in the environment overrides `seed`.

use std::fs;
use std::path::{Path, PathBuf};

use olct_core::{DemoConfig, OlctParams, Tolerances};
use thiserror::Error;

pub const SEED_ENV: &str = "OLCT_SEED";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

/// Demo fields a config may override; `None` keeps the default.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DemoOverrides {
    pub n: Option<usize>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub envelope_width: Option<f64>,
    pub center_freq: Option<f64>,
    pub interference_offset: Option<f64>,
    /// Outer `Some(None)` disables the component.
    pub interference_db: Option<Option<f64>>,
    pub noise_db: Option<Option<f64>>,
    pub rolloff: Option<Option<f64>>,
    pub band_threshold: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub params: Option<OlctParams>,
    pub sweep: Option<Vec<OlctParams>>,
    pub seed: Option<u64>,
    pub n_max: Option<usize>,
    pub support_guard: Option<bool>,
    pub out: Option<PathBuf>,
    pub tolerances: Tolerances,
    pub demo: DemoOverrides,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| ConfigError::Parse { line, msg };
            let t = raw.split_once('#').map_or(raw, |(a, _)| a).trim();
            if t.is_empty() {
                continue;
            }
            let (k, v) = t.split_once('=').ok_or_else(|| err(format!("expected key = value, found '{t}'")))?;
            let (k, v) = (k.trim(), v.trim());
            if !seen.insert(k.to_string()) {
                return Err(err(format!("duplicate key '{k}'")));
            }
            cfg.set(k, v).map_err(err)?;
        }
        Ok(cfg)
    }

    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        Self::parse(&text)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        let d = &mut self.demo;
        match key {
            "params" => self.params = Some(v.parse().map_err(|e: olct_core::OlctError| e.to_string())?),
            "sweep" => {
                let list: Result<Vec<OlctParams>, _> = v.split(';').map(|s| s.trim().parse::<OlctParams>()).collect();
                self.sweep = Some(list.map_err(|e| e.to_string())?);
            }
            "seed" => self.seed = Some(parse_seed(v)?),
            "n_max" => self.n_max = Some(int(v)?),
            "support_guard" => self.support_guard = Some(v.parse().map_err(|_| format!("expected true/false, found '{v}'"))?),
            "out" => self.out = Some(PathBuf::from(v)),
            "demo.n" => d.n = Some(int(v)?),
            "demo.x_min" => d.x_min = Some(num(v)?),
            "demo.x_max" => d.x_max = Some(num(v)?),
            "demo.envelope_width" => d.envelope_width = Some(num(v)?),
            "demo.center_freq" => d.center_freq = Some(num(v)?),
            "demo.interference_offset" => d.interference_offset = Some(num(v)?),
            "demo.interference_db" => d.interference_db = Some(optional(v, "off")?),
            "demo.noise_db" => d.noise_db = Some(optional(v, "off")?),
            "demo.rolloff" => d.rolloff = Some(optional(v, "auto")?),
            "demo.band_threshold" => d.band_threshold = Some(num(v)?),
            other => match other.strip_prefix("tol.") {
                Some(name) => self.tolerances.set(name, num(v)?).map_err(|e| e.to_string())?,
                None => return Err(format!("unknown key '{other}'")),
            },
        }
        Ok(())
    }

    /// Apply an `OLCT_SEED` value, if one is set.
    pub fn with_seed_override(mut self, env_value: Option<String>) -> Result<Self, ConfigError> {
        if let Some(v) = env_value {
            self.seed = Some(parse_seed(&v).map_err(|m| ConfigError::Invalid(format!("{SEED_ENV}: {m}")))?);
        }
        Ok(self)
    }

    pub fn demo_config(&self, params: OlctParams) -> Result<DemoConfig, ConfigError> {
        let mut c = DemoConfig::new(params);
        let d = &self.demo;
        if let Some(v) = d.n {
            c.n = v;
        }
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = d.$f { c.$f = v; } )* };
        }
        take!(x_min, x_max, envelope_width, center_freq, interference_offset, interference_db, noise_db, rolloff, band_threshold);
        if let Some(s) = self.seed {
            c.seed = s;
        }
        c.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(c)
    }
}

fn num(v: &str) -> Result<f64, String> {
    v.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| format!("expected a finite number, found '{v}'"))
}

fn int(v: &str) -> Result<usize, String> {
    v.parse().map_err(|_| format!("expected a non-negative integer, found '{v}'"))
}

fn parse_seed(v: &str) -> Result<u64, String> {
    v.trim().parse().map_err(|_| format!("expected an unsigned integer seed, found '{v}'"))
}

fn optional(v: &str, none: &str) -> Result<Option<f64>, String> {
    if v == none {
        Ok(None)
    } else {
        num(v).map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_keys() {
        let c = RunConfig::parse("params = 1,1,1,2,1,0\nseed=7 # comment\ntol.delta.2 = 1e-5\ndemo.noise_db = off\n").unwrap();
        assert_eq!(c.params.unwrap().to_array(), [1.0, 1.0, 1.0, 2.0, 1.0, 0.0]);
        assert_eq!(c.seed, Some(7));
        assert_eq!(c.tolerances.delta[1], 1e-5);
        assert_eq!(c.demo.noise_db, Some(None));
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        match RunConfig::parse("params = 1,1,1,2,1,0\nbogus = 3\n") {
            Err(ConfigError::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(RunConfig::parse("seed = 1\nseed = 2\n").is_err());
        assert!(RunConfig::parse("tol.nonsense = 1\n").is_err());
        assert!(RunConfig::parse("params = 1,1,1,1,0,0\n").is_err());
    }

    #[test]
    fn env_seed_overrides() {
        let c = RunConfig::parse("seed = 1").unwrap().with_seed_override(Some("99".into())).unwrap();
        assert_eq!(c.seed, Some(99));
        assert!(RunConfig::default().with_seed_override(Some("x".into())).is_err());
    }
}

//! Signal and spectrum files: `# key=value` header lines followed by `x,re,im` rows.
//!
//! ```text
//! # kind=spectrum
//! # x_start=-50.26548245743669
//! # dx=0.09817477042468103
//! # n=1024
//! # params=1,1,1,2,1,0
//! # origin=-16
//! x,re,im
//! -50.26548245743669,1.2e-17,-3.4e-18
//! ```
//!
//! For spectra `x` is the u coordinate and `origin` the x-grid start the spectrum was
//! computed from. Values are written with Rust's shortest round-trip formatting, so a
//! write/read cycle reproduces every finite sample bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use olct_core::{OlctError, OlctParams, SampledSignal, Spectrum};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("header says n={expected} but the file has {found} data rows")]
    HeaderMismatch { expected: usize, found: usize },
    #[error("missing header field '{0}'")]
    MissingHeader(&'static str),
    #[error("expected a {expected} file, found kind={found}")]
    WrongKind { expected: FileKind, found: FileKind },
    #[error(transparent)]
    Core(#[from] OlctError),
}

pub type IoResult<T> = std::result::Result<T, IoError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Signal,
    Spectrum,
}

impl std::fmt::Display for FileKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FileKind::Signal => "signal",
            FileKind::Spectrum => "spectrum",
        })
    }
}

impl FromStr for FileKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "signal" => Ok(FileKind::Signal),
            "spectrum" => Ok(FileKind::Spectrum),
            other => Err(format!("unknown kind '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Header {
    pub kind: FileKind,
    pub x_start: f64,
    pub dx: f64,
    pub n: usize,
    pub params: Option<OlctParams>,
    pub origin: Option<f64>,
}

/// A parsed file before it is turned into a signal or spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalFile {
    pub header: Header,
    pub samples: Vec<Complex64>,
}

impl SignalFile {
    pub fn from_signal(s: &SampledSignal) -> Self {
        Self {
            header: Header { kind: FileKind::Signal, x_start: s.x_start(), dx: s.dx(), n: s.len(), params: None, origin: None },
            samples: s.samples().to_vec(),
        }
    }

    pub fn from_spectrum(s: &Spectrum) -> Self {
        Self {
            header: Header {
                kind: FileKind::Spectrum,
                x_start: s.u_start(),
                dx: s.du(),
                n: s.len(),
                params: Some(*s.params()),
                origin: Some(s.x_origin()),
            },
            samples: s.samples().to_vec(),
        }
    }

    pub fn into_signal(self) -> IoResult<SampledSignal> {
        expect_kind(FileKind::Signal, self.header.kind)?;
        Ok(SampledSignal::new(self.header.x_start, self.header.dx, self.samples)?)
    }

    pub fn into_spectrum(self) -> IoResult<Spectrum> {
        expect_kind(FileKind::Spectrum, self.header.kind)?;
        let params = self.header.params.ok_or(IoError::MissingHeader("params"))?;
        let origin = self.header.origin.ok_or(IoError::MissingHeader("origin"))?;
        Ok(Spectrum::new(self.header.x_start, self.header.dx, self.samples, params, origin)?)
    }

    pub fn to_csv(&self) -> String {
        let h = &self.header;
        let mut out = String::with_capacity(48 * (self.samples.len() + 8));
        let _ = writeln!(out, "# kind={}", h.kind);
        let _ = writeln!(out, "# x_start={}", Num(h.x_start));
        let _ = writeln!(out, "# dx={}", Num(h.dx));
        let _ = writeln!(out, "# n={}", h.n);
        if let Some(p) = h.params {
            let _ = writeln!(out, "# params={p}");
        }
        if let Some(o) = h.origin {
            let _ = writeln!(out, "# origin={}", Num(o));
        }
        out.push_str("x,re,im\n");
        for (k, v) in self.samples.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", Num(h.x_start + k as f64 * h.dx), Num(v.re), Num(v.im));
        }
        out
    }

    pub fn parse(text: &str) -> IoResult<Self> {
        let mut kind = None;
        let mut x_start = None;
        let mut dx = None;
        let mut n = None;
        let mut params = None;
        let mut origin = None;
        let mut samples = Vec::new();
        let mut seen_columns = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| IoError::Parse { line, msg };
            let t = raw.trim();
            if t.is_empty() {
                continue;
            }
            if let Some(rest) = t.strip_prefix('#') {
                let Some((k, v)) = rest.split_once('=') else { continue };
                let (k, v) = (k.trim(), v.trim());
                let num = |v: &str| v.parse::<f64>().map_err(|_| err(format!("bad number '{v}' for {k}")));
                match k {
                    "kind" => kind = Some(v.parse::<FileKind>().map_err(err)?),
                    "x_start" => x_start = Some(num(v)?),
                    "dx" => dx = Some(num(v)?),
                    "n" => n = Some(v.parse::<usize>().map_err(|_| err(format!("bad count '{v}'")))?),
                    "params" => params = Some(v.parse::<OlctParams>().map_err(|e| err(e.to_string()))?),
                    "origin" => origin = Some(num(v)?),
                    other => return Err(err(format!("unknown header field '{other}'"))),
                }
                continue;
            }
            if !seen_columns {
                if t.replace(' ', "") != "x,re,im" {
                    return Err(err(format!("expected column header 'x,re,im', found '{t}'")));
                }
                seen_columns = true;
                continue;
            }
            let cols: Vec<&str> = t.split(',').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(err(format!("expected 3 columns, found {}", cols.len())));
            }
            let mut vals = [0.0; 3];
            for (slot, c) in vals.iter_mut().zip(&cols) {
                *slot = c.parse().map_err(|_| err(format!("bad number '{c}'")))?;
            }
            samples.push(Complex64::new(vals[1], vals[2]));
        }
        let header = Header {
            kind: kind.ok_or(IoError::MissingHeader("kind"))?,
            x_start: x_start.ok_or(IoError::MissingHeader("x_start"))?,
            dx: dx.ok_or(IoError::MissingHeader("dx"))?,
            n: n.ok_or(IoError::MissingHeader("n"))?,
            params,
            origin,
        };
        if header.n != samples.len() {
            return Err(IoError::HeaderMismatch { expected: header.n, found: samples.len() });
        }
        Ok(Self { header, samples })
    }

    pub fn read(path: &Path) -> IoResult<Self> {
        let text = fs::read_to_string(path).map_err(|source| IoError::Io { path: path.into(), source })?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> IoResult<()> {
        fs::write(path, self.to_csv()).map_err(|source| IoError::Io { path: path.into(), source })
    }
}

/// Shortest round-trip decimal; exponent form outside `[1e-4, 1e16)` to keep rows short.
struct Num(f64);

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let a = self.0.abs();
        if a == 0.0 || !a.is_finite() || (1e-4..1e16).contains(&a) {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{:e}", self.0)
        }
    }
}

fn expect_kind(expected: FileKind, found: FileKind) -> IoResult<()> {
    if expected == found {
        Ok(())
    } else {
        Err(IoError::WrongKind { expected, found })
    }
}

pub fn read_signal(path: &Path) -> IoResult<SampledSignal> {
    SignalFile::read(path)?.into_signal()
}

pub fn write_signal(path: &Path, s: &SampledSignal) -> IoResult<()> {
    SignalFile::from_signal(s).write(path)
}

pub fn read_spectrum(path: &Path) -> IoResult<Spectrum> {
    SignalFile::read(path)?.into_spectrum()
}

pub fn write_spectrum(path: &Path, s: &Spectrum) -> IoResult<()> {
    SignalFile::from_spectrum(s).write(path)
}

/// Write `value` as pretty JSON.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> IoResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| IoError::Io { path: path.into(), source: e.into() })?;
    fs::write(path, text + "\n").map_err(|source| IoError::Io { path: path.into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use olct_core::Grid;

    #[test]
    fn header_mismatch_detected() {
        let s = SampledSignal::zeros(Grid::new(0.0, 0.5, 4).unwrap());
        let text = SignalFile::from_signal(&s).to_csv().replace("# n=4", "# n=5");
        assert!(matches!(SignalFile::parse(&text), Err(IoError::HeaderMismatch { expected: 5, found: 4 })));
    }

    #[test]
    fn parse_error_has_line_number() {
        let text = "# kind=signal\n# x_start=0\n# dx=1\n# n=1\nx,re,im\n0,1,oops\n";
        match SignalFile::parse(text) {
            Err(IoError::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn kind_is_enforced() {
        let s = SampledSignal::zeros(Grid::new(0.0, 0.5, 4).unwrap());
        let f = SignalFile::parse(&SignalFile::from_signal(&s).to_csv()).unwrap();
        assert!(matches!(f.into_spectrum(), Err(IoError::WrongKind { .. })));
    }
}

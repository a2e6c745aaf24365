//! Argument definitions and command dispatch for the `olct` binary.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use olct_core::filter::filter_grid;
use olct_core::spectral::{boas_highpass_estimate_with, pw_bandwidth_estimate_with};
use olct_core::{
    apply_filter, convolve, correlate, default_sweep, demo_chirp_denoise, design_mask, generate, mask_from_prototype,
    olct_b_zero, olct_direct, olct_fast, olct_inverse, olct_inverse_direct, run_suite, ConvolutionMethod,
    CorrelationVariant, EstimatorOptions, FilterKind, FilterSpec, GeneratorKind, GeneratorSpec, Grid, Mask, OlctError,
    OlctParams, SampledSignal, Spectrum,
};
use serde_json::json;
use thiserror::Error;

use crate::config::{ConfigError, RunConfig, SEED_ENV};
use crate::io::{self, IoError, SignalFile};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "olct", version, about = "Offset linear canonical transform toolkit")]
pub struct Cli {
    /// Flat key=value run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ParamsArg {
    /// Transform parameters `a,b,c,d,u0,w0` with ad - bc = 1.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_params)]
    pub params: Option<OlctParams>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Forward transform of a signal file.
    Transform {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TransformMethod::Fast)]
        method: TransformMethod,
    },
    /// Inverse transform of a spectrum file (parameters come from its header).
    Inverse {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Evaluate the inversion integral by quadrature instead of the FFT adjoint.
        #[arg(long)]
        direct: bool,
    },
    /// Half-argument convolution of two signals on a shared grid.
    Convolve {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        with: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ConvMethod::Time)]
        method: ConvMethod,
        /// Also run the other method and fail (exit 1) if they disagree by more than this.
        #[arg(long)]
        check: Option<f64>,
    },
    /// Half-argument correlation of two signals on a shared grid.
    Correlate {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        with: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CorrVariant::AsPrinted)]
        variant: CorrVariant,
    },
    /// Multiplicative filtering in the transform domain.
    Filter {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, required_unless_present = "prototype")]
        kind: Option<FilterKindArg>,
        /// One edge for low/high, two for band.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        edges: Vec<f64>,
        /// Raised-cosine half-width; defaults to two u-grid steps.
        #[arg(long)]
        rolloff: Option<f64>,
        /// Build the mask from a prototype signal instead (equivalent to convolving with it).
        #[arg(long, conflicts_with_all = ["kind", "edges", "rolloff"])]
        prototype: Option<PathBuf>,
        /// Also write the mask as a spectrum-kind file.
        #[arg(long)]
        mask_out: Option<PathBuf>,
    },
    /// Paley-Wiener bandwidth estimate from iterated derivative-chirp norms.
    PwEstimate(EstimateArgs),
    /// Boas high-pass gap estimate from iterated integral-operator norms.
    BoasEstimate(EstimateArgs),
    /// Run the identity suite and write a JSON report.
    Verify {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Demonstrations.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
    /// Write a test signal.
    Generate {
        /// `kind:key=value;...`, e.g. `gaussian:center=0;width=1`.
        #[arg(long, allow_hyphen_values = true)]
        signal: String,
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, default_value_t = 1.0 / 32.0)]
        dx: f64,
        /// Defaults to a grid centred on 0.
        #[arg(long, allow_hyphen_values = true)]
        x_start: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub params: ParamsArg,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Project iterates onto the measured spectral support.
    #[arg(long)]
    pub support_guard: Option<bool>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Band-pass a matched chirp out of interference and noise.
    ChirpDenoise {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for the clean/input/output signals, spectra and mask.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TransformMethod {
    Fast,
    Direct,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConvMethod {
    Time,
    Spectral,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CorrVariant {
    AsPrinted,
    Proof,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FilterKindArg {
    Low,
    Band,
    High,
}

fn parse_params(s: &str) -> Result<OlctParams, String> {
    s.parse().map_err(|e: OlctError| e.to_string())
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] OlctError),
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("run `olct --help` for usage");
            }
            EXIT_USAGE
        }
    }
}

/// Run a parsed command; `Ok(false)` means a verification failed.
pub fn execute(cli: Cli) -> Result<bool, CliError> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::read(p)?,
        None => RunConfig::default(),
    }
    .with_seed_override(std::env::var(SEED_ENV).ok())?;
    let params_of = |a: &ParamsArg| -> Result<OlctParams, CliError> {
        a.params
            .or(cfg.params)
            .ok_or_else(|| CliError::Usage("missing --params (or `params` in the config file)".into()))
    };

    match cli.command {
        Command::Transform { params, input, out, method } => {
            let p = params_of(&params)?;
            let f = io::read_signal(&input)?;
            if !p.is_main_branch() {
                let g = olct_b_zero(&p, &f)?;
                emit(out.as_deref(), &SignalFile::from_signal(&g))?;
                return Ok(true);
            }
            let spec = match method {
                TransformMethod::Fast => olct_fast(&p, &f)?,
                TransformMethod::Direct => {
                    let grid = olct_core::native_u_grid(&p, f.dx(), f.len());
                    olct_direct(&p, &f, &grid)?
                }
            };
            emit(out.as_deref(), &SignalFile::from_spectrum(&spec))?;
        }
        Command::Inverse { input, out, direct } => {
            let spec = io::read_spectrum(&input)?;
            let f = if direct {
                let p = spec.params();
                let n = spec.len();
                let dx = 2.0 * std::f64::consts::PI * p.b().abs() / (n as f64 * spec.du());
                olct_inverse_direct(&spec, &Grid::new(spec.x_origin(), dx, n)?)?
            } else {
                olct_inverse(&spec)?
            };
            emit(out.as_deref(), &SignalFile::from_signal(&f))?;
        }
        Command::Convolve { params, input, with, out, method, check } => {
            let p = params_of(&params)?;
            let (f, g) = (io::read_signal(&input)?, io::read_signal(&with)?);
            let m = match method {
                ConvMethod::Time => ConvolutionMethod::TimeDomain,
                ConvMethod::Spectral => ConvolutionMethod::SpectralProduct,
            };
            let r = convolve(&p, &f, &g, m, check)?;
            emit(out.as_deref(), &SignalFile::from_signal(&r.signal))?;
            if let Some(rep) = r.report {
                eprintln!("{} {}: rel_err={:e} tolerance={:e}", status(rep.passed), rep.name, rep.rel_err, rep.tolerance);
                return Ok(rep.passed);
            }
        }
        Command::Correlate { params, input, with, out, variant } => {
            let p = params_of(&params)?;
            let (f, g) = (io::read_signal(&input)?, io::read_signal(&with)?);
            let v = match variant {
                CorrVariant::AsPrinted => CorrelationVariant::AsPrinted,
                CorrVariant::Proof => CorrelationVariant::ProofConsistent,
            };
            emit(out.as_deref(), &SignalFile::from_signal(&correlate(&p, &f, &g, v)?))?;
        }
        Command::Filter { params, input, out, kind, edges, rolloff, prototype, mask_out } => {
            let p = params_of(&params)?;
            let f = io::read_signal(&input)?;
            let mask = match prototype {
                Some(path) => mask_from_prototype(&p, &io::read_signal(&path)?)?,
                None => {
                    let ug = filter_grid(&p, &f);
                    let r = rolloff.unwrap_or(2.0 * ug.step);
                    let spec = filter_spec(kind.expect("clap requires kind"), &edges, r)?;
                    design_mask(&spec, &ug)?
                }
            };
            if let Some(path) = mask_out {
                io::write_spectrum(&path, &mask_spectrum(&p, &f, &mask)?)?;
            }
            emit(out.as_deref(), &SignalFile::from_signal(&apply_filter(&p, &f, &mask)?))?;
        }
        Command::PwEstimate(a) => estimate(&a, &cfg, params_of(&a.params)?, false)?,
        Command::BoasEstimate(a) => estimate(&a, &cfg, params_of(&a.params)?, true)?,
        Command::Verify { params, out } => {
            let sweep = match params.params.or(cfg.params) {
                Some(p) => vec![p],
                None => cfg.sweep.clone().unwrap_or_else(default_sweep),
            };
            let report = run_suite(&sweep, &cfg.tolerances)?;
            for r in &report.reports {
                let prm = r.params.map(|p| p.to_string()).unwrap_or_default();
                println!("{} {:<24} [{prm}] rel_err={:.3e} tolerance={:.1e}", status(r.passed), r.name, r.rel_err, r.tolerance);
            }
            let failed = report.failures().count();
            println!(
                "{} checks, {} failed, {:.2}s",
                report.reports.len(),
                failed,
                report.elapsed_seconds
            );
            if let Some(path) = out.or(cfg.out.clone()) {
                io::write_json(&path, &report)?;
            }
            return Ok(report.passed);
        }
        Command::Demo { demo: Demo::ChirpDenoise { params, seed, out_dir } } => {
            let mut dc = cfg.demo_config(params_of(&params)?)?;
            if let Some(s) = seed {
                dc.seed = s;
            }
            let r = demo_chirp_denoise(&dc)?;
            let summary = json!({
                "snr": r.snr,
                "band": [r.band.0, r.band.1],
                "seed": dc.seed,
                "params": dc.params,
            });
            println!("{}", serde_json::to_string_pretty(&summary).expect("plain values serialize"));
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(&dir).map_err(|source| IoError::Io { path: dir.clone(), source })?;
                io::write_signal(&dir.join("clean.csv"), &r.clean)?;
                io::write_signal(&dir.join("input.csv"), &r.input)?;
                io::write_signal(&dir.join("output.csv"), &r.output)?;
                io::write_spectrum(&dir.join("clean_spectrum.csv"), &r.clean_spectrum)?;
                io::write_spectrum(&dir.join("input_spectrum.csv"), &r.input_spectrum)?;
                io::write_spectrum(&dir.join("output_spectrum.csv"), &r.output_spectrum)?;
                io::write_spectrum(&dir.join("mask.csv"), &mask_spectrum(&dc.params, &r.input, &r.mask)?)?;
                io::write_json(&dir.join("snr.json"), &summary)?;
            }
        }
        Command::Generate { signal, n, dx, x_start, out } => {
            let mut kind: GeneratorKind = signal.parse()?;
            if let (GeneratorKind::Noise { seed, .. }, Some(s)) = (&mut kind, cfg.seed) {
                *seed = s;
            }
            let grid = match x_start {
                Some(s) => Grid::new(s, dx, n)?,
                None => Grid::centered(dx, n)?,
            };
            emit(out.as_deref(), &SignalFile::from_signal(&generate(&GeneratorSpec::new(kind, grid))?))?;
        }
    }
    Ok(true)
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn filter_spec(kind: FilterKindArg, edges: &[f64], rolloff: f64) -> Result<FilterSpec, CliError> {
    let k = match kind {
        FilterKindArg::Low => FilterKind::LowPass,
        FilterKindArg::Band => FilterKind::BandPass,
        FilterKindArg::High => FilterKind::HighPass,
    };
    if edges.is_empty() {
        return Err(CliError::Usage("--edges is required with --kind".into()));
    }
    Ok(FilterSpec::new(k, edges.to_vec(), rolloff)?)
}

fn mask_spectrum(p: &OlctParams, f: &SampledSignal, m: &Mask) -> Result<Spectrum, CliError> {
    Ok(Spectrum::new(m.u_grid.start, m.u_grid.step, m.values.clone(), *p, f.x_start())?)
}

fn estimate(a: &EstimateArgs, cfg: &RunConfig, p: OlctParams, boas: bool) -> Result<(), CliError> {
    let n_max = a.n_max.or(cfg.n_max).unwrap_or(16);
    let mut opts = if boas { EstimatorOptions::boas(n_max) } else { EstimatorOptions::paley_wiener(n_max) };
    if let Some(g) = a.support_guard.or(cfg.support_guard) {
        opts.support_guard = g;
    }
    opts.support_threshold = cfg.tolerances.support_threshold;
    let f = io::read_signal(&a.input)?;
    let seq = if boas { boas_highpass_estimate_with(&p, &f, &opts)? } else { pw_bandwidth_estimate_with(&p, &f, &opts)? };
    println!("{}", serde_json::to_string_pretty(&seq).expect("plain values serialize"));
    if let Some(path) = &a.out {
        io::write_json(path, &seq)?;
    }
    Ok(())
}

fn emit(out: Option<&Path>, file: &SignalFile) -> Result<(), CliError> {
    match out {
        Some(p) => file.write(p)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(file.to_csv().as_bytes())
                .map_err(|source| IoError::Io { path: "<stdout>".into(), source })?;
        }
    }
    Ok(())
}

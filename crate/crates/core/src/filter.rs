//! Multiplicative filtering in the transform domain: masks, the filter pipeline, SNR
//! accounting and the chirp-denoising demonstration.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conv::{dilated_spectrum, dilated_u_grid, invert_dilated, ChirpFactorT};
use crate::error::{OlctError, Result};
use crate::gen::complex_noise;
use crate::params::OlctParams;
use crate::plan::{native_u_grid, OlctPlan};
use crate::signal::{Grid, SampledSignal, Spectrum};
use crate::transform::olct_fast;
use crate::window::band_profile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKind {
    /// Keeps `|u| <= edge`.
    LowPass,
    /// Keeps `u in [edge1, edge2]` (signed, so one-sided bands are expressible).
    BandPass,
    /// Keeps `|u| >= edge`.
    HighPass,
}

/// Passband in the u-domain with raised-cosine transitions of half-width `rolloff`
/// centred on each edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    kind: FilterKind,
    edges: Vec<f64>,
    rolloff: f64,
}

impl FilterSpec {
    pub fn low_pass(edge: f64, rolloff: f64) -> Result<Self> {
        Self::new(FilterKind::LowPass, vec![edge], rolloff)
    }

    pub fn high_pass(edge: f64, rolloff: f64) -> Result<Self> {
        Self::new(FilterKind::HighPass, vec![edge], rolloff)
    }

    pub fn band_pass(lo: f64, hi: f64, rolloff: f64) -> Result<Self> {
        Self::new(FilterKind::BandPass, vec![lo, hi], rolloff)
    }

    pub fn new(kind: FilterKind, edges: Vec<f64>, rolloff: f64) -> Result<Self> {
        let bad = |m: String| Err(OlctError::InvalidFilter(m));
        if !(rolloff.is_finite() && rolloff >= 0.0) {
            return bad(format!("rolloff must be >= 0, got {rolloff}"));
        }
        if edges.iter().any(|e| !e.is_finite()) {
            return bad("edges must be finite".into());
        }
        match kind {
            FilterKind::LowPass | FilterKind::HighPass => {
                if edges.len() != 1 || edges[0] <= 0.0 {
                    return bad(format!("{kind:?} needs one positive edge, got {edges:?}"));
                }
            }
            FilterKind::BandPass => {
                if edges.len() != 2 || edges[0] >= edges[1] {
                    return bad(format!("band-pass needs two increasing edges, got {edges:?}"));
                }
                if rolloff >= (edges[1] - edges[0]) / 2.0 {
                    return bad(format!(
                        "rolloff {rolloff} must be below half the band width {}",
                        (edges[1] - edges[0]) / 2.0
                    ));
                }
            }
        }
        Ok(Self { kind, edges, rolloff })
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }
    pub fn rolloff(&self) -> f64 {
        self.rolloff
    }

    /// Mask value at `u`, in `[0, 1]`.
    pub fn value(&self, u: f64) -> f64 {
        let r = self.rolloff;
        match self.kind {
            FilterKind::LowPass => band_profile(u.abs(), f64::NEG_INFINITY, self.edges[0], r),
            FilterKind::HighPass => 1.0 - band_profile(u.abs(), f64::NEG_INFINITY, self.edges[0], r),
            FilterKind::BandPass => band_profile(u, self.edges[0], self.edges[1], r),
        }
    }
}

/// Whether a mask multiplies `F(u)` or the dilated spectrum `F(2u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskArgument {
    /// `H(u) = F(u) m(u)` on the fast path's native grid; output on the input grid.
    Direct,
    /// `H(u) = F(2u) m(u)` on the dilated grid; output on the convolution output grid.
    Dilated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mask {
    pub u_grid: Grid,
    pub values: Vec<Complex64>,
    pub argument: MaskArgument,
}

impl Mask {
    pub fn constant(u_grid: Grid, value: f64) -> Self {
        Self { u_grid, values: vec![Complex64::new(value, 0.0); u_grid.len], argument: MaskArgument::Direct }
    }
}

/// The u-grid a direct mask for `f` must live on.
pub fn filter_grid(params: &OlctParams, f: &SampledSignal) -> Grid {
    native_u_grid(params, f.dx(), f.len().next_power_of_two())
}

/// Sample `spec` on `u_grid`. Every edge must lie inside the grid.
pub fn design_mask(spec: &FilterSpec, u_grid: &Grid) -> Result<Mask> {
    let (lo, hi) = (u_grid.start, u_grid.end());
    let needed: Vec<f64> = match spec.kind {
        FilterKind::LowPass | FilterKind::HighPass => vec![-spec.edges[0], spec.edges[0]],
        FilterKind::BandPass => spec.edges.clone(),
    };
    if let Some(e) = needed.iter().find(|&&e| e < lo || e > hi) {
        return Err(OlctError::EdgeOutOfRange(format!("edge {e} outside the u-grid [{lo}, {hi}]")));
    }
    let values = u_grid.points().map(|u| Complex64::new(spec.value(u), 0.0)).collect();
    Ok(Mask { u_grid: *u_grid, values, argument: MaskArgument::Direct })
}

/// `O^{-1}[O f * mask]`.
///
/// A direct mask uses the rectangle-rule forward transform, so that on the padded grid the
/// pipeline is exactly `I` for a unit mask and an orthogonal projector for a 0/1 mask. The
/// output lives on the padded power-of-two grid starting at `f`'s origin.
pub fn apply_filter(params: &OlctParams, f: &SampledSignal, mask: &Mask) -> Result<SampledSignal> {
    params.require_main()?;
    match mask.argument {
        MaskArgument::Direct => {
            let n = f.len().next_power_of_two();
            let plan = OlctPlan::new(*params, Grid::new(f.x_start(), f.dx(), n)?)?;
            require_grid(&plan.u_grid(), &mask.u_grid)?;
            let spec = plan.forward_rectangle(f)?;
            let h: Vec<Complex64> = spec.samples().iter().zip(&mask.values).map(|(a, m)| a * m).collect();
            plan.inverse(&h)
        }
        MaskArgument::Dilated => {
            require_grid(&dilated_u_grid(params, &f.grid()), &mask.u_grid)?;
            let ff = dilated_spectrum(params, f)?;
            let h = ff.iter().zip(&mask.values).map(|(a, m)| a * m).collect();
            invert_dilated(params, &f.grid(), h)
        }
    }
}

fn require_grid(want: &Grid, got: &Grid) -> Result<()> {
    let ok = want.len == got.len
        && ((want.step - got.step) / want.step).abs() <= 1e-9
        && (want.start - got.start).abs() <= 1e-9 * want.step * want.len as f64;
    if ok {
        Ok(())
    } else {
        Err(OlctError::GridMismatch(format!(
            "mask grid ({}, {}, {}) does not match the filter grid ({}, {}, {})",
            got.start, got.step, got.len, want.start, want.step, want.len
        )))
    }
}

/// Mask `m(u) = 2 T(u) G(2u)` realizing convolution with the prototype `g`:
/// `apply_filter(f, mask_from_prototype(g))` is the spectral-product convolution of `f` and `g`.
pub fn mask_from_prototype(params: &OlctParams, g: &SampledSignal) -> Result<Mask> {
    let t = ChirpFactorT::new(*params)?;
    let u_grid = dilated_u_grid(params, &g.grid());
    let gg = dilated_spectrum(params, g)?;
    let values = gg.iter().enumerate().map(|(j, v)| 2.0 * t.at(u_grid.point(j)) * v).collect();
    Ok(Mask { u_grid, values, argument: MaskArgument::Dilated })
}

/// `10 log10(||clean||^2 / ||test - clean||^2)`; `+inf` when `test == clean`.
pub fn snr_db(clean: &SampledSignal, test: &SampledSignal) -> Result<f64> {
    let err = test.sub(clean)?.norm_sq();
    let sig = clean.norm_sq();
    Ok(if err == 0.0 { f64::INFINITY } else { 10.0 * (sig / err).log10() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrReport {
    pub snr_in_db: f64,
    pub snr_out_db: f64,
    /// `snr_out_db - snr_in_db`; defined as 0 when the input is already clean (`snr_in_db = +inf`).
    pub gain_db: f64,
}

impl SnrReport {
    pub fn new(snr_in_db: f64, snr_out_db: f64) -> Self {
        let gain_db = if snr_in_db == f64::INFINITY { 0.0 } else { snr_out_db - snr_in_db };
        Self { snr_in_db, snr_out_db, gain_db }
    }
}

/// Chirp-denoising scenario. Energies are relative to the clean chirp: `noise_db = -10`
/// means the noise carries a tenth of the chirp's energy. `None` omits a component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoConfig {
    pub params: OlctParams,
    pub n: usize,
    pub x_min: f64,
    pub x_max: f64,
    /// Gaussian envelope width of the chirp.
    pub envelope_width: f64,
    /// Linear frequency of the chirp; its quadratic rate is fixed at `-a/b`.
    pub center_freq: f64,
    /// Interference placement, in occupied bandwidths from the chirp's band centre.
    pub interference_offset: f64,
    pub interference_db: Option<f64>,
    pub noise_db: Option<f64>,
    pub seed: u64,
    /// Mask rolloff; defaults to two u-grid steps.
    pub rolloff: Option<f64>,
    /// Relative magnitude defining the chirp's occupied band.
    pub band_threshold: f64,
}

impl DemoConfig {
    pub fn new(params: OlctParams) -> Self {
        Self {
            params,
            n: 4096,
            x_min: -40.0,
            x_max: 40.0,
            envelope_width: 6.0,
            center_freq: 0.0,
            interference_offset: 10.0,
            interference_db: Some(0.0),
            noise_db: Some(-10.0),
            seed: 42,
            rolloff: None,
            band_threshold: 1e-4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(OlctError::ConfigInvalid(m));
        if !self.params.is_main_branch() {
            return bad("demo needs b != 0".into());
        }
        if self.n < 16 {
            return bad(format!("demo needs n >= 16, got {}", self.n));
        }
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
            return bad(format!("bad x range [{}, {}]", self.x_min, self.x_max));
        }
        if !(self.envelope_width.is_finite() && self.envelope_width > 0.0) {
            return bad(format!("envelope_width must be positive, got {}", self.envelope_width));
        }
        for (name, v) in [("center_freq", self.center_freq), ("interference_offset", self.interference_offset)] {
            if !v.is_finite() {
                return bad(format!("{name} must be finite"));
            }
        }
        for (name, v) in [("interference_db", self.interference_db), ("noise_db", self.noise_db)] {
            if v.is_some_and(|d| !d.is_finite()) {
                return bad(format!("{name} must be finite when present"));
            }
        }
        if self.rolloff.is_some_and(|r| !(r.is_finite() && r >= 0.0)) {
            return bad("rolloff must be >= 0".into());
        }
        if !(self.band_threshold > 0.0 && self.band_threshold < 1.0) {
            return bad(format!("band_threshold must be in (0, 1), got {}", self.band_threshold));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.x_min, (self.x_max - self.x_min) / self.n as f64, self.n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoOutput {
    pub snr: SnrReport,
    pub clean: SampledSignal,
    pub input: SampledSignal,
    pub output: SampledSignal,
    pub clean_spectrum: Spectrum,
    pub input_spectrum: Spectrum,
    pub output_spectrum: Spectrum,
    pub mask: Mask,
    /// Measured occupied band `[u1, u2]` of the clean chirp.
    pub band: (f64, f64),
}

/// LFM chirp with rate `-a/b` (which cancels the kernel's quadratic phase, so the chirp is
/// compact in the transform domain), plus an interfering chirp of the same rate offset by
/// `interference_offset` bandwidths, plus seeded white noise; band-pass filtered on the
/// chirp's measured band.
pub fn demo_chirp_denoise(config: &DemoConfig) -> Result<DemoOutput> {
    config.validate()?;
    let p = config.params;
    let grid = config.grid()?;
    let kappa = -p.a() / p.b();
    let sigma = config.envelope_width;
    let w = config.center_freq;
    let clean = SampledSignal::from_fn(grid, |x| {
        (-(x * x) / (2.0 * sigma * sigma)).exp() * Complex64::cis(0.5 * kappa * x * x + w * x)
    });
    let energy = clean.norm_sq();
    let clean_spectrum = olct_fast(&p, &clean)?;
    let (u1, u2) = occupied_band(&clean_spectrum, config.band_threshold)?;

    let mut input = clean.clone();
    if let Some(db) = config.interference_db {
        // a unit shift in x-frequency moves the spectrum by b in u
        let shift = config.interference_offset * (u2 - u1) / p.b();
        let wide = (config.x_max - config.x_min) / 8.0;
        let tone = SampledSignal::from_fn(grid, |x| {
            (-(x * x) / (2.0 * wide * wide)).exp() * Complex64::cis(0.5 * kappa * x * x + (w + shift) * x)
        });
        input = input.add(&scale_to_energy(&tone, energy * 10f64.powf(db / 10.0)))?;
    }
    if let Some(db) = config.noise_db {
        let noise = SampledSignal::from_grid(grid, complex_noise(config.seed, 1.0, grid.len))?;
        input = input.add(&scale_to_energy(&noise, energy * 10f64.powf(db / 10.0)))?;
    }

    // the noisy input is deliberately not decaying, so skip the truncation warning
    let plan = OlctPlan::new(p, Grid::new(grid.start, grid.step, grid.len.next_power_of_two())?)?;
    let input_spectrum = plan.forward(&input)?;
    let rolloff = config.rolloff.unwrap_or(2.0 * input_spectrum.du());
    let spec = FilterSpec::band_pass(u1, u2, rolloff)?;
    let mask = design_mask(&spec, &input_spectrum.grid())?;
    let output = apply_filter(&p, &input, &mask)?;
    let output_spectrum = plan.forward(&output)?;
    let snr = SnrReport::new(snr_db(&clean, &input)?, snr_db(&clean, &output)?);
    Ok(DemoOutput { snr, clean, input, output, clean_spectrum, input_spectrum, output_spectrum, mask, band: (u1, u2) })
}

fn scale_to_energy(s: &SampledSignal, target: f64) -> SampledSignal {
    let e = s.norm_sq();
    if e == 0.0 {
        return s.clone();
    }
    s.scaled(Complex64::new((target / e).sqrt(), 0.0))
}

fn occupied_band(spec: &Spectrum, threshold: f64) -> Result<(f64, f64)> {
    let peak = spec.max_abs();
    let idx: Vec<usize> = (0..spec.len()).filter(|&j| spec.samples()[j].norm() > threshold * peak).collect();
    match (idx.first(), idx.last()) {
        (Some(&a), Some(&b)) if b > a => Ok((spec.u(a), spec.u(b))),
        _ => Err(OlctError::ConfigInvalid("clean chirp occupies no measurable band".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conv::convolve_spectral;
    use crate::report::relative_l2;

    fn p(v: [f64; 6]) -> OlctParams {
        OlctParams::try_from(v).unwrap()
    }

    fn gaussian(grid: Grid, c: f64) -> SampledSignal {
        SampledSignal::from_fn(grid, |x| Complex64::new((-(x - c) * (x - c) / 2.0).exp(), 0.0))
    }

    #[test]
    fn mask_shapes() {
        let g = Grid::span(-5.0, 5.0, 1001).unwrap();
        let m = design_mask(&FilterSpec::low_pass(2.0, 0.0).unwrap(), &g).unwrap();
        for (u, v) in g.points().zip(&m.values) {
            assert_eq!(v.re, if u.abs() <= 2.0 { 1.0 } else { 0.0 });
        }
        let lp = FilterSpec::low_pass(2.0, 0.5).unwrap();
        assert!((lp.value(2.0) - 0.5).abs() < 1e-15);
        let bp = FilterSpec::band_pass(1.0, 3.0, 0.2).unwrap();
        assert_eq!((bp.value(2.0), bp.value(0.5), bp.value(3.5)), (1.0, 0.0, 0.0));
        let hp = FilterSpec::high_pass(1.0, 0.1).unwrap();
        assert_eq!((hp.value(0.0), hp.value(3.0)), (0.0, 1.0));
    }

    #[test]
    fn invalid_specs() {
        assert!(FilterSpec::band_pass(3.0, 1.0, 0.0).is_err());
        assert!(FilterSpec::band_pass(1.0, 3.0, 1.0).is_err());
        assert!(FilterSpec::low_pass(1.0, -0.1).is_err());
        let g = Grid::span(-1.0, 1.0, 11).unwrap();
        let err = design_mask(&FilterSpec::low_pass(2.0, 0.0).unwrap(), &g).unwrap_err();
        assert!(matches!(err, OlctError::EdgeOutOfRange(_)));
    }

    #[test]
    fn identity_and_zero_masks() {
        let prm = p([1.0, 1.0, 1.0, 2.0, 1.0, 0.0]);
        let f = gaussian(Grid::centered(1.0 / 32.0, 1024).unwrap(), 0.5);
        let ug = filter_grid(&prm, &f);
        let same = apply_filter(&prm, &f, &Mask::constant(ug, 1.0)).unwrap();
        assert!(relative_l2(same.samples(), f.samples()) < 1e-8);
        assert_eq!(apply_filter(&prm, &f, &Mask::constant(ug, 0.0)).unwrap().max_abs(), 0.0);
        let wrong = Grid::new(ug.start, ug.step * 2.0, ug.len).unwrap();
        assert!(matches!(apply_filter(&prm, &f, &Mask::constant(wrong, 1.0)), Err(OlctError::GridMismatch(_))));
    }

    #[test]
    fn binary_mask_is_idempotent() {
        let prm = p([2.0, 1.0, 1.0, 1.0, 0.5, -0.3]);
        let f = gaussian(Grid::centered(1.0 / 32.0, 1024).unwrap(), 0.0);
        let mask = design_mask(&FilterSpec::low_pass(1.0, 0.0).unwrap(), &filter_grid(&prm, &f)).unwrap();
        let once = apply_filter(&prm, &f, &mask).unwrap();
        let twice = apply_filter(&prm, &once, &mask).unwrap();
        assert!(relative_l2(twice.samples(), once.samples()) < 1e-9);
    }

    #[test]
    fn prototype_mask_equals_spectral_convolution() {
        let prm = p([1.0, 1.0, 1.0, 2.0, 1.0, 0.0]);
        let grid = Grid::centered(1.0 / 32.0, 1024).unwrap();
        let f = gaussian(grid, 0.5);
        let g = gaussian(grid, -0.5);
        let a = apply_filter(&prm, &f, &mask_from_prototype(&prm, &g).unwrap()).unwrap();
        let b = convolve_spectral(&prm, &f, &g).unwrap();
        assert!(relative_l2(a.samples(), b.samples()) < 1e-9);
    }

    #[test]
    fn snr_examples() {
        let grid = Grid::centered(0.1, 64).unwrap();
        let clean = gaussian(grid, 0.0);
        assert!(snr_db(&clean, &clean.scaled(Complex64::new(2.0, 0.0))).unwrap().abs() < 1e-12);
        assert_eq!(snr_db(&clean, &clean).unwrap(), f64::INFINITY);
        let noisy = clean.add(&clean.scaled(Complex64::new(0.1, 0.0))).unwrap();
        assert!((snr_db(&clean, &noisy).unwrap() - 20.0).abs() < 1e-9);
    }

    #[test]
    fn demo_without_disturbances_has_zero_gain() {
        let mut cfg = DemoConfig::new(p([1.0, 1.0, 1.0, 2.0, 1.0, 0.0]));
        cfg.noise_db = None;
        cfg.interference_db = None;
        let out = demo_chirp_denoise(&cfg).unwrap();
        assert_eq!(out.snr.snr_in_db, f64::INFINITY);
        assert_eq!(out.snr.gain_db, 0.0);
        assert!(out.snr.snr_out_db > 40.0);
    }
}

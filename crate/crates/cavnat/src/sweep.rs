//! Parameter-sweep harness over the three transport models, plus the peak
//! finding and bell-shape tests used to characterize noise-assisted
//! transport curves.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CavnatError, Result};
use crate::fock;
use crate::moments;
use crate::network::{four_site_preset, FourSiteConfig, Interference};
use crate::optics::{dephased_transmission, FourSiteOpticalConfig, DEFAULT_DEPHASING_SAMPLES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "fock")]
    Fock,
    #[serde(rename = "moment")]
    Moment,
    #[serde(rename = "classical-mz")]
    ClassicalMz,
    #[serde(rename = "classical-full")]
    ClassicalFull,
}

impl ModelKind {
    pub fn is_quantum(self) -> bool {
        matches!(self, ModelKind::Fock | ModelKind::Moment)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Fock => "fock",
            ModelKind::Moment => "moment",
            ModelKind::ClassicalMz => "classical-mz",
            ModelKind::ClassicalFull => "classical-full",
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = CavnatError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fock" => Ok(ModelKind::Fock),
            "moment" => Ok(ModelKind::Moment),
            "classical-mz" => Ok(ModelKind::ClassicalMz),
            "classical-full" => Ok(ModelKind::ClassicalFull),
            other => Err(CavnatError::Validation(format!(
                "unknown model \"{other}\" (expected fock, moment, classical-mz, classical-full)"
            ))),
        }
    }
}

/// One point in model/parameter space. The disorder and dephasing knobs are
/// dimensionless and model-dependent: Δx and δx (cavity FWHM units) for the
/// classical models, (ω2−ω1)/g01 and γ2/(ω2−ω1) for the quantum backends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub model: ModelKind,
    pub quantum: FourSiteConfig,
    pub optical: FourSiteOpticalConfig,
    /// Global excitation cutoff for the Fock backend.
    pub n_max: usize,
    /// Window samples for the classical dephasing average.
    pub n_samples: usize,
    pub disorder: f64,
    pub dephasing: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::Moment,
            quantum: FourSiteConfig::default(),
            optical: FourSiteOpticalConfig::default(),
            n_max: 2,
            n_samples: DEFAULT_DEPHASING_SAMPLES,
            disorder: 0.0,
            dephasing: 0.0,
        }
    }
}

impl SimConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: SimConfig =
            serde_json::from_str(text).map_err(|e| CavnatError::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.quantum.validate()?;
        if self.disorder < 0.0 || self.dephasing < 0.0 {
            return Err(CavnatError::Validation(
                "disorder and dephasing must be nonnegative".into(),
            ));
        }
        Ok(())
    }

    /// Quantum network at the configured (disorder, dephasing) point:
    /// Δ = disorder·g01 and γ2 = dephasing·Δ.
    fn quantum_at(&self, disorder: f64, dephasing: f64) -> FourSiteConfig {
        let delta = disorder * self.quantum.g01;
        FourSiteConfig { delta, gamma2: dephasing * delta, ..self.quantum }
    }

    /// Raw (unnormalized) transmission at the configured point.
    pub fn transmission(&self) -> Result<f64> {
        self.at(self.disorder, self.dephasing)
    }

    fn at(&self, disorder: f64, dephasing: f64) -> Result<f64> {
        match self.model {
            ModelKind::Fock => {
                let spec = four_site_preset(&self.quantum_at(disorder, dephasing))?;
                fock::fock_transmission(&spec, self.n_max, fock::DEFAULT_DIM_LIMIT)
            }
            ModelKind::Moment => {
                let spec = four_site_preset(&self.quantum_at(disorder, dephasing))?;
                moments::moment_transmission(&spec)
            }
            ModelKind::ClassicalMz => {
                let cfg = self.optical.mirrors_off();
                dephased_transmission(&cfg, disorder, dephasing, self.n_samples)
            }
            ModelKind::ClassicalFull => {
                dephased_transmission(&self.optical, disorder, dephasing, self.n_samples)
            }
        }
    }

    /// Constructive, zero-disorder, zero-dephasing transmission in the same
    /// model; every sweep is normalized against this value.
    pub fn reference(&self) -> Result<f64> {
        let mut cfg = *self;
        cfg.quantum.interference = Interference::Constructive;
        cfg.optical.interference = Interference::Constructive;
        cfg.disorder = 0.0;
        cfg.dephasing = 0.0;
        // The Mach-Zehnder reference also has the mirrors off, which
        // ClassicalMz::at applies itself.
        cfg.transmission()
    }

    fn hash(&self, parameter: &str) -> String {
        let mut h = Sha256::new();
        h.update(serde_json::to_string(self).expect("config serializes").as_bytes());
        h.update(parameter.as_bytes());
        let digest = h.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub model: ModelKind,
    pub parameter: String,
    pub grid: Vec<f64>,
    pub raw: Vec<f64>,
    pub normalized: Vec<f64>,
    pub reference: f64,
    pub config_hash: String,
    /// Wall-clock stamp; carried for provenance but kept out of exports so
    /// repeated runs stay byte-identical.
    pub timestamp: Option<String>,
    /// Plot hint for log-spaced grids.
    pub log_x: bool,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(CavnatError::Validation("empty sweep grid".into()));
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(CavnatError::Validation(format!(
                "sweep grid must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(CavnatError::Validation("sweep grid contains non-finite values".into()));
    }
    Ok(())
}

fn run_sweep(
    cfg: &SimConfig,
    parameter: &str,
    grid: &[f64],
    log_x: bool,
    eval: impl Fn(f64) -> Result<f64>,
) -> Result<SweepResult> {
    check_grid(grid)?;
    let reference = cfg.reference()?;
    if reference <= 0.0 {
        return Err(CavnatError::Solver(format!(
            "nonpositive normalization reference {reference}"
        )));
    }
    let mut raw = Vec::with_capacity(grid.len());
    for &x in grid {
        let t = eval(x).map_err(|e| match e {
            CavnatError::Solver(msg) => {
                CavnatError::Solver(format!("{msg} (at {parameter} = {x})"))
            }
            other => other,
        })?;
        raw.push(t);
    }
    let normalized = raw.iter().map(|t| t / reference).collect();
    Ok(SweepResult {
        model: cfg.model,
        parameter: parameter.to_string(),
        grid: grid.to_vec(),
        raw,
        normalized,
        reference,
        config_hash: cfg.hash(parameter),
        timestamp: None,
        log_x,
    })
}

/// Transmission vs static disorder at zero dephasing.
pub fn sweep_static_disorder(cfg: &SimConfig, grid: &[f64]) -> Result<SweepResult> {
    if cfg.dephasing != 0.0 {
        return Err(CavnatError::Validation(
            "static-disorder sweep requires zero dephasing".into(),
        ));
    }
    let parameter = if cfg.model.is_quantum() { "(omega2-omega1)/g01" } else { "dx" };
    run_sweep(cfg, parameter, grid, false, |x| cfg.at(x, 0.0))
}

/// Transmission vs dephasing at fixed static disorder.
pub fn sweep_dephasing(
    cfg: &SimConfig,
    disorder: f64,
    grid: &[f64],
    log_x: bool,
) -> Result<SweepResult> {
    let parameter = if cfg.model.is_quantum() { "gamma2/(omega2-omega1)" } else { "ddx" };
    run_sweep(cfg, parameter, grid, log_x, |x| cfg.at(disorder, x))
}

/// Grid argmax of the normalized transmission; ties break toward the
/// smallest parameter value. `interior` is false when the argmax sits on
/// either grid endpoint.
pub fn find_peak(sweep: &SweepResult) -> Result<(f64, f64, bool)> {
    if sweep.grid.len() < 3 {
        return Err(CavnatError::Validation(format!(
            "peak finding needs at least 3 grid points, got {}",
            sweep.grid.len()
        )));
    }
    let mut best = 0;
    for i in 1..sweep.normalized.len() {
        if sweep.normalized[i] > sweep.normalized[best] {
            best = i;
        }
    }
    let interior = best > 0 && best + 1 < sweep.grid.len();
    Ok((sweep.grid[best], sweep.normalized[best], interior))
}

/// True iff the maximum clears both sweep endpoints by the given fractional
/// margins; a monotone curve always fails one side.
pub fn bell_shape_test(sweep: &SweepResult, rise_margin: f64, fall_margin: f64) -> Result<bool> {
    if sweep.grid.len() < 3 {
        return Err(CavnatError::Validation(format!(
            "bell-shape test needs at least 3 grid points, got {}",
            sweep.grid.len()
        )));
    }
    let max = sweep.normalized.iter().cloned().fold(f64::MIN, f64::max);
    let first = sweep.normalized[0];
    let last = *sweep.normalized.last().expect("nonempty");
    Ok(max >= (1.0 + rise_margin) * first && max >= (1.0 + fall_margin) * last)
}

/// `n` evenly spaced points on [a, b], endpoints included.
pub fn linear_grid(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(b > a) {
        return Err(CavnatError::Validation(format!(
            "grid needs b > a and n >= 2 (got {a}:{b}:{n})"
        )));
    }
    Ok((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect())
}

/// `n` log-spaced points on [a, b], endpoints included; requires a > 0.
pub fn log_grid(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if a <= 0.0 {
        return Err(CavnatError::Validation(format!(
            "log grid needs a positive lower bound, got {a}"
        )));
    }
    let raw = linear_grid(a.ln(), b.ln(), n)?;
    Ok(raw.into_iter().map(f64::exp).collect())
}

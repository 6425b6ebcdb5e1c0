//! Abstract N-site network specifications: validation, the 4-site preset,
//! and static-disorder application.
//!
//! All angular frequencies and rates are in rad/µs, measured in the rotating
//! frame of the injection site (its detuning is 0 by convention). A value
//! quoted in MHz enters as `2π · value`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{CavnatError, Result};
use crate::linalg::C64;

/// Default cavity linewidth: FWHM ≈ 10 MHz.
pub const DEFAULT_FWHM_CAV: f64 = 2.0 * std::f64::consts::PI * 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub index: usize,
    /// Detuning ω_i relative to the injection-site frequency (rad/µs).
    pub detuning: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    /// Coupling rate g_ij (rad/µs); the sign encodes a 0 or π coupling phase.
    pub g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DephasingEntry {
    pub i: usize,
    /// Pure-dephasing rate γ_i ≥ 0 (rad/µs).
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Injection {
    pub site: usize,
    /// Pump rate Γ0 ≥ 0 (rad/µs).
    pub gamma0: f64,
    /// Thermal occupation n_th ≥ 0 of the injecting bath.
    pub n_th: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sink {
    pub site: usize,
    /// Absorption rate Γ_Det ≥ 0 (rad/µs).
    pub gamma_det: f64,
}

/// A validated N-site network.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkSpec {
    pub modes: Vec<Mode>,
    pub couplings: Vec<Coupling>,
    pub dephasing: Vec<DephasingEntry>,
    pub injection: Injection,
    pub sink: Sink,
    #[serde(default)]
    pub label: String,
}

#[derive(Debug, Deserialize)]
struct RawNetworkSpec {
    modes: Option<Vec<Mode>>,
    couplings: Option<Vec<Coupling>>,
    #[serde(default)]
    dephasing: Vec<DephasingEntry>,
    injection: Option<Injection>,
    sink: Option<Sink>,
    #[serde(default)]
    label: String,
}

impl NetworkSpec {
    /// Parse and validate the JSON network-description document.
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawNetworkSpec =
            serde_json::from_str(text).map_err(|e| CavnatError::Parse(e.to_string()))?;
        let spec = NetworkSpec {
            modes: raw.modes.ok_or_else(|| {
                CavnatError::Validation("missing required key \"modes\"".into())
            })?,
            couplings: raw.couplings.unwrap_or_default(),
            dephasing: raw.dephasing,
            injection: raw.injection.ok_or_else(|| {
                CavnatError::Validation("exactly one injection required".into())
            })?,
            sink: raw
                .sink
                .ok_or_else(|| CavnatError::Validation("exactly one sink required".into()))?,
            label: raw.label,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.modes.len();
        if n == 0 {
            return Err(CavnatError::Validation("modes must be non-empty".into()));
        }
        let mut seen = vec![false; n];
        for (idx, m) in self.modes.iter().enumerate() {
            if m.index >= n {
                return Err(CavnatError::Validation(format!(
                    "mode index {} out of range at modes[{idx}] (expected 0..{})",
                    m.index,
                    n - 1
                )));
            }
            if seen[m.index] {
                return Err(CavnatError::Validation(format!(
                    "duplicate mode index {} at modes[{idx}]",
                    m.index
                )));
            }
            seen[m.index] = true;
        }
        let mut pairs = std::collections::HashSet::new();
        for (idx, c) in self.couplings.iter().enumerate() {
            if c.i == c.j {
                return Err(CavnatError::Validation(format!(
                    "self-coupling at couplings[{idx}]"
                )));
            }
            if c.i >= n || c.j >= n {
                return Err(CavnatError::Validation(format!(
                    "unknown mode index at couplings[{idx}]"
                )));
            }
            let key = (c.i.min(c.j), c.i.max(c.j));
            if !pairs.insert(key) {
                return Err(CavnatError::Validation(format!(
                    "duplicate coupling pair at couplings[{idx}]"
                )));
            }
        }
        for (idx, d) in self.dephasing.iter().enumerate() {
            if d.i >= n {
                return Err(CavnatError::Validation(format!(
                    "unknown mode index at dephasing[{idx}]"
                )));
            }
            if d.gamma < 0.0 {
                return Err(CavnatError::Validation(format!(
                    "negative rate at dephasing[{idx}]"
                )));
            }
        }
        if self.injection.site >= n {
            return Err(CavnatError::Validation("unknown mode index at injection.site".into()));
        }
        if self.injection.gamma0 < 0.0 {
            return Err(CavnatError::Validation("negative rate at injection.gamma0".into()));
        }
        if self.injection.n_th < 0.0 {
            return Err(CavnatError::Validation("negative value at injection.n_th".into()));
        }
        if self.sink.site >= n {
            return Err(CavnatError::Validation("unknown mode index at sink.site".into()));
        }
        if self.sink.gamma_det < 0.0 {
            return Err(CavnatError::Validation("negative rate at sink.gamma_det".into()));
        }
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    /// Detuning of mode `i`.
    pub fn detuning(&self, i: usize) -> f64 {
        self.modes.iter().find(|m| m.index == i).map(|m| m.detuning).unwrap_or(0.0)
    }

    /// Dephasing rate γ_i (0 when the site has no entry).
    pub fn gamma(&self, i: usize) -> f64 {
        self.dephasing
            .iter()
            .filter(|d| d.i == i)
            .map(|d| d.gamma)
            .sum()
    }

    /// Single-particle Hermitian matrix h: h_ii = ω_i, h_ij = h_ji = g_ij.
    pub fn single_particle_matrix(&self) -> DMatrix<C64> {
        let n = self.n_modes();
        let mut h = DMatrix::<C64>::zeros(n, n);
        for m in &self.modes {
            h[(m.index, m.index)] = C64::from(m.detuning);
        }
        for c in &self.couplings {
            h[(c.i, c.j)] = C64::from(c.g);
            h[(c.j, c.i)] = C64::from(c.g);
        }
        h
    }

    /// Scale every rate (couplings, detunings, dephasing, injection, sink) by `s`.
    pub fn scaled(&self, s: f64) -> NetworkSpec {
        let mut out = self.clone();
        for m in &mut out.modes {
            m.detuning *= s;
        }
        for c in &mut out.couplings {
            c.g *= s;
        }
        for d in &mut out.dephasing {
            d.gamma *= s;
        }
        out.injection.gamma0 *= s;
        out.sink.gamma_det *= s;
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interference {
    Constructive,
    Destructive,
}

/// Configuration of the 4-site transport network: injection site 0, two
/// intermediate cavities 1 and 2, sink site 3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FourSiteConfig {
    pub g01: f64,
    pub g02: f64,
    pub g13: f64,
    pub g23: f64,
    /// Detuning Δ = ω2 − ω1 (rad/µs).
    pub delta: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma0: f64,
    pub n_th: f64,
    pub gamma_det: f64,
    pub interference: Interference,
}

impl Default for FourSiteConfig {
    fn default() -> Self {
        // Asymmetric arm couplings (weak 1→3 link) and weak thermal driving.
        // The weak link keeps the dephasing-gated arm through site 2 the
        // dominant transport channel, which is what produces the interior
        // transmission maximum under strong disorder.
        Self {
            g01: 1.0,
            g02: 0.95,
            g13: 0.2,
            g23: 1.0,
            delta: 0.0,
            gamma1: 0.0,
            gamma2: 0.0,
            gamma0: 0.1,
            n_th: 0.01,
            gamma_det: 0.5,
            interference: Interference::Destructive,
        }
    }
}

impl FourSiteConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("g01", self.g01),
            ("g02", self.g02),
            ("g13", self.g13),
            ("g23", self.g23),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma0", self.gamma0),
            ("n_th", self.n_th),
            ("gamma_det", self.gamma_det),
        ] {
            if v < 0.0 {
                return Err(CavnatError::Validation(format!("negative rate at {name}")));
            }
        }
        Ok(())
    }
}

/// Build the 4-site transport network. Sites 0 and 3 are resonant with the
/// injected light; the destructive flag flips the sign of g23.
pub fn four_site_preset(cfg: &FourSiteConfig) -> Result<NetworkSpec> {
    cfg.validate()?;
    let g23 = match cfg.interference {
        Interference::Constructive => cfg.g23,
        Interference::Destructive => -cfg.g23,
    };
    let spec = NetworkSpec {
        modes: vec![
            Mode { index: 0, detuning: 0.0 },
            Mode { index: 1, detuning: 0.0 },
            Mode { index: 2, detuning: cfg.delta },
            Mode { index: 3, detuning: 0.0 },
        ],
        couplings: vec![
            Coupling { i: 0, j: 1, g: cfg.g01 },
            Coupling { i: 0, j: 2, g: cfg.g02 },
            Coupling { i: 1, j: 3, g: cfg.g13 },
            Coupling { i: 2, j: 3, g: g23 },
        ],
        dephasing: vec![
            DephasingEntry { i: 1, gamma: cfg.gamma1 },
            DephasingEntry { i: 2, gamma: cfg.gamma2 },
        ],
        injection: Injection { site: 0, gamma0: cfg.gamma0, n_th: cfg.n_th },
        sink: Sink { site: 3, gamma_det: cfg.gamma_det },
        label: "four-site".into(),
    };
    spec.validate()?;
    Ok(spec)
}

/// Static disorder Δx and dephasing window δx, in units of the cavity FWHM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DisorderSpec {
    pub delta_x: f64,
    pub delta_x_window: f64,
    /// Cavity linewidth (rad/µs).
    pub fwhm_cav: f64,
}

impl Default for DisorderSpec {
    fn default() -> Self {
        Self { delta_x: 0.0, delta_x_window: 0.0, fwhm_cav: DEFAULT_FWHM_CAV }
    }
}

impl DisorderSpec {
    pub fn validate(&self) -> Result<()> {
        if self.delta_x_window < 0.0 {
            return Err(CavnatError::Validation("negative value at delta_x_window".into()));
        }
        if self.fwhm_cav <= 0.0 {
            return Err(CavnatError::Validation("fwhm_cav must be positive".into()));
        }
        Ok(())
    }
}

/// Retune the disordered site (site 2, per the preset) so that
/// ω2 = ω1 + Δx · FWHM_cav. All other fields are untouched.
pub fn apply_disorder(spec: &NetworkSpec, d: &DisorderSpec) -> Result<NetworkSpec> {
    d.validate()?;
    let omega1 = spec
        .modes
        .iter()
        .find(|m| m.index == 1)
        .ok_or_else(|| CavnatError::Validation("disordered-site reference mode 1 not present".into()))?
        .detuning;
    let mut out = spec.clone();
    let m2 = out
        .modes
        .iter_mut()
        .find(|m| m.index == 2)
        .ok_or_else(|| CavnatError::Validation("disordered site 2 not present".into()))?;
    m2.detuning = omega1 + d.delta_x * d.fwhm_cav;
    Ok(out)
}

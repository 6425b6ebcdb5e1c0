//! Preset for the two-cavity interferometer: a 50:50 coupler splits the
//! laser into two arms holding FBG1 and FBG2, a second coupler recombines
//! them onto detector D3, and recycling mirrors M1/M2 feed the rejected
//! light back into the loop. With the mirrors disabled the setup is a plain
//! Mach-Zehnder interferometer.

use serde::{Deserialize, Serialize};

use super::cavity::CavityParams;
use super::network::{ComponentKind, ScatteringNetwork, ScatteringNetworkBuilder};
use crate::error::{CavnatError, Result};
use crate::network::Interference;

/// Default number of window samples for the dephasing average.
pub const DEFAULT_DEPHASING_SAMPLES: usize = 51;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FourSiteOpticalConfig {
    /// Power ratio of both couplers.
    pub coupler_t: f64,
    /// Arm-1 resonator, held at the laser frequency.
    pub cavity1: CavityParams,
    /// Arm-2 resonator, detuned by the static-disorder parameter.
    pub cavity2: CavityParams,
    /// Recycling mirror on the spare input of the first coupler.
    pub mirror1_r: f64,
    pub mirror1_phi: f64,
    /// Recycling mirror on the bright output of the second coupler.
    pub mirror2_r: f64,
    pub mirror2_phi: f64,
    /// Extra propagation phase in arm 1, on top of the interference setting.
    pub arm_phase: f64,
    /// Include the 10% monitor tap couplers, modeled as attenuators.
    pub taps: bool,
    pub interference: Interference,
}

impl Default for FourSiteOpticalConfig {
    fn default() -> Self {
        Self {
            coupler_t: 0.5,
            cavity1: CavityParams { t0: 0.9, ..CavityParams::default() },
            cavity2: CavityParams { t0: 0.8, ..CavityParams::default() },
            mirror1_r: 0.9,
            mirror1_phi: std::f64::consts::FRAC_PI_4,
            mirror2_r: 0.9,
            mirror2_phi: std::f64::consts::FRAC_PI_4,
            arm_phase: 0.0,
            taps: false,
            interference: Interference::Destructive,
        }
    }
}

impl FourSiteOpticalConfig {
    /// Plain Mach-Zehnder variant: recycling mirrors removed.
    pub fn mirrors_off(self) -> Self {
        Self { mirror1_r: 0.0, mirror2_r: 0.0, ..self }
    }

    /// Idealized variant: identical lossless cavities in both arms.
    pub fn lossless_symmetric(self) -> Self {
        Self {
            cavity1: CavityParams::lossless(),
            cavity2: CavityParams::lossless(),
            ..self
        }
    }

    /// Net arm-1 phase. With both couplers imprinting i on the cross port,
    /// zero phase already makes D3 the dark output, so destructive is the
    /// bare configuration and constructive adds π.
    fn effective_phase(&self) -> f64 {
        match self.interference {
            Interference::Destructive => self.arm_phase,
            Interference::Constructive => self.arm_phase + std::f64::consts::PI,
        }
    }

    /// Assemble the scattering network. Cavities are declared FBG1 first, so
    /// `solve_fields` expects detunings `[x1, x2]`.
    pub fn build(&self) -> Result<ScatteringNetwork> {
        let mut b = ScatteringNetworkBuilder::new();
        let ls = b.add("LS", ComponentKind::Source { amplitude: 1.0 });
        let ca = b.add("CA", ComponentKind::Coupler { t: self.coupler_t });
        let cb = b.add("CB", ComponentKind::Coupler { t: self.coupler_t });
        let fbg1 = b.add("FBG1", ComponentKind::Cavity { params: self.cavity1 });
        let fbg2 = b.add("FBG2", ComponentKind::Cavity { params: self.cavity2 });
        let ph = b.add("PH", ComponentKind::Phase { phi: self.effective_phase() });
        let m1 = b.add("M1", ComponentKind::Mirror { r: self.mirror1_r, phi: self.mirror1_phi });
        let m2 = b.add("M2", ComponentKind::Mirror { r: self.mirror2_r, phi: self.mirror2_phi });
        let d3 = b.add("D3", ComponentKind::Detector);

        b.connect((ls, 0), (ca, 0));
        b.connect((m1, 0), (ca, 1));
        if self.taps {
            let c1 = b.add("C1", ComponentKind::Loss { alpha: 0.9 });
            let c2 = b.add("C2", ComponentKind::Loss { alpha: 0.9 });
            b.connect((ca, 2), (c1, 0));
            b.connect((c1, 1), (fbg1, 0));
            b.connect((ca, 3), (c2, 0));
            b.connect((c2, 1), (fbg2, 0));
        } else {
            b.connect((ca, 2), (fbg1, 0));
            b.connect((ca, 3), (fbg2, 0));
        }
        b.connect((fbg1, 1), (ph, 0));
        b.connect((ph, 1), (cb, 0));
        b.connect((fbg2, 1), (cb, 1));
        b.connect((cb, 2), (d3, 0));
        b.connect((cb, 3), (m2, 0));
        b.build()
    }
}

/// Power at D3 with FBG1 on the laser line and FBG2 detuned by `dx` FWHM,
/// normalized to the source power.
pub fn interferometer_transmission(cfg: &FourSiteOpticalConfig, dx: f64) -> Result<f64> {
    let net = cfg.build()?;
    let sol = net.solve_fields(&[0.0, dx])?;
    Ok(sol.detector_power("D3").expect("preset always has D3") / sol.source_power())
}

/// Mean transmission over a uniform window of `n_samples` detunings on
/// [dx0 − δx/2, dx0 + δx/2]; the averaging emulates fast dephasing noise.
pub fn dephased_transmission(
    cfg: &FourSiteOpticalConfig,
    dx0: f64,
    delta_x: f64,
    n_samples: usize,
) -> Result<f64> {
    if n_samples == 0 || n_samples % 2 == 0 {
        return Err(CavnatError::Validation(format!(
            "dephasing window needs an odd positive sample count, got {n_samples}"
        )));
    }
    if delta_x < 0.0 {
        return Err(CavnatError::Validation(format!(
            "dephasing window width must be nonnegative, got {delta_x}"
        )));
    }
    if n_samples == 1 || delta_x == 0.0 {
        return interferometer_transmission(cfg, dx0);
    }
    let net = cfg.build()?;
    let mut sum = 0.0;
    for k in 0..n_samples {
        let dx = dx0 - delta_x / 2.0 + delta_x * k as f64 / (n_samples - 1) as f64;
        let sol = net.solve_fields(&[0.0, dx])?;
        sum += sol.detector_power("D3").expect("preset always has D3") / sol.source_power();
    }
    Ok(sum / n_samples as f64)
}

/// Scale a raw detector power by a constructive-interference reference.
pub fn normalize(raw: f64, reference: f64) -> Result<f64> {
    if reference <= 0.0 {
        return Err(CavnatError::Validation(format!(
            "normalization reference must be positive, got {reference}"
        )));
    }
    Ok(raw / reference)
}

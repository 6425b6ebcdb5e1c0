//! Single-Lorentzian near-resonance model of an FBG Fabry-Perot resonator.

use serde::{Deserialize, Serialize};

use crate::error::{CavnatError, Result};
use crate::linalg::C64;
use crate::network::DEFAULT_FWHM_CAV;

/// Lorentzian cavity response, parameterized by the peak power transmission
/// T0, the on-resonance amplitude reflection ρ0, and the off-resonance power
/// reflectance R∞. Detunings are expressed in units of the FWHM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CavityParams {
    /// Linewidth in rad/µs (used when detunings arrive in physical units).
    pub fwhm: f64,
    pub t0: f64,
    pub rho0: f64,
    pub r_inf: f64,
}

impl Default for CavityParams {
    fn default() -> Self {
        Self { fwhm: DEFAULT_FWHM_CAV, t0: 0.9, rho0: 0.05, r_inf: 0.95 }
    }
}

impl CavityParams {
    pub fn lossless() -> Self {
        Self { fwhm: DEFAULT_FWHM_CAV, t0: 1.0, rho0: 0.0, r_inf: 1.0 }
    }

    /// Reject parameter sets whose S-matrix would be active at some detuning.
    ///
    /// |t(x)|² + |r(x)|² = [T0 + R∞(ρ0² + 4x²)] / (1 + 4x²) is monotone in x²,
    /// and the largest singular value of [[r, t], [t, r]] is max|r ± t|, whose
    /// supremum over x is max(√T0 + √R∞·ρ0, √R∞). Passivity therefore reduces
    /// to two closed-form endpoint checks.
    pub fn validate(&self) -> Result<()> {
        if self.fwhm <= 0.0 {
            return Err(CavnatError::Validation("cavity fwhm must be positive".into()));
        }
        for (name, v) in [("t0", self.t0), ("rho0", self.rho0), ("r_inf", self.r_inf)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(CavnatError::Validation(format!(
                    "cavity {name} = {v} outside [0, 1]"
                )));
            }
        }
        let sigma_peak = self.t0.sqrt() + self.r_inf.sqrt() * self.rho0;
        if sigma_peak > 1.0 + 1e-12 {
            return Err(CavnatError::Validation(format!(
                "cavity not passive: sqrt(t0) + sqrt(r_inf)*rho0 = {sigma_peak} > 1"
            )));
        }
        Ok(())
    }

    /// Amplitude transmission and reflection at detuning `x` in FWHM units:
    /// t(x) = √T0 / (1 − 2ix), r(x) = √R∞ (ρ0 − 2ix) / (1 − 2ix).
    pub fn response(&self, x: f64) -> (C64, C64) {
        let denom = C64::new(1.0, -2.0 * x);
        let t = C64::from(self.t0.sqrt()) / denom;
        let r = C64::from(self.r_inf.sqrt()) * C64::new(self.rho0, -2.0 * x) / denom;
        (t, r)
    }

    /// Response at a physical detuning (rad/µs).
    pub fn response_at(&self, omega: f64) -> (C64, C64) {
        self.response(omega / self.fwhm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn resonant_transparency_when_lossless() {
        let cav = CavityParams::lossless();
        cav.validate().unwrap();
        let (t, r) = cav.response(0.0);
        assert_relative_eq!(t.re, 1.0);
        assert_relative_eq!(t.im, 0.0);
        assert_relative_eq!(r.norm(), 0.0);
    }

    #[test]
    fn half_power_at_half_width() {
        let cav = CavityParams { t0: 0.8, ..CavityParams::lossless() };
        let (t, _) = cav.response(0.5);
        assert_relative_eq!(t.norm_sqr(), 0.8 / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn off_resonance_mirror_limit() {
        let cav = CavityParams::default();
        let (t, r) = cav.response(1e6);
        assert!(t.norm() < 1e-5);
        assert_relative_eq!(r.norm_sqr(), cav.r_inf, max_relative = 1e-9);
    }

    #[test]
    fn passivity_over_detuning_grid() {
        let cav = CavityParams::default();
        cav.validate().unwrap();
        for k in -200..=200 {
            let x = k as f64 * 0.1;
            let (t, r) = cav.response(x);
            assert!(t.norm_sqr() + r.norm_sqr() <= 1.0 + 1e-12);
            // Largest singular value of [[r, t], [t, r]].
            let sigma = (r + t).norm().max((r - t).norm());
            assert!(sigma <= 1.0 + 1e-12, "active at x = {x}: sigma = {sigma}");
        }
    }

    #[test]
    fn active_parameters_rejected() {
        let cav = CavityParams { t0: 1.0, rho0: 0.3, r_inf: 1.0, ..CavityParams::default() };
        assert!(cav.validate().is_err());
    }
}

//! Model parameters for the two-ensemble trapped-ion system.
//!
//! Two layers of description are supported. [`MicroscopicParams`] carries the
//! laboratory-level quantities (ion numbers, drive amplitude, Rabi frequency,
//! Lamb-Dicke parameter, trap and transition frequencies) from which the
//! effective drive strength and collective couplings are derived.
//! [`ModelParams`] is the effective three-mode description everything else in
//! the crate consumes: collective couplings `g_a`, `g_b`, decay rates
//! `gamma_a`, `gamma_b`, vibrational heating rate `kappa`, drive strength
//! `chi`, and the two thermal occupations.
//!
//! All rates are expressed in units of `kappa`; `kappa = 1` is the default so
//! that the unit convention stays visible and testable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which first sideband the addressing laser is tuned to.
///
/// Red (`omega_i = omega_eg - nu`) produces a beam-splitter coupling between
/// the vibration and the collective modes; blue (`omega_i = omega_eg + nu`)
/// produces a parametric coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SidebandCase {
    Red,
    Blue,
}

impl std::fmt::Display for SidebandCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SidebandCase::Red => write!(f, "red"),
            SidebandCase::Blue => write!(f, "blue"),
        }
    }
}

impl std::str::FromStr for SidebandCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "red" => Ok(SidebandCase::Red),
            "blue" => Ok(SidebandCase::Blue),
            other => Err(Error::InvalidParams(format!(
                "unknown sideband case '{other}' (expected 'red' or 'blue')"
            ))),
        }
    }
}

/// Laboratory-level parameters of the trapped-ion setup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicroscopicParams {
    /// Ion count in the driven (left) ensemble.
    pub n_ions_a: u64,
    /// Ion count in the undriven (right) ensemble.
    pub n_ions_b: u64,
    /// Amplitude of the external drive on the left ensemble.
    pub drive_amplitude: f64,
    /// Rabi frequency of the addressing laser (same for every ion).
    pub rabi: f64,
    /// Lamb-Dicke parameter; the first-order expansion requires eta << 1.
    pub lamb_dicke: f64,
    /// Trap (vibrational) frequency.
    pub trap_freq: f64,
    /// Internal transition frequency between ionic states e and g.
    pub transition_freq: f64,
    /// Frequency of the addressing laser.
    pub laser_freq: f64,
    /// Frequency of the external probe/drive field.
    pub probe_freq: f64,
}

impl MicroscopicParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_ions_a < 1 || self.n_ions_b < 1 {
            return Err(Error::InvalidParams(format!(
                "ion counts must be >= 1 (got N_a = {}, N_b = {})",
                self.n_ions_a, self.n_ions_b
            )));
        }
        if !(self.lamb_dicke > 0.0 && self.lamb_dicke <= 0.3) {
            return Err(Error::InvalidParams(format!(
                "Lamb-Dicke parameter must lie in (0, 0.3], got {}",
                self.lamb_dicke
            )));
        }
        for (name, v) in [
            ("drive_amplitude", self.drive_amplitude),
            ("rabi", self.rabi),
            ("trap_freq", self.trap_freq),
            ("transition_freq", self.transition_freq),
            ("laser_freq", self.laser_freq),
            ("probe_freq", self.probe_freq),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be a positive finite frequency, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Probe detuning from the internal transition, `omega_eg - omega_f`.
    pub fn detuning(&self) -> f64 {
        self.transition_freq - self.probe_freq
    }
}

/// Effective drive and coupling strengths derived from the microscopic
/// description after bosonization of the collective low excitations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveCouplings {
    /// Collective drive strength, `chi = sqrt(N_a) * epsilon`.
    pub chi: f64,
    /// Vibration coupling of the driven ensemble, `g_a = eta * sqrt(N_a) * Omega`.
    pub g_a: f64,
    /// Vibration coupling of the right ensemble, `g_b = eta * sqrt(N_b) * Omega`.
    pub g_b: f64,
}

/// Collective drive strength and vibration couplings from the microscopic
/// parameters: `chi = sqrt(N_a) eps` and `g_y = eta sqrt(N_y) Omega`.
pub fn effective_params(micro: &MicroscopicParams) -> Result<EffectiveCouplings> {
    micro.validate()?;
    Ok(EffectiveCouplings {
        chi: (micro.n_ions_a as f64).sqrt() * micro.drive_amplitude,
        g_a: micro.lamb_dicke * (micro.n_ions_a as f64).sqrt() * micro.rabi,
        g_b: micro.lamb_dicke * (micro.n_ions_b as f64).sqrt() * micro.rabi,
    })
}

/// Effective three-mode model parameters.
///
/// The probe detuning `Delta = omega_eg - omega_f` is supplied per evaluation
/// rather than stored here, so one parameter set describes a whole response
/// sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub case: SidebandCase,
    /// Coupling of the driven ensemble's collective mode to the vibration.
    pub g_a: f64,
    /// Coupling of the right ensemble's collective mode to the vibration.
    pub g_b: f64,
    /// Decay rate of collective mode A.
    pub gamma_a: f64,
    /// Decay rate of collective mode B.
    pub gamma_b: f64,
    /// Heating rate of the vibrational mode (the unit scale, default 1).
    pub kappa: f64,
    /// Drive strength on mode A (default 1).
    pub chi: f64,
    /// Thermal occupation of the vibrational bath, N(nu).
    pub n_vib: f64,
    /// Thermal occupation of the internal-transition baths, N(omega_eg).
    pub n_eg: f64,
}

impl ModelParams {
    /// Parameters with `kappa = chi = 1` and zero-temperature baths.
    pub fn new(case: SidebandCase, g_a: f64, g_b: f64, gamma_a: f64, gamma_b: f64) -> Self {
        ModelParams {
            case,
            g_a,
            g_b,
            gamma_a,
            gamma_b,
            kappa: 1.0,
            chi: 1.0,
            n_vib: 0.0,
            n_eg: 0.0,
        }
    }

    pub fn red(g_a: f64, g_b: f64, gamma_a: f64, gamma_b: f64) -> Self {
        Self::new(SidebandCase::Red, g_a, g_b, gamma_a, gamma_b)
    }

    pub fn blue(g_a: f64, g_b: f64, gamma_a: f64, gamma_b: f64) -> Self {
        Self::new(SidebandCase::Blue, g_a, g_b, gamma_a, gamma_b)
    }

    pub fn with_chi(mut self, chi: f64) -> Self {
        self.chi = chi;
        self
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_thermal(mut self, n_vib: f64, n_eg: f64) -> Self {
        self.n_vib = n_vib;
        self.n_eg = n_eg;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("g_a", self.g_a),
            ("g_b", self.g_b),
            ("chi", self.chi),
            ("n_vib", self.n_vib),
            ("n_eg", self.n_eg),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("gamma_a", self.gamma_a),
            ("gamma_b", self.gamma_b),
            ("kappa", self.kappa),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn micro(n_a: u64, eps: f64, rabi: f64, eta: f64, n_b: u64) -> MicroscopicParams {
        MicroscopicParams {
            n_ions_a: n_a,
            n_ions_b: n_b,
            drive_amplitude: eps,
            rabi,
            lamb_dicke: eta,
            trap_freq: 1.0,
            transition_freq: 100.0,
            laser_freq: 99.0,
            probe_freq: 100.0,
        }
    }

    #[test]
    fn effective_params_single_ion() {
        let c = effective_params(&micro(1, 1.0, 1.0, 0.1, 1)).unwrap();
        assert_eq!(c.chi, 1.0);
        assert_eq!(c.g_a, 0.1);
        assert_eq!(c.g_b, 0.1);
    }

    #[test]
    fn effective_params_scales_with_sqrt_counts() {
        let c = effective_params(&micro(4, 0.5, 2.0, 0.05, 9)).unwrap();
        assert!((c.chi - 1.0).abs() < 1e-15);
        assert!((c.g_a - 0.2).abs() < 1e-15);
        assert!((c.g_b - 0.3).abs() < 1e-15);
    }

    #[test]
    fn effective_params_large_ensembles() {
        // eta sqrt(N) Omega = 0.1 * 10 * 1 for both ensembles
        let c = effective_params(&micro(100, 1.0, 1.0, 0.1, 100)).unwrap();
        assert!((c.g_a - 1.0).abs() < 1e-15);
        assert!((c.g_b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_zero_counts() {
        assert!(effective_params(&micro(0, 1.0, 1.0, 0.1, 1)).is_err());
        assert!(effective_params(&micro(1, 1.0, 1.0, 0.1, 0)).is_err());
    }

    #[test]
    fn rejects_bad_lamb_dicke_and_frequencies() {
        let mut m = micro(1, 1.0, 1.0, 0.5, 1);
        assert!(m.validate().is_err());
        m.lamb_dicke = 0.1;
        m.trap_freq = -1.0;
        assert!(m.validate().is_err());
    }

    #[test]
    fn model_params_validation() {
        assert!(ModelParams::red(10.0, 10.0, 3.0, 3.0).validate().is_ok());
        assert!(ModelParams::red(-1.0, 0.0, 3.0, 3.0).validate().is_err());
        assert!(ModelParams::red(1.0, 1.0, 0.0, 3.0).validate().is_err());
        assert!(ModelParams::red(1.0, 1.0, 3.0, 3.0)
            .with_kappa(0.0)
            .validate()
            .is_err());
    }

    #[test]
    fn detuning_is_transition_minus_probe() {
        let m = micro(1, 1.0, 1.0, 0.1, 1);
        assert_eq!(m.detuning(), 0.0);
    }
}

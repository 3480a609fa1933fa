//! Standard quantum-mechanical predictions for the successive-impact setup.
//!
//! Photon 1 crosses one beam-splitter (phase `phi11`); photon 2 crosses two
//! in a row (phases `phi21` then `phi22`). With full indistinguishability the
//! coincidence law is
//!
//! ```text
//! P(s, w) = 1/4 + (s*w/8) * [cos(phi11 - phi21 - phi22) - cos(phi11 - phi21 + phi22)]
//! ```
//!
//! and the correlation is `E = sin(phi11 - phi21) * sin(phi22)`.

use serde::{Deserialize, Serialize};

use crate::distribution::{JointDistribution, Outcome};
use crate::error::{ensure_finite, Result};

/// A phase parameter in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Phase(f64);

impl Phase {
    pub fn from_radians(value: f64) -> Result<Self> {
        ensure_finite("phase", value)?;
        Ok(Self(value))
    }

    pub fn from_degrees(value: f64) -> Result<Self> {
        ensure_finite("phase", value)?;
        Ok(Self(value.to_radians()))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }
}

/// The three interferometer phases `(phi11, phi21, phi22)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSettings {
    pub phi11: Phase,
    pub phi21: Phase,
    pub phi22: Phase,
}

impl PhaseSettings {
    pub fn from_degrees(phi11: f64, phi21: f64, phi22: f64) -> Result<Self> {
        Ok(Self {
            phi11: Phase::from_degrees(phi11)?,
            phi21: Phase::from_degrees(phi21)?,
            phi22: Phase::from_degrees(phi22)?,
        })
    }

    pub fn from_radians(phi11: f64, phi21: f64, phi22: f64) -> Result<Self> {
        Ok(Self {
            phi11: Phase::from_radians(phi11)?,
            phi21: Phase::from_radians(phi21)?,
            phi22: Phase::from_radians(phi22)?,
        })
    }

    /// The settings proposed for the decisive experiment: 45°, -45°, 90°.
    pub fn decisive() -> Self {
        Self::from_degrees(45.0, -45.0, 90.0).expect("finite constants")
    }

    pub fn degrees(&self) -> [f64; 3] {
        [self.phi11.degrees(), self.phi21.degrees(), self.phi22.degrees()]
    }
}

fn interference_term(s: &PhaseSettings) -> f64 {
    let d = s.phi11.0 - s.phi21.0;
    (d - s.phi22.0).cos() - (d + s.phi22.0).cos()
}

/// Joint probability for detections after BS11 and BS22 (full indistinguishability).
pub fn qm_joint_probability(settings: &PhaseSettings, sigma: Outcome, omega: Outcome) -> f64 {
    0.25 + sigma.sign() * omega.sign() / 8.0 * interference_term(settings)
}

/// The full table of [`qm_joint_probability`].
pub fn qm_joint(settings: &PhaseSettings) -> JointDistribution {
    JointDistribution::from_fn(|s, w| qm_joint_probability(settings, s, w))
        .expect("closed form is normalized for finite phases")
}

/// Correlation coefficient for detections after BS11 and BS22.
pub fn qm_correlation(settings: &PhaseSettings) -> f64 {
    0.5 * interference_term(settings)
}

/// Correlation for detections after BS11 and BS21 only: `cos(phi11 - phi21)`.
pub fn qm_single_pair_correlation(phi11: Phase, phi21: Phase) -> f64 {
    (phi11.0 - phi21.0).cos()
}

/// Table `1/4 + (s*w/4) cos(phi11 - phi21)` for detections after BS11 and BS21.
pub fn qm_single_pair_joint(phi11: Phase, phi21: Phase) -> JointDistribution {
    JointDistribution::with_correlation(qm_single_pair_correlation(phi11, phi21))
}

/// Table when the input sub-ensemble (or path) is knowable: every entry 1/4.
pub fn qm_distinguishable_joint() -> JointDistribution {
    JointDistribution::uniform()
}

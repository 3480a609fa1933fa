//! Independent amplitude-level model of the interferometer.
//!
//! The two-photon state is held as a 2x2 amplitude matrix `psi[m1][m2]` over
//! the path modes of photon 1 and photon 2. Single-photon elements act on the
//! left (photon 1) or on the right (photon 2). Indistinguishable alternatives
//! are summed at amplitude level; probabilities are taken only at detection.
//!
//! The optical layout (which arm carries each phase, and with which sign) is
//! not fixed by the probability law alone, so [`calibrate`] searches the
//! discrete convention space for the layouts that reproduce
//! [`crate::quantum::qm_joint`]. [`InterferometerTopology::calibrated`] is the
//! layout it selects:
//!
//! * source `(|0,0> + |1,1>)/sqrt(2)`
//! * every beam-splitter symmetric, `[[1, i], [i, 1]]/sqrt(2)`
//! * `+phi11` on arm 0 of photon 1 before BS11
//! * `-phi21` on arm 0 of photon 2 before BS21
//! * `+phi22` on arm 0 of photon 2 between BS21 and BS22
//! * output port 0 is the `+1` detector on both sides

use num_complex::Complex64;

use crate::distribution::{JointDistribution, Outcome};
use crate::error::{Error, Result};
use crate::quantum::{qm_joint, PhaseSettings};

pub const UNITARITY_TOL: f64 = 1e-12;

type Matrix2 = [[Complex64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    pub matrix: Matrix2,
}

impl BeamSplitter {
    /// Lossless 50/50 splitter, transmission `1/sqrt(2)`, reflection `i/sqrt(2)`.
    pub fn symmetric() -> Self {
        let t = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let r = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
        Self {
            matrix: [[t, r], [r, t]],
        }
    }

    /// Largest entry of `|U^dagger U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let m = &self.matrix;
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for row in m {
                    acc += row[i].conj() * row[j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSlot {
    Phi11,
    Phi21,
    Phi22,
}

impl PhaseSlot {
    fn value(self, s: &PhaseSettings) -> f64 {
        match self {
            PhaseSlot::Phi11 => s.phi11.radians(),
            PhaseSlot::Phi21 => s.phi21.radians(),
            PhaseSlot::Phi22 => s.phi22.radians(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    /// Phase `exp(i * sign * phi)` on one arm.
    Shift {
        arm: usize,
        slot: PhaseSlot,
        sign: f64,
    },
    Splitter(BeamSplitter),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterferometerTopology {
    /// Relative phase of the `|1,1>` term of the source state.
    pub source_phase: f64,
    pub photon1: Vec<Element>,
    pub photon2: Vec<Element>,
    /// Output port read as the `+1` detector, per photon.
    pub plus_port: [usize; 2],
}

/// The discrete layout choices searched by [`calibrate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Convention {
    pub arms: [usize; 3],
    pub signs: [i8; 3],
    pub source_flip: bool,
    pub plus_port: [usize; 2],
}

impl Convention {
    pub fn topology(&self) -> InterferometerTopology {
        let shift = |k: usize, slot| Element::Shift {
            arm: self.arms[k],
            slot,
            sign: f64::from(self.signs[k]),
        };
        let bs = Element::Splitter(BeamSplitter::symmetric());
        InterferometerTopology {
            source_phase: if self.source_flip { std::f64::consts::PI } else { 0.0 },
            photon1: vec![shift(0, PhaseSlot::Phi11), bs],
            photon2: vec![shift(1, PhaseSlot::Phi21), bs, shift(2, PhaseSlot::Phi22), bs],
            plus_port: self.plus_port,
        }
    }

    fn all() -> impl Iterator<Item = Convention> {
        (0..256u32).map(|bits| {
            let b = |k: u32| (bits >> k) & 1 == 1;
            Convention {
                arms: [b(0) as usize, b(1) as usize, b(2) as usize],
                signs: [3, 4, 5].map(|k| if b(k) { -1 } else { 1 }),
                source_flip: b(6),
                plus_port: [0, b(7) as usize],
            }
        })
    }
}

impl InterferometerTopology {
    /// Layout that reproduces the closed-form coincidence law.
    pub fn calibrated() -> Self {
        Convention {
            arms: [0, 0, 0],
            signs: [1, -1, 1],
            source_flip: false,
            plus_port: [0, 0],
        }
        .topology()
    }

    /// All phases on arm 0 with positive sign. Off by `phi21 -> -phi21`.
    pub fn naive() -> Self {
        Convention {
            arms: [0, 0, 0],
            signs: [1, 1, 1],
            source_flip: false,
            plus_port: [0, 0],
        }
        .topology()
    }

    pub fn validate(&self) -> Result<()> {
        if self.plus_port.iter().any(|&p| p > 1) {
            return Err(Error::Config("plus_port must be 0 or 1".into()));
        }
        for el in self.photon1.iter().chain(&self.photon2) {
            match el {
                Element::Splitter(bs) => {
                    let defect = bs.unitarity_defect();
                    if defect.is_nan() || defect > UNITARITY_TOL {
                        return Err(Error::Config(format!(
                            "beam-splitter is not unitary (defect {defect:e})"
                        )));
                    }
                }
                Element::Shift { arm, sign, .. } => {
                    if *arm > 1 || !sign.is_finite() {
                        return Err(Error::Config("phase shift needs arm 0|1 and a finite sign".into()));
                    }
                }
            }
        }
        if !self.source_phase.is_finite() {
            return Err(Error::Config("source phase must be finite".into()));
        }
        Ok(())
    }
}

fn element_matrix(el: &Element, settings: &PhaseSettings) -> Matrix2 {
    match *el {
        Element::Splitter(bs) => bs.matrix,
        Element::Shift { arm, slot, sign } => {
            let one = Complex64::new(1.0, 0.0);
            let zero = Complex64::new(0.0, 0.0);
            let mut m = [[one, zero], [zero, one]];
            m[arm][arm] = Complex64::from_polar(1.0, sign * slot.value(settings));
            m
        }
    }
}

fn mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn chain(elements: &[Element], settings: &PhaseSettings) -> Matrix2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    elements.iter().fold([[one, zero], [zero, one]], |acc, el| {
        mul(&element_matrix(el, settings), &acc)
    })
}

/// Coincidence probabilities from amplitude propagation through `topology`.
pub fn amplitude_oracle(settings: &PhaseSettings, topology: &InterferometerTopology) -> Result<JointDistribution> {
    topology.validate()?;
    let norm = std::f64::consts::FRAC_1_SQRT_2;
    let zero = Complex64::new(0.0, 0.0);
    let source = [
        [Complex64::new(norm, 0.0), zero],
        [zero, Complex64::from_polar(norm, topology.source_phase)],
    ];
    let u1 = chain(&topology.photon1, settings);
    let u2 = chain(&topology.photon2, settings);
    // psi' = U1 psi U2^T
    let u2t = [[u2[0][0], u2[1][0]], [u2[0][1], u2[1][1]]];
    let psi = mul(&mul(&u1, &source), &u2t);

    let port = |photon: usize, o: Outcome| match o {
        Outcome::Plus => topology.plus_port[photon],
        Outcome::Minus => 1 - topology.plus_port[photon],
    };
    JointDistribution::from_fn(|s, w| psi[port(0, s)][port(1, w)].norm_sqr())
}

/// Maximum entrywise deviation between the oracle and the closed form over a
/// `steps^3` grid covering `[0, 2pi)` in each phase.
pub fn max_deviation_on_grid(topology: &InterferometerTopology, steps: usize) -> Result<f64> {
    let h = std::f64::consts::TAU / steps as f64;
    let mut worst: f64 = 0.0;
    for i in 0..steps {
        for j in 0..steps {
            for k in 0..steps {
                let s = PhaseSettings::from_radians(i as f64 * h, j as f64 * h, k as f64 * h)?;
                let dev = amplitude_oracle(&s, topology)?.max_abs_diff(&qm_joint(&s));
                worst = worst.max(dev);
            }
        }
    }
    Ok(worst)
}

/// Every discrete layout that reproduces the closed form on a 7^3 sweep.
pub fn calibrate() -> Vec<Convention> {
    Convention::all()
        .filter(|c| max_deviation_on_grid(&c.topology(), 7).is_ok_and(|d| d < 1e-12))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::PAIRS;
    use crate::quantum::qm_joint_probability;

    #[test]
    fn symmetric_splitter_is_unitary() {
        assert!(BeamSplitter::symmetric().unitarity_defect() < 1e-15);
    }

    #[test]
    fn calibrated_layout_matches_decisive_settings() {
        let s = PhaseSettings::decisive();
        let d = amplitude_oracle(&s, &InterferometerTopology::calibrated()).unwrap();
        for (x, y) in PAIRS {
            assert!((d.get(x, y) - qm_joint_probability(&s, x, y)).abs() < 1e-12);
        }
    }

    #[test]
    fn naive_layout_flips_sign() {
        let dev = max_deviation_on_grid(&InterferometerTopology::naive(), 5).unwrap();
        assert!(dev > 0.1, "naive layout unexpectedly matched (dev {dev})");
    }

    #[test]
    fn calibration_contains_shipped_layout() {
        let found = calibrate();
        assert!(!found.is_empty());
        let shipped = InterferometerTopology::calibrated();
        assert!(found.iter().any(|c| c.topology() == shipped));
    }

    #[test]
    fn any_layout_is_normalized() {
        let s = PhaseSettings::from_degrees(12.0, 77.0, -140.0).unwrap();
        for c in Convention::all() {
            let d = amplitude_oracle(&s, &c.topology()).unwrap();
            assert!((d.total() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let mut topo = InterferometerTopology::calibrated();
        let mut bs = BeamSplitter::symmetric();
        bs.matrix[0][0] = Complex64::new(0.9, 0.0);
        topo.photon2[1] = Element::Splitter(bs);
        let err = amplitude_oracle(&PhaseSettings::decisive(), &topo).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }
}

//! Outcome signs and joint probability tables over the four detector pairs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when validating normalization of a table.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// A detector outcome, `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const ALL: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Outcome {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn from_sign(sign: i32) -> Result<Outcome> {
        match sign {
            1 => Ok(Outcome::Plus),
            -1 => Ok(Outcome::Minus),
            other => Err(Error::Input(format!("outcome sign must be +1 or -1, got {other}"))),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Plus => "+",
            Outcome::Minus => "-",
        })
    }
}

/// The four outcome pairs in canonical order `(+,+), (+,-), (-,+), (-,-)`.
pub const PAIRS: [(Outcome, Outcome); 4] = [
    (Outcome::Plus, Outcome::Plus),
    (Outcome::Plus, Outcome::Minus),
    (Outcome::Minus, Outcome::Plus),
    (Outcome::Minus, Outcome::Minus),
];

/// Probability table `P(sigma, omega)` for photon 1 outcome `sigma` and
/// photon 2 outcome `omega`.
///
/// Construction checks that every entry lies in `[0, 1]` and that the table
/// sums to one within [`NORMALIZATION_TOL`]. Entries that round to a tiny
/// negative value (closed forms evaluated in floating point) are clamped to
/// zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    p: [[f64; 2]; 2],
}

impl JointDistribution {
    pub fn new(p: [[f64; 2]; 2]) -> Result<Self> {
        let mut p = p;
        let mut total = 0.0;
        for row in p.iter_mut() {
            for v in row.iter_mut() {
                if !v.is_finite() || *v < -NORMALIZATION_TOL || *v > 1.0 + NORMALIZATION_TOL {
                    return Err(Error::Input(format!("probability {v} outside [0, 1]")));
                }
                *v = v.clamp(0.0, 1.0);
                total += *v;
            }
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Input(format!("table sums to {total}, expected 1")));
        }
        Ok(Self { p })
    }

    /// Builds a table from a function of the outcome pair.
    pub fn from_fn(mut f: impl FnMut(Outcome, Outcome) -> f64) -> Result<Self> {
        let mut p = [[0.0; 2]; 2];
        for (s, w) in PAIRS {
            p[s.index()][w.index()] = f(s, w);
        }
        Self::new(p)
    }

    pub fn uniform() -> Self {
        Self { p: [[0.25; 2]; 2] }
    }

    /// Table of the form `1/4 + sigma*omega*e/4`, whose correlation is `e`.
    pub(crate) fn with_correlation(e: f64) -> Self {
        let same = 0.25 + 0.25 * e;
        let diff = 0.25 - 0.25 * e;
        Self {
            p: [[same.max(0.0), diff.max(0.0)], [diff.max(0.0), same.max(0.0)]],
        }
    }

    pub fn get(&self, sigma: Outcome, omega: Outcome) -> f64 {
        self.p[sigma.index()][omega.index()]
    }

    /// Entries in canonical order `(+,+), (+,-), (-,+), (-,-)`.
    pub fn entries(&self) -> [f64; 4] {
        PAIRS.map(|(s, w)| self.get(s, w))
    }

    /// `sum sigma*omega*P(sigma, omega)`.
    pub fn correlation(&self) -> f64 {
        PAIRS.iter().map(|&(s, w)| s.sign() * w.sign() * self.get(s, w)).sum()
    }

    pub fn total(&self) -> f64 {
        self.entries().iter().sum()
    }

    pub fn marginal_first(&self, sigma: Outcome) -> f64 {
        Outcome::ALL.iter().map(|&w| self.get(sigma, w)).sum()
    }

    pub fn marginal_second(&self, omega: Outcome) -> f64 {
        Outcome::ALL.iter().map(|&s| self.get(s, omega)).sum()
    }

    /// Largest absolute entrywise difference to `other`.
    pub fn max_abs_diff(&self, other: &JointDistribution) -> f64 {
        PAIRS
            .iter()
            .map(|&(s, w)| (self.get(s, w) - other.get(s, w)).abs())
            .fold(0.0, f64::max)
    }

    /// Checks normalization and that both single-photon marginals equal 1/2.
    pub fn has_fair_marginals(&self, tol: f64) -> bool {
        (self.total() - 1.0).abs() <= tol
            && Outcome::ALL
                .iter()
                .all(|&o| (self.marginal_first(o) - 0.5).abs() <= tol && (self.marginal_second(o) - 0.5).abs() <= tol)
    }
}

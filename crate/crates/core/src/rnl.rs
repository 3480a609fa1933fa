//! Timing-dependent prediction rules of relativistic nonlocality (RNL).
//!
//! * Two before impacts: outcomes are locally determined and uncorrelated
//!   (uniform 1/4 table).
//! * One before and one non-before impact: the non-before photon takes the
//!   partner's before value into account and the quantum table is recovered.
//! * Two non-before impacts: each non-before photon conditions on the value
//!   its partner *would have* produced in a before impact. The joint table is
//!
//!   ```text
//!   P(s', w') = sum_{s,w} Pb(s, w) * C1(s' | w) * C2(w' | s)
//!   ```
//!
//!   where `Pb` is the two-before table and the conditionals keep only the
//!   partner's index. Because `Pb` is uniform this table is uniform too, and
//!   the correlation factorizes as `E(b,b) * E(a,b) * E(b,a) = 0`.
//!
//! The alternative variant replaces the `(a11[21], a22)` rule by the quantum
//! table.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distribution::{JointDistribution, Outcome, PAIRS};
use crate::error::{Error, Result};
use crate::quantum::{qm_distinguishable_joint, qm_joint, qm_single_pair_joint, PhaseSettings};
use crate::timing::{Pairing, TimingAssignment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelVariant {
    #[serde(rename = "QM")]
    Qm,
    #[serde(rename = "RNL_STANDARD")]
    RnlStandard,
    #[serde(rename = "RNL_ALTERNATIVE")]
    RnlAlternative,
}

impl ModelVariant {
    pub const ALL: [ModelVariant; 3] = [
        ModelVariant::Qm,
        ModelVariant::RnlStandard,
        ModelVariant::RnlAlternative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelVariant::Qm => "QM",
            ModelVariant::RnlStandard => "RNL_STANDARD",
            ModelVariant::RnlAlternative => "RNL_ALTERNATIVE",
        }
    }
}

impl fmt::Display for ModelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "QM" => Ok(ModelVariant::Qm),
            "RNL_STANDARD" | "RNL" => Ok(ModelVariant::RnlStandard),
            "RNL_ALTERNATIVE" | "RNL_ALT" => Ok(ModelVariant::RnlAlternative),
            other => Err(Error::Input(format!("unknown model variant `{other}`"))),
        }
    }
}

/// Which-path knowledge switches.
///
/// `condition1`: detecting photon 1 after BS11 and photon 2 between BS21
/// and BS22 does not reveal the input sub-ensemble.
/// `condition2`: detecting photon 1 after BS11 and photon 2 after BS22 does
/// not reveal photon 2's path before BS21 or BS22.
///
/// A false flag replaces the corresponding quantum table by the uniform one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Indistinguishability {
    pub condition1: bool,
    pub condition2: bool,
}

impl Default for Indistinguishability {
    fn default() -> Self {
        Self {
            condition1: true,
            condition2: true,
        }
    }
}

/// The quantum tables the prediction rules are built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QmTables {
    /// Detection after BS11 and BS21.
    pub after_bs21: JointDistribution,
    /// Detection after BS11 and BS22.
    pub after_bs22: JointDistribution,
}

impl QmTables {
    pub fn new(settings: &PhaseSettings, conditions: Indistinguishability) -> Self {
        Self {
            after_bs21: if conditions.condition1 {
                qm_single_pair_joint(settings.phi11, settings.phi21)
            } else {
                qm_distinguishable_joint()
            },
            after_bs22: if conditions.condition2 {
                qm_joint(settings)
            } else {
                qm_distinguishable_joint()
            },
        }
    }
}

/// A non-before impact whose outcome is conditioned on a before value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NonBeforeImpact {
    /// `a11[21]`, conditioned on photon 2's BS21 before value.
    A11After21,
    /// `a11[22]`, conditioned on photon 2's BS22 before value.
    A11After22,
    /// `a22`, conditioned on photon 1's BS11 before value.
    A22,
}

impl NonBeforeImpact {
    fn is_photon1(self) -> bool {
        !matches!(self, NonBeforeImpact::A22)
    }
}

/// `c(target | given)` for one non-before impact given the partner's before
/// value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalTable {
    impact: NonBeforeImpact,
    c: [[f64; 2]; 2],
}

impl ConditionalTable {
    /// Conditional that turns a uniform before table into `mixed`:
    /// `c(target | given) = P_mixed(target, given) / (1/2)`.
    fn from_mixed(impact: NonBeforeImpact, mixed: &JointDistribution) -> Self {
        let mut c = [[0.0; 2]; 2];
        for (t, g) in PAIRS {
            let p = if impact.is_photon1() {
                mixed.get(t, g)
            } else {
                mixed.get(g, t)
            };
            c[t.index()][g.index()] = 2.0 * p;
        }
        Self { impact, c }
    }

    pub fn impact(&self) -> NonBeforeImpact {
        self.impact
    }

    pub fn get(&self, target: Outcome, given: Outcome) -> f64 {
        self.c[target.index()][given.index()]
    }

    /// The conditional keyed on the full before pair `(sigma, omega)` of
    /// photon 1 and photon 2. Only the partner's index is used.
    pub fn given_before_pair(&self, target: Outcome, sigma: Outcome, omega: Outcome) -> f64 {
        if self.impact.is_photon1() {
            self.get(target, omega)
        } else {
            self.get(target, sigma)
        }
    }

    /// Sum over the target outcome for each conditioning value.
    pub fn column_sums(&self) -> [f64; 2] {
        Outcome::ALL.map(|g| Outcome::ALL.iter().map(|&t| self.get(t, g)).sum())
    }
}

fn mixed_table(tables: &QmTables, impact: NonBeforeImpact) -> &JointDistribution {
    match impact {
        NonBeforeImpact::A11After21 => &tables.after_bs21,
        NonBeforeImpact::A11After22 | NonBeforeImpact::A22 => &tables.after_bs22,
    }
}

pub fn conditional_from_before(settings: &PhaseSettings, impact: NonBeforeImpact) -> ConditionalTable {
    conditional_from_tables(&QmTables::new(settings, Indistinguishability::default()), impact)
}

pub fn conditional_from_tables(tables: &QmTables, impact: NonBeforeImpact) -> ConditionalTable {
    ConditionalTable::from_mixed(impact, mixed_table(tables, impact))
}

/// Conditional from the full before pair, without dropping any index:
/// `c(target | s, w) = P_mixed(target, partner) / sum_{own} Pb(own, partner)`
/// where `Pb` is the before table for the experiment.
pub fn conditional_unreduced(
    tables: &QmTables,
    impact: NonBeforeImpact,
    before: &JointDistribution,
    target: Outcome,
    sigma: Outcome,
    omega: Outcome,
) -> f64 {
    let mixed = mixed_table(tables, impact);
    if impact.is_photon1() {
        mixed.get(target, omega) / before.marginal_second(omega)
    } else {
        mixed.get(sigma, target) / before.marginal_first(sigma)
    }
}

/// Two-non-before table `sum Pb(s, w) * C1(s' | w) * C2(w' | s)`.
fn factorized(before: &JointDistribution, photon1: &ConditionalTable, photon2: &ConditionalTable) -> JointDistribution {
    JointDistribution::from_fn(|s_new, w_new| {
        PAIRS
            .iter()
            .map(|&(s, w)| {
                before.get(s, w) * photon1.given_before_pair(s_new, s, w) * photon2.given_before_pair(w_new, s, w)
            })
            .sum()
    })
    .expect("factorized table of normalized conditionals is normalized")
}

pub fn rnl_joint(settings: &PhaseSettings, timing: &TimingAssignment, variant: ModelVariant) -> JointDistribution {
    rnl_joint_with(
        &QmTables::new(settings, Indistinguishability::default()),
        timing.pairing,
        variant,
    )
}

pub fn rnl_joint_with(tables: &QmTables, pairing: Pairing, variant: ModelVariant) -> JointDistribution {
    let detected_after_bs21 = matches!(pairing, Pairing::BeforeBefore21 | Pairing::After21Before21);
    match variant {
        ModelVariant::Qm if detected_after_bs21 => tables.after_bs21,
        ModelVariant::Qm => tables.after_bs22,
        ModelVariant::RnlStandard | ModelVariant::RnlAlternative => match pairing {
            Pairing::BeforeBefore21 | Pairing::BeforeBefore22 => qm_distinguishable_joint(),
            Pairing::After21Before21 => tables.after_bs21,
            Pairing::After22Before22 | Pairing::BeforeNonBefore => tables.after_bs22,
            Pairing::After22NonBefore => factorized(
                &qm_distinguishable_joint(),
                &conditional_from_tables(tables, NonBeforeImpact::A11After22),
                &conditional_from_tables(tables, NonBeforeImpact::A22),
            ),
            Pairing::After21NonBefore if variant == ModelVariant::RnlAlternative => tables.after_bs22,
            Pairing::After21NonBefore => factorized(
                &qm_distinguishable_joint(),
                &conditional_from_tables(tables, NonBeforeImpact::A11After21),
                &conditional_from_tables(tables, NonBeforeImpact::A22),
            ),
        },
    }
}

/// The three correlation factors of a two-non-before pairing:
/// `[E(b,b), E(a,b), E(b,a)]`.
pub fn two_nonbefore_factors(tables: &QmTables, pairing: Pairing) -> Result<[f64; 3]> {
    let before = qm_distinguishable_joint().correlation();
    let partner = tables.after_bs22.correlation();
    match pairing {
        Pairing::After22NonBefore => Ok([before, tables.after_bs22.correlation(), partner]),
        Pairing::After21NonBefore => Ok([before, tables.after_bs21.correlation(), partner]),
        other => Err(Error::Input(format!("{other} is not a two-non-before pairing"))),
    }
}

/// `E(b,b) * E(a,b) * E(b,a)` for `(a11[22], a22)` or `(a11[21], a22)`.
pub fn two_nonbefore_correlation(settings: &PhaseSettings, pairing: Pairing) -> Result<f64> {
    let tables = QmTables::new(settings, Indistinguishability::default());
    let [bb, ab, ba] = two_nonbefore_factors(&tables, pairing)?;
    Ok(bb * ab * ba)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    pub joint: JointDistribution,
    pub correlation: f64,
}

pub fn predict(settings: &PhaseSettings, timing: &TimingAssignment, variant: ModelVariant) -> Prediction {
    predict_with(settings, timing, variant, Indistinguishability::default())
}

pub fn predict_with(
    settings: &PhaseSettings,
    timing: &TimingAssignment,
    variant: ModelVariant,
    conditions: Indistinguishability,
) -> Prediction {
    let joint = rnl_joint_with(&QmTables::new(settings, conditions), timing.pairing, variant);
    Prediction {
        correlation: joint.correlation(),
        joint,
    }
}

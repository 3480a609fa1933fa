//! Two-photon interferometry with successive beam-splitter impacts.
//!
//! Photon 1 meets one beam-splitter (BS11); photon 2 meets two in a row
//! (BS21, then BS22). The crate computes the standard quantum predictions,
//! the timing-dependent predictions of relativistic nonlocality
//! (multisimultaneity), classifies impact timings frame by frame, and
//! generates Monte Carlo coincidence counts to compare the models.
//!
//! ```
//! use rnlsim::{predict, series_preset, schedule_from_geometry, classify, ModelVariant, PhaseSettings};
//!
//! let settings = PhaseSettings::decisive();
//! let timing = classify(&schedule_from_geometry(&series_preset(3)?)?)?;
//! let qm = predict(&settings, &timing, ModelVariant::Qm);
//! let rnl = predict(&settings, &timing, ModelVariant::RnlStandard);
//! assert!((qm.correlation - 1.0).abs() < 1e-12);
//! assert!(rnl.correlation.abs() < 1e-12);
//! # Ok::<(), rnlsim::Error>(())
//! ```

pub mod distribution;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod quantum;
pub mod rnl;
pub mod timing;

pub use distribution::{JointDistribution, Outcome, PAIRS};
pub use error::{Error, Result};
pub use oracle::{amplitude_oracle, InterferometerTopology};
pub use quantum::{
    qm_correlation, qm_distinguishable_joint, qm_joint, qm_joint_probability, qm_single_pair_correlation, Phase,
    PhaseSettings,
};
pub use rnl::{
    conditional_from_before, predict, predict_with, rnl_joint, two_nonbefore_correlation, ConditionalTable,
    Indistinguishability, ModelVariant, NonBeforeImpact, Prediction,
};
pub use timing::{
    boost_time, classify, classify_with_guard, schedule_from_geometry, series_preset, ExperimentGeometry,
    FrameVelocity, ImpactSchedule, Pairing, Site, SpacetimeEvent, TimingAssignment,
};

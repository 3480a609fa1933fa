//! Monte Carlo coincidence generation, correlation estimation, run
//! configuration and comparison reports.

pub mod config;
pub mod estimate;
pub mod report;
pub mod sampling;

pub use config::{ConfigBuilder, GeometrySpec, RunConfig};
pub use estimate::{estimate_correlation, EstimatorResult};
pub use report::{compare_report, run_experiment, ExperimentRun, Report, VariantRun, Verdict, CSV_HEADER};
pub use sampling::{count_coincidences, sample_outcome, substream, CoincidenceCounts};

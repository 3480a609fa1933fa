use std::fmt::Write as _;

use serde::Serialize;

use super::config::RunConfig;
use super::estimate::{estimate_correlation, EstimatorResult};
use super::sampling::{count_coincidences, CoincidenceCounts};
use crate::error::{Error, Result};
use crate::quantum::PhaseSettings;
use crate::rnl::{predict_with, ModelVariant, Prediction};
use crate::timing::{classify_with_guard, schedule_from_geometry, TimingAssignment};

/// Analytic differences larger than this many combined standard errors
/// count as distinguishable.
pub const VERDICT_SIGMAS: f64 = 6.0;

pub const CSV_HEADER: &str = "variant,series,phi11_deg,phi21_deg,phi22_deg,R_pp,R_pm,R_mp,R_mm,e_hat,stderr,e_analytic";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariantRun {
    pub variant: ModelVariant,
    pub prediction: Prediction,
    pub counts: CoincidenceCounts,
    pub estimate: EstimatorResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRun {
    pub settings: PhaseSettings,
    pub timing: TimingAssignment,
    pub runs: Vec<VariantRun>,
}

impl ExperimentRun {
    pub fn counts(&self, variant: ModelVariant) -> Option<CoincidenceCounts> {
        self.runs.iter().find(|r| r.variant == variant).map(|r| r.counts)
    }

    pub fn run(&self, variant: ModelVariant) -> Option<&VariantRun> {
        self.runs.iter().find(|r| r.variant == variant)
    }
}

/// Classifies the configured geometry and samples every variant's table.
pub fn run_experiment(config: &RunConfig) -> Result<ExperimentRun> {
    config.validate()?;
    let settings = config.settings()?;
    let schedule = schedule_from_geometry(&config.geometry.geometry()?)?;
    let timing = classify_with_guard(&schedule, config.guard_band)?;

    let sample = || -> Result<Vec<VariantRun>> {
        config
            .variants
            .iter()
            .map(|&variant| {
                let prediction = predict_with(&settings, &timing, variant, config.conditions);
                let stream = ModelVariant::ALL
                    .iter()
                    .position(|&v| v == variant)
                    .expect("variant is listed in ALL");
                let counts = count_coincidences(
                    &prediction.joint,
                    config.n_events,
                    config.seed,
                    stream,
                    config.chunk_size,
                )?;
                let estimate = estimate_correlation(&counts)?;
                Ok(VariantRun {
                    variant,
                    prediction,
                    counts,
                    estimate,
                })
            })
            .collect()
    };

    let runs = if config.workers == 0 {
        sample()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", config.workers)))?
            .install(sample)?
    };
    Ok(ExperimentRun { settings, timing, runs })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub first: ModelVariant,
    pub second: ModelVariant,
    pub analytic_gap: f64,
    pub combined_stderr: f64,
    pub distinguishable: bool,
}

/// Whether two analytic correlations can be told apart with `n` pairs each.
/// The spread is the binomial standard error `sqrt((1 - E^2)/n)` of each
/// analytic value, combined in quadrature.
pub fn verdict(first: (ModelVariant, f64), second: (ModelVariant, f64), n: u64) -> Verdict {
    let se = |e: f64| ((1.0 - e * e).max(0.0) / n as f64).sqrt();
    let gap = (first.1 - second.1).abs();
    let combined = se(first.1).hypot(se(second.1));
    Verdict {
        first: first.0,
        second: second.0,
        analytic_gap: gap,
        combined_stderr: combined,
        distinguishable: gap > VERDICT_SIGMAS * combined,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub phases_deg: [f64; 3],
    pub n_events: u64,
    pub seed: u64,
    pub experiment: ExperimentRun,
    pub verdicts: Vec<Verdict>,
}

pub fn compare_report(config: &RunConfig) -> Result<Report> {
    let experiment = run_experiment(config)?;
    let mut verdicts = Vec::new();
    for (i, a) in experiment.runs.iter().enumerate() {
        for b in &experiment.runs[i + 1..] {
            verdicts.push(verdict(
                (a.variant, a.prediction.correlation),
                (b.variant, b.prediction.correlation),
                config.n_events,
            ));
        }
    }
    Ok(Report {
        phases_deg: config.phases_deg,
        n_events: config.n_events,
        seed: config.seed,
        experiment,
        verdicts,
    })
}

#[derive(Serialize)]
struct JsonVariantLine {
    kind: &'static str,
    variant: ModelVariant,
    series: Option<u8>,
    timing: String,
    phi11_deg: f64,
    phi21_deg: f64,
    phi22_deg: f64,
    joint: [f64; 4],
    counts: [u64; 4],
    e_hat: f64,
    stderr: f64,
    e_analytic: f64,
    n: u64,
    seed: u64,
}

#[derive(Serialize)]
struct JsonVerdictLine<'a> {
    kind: &'static str,
    #[serde(flatten)]
    verdict: &'a Verdict,
}

fn series_field(series: Option<u8>) -> String {
    series.map(|s| s.to_string()).unwrap_or_default()
}

impl Report {
    pub fn series(&self) -> Option<u8> {
        self.experiment.timing.series
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        let [p11, p21, p22] = self.phases_deg;
        let series = series_field(self.series());
        for r in &self.experiment.runs {
            let [pp, pm, mp, mm] = r.counts.r;
            writeln!(
                out,
                "{},{series},{p11},{p21},{p22},{pp},{pm},{mp},{mm},{},{},{}",
                r.variant, r.estimate.e_hat, r.estimate.stderr, r.prediction.correlation
            )
            .expect("writing to a String");
        }
        out
    }

    pub fn to_json_lines(&self) -> String {
        let [p11, p21, p22] = self.phases_deg;
        let mut out = String::new();
        for r in &self.experiment.runs {
            let line = JsonVariantLine {
                kind: "variant",
                variant: r.variant,
                series: self.series(),
                timing: self.experiment.timing.pairing.to_string(),
                phi11_deg: p11,
                phi21_deg: p21,
                phi22_deg: p22,
                joint: r.prediction.joint.entries(),
                counts: r.counts.r,
                e_hat: r.estimate.e_hat,
                stderr: r.estimate.stderr,
                e_analytic: r.prediction.correlation,
                n: r.estimate.n,
                seed: self.seed,
            };
            out.push_str(&serde_json::to_string(&line).expect("plain data serializes"));
            out.push('\n');
        }
        for v in &self.verdicts {
            let line = JsonVerdictLine {
                kind: "verdict",
                verdict: v,
            };
            out.push_str(&serde_json::to_string(&line).expect("plain data serializes"));
            out.push('\n');
        }
        out
    }

    pub fn to_table(&self) -> String {
        let [p11, p21, p22] = self.phases_deg;
        let timing = &self.experiment.timing;
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "phases    phi11 = {p11} deg, phi21 = {p21} deg, phi22 = {p22} deg");
        let _ = writeln!(
            w,
            "timing    {}  series {}  (BS21 impact {})",
            timing.pairing,
            timing.series.map_or_else(|| "-".to_string(), |s| s.to_string()),
            if timing.bs21_before { "before" } else { "non-before" }
        );
        let _ = writeln!(w, "events    {} per variant, seed {}", self.n_events, self.seed);
        let _ = writeln!(w);
        let _ = writeln!(
            w,
            "{:<16} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
            "variant", "E", "e_hat", "stderr", "R++", "R+-", "R-+", "R--"
        );
        for r in &self.experiment.runs {
            let [pp, pm, mp, mm] = r.counts.r;
            let _ = writeln!(
                w,
                "{:<16} {:>10.6} {:>10.6} {:>10.6} {:>10} {:>10} {:>10} {:>10}",
                r.variant.name(),
                r.prediction.correlation,
                r.estimate.e_hat,
                r.estimate.stderr,
                pp,
                pm,
                mp,
                mm
            );
        }
        if !self.verdicts.is_empty() {
            let _ = writeln!(w);
            for v in &self.verdicts {
                let _ = writeln!(
                    w,
                    "{} vs {}: {} (|dE| = {:.6}, {}*stderr = {:.6})",
                    v.first,
                    v.second,
                    if v.distinguishable {
                        "distinguishable"
                    } else {
                        "indistinguishable"
                    },
                    v.analytic_gap,
                    VERDICT_SIGMAS,
                    VERDICT_SIGMAS * v.combined_stderr
                );
            }
        }
        out
    }
}

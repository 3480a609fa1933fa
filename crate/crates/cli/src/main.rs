//! `rnlsim`: run a successive-impact coincidence experiment and print a
//! QM-vs-RNL comparison report.
//!
//! Exit codes: 0 success, 2 configuration error, 3 ambiguous timing.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use rnlsim::harness::{compare_report, ConfigBuilder};
use rnlsim::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
    JsonLines,
}

#[derive(Debug, Parser)]
#[command(
    name = "rnlsim",
    version,
    about = "Compare QM and RNL predictions for successive beam-splitter impacts"
)]
struct Cli {
    /// Flat `key = value` configuration file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,

    /// Preset lab time series (1, 2 or 3).
    #[arg(long)]
    series: Option<String>,
    #[arg(long = "l11-m", allow_hyphen_values = true)]
    l11_m: Option<String>,
    #[arg(long = "l21-m", allow_hyphen_values = true)]
    l21_m: Option<String>,
    #[arg(long = "l22-m", allow_hyphen_values = true)]
    l22_m: Option<String>,
    #[arg(long = "m11-shift-m", allow_hyphen_values = true)]
    m11_shift_m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta11: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta21: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta22: Option<String>,
    #[arg(long = "phi11-deg", allow_hyphen_values = true)]
    phi11_deg: Option<String>,
    #[arg(long = "phi21-deg", allow_hyphen_values = true)]
    phi21_deg: Option<String>,
    #[arg(long = "phi22-deg", allow_hyphen_values = true)]
    phi22_deg: Option<String>,
    /// Comma-separated: QM, RNL_STANDARD, RNL_ALTERNATIVE.
    #[arg(long)]
    variants: Option<String>,
    #[arg(long = "n-events")]
    n_events: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long = "chunk-size")]
    chunk_size: Option<String>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    workers: Option<String>,
    #[arg(long)]
    condition1: Option<String>,
    #[arg(long)]
    condition2: Option<String>,
    #[arg(long = "guard-band-s")]
    guard_band_s: Option<String>,
}

impl Cli {
    fn overrides(&self) -> Vec<(&'static str, &String)> {
        [
            ("series", &self.series),
            ("l11_m", &self.l11_m),
            ("l21_m", &self.l21_m),
            ("l22_m", &self.l22_m),
            ("m11_shift_m", &self.m11_shift_m),
            ("beta11", &self.beta11),
            ("beta21", &self.beta21),
            ("beta22", &self.beta22),
            ("phi11_deg", &self.phi11_deg),
            ("phi21_deg", &self.phi21_deg),
            ("phi22_deg", &self.phi22_deg),
            ("variants", &self.variants),
            ("n_events", &self.n_events),
            ("seed", &self.seed),
            ("chunk_size", &self.chunk_size),
            ("workers", &self.workers),
            ("condition1", &self.condition1),
            ("condition2", &self.condition2),
            ("guard_band_s", &self.guard_band_s),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
        .collect()
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Ambiguous(_) | Error::Unrepresentable(..) => 3,
        Error::Input(_) | Error::Config(_) => 2,
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    let mut builder = ConfigBuilder::default();
    if let Some(path) = &cli.config {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        builder.load_str(&text)?;
    }
    if let Some(out) = &cli.out {
        builder.set("out", out.display().to_string())?;
    }
    for (key, value) in cli.overrides() {
        builder.set(key, value.as_str())?;
    }
    let config = builder.build()?;
    let report = compare_report(&config)?;
    let text = match cli.format {
        Format::Table => report.to_table(),
        Format::Csv => report.to_csv(),
        Format::JsonLines => report.to_json_lines(),
    };
    match &config.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("rnlsim: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

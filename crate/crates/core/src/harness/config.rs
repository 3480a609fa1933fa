//! Run configuration and its flat `key = value` file format.
//!
//! ```text
//! # decisive experiment
//! series = 3
//! phi11_deg = 45
//! phi21_deg = -45
//! phi22_deg = 90
//! variants = QM, RNL_STANDARD, RNL_ALTERNATIVE
//! n_events = 1000000
//! seed = 7
//! chunk_size = 65536
//! ```
//!
//! Instead of `series`, an explicit geometry may be given with `l11_m`,
//! `l21_m`, `l22_m` and optionally `m11_shift_m`. `beta11`, `beta21` and
//! `beta22` set splitter velocities (units of c). Blank lines and `#`
//! comments are ignored. Unknown or repeated keys are errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quantum::PhaseSettings;
use crate::rnl::{Indistinguishability, ModelVariant};
use crate::timing::{series_preset, ExperimentGeometry, FrameVelocity, DEFAULT_GUARD_BAND};

pub const KEYS: &[&str] = &[
    "series",
    "l11_m",
    "l21_m",
    "l22_m",
    "m11_shift_m",
    "beta11",
    "beta21",
    "beta22",
    "phi11_deg",
    "phi21_deg",
    "phi22_deg",
    "variants",
    "n_events",
    "seed",
    "chunk_size",
    "workers",
    "condition1",
    "condition2",
    "guard_band_s",
    "out",
];

pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeometrySpec {
    Series(u8),
    Explicit(ExperimentGeometry),
}

impl GeometrySpec {
    pub fn geometry(&self) -> Result<ExperimentGeometry> {
        match self {
            GeometrySpec::Series(n) => series_preset(*n),
            GeometrySpec::Explicit(g) => Ok(*g),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub geometry: GeometrySpec,
    /// `(phi11, phi21, phi22)` in degrees, as given.
    pub phases_deg: [f64; 3],
    pub variants: Vec<ModelVariant>,
    pub n_events: u64,
    pub seed: u64,
    pub chunk_size: u64,
    /// Worker threads; 0 uses the global rayon pool.
    pub workers: usize,
    pub conditions: Indistinguishability,
    pub guard_band: f64,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            geometry: GeometrySpec::Series(3),
            phases_deg: [45.0, -45.0, 90.0],
            variants: ModelVariant::ALL.to_vec(),
            n_events: 1_000_000,
            seed: 0,
            chunk_size: DEFAULT_CHUNK_SIZE,
            workers: 0,
            conditions: Indistinguishability::default(),
            guard_band: DEFAULT_GUARD_BAND,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn settings(&self) -> Result<PhaseSettings> {
        let [a, b, c] = self.phases_deg;
        PhaseSettings::from_degrees(a, b, c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_events == 0 {
            return Err(Error::Config("n_events must be at least 1".into()));
        }
        if self.variants.is_empty() {
            return Err(Error::Config("at least one variant is required".into()));
        }
        if self.chunk_size == 0 {
            return Err(Error::Config("chunk_size must be positive".into()));
        }
        if self.guard_band.is_nan() || self.guard_band < 0.0 {
            return Err(Error::Config("guard_band_s must be >= 0".into()));
        }
        self.settings().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn from_file_str(text: &str) -> Result<Self> {
        let mut b = ConfigBuilder::default();
        b.load_str(text)?;
        b.build()
    }
}

/// Collects raw `key = value` entries from files and flag overrides.
#[derive(Debug, Clone, Default)]
pub struct ConfigBuilder {
    entries: BTreeMap<String, String>,
}

fn check_key(key: &str) -> Result<()> {
    if KEYS.contains(&key) {
        Ok(())
    } else {
        Err(Error::Config(format!("unknown key `{key}`")))
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!("bad boolean `{value}` for `{key}`"))),
    }
}

impl ConfigBuilder {
    /// Reads a config file body. Keys repeated within the file are errors.
    pub fn load_str(&mut self, text: &str) -> Result<()> {
        let mut seen = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim();
            check_key(key)?;
            if seen.insert(key.to_string(), ()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
            self.entries.insert(key.to_string(), value.trim().to_string());
        }
        Ok(())
    }

    /// Sets or overrides one key.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        check_key(key)?;
        self.entries.insert(key.to_string(), value.into());
        Ok(())
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.entries.get(key).map(|v| parse(key, v)).transpose()
    }

    pub fn build(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();

        let series: Option<u8> = self.get("series")?;
        let lengths = ["l11_m", "l21_m", "l22_m"]
            .map(|k| self.get::<f64>(k))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let shift: Option<f64> = self.get("m11_shift_m")?;
        let any_explicit = lengths.iter().any(Option::is_some) || shift.is_some();

        let mut geometry = match (series, any_explicit) {
            (Some(_), true) => {
                return Err(Error::Config(
                    "give either `series` or explicit lengths, not both".into(),
                ))
            }
            (Some(n), false) => {
                series_preset(n).map_err(|e| Error::Config(e.to_string()))?;
                GeometrySpec::Series(n)
            }
            (None, true) => match lengths.as_slice() {
                [Some(l11), Some(l21), Some(l22)] => {
                    GeometrySpec::Explicit(ExperimentGeometry::at_rest(*l11, *l21, *l22, shift.unwrap_or(0.0)))
                }
                _ => return Err(Error::Config("explicit geometry needs l11_m, l21_m and l22_m".into())),
            },
            (None, false) => cfg.geometry,
        };

        let betas = ["beta11", "beta21", "beta22"]
            .map(|k| self.get::<f64>(k))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        if betas.iter().any(Option::is_some) {
            let mut g = geometry.geometry()?;
            for (slot, beta) in g.frames.iter_mut().zip(betas) {
                if let Some(b) = beta {
                    *slot = FrameVelocity::new(b).map_err(|e| Error::Config(e.to_string()))?;
                }
            }
            geometry = GeometrySpec::Explicit(g);
        }
        cfg.geometry = geometry;

        for (slot, key) in cfg.phases_deg.iter_mut().zip(["phi11_deg", "phi21_deg", "phi22_deg"]) {
            if let Some(v) = self.get(key)? {
                *slot = v;
            }
        }
        if let Some(v) = self.entries.get("variants") {
            cfg.variants = v
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.parse::<ModelVariant>().map_err(|e| Error::Config(e.to_string())))
                .collect::<Result<_>>()?;
            let mut dedup = cfg.variants.clone();
            dedup.sort();
            dedup.dedup();
            if dedup.len() != cfg.variants.len() {
                return Err(Error::Config("variants listed more than once".into()));
            }
        }
        if let Some(v) = self.get("n_events")? {
            cfg.n_events = v;
        }
        if let Some(v) = self.get("seed")? {
            cfg.seed = v;
        }
        if let Some(v) = self.get("chunk_size")? {
            cfg.chunk_size = v;
        }
        if let Some(v) = self.get("workers")? {
            cfg.workers = v;
        }
        if let Some(v) = self.entries.get("condition1") {
            cfg.conditions.condition1 = parse_bool("condition1", v)?;
        }
        if let Some(v) = self.entries.get("condition2") {
            cfg.conditions.condition2 = parse_bool("condition2", v)?;
        }
        if let Some(v) = self.get("guard_band_s")? {
            cfg.guard_band = v;
        }
        if let Some(v) = self.entries.get("out") {
            cfg.output = Some(PathBuf::from(v));
        }

        cfg.validate()?;
        Ok(cfg)
    }
}

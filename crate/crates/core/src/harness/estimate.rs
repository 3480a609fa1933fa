use serde::{Deserialize, Serialize};

use super::sampling::CoincidenceCounts;
use crate::distribution::PAIRS;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub e_hat: f64,
    pub stderr: f64,
    pub n: u64,
}

/// `E = sum s*w*R(s,w) / sum R(s,w)` with binomial standard error
/// `sqrt((1 - E^2) / n)`.
pub fn estimate_correlation(counts: &CoincidenceCounts) -> Result<EstimatorResult> {
    let n = counts.n_total();
    if n == 0 {
        return Err(Error::Input("no coincidences to estimate from".into()));
    }
    let signed: i128 = PAIRS
        .iter()
        .map(|&(s, w)| {
            let r = i128::from(counts.get(s, w));
            if s == w {
                r
            } else {
                -r
            }
        })
        .sum();
    let e_hat = (signed as f64 / n as f64).clamp(-1.0, 1.0);
    let stderr = ((1.0 - e_hat * e_hat).max(0.0) / n as f64).sqrt();
    Ok(EstimatorResult { e_hat, stderr, n })
}

//! Event sampling and coincidence counting.
//!
//! Randomness comes from ChaCha8 keyed by the run seed. Every chunk of
//! `chunk_size` events reads its own ChaCha stream, numbered
//! `(variant_index << 40) | chunk_index`, so the merged counts do not depend
//! on how chunks are spread over worker threads.

use std::ops::AddAssign;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::{JointDistribution, Outcome, PAIRS};
use crate::error::{Error, Result};

const CHUNK_BITS: u32 = 40;

/// Generator for substream `stream` of the run keyed by `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn stream_id(variant_index: usize, chunk_index: u64) -> u64 {
    ((variant_index as u64) << CHUNK_BITS) | chunk_index
}

/// Draws one outcome pair by inverse CDF over the canonical pair order.
/// Zero-probability pairs are never returned.
pub fn sample_outcome<R: Rng + ?Sized>(rng: &mut R, joint: &JointDistribution) -> (Outcome, Outcome) {
    let u: f64 = rng.random();
    let entries = joint.entries();
    let mut acc = 0.0;
    let mut last_possible = 0;
    for (k, &p) in entries.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last_possible = k;
        if u < acc {
            return PAIRS[k];
        }
    }
    PAIRS[last_possible]
}

/// The four coincidence counts `R(+,+), R(+,-), R(-,+), R(-,-)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoincidenceCounts {
    pub r: [u64; 4],
}

impl CoincidenceCounts {
    pub fn new(r: [u64; 4]) -> Self {
        Self { r }
    }

    pub fn get(&self, sigma: Outcome, omega: Outcome) -> u64 {
        self.r[sigma.index() * 2 + omega.index()]
    }

    pub fn record(&mut self, sigma: Outcome, omega: Outcome) {
        self.r[sigma.index() * 2 + omega.index()] += 1;
    }

    pub fn n_total(&self) -> u64 {
        self.r.iter().sum()
    }
}

impl AddAssign for CoincidenceCounts {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.r.iter_mut().zip(rhs.r) {
            *a += b;
        }
    }
}

fn count_chunk(joint: &JointDistribution, seed: u64, stream: u64, n: u64) -> CoincidenceCounts {
    let mut rng = substream(seed, stream);
    let mut counts = CoincidenceCounts::default();
    for _ in 0..n {
        let (s, w) = sample_outcome(&mut rng, joint);
        counts.record(s, w);
    }
    counts
}

/// Samples `n_events` pairs from `joint`, chunked and run on the current
/// rayon pool.
pub fn count_coincidences(
    joint: &JointDistribution,
    n_events: u64,
    seed: u64,
    variant_index: usize,
    chunk_size: u64,
) -> Result<CoincidenceCounts> {
    if chunk_size == 0 {
        return Err(Error::Config("chunk_size must be positive".into()));
    }
    let n_chunks = n_events.div_ceil(chunk_size);
    if n_chunks >= 1 << CHUNK_BITS {
        return Err(Error::Config("too many chunks; raise chunk_size".into()));
    }
    Ok((0..n_chunks)
        .into_par_iter()
        .map(|k| {
            let n = chunk_size.min(n_events - k * chunk_size);
            count_chunk(joint, seed, stream_id(variant_index, k), n)
        })
        .reduce(CoincidenceCounts::default, |mut a, b| {
            a += b;
            a
        }))
}

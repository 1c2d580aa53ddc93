//! Monte Carlo checks of the analytic revenue and welfare numbers.
//!
//! Values are drawn by inverse-transform sampling through the tail
//! quantile, so atoms and continuous parts are handled uniformly.
//! Trials are split into fixed chunks of 4096, each chunk running on its
//! own counter-indexed RNG stream seeded from the user seed.  Chunk
//! sums are collected in chunk order and folded sequentially, which
//! makes results bit-identical for any worker count, including a serial
//! run.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::pricing::PriceVector;

/// Generator recorded alongside simulated numbers.
pub const RNG_NAME: &str = "chacha8";

const CHUNK_TRIALS: u64 = 4096;

/// Outcome of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult {
    pub trials: u64,
    pub mean: f64,
    /// Sample standard deviation divided by sqrt(trials); 0 for a
    /// single trial.
    pub std_error: f64,
    pub seed: u64,
}

/// Estimates the expected revenue of posting `prices` in order until
/// the first sale.
pub fn simulate_revenue(
    d: &DistributionSpec,
    prices: &PriceVector,
    trials: u64,
    seed: u64,
) -> Result<SimResult> {
    simulate(d, prices, trials, seed, |p, _v| p)
}

/// Estimates the expected welfare, the value of the buyer who ends up
/// with the item (0 when nobody buys).
pub fn simulate_welfare(
    d: &DistributionSpec,
    prices: &PriceVector,
    trials: u64,
    seed: u64,
) -> Result<SimResult> {
    simulate(d, prices, trials, seed, |_p, v| v)
}

fn simulate(
    d: &DistributionSpec,
    prices: &PriceVector,
    trials: u64,
    seed: u64,
    outcome: impl Fn(f64, f64) -> f64 + Sync,
) -> Result<SimResult> {
    if trials == 0 {
        return Err(Error::InvalidParameter(
            "need at least one trial".to_string(),
        ));
    }
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let sums: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let in_chunk = (trials - c * CHUNK_TRIALS).min(CHUNK_TRIALS);
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for _ in 0..in_chunk {
                let mut out = 0.0;
                for &p in prices.prices() {
                    let v = d.quantile_unchecked(unit_open_closed(rng.next_u64()));
                    if v >= p {
                        out = outcome(p, v);
                        break;
                    }
                }
                sum += out;
                sumsq += out * out;
            }
            (sum, sumsq)
        })
        .collect();
    let (sum, sumsq) = sums
        .iter()
        .fold((0.0, 0.0), |acc, s| (acc.0 + s.0, acc.1 + s.1));
    let nf = trials as f64;
    let mean = sum / nf;
    let std_error = if trials > 1 {
        let var = ((sumsq - sum * sum / nf) / (nf - 1.0)).max(0.0);
        (var / nf).sqrt()
    } else {
        0.0
    };
    Ok(SimResult {
        trials,
        mean,
        std_error,
        seed,
    })
}

/// Maps 64 random bits to a uniform draw in `(0, 1]`, the domain of the
/// tail quantile.
#[inline]
fn unit_open_closed(bits: u64) -> f64 {
    ((bits >> 11) + 1) as f64 / 9_007_199_254_740_992.0
}

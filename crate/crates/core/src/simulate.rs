//! Random polynomials with independent uniform `[−1,1]` coefficients and
//! the distribution of the number `N(Ω)` of their roots in a region.
//!
//! Trials are split into fixed-size streams, each driven by its own
//! generator stream, so results do not depend on the thread count.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::regions::ComplexRegion;
use crate::roots::{classify, find_roots_real, Membership};

/// Trials per generator stream.
pub const STREAM_SIZE: u64 = 1 << 16;

/// Coefficients `ξ_0..ξ_n`, i.i.d. uniform on `[−1,1]`; a leading
/// coefficient of exactly zero is redrawn.
pub fn sample_poly(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut c: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    while c[n] == 0.0 {
        c[n] = rng.gen_range(-1.0..=1.0);
    }
    c
}

/// Generator for stream `index` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomPolySummary {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    /// Trials with exactly `k` certified roots in Ω, `k = 0..=n`.
    pub histogram: BTreeMap<usize, u64>,
    pub per_k_frequency: BTreeMap<usize, f64>,
    pub mean_n: f64,
    pub std_error: f64,
    /// Roots whose membership could not be certified; excluded above.
    pub ambiguous_roots: u64,
    /// Shift of `mean_n` if each ambiguous root counted one half.
    pub ambiguous_half_weight: f64,
}

#[derive(Default)]
struct Partial {
    histogram: Vec<u64>,
    ambiguous: u64,
}

fn run_stream(region: &ComplexRegion, n: usize, seed: u64, index: u64, count: u64) -> Result<Partial> {
    let mut rng = stream_rng(seed, index);
    let mut out = Partial { histogram: vec![0; n + 1], ambiguous: 0 };
    for _ in 0..count {
        let coeffs = sample_poly(n, &mut rng);
        let roots = find_roots_real(&coeffs)?;
        let mut k = 0;
        for r in &roots {
            match classify(r, region) {
                Membership::Inside => k += 1,
                Membership::Ambiguous => out.ambiguous += 1,
                Membership::Outside => {}
            }
        }
        out.histogram[k] += 1;
    }
    Ok(out)
}

/// Estimate `E N(Ω)` and the law of `N(Ω)` from `trials` random
/// polynomials of degree `n`.
pub fn estimate_en(region: &ComplexRegion, n: usize, trials: u64, seed: u64) -> Result<RandomPolySummary> {
    if n < 2 || n > crate::counting::MAX_DEGREE {
        return domain(format!("degree n={n} must lie in 2..={}", crate::counting::MAX_DEGREE));
    }
    if trials == 0 {
        return domain("at least one trial is needed");
    }
    let streams = trials.div_ceil(STREAM_SIZE);
    let parts: Vec<Result<Partial>> = (0..streams)
        .into_par_iter()
        .map(|s| {
            let count = STREAM_SIZE.min(trials - s * STREAM_SIZE);
            run_stream(region, n, seed, s, count)
        })
        .collect();
    let mut histogram = vec![0u64; n + 1];
    let mut ambiguous = 0;
    for p in parts {
        let p = p?;
        for (h, v) in histogram.iter_mut().zip(&p.histogram) {
            *h += v;
        }
        ambiguous += p.ambiguous;
    }
    let t = trials as f64;
    let mean: f64 = histogram.iter().enumerate().map(|(k, &c)| k as f64 * c as f64).sum::<f64>() / t;
    let second: f64 = histogram.iter().enumerate().map(|(k, &c)| (k * k) as f64 * c as f64).sum::<f64>() / t;
    let var = if trials > 1 { (second - mean * mean).max(0.0) * t / (t - 1.0) } else { f64::INFINITY };
    Ok(RandomPolySummary {
        n,
        trials,
        seed,
        histogram: histogram.iter().enumerate().map(|(k, &c)| (k, c)).collect(),
        per_k_frequency: histogram.iter().enumerate().map(|(k, &c)| (k, c as f64 / t)).collect(),
        mean_n: mean,
        std_error: (var / t).sqrt(),
        ambiguous_roots: ambiguous,
        ambiguous_half_weight: 0.5 * ambiguous as f64 / t,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// `Vol(A_k) = 2^(n+1)·P(N(Ω) = k)` with binomial standard errors.
pub fn volume_ak_from(summary: &RandomPolySummary) -> BTreeMap<usize, VolumeEstimate> {
    let scale = 2f64.powi(summary.n as i32 + 1);
    let t = summary.trials as f64;
    summary
        .per_k_frequency
        .iter()
        .map(|(&k, &p)| (k, VolumeEstimate { value: scale * p, std_error: scale * (p * (1.0 - p) / t).sqrt() }))
        .collect()
}

pub fn volume_ak_estimate(region: &ComplexRegion, n: usize, trials: u64, seed: u64) -> Result<BTreeMap<usize, VolumeEstimate>> {
    Ok(volume_ak_from(&estimate_en(region, n, trials, seed)?))
}

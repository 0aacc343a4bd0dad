//! Cross-checks between the exact counts, the density and its evaluators:
//! convergence sweeps, symmetry certificates and evaluator agreement.

use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::counting::{enumerate_count_with, CountOptions};
use crate::density::{integrate_psi, prediction_from, psi_closed, psi_mc, psi_polar, Budget, DensityEstimate};
use crate::error::{domain, Result};
use crate::regions::ComplexRegion;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Thresholds and effort for the checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    pub seed: u64,
    pub budget: Budget,
    /// QMC samples per pointwise density evaluation.
    pub density_samples: u64,
    /// Agreement threshold in combined standard errors.
    pub sigma: f64,
    /// Fraction of grid points that must agree.
    pub pass_fraction: f64,
    /// Smallest accepted slope of `|ratio − 1|` against `1/Q`.
    pub min_slope: f64,
    /// Largest accepted `|ratio − 1|` at the last `Q` of a sweep.
    pub terminal_tolerance: f64,
    pub root_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 1,
            budget: Budget::default(),
            density_samples: 1 << 16,
            sigma: 3.0,
            pass_fraction: 0.99,
            min_slope: 0.0,
            terminal_tolerance: 0.10,
            root_tol: crate::roots::DEFAULT_TARGET_RADIUS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub q: u64,
    pub region: String,
    pub psi_exact: u64,
    pub predicted: f64,
    pub predicted_std_error: f64,
    pub ratio: f64,
    /// `(psi_exact − predicted)/Q^n`
    pub scaled_residual: f64,
    pub ambiguous: u64,
    pub reducible: u64,
    pub runtime_s: f64,
}

/// Least-squares line `|ratio − 1| ≈ intercept + slope/Q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub integral: DensityEstimate,
    pub trend: Option<TrendFit>,
    pub status: Status,
}

pub fn fit_trend(qs: &[u64], deviations: &[f64]) -> Option<TrendFit> {
    if qs.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = qs.iter().map(|&q| 1.0 / q as f64).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = deviations.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(deviations).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = deviations.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    Some(TrendFit { slope, intercept: my - slope * mx, r_squared })
}

/// True when the sequence grows strictly at every step.
pub fn monotone_growth(values: &[f64]) -> bool {
    values.len() >= 3 && values.windows(2).all(|w| w[1] > w[0])
}

/// Exact counts against the predicted main term for each `Q`.
pub fn convergence_sweep(n: usize, qs: &[u64], region: &ComplexRegion, config: &VerifyConfig) -> Result<ConvergenceReport> {
    if qs.is_empty() || qs.windows(2).any(|w| w[1] <= w[0]) {
        return domain("Q list must be nonempty and strictly increasing");
    }
    let integral = integrate_psi(region, n, config.budget, config.seed)?;
    let opts = CountOptions { root_tol: config.root_tol };
    let mut rows = Vec::with_capacity(qs.len());
    for &q in qs {
        let start = Instant::now();
        let count = enumerate_count_with(n, q, region, opts)?;
        let runtime_s = start.elapsed().as_secs_f64();
        let pred = prediction_from(q, n, integral)?;
        rows.push(ConvergenceRow {
            n,
            q,
            region: count.region.clone(),
            psi_exact: count.psi,
            predicted: pred.value,
            predicted_std_error: pred.std_error,
            ratio: count.psi as f64 / pred.value,
            scaled_residual: (count.psi as f64 - pred.value) / (q as f64).powi(n as i32),
            ambiguous: count.ambiguous,
            reducible: count.reducible,
            runtime_s,
        });
    }
    let deviations: Vec<f64> = rows.iter().map(|r| (r.ratio - 1.0).abs()).collect();
    let trend = fit_trend(qs, &deviations);
    let residuals: Vec<f64> = rows.iter().map(|r| r.scaled_residual.abs()).collect();
    let last = *deviations.last().expect("nonempty");
    let status = if rows.iter().any(|r| r.ambiguous > 0) {
        Status::Inconclusive
    } else if last <= config.terminal_tolerance
        && trend.map_or(true, |t| t.slope >= config.min_slope)
        && !monotone_growth(&residuals)
    {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(ConvergenceReport { rows, integral, trend, status })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub n: usize,
    pub q: u64,
    /// `(label, region, psi, ambiguous)` for Ω, Ω̄, −Ω and Ω⁻¹.
    pub counts: Vec<(String, String, u64, u64)>,
    pub status: Status,
}

/// `Ψ(Q;Ω) = Ψ(Q;Ω̄) = Ψ(Q;−Ω) = Ψ(Q;Ω⁻¹)`, required exactly.
pub fn symmetry_certificate(n: usize, q: u64, region: &ComplexRegion, opts: CountOptions) -> Result<SymmetryReport> {
    let variants = [
        ("original", region.clone()),
        ("conjugate", region.conjugate()),
        ("negate", region.negate()),
        ("invert", region.invert()),
    ];
    let mut counts = Vec::new();
    for (label, r) in variants {
        let c = enumerate_count_with(n, q, &r, opts)?;
        counts.push((label.to_string(), c.region, c.psi, c.ambiguous));
    }
    let status = if counts.iter().any(|c| c.3 > 0) {
        Status::Inconclusive
    } else if counts.iter().all(|c| c.2 == counts[0].2) {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(SymmetryReport { n, q, counts, status })
}

/// `count` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
    }
}

pub fn grid(xs: &[f64], ys: &[f64]) -> Vec<Complex64> {
    ys.iter().flat_map(|&y| xs.iter().map(move |&x| Complex64::new(x, y))).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCheck {
    pub z: Complex64,
    pub estimates: Vec<DensityEstimate>,
    /// Worst pairwise discrepancy in combined standard errors.
    pub worst_sigma: f64,
    pub agrees: bool,
    /// `|ψ(1/z)·|z|^-4 − ψ(z)|` in combined standard errors.
    pub inversion_sigma: f64,
    pub inversion_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub n: usize,
    pub points: Vec<PointCheck>,
    pub agreement_fraction: f64,
    pub inversion_fraction: f64,
    pub status: Status,
}

/// Discrepancy in combined standard errors; exact pairs compare with a
/// relative rounding allowance.
pub fn discrepancy(a: &DensityEstimate, b: &DensityEstimate) -> f64 {
    let diff = (a.value - b.value).abs();
    let se = a.std_error.hypot(b.std_error);
    let rounding = 1e-12 * a.value.abs().max(b.value.abs());
    if diff <= rounding {
        0.0
    } else if se == 0.0 {
        f64::INFINITY
    } else {
        diff / se
    }
}

fn scaled(e: DensityEstimate, factor: f64) -> DensityEstimate {
    DensityEstimate { value: e.value * factor, std_error: e.std_error * factor, ..e }
}

/// Evaluators compared pairwise at every grid point, plus the inversion
/// law on the same grid.
pub fn density_agreement(n: usize, points: &[Complex64], config: &VerifyConfig) -> Result<DensityReport> {
    for z in points {
        crate::density::DzSpec::new(*z, n)?;
    }
    let samples = config.density_samples;
    let mut checks = Vec::with_capacity(points.len());
    for (i, &z) in points.iter().enumerate() {
        let seed = config.seed.wrapping_add(i as u64);
        let mut estimates = vec![psi_mc(z, n, samples, seed)?, psi_polar(z, n, samples, seed)?];
        if let Some(c) = psi_closed(z, n)? {
            estimates.push(c);
        }
        let mut worst: f64 = 0.0;
        for a in 0..estimates.len() {
            for b in a + 1..estimates.len() {
                worst = worst.max(discrepancy(&estimates[a], &estimates[b]));
            }
        }
        // inversion law with the cheapest evaluator at both ends
        let best = |w: Complex64, s: u64| -> Result<DensityEstimate> {
            match psi_closed(w, n)? {
                Some(e) => Ok(e),
                None => psi_mc(w, n, samples, s),
            }
        };
        let direct = best(z, seed ^ 0x9e37_79b9)?;
        let inverted = scaled(best(z.inv(), seed ^ 0x7f4a_7c15)?, 1.0 / z.norm_sqr().powi(2));
        let inversion_sigma = discrepancy(&direct, &inverted);
        checks.push(PointCheck {
            z,
            estimates,
            worst_sigma: worst,
            agrees: worst <= config.sigma,
            inversion_sigma,
            inversion_agrees: inversion_sigma <= config.sigma,
        });
    }
    let total = checks.len().max(1) as f64;
    let agreement_fraction = checks.iter().filter(|c| c.agrees).count() as f64 / total;
    let inversion_fraction = checks.iter().filter(|c| c.inversion_agrees).count() as f64 / total;
    let status = if agreement_fraction >= config.pass_fraction && inversion_fraction >= config.pass_fraction {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(DensityReport { n, points: checks, agreement_fraction, inversion_fraction, status })
}

//! Closed forms of the density: the full-box zone near the origin, its
//! image under inversion far away, and the quadratic case everywhere.

use num_complex::Complex64;

use super::{check_off_axis, DensityEstimate, Method};
use crate::error::{domain, Result};

pub const SMALL_ZONE: f64 = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
pub const LARGE_ZONE: f64 = 2.0 + std::f64::consts::SQRT_2;

/// `(k+1)z^k − Im z^(k+1)/Im z` for `k = 1..n−1`.
pub(crate) fn derivative_weights(z: Complex64, n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    let mut zk = z; // z^k
    for k in 1..n {
        let zk1 = zk * z;
        out.push(zk * (k as f64 + 1.0) - zk1.im / z.im);
        zk = zk1;
    }
    out
}

fn small_sum(z: Complex64, n: usize) -> f64 {
    let s: f64 = derivative_weights(z, n).iter().map(|w| w.norm_sqr()).sum();
    2f64.powi(n as i32 - 1) / (3.0 * z.im.abs()) * s
}

fn exact(value: f64, method: Method) -> DensityEstimate {
    DensityEstimate { value, std_error: 0.0, method, samples: 0 }
}

/// Valid for `|z| ≤ 1 − 1/√2`, where the constraint region is the whole box.
pub fn psi_closed_small(z: Complex64, n: usize) -> Result<DensityEstimate> {
    check_off_axis(z, n)?;
    if z.norm() > SMALL_ZONE {
        return domain(format!("|z| = {} exceeds 1 − 1/√2", z.norm()));
    }
    Ok(exact(small_sum(z, n), Method::ClosedSmall))
}

/// Valid for `|z| ≥ 2 + √2`: the small-zone sum at `1/z` scaled by `|z|^-4`.
pub fn psi_closed_large(z: Complex64, n: usize) -> Result<DensityEstimate> {
    check_off_axis(z, n)?;
    if z.norm() < LARGE_ZONE {
        return domain(format!("|z| = {} is below 2 + √2", z.norm()));
    }
    Ok(exact(small_sum(z.inv(), n) / z.norm_sqr().powi(2), Method::ClosedLarge))
}

/// The quadratic density: `8|y|/3`, `|y|/(3|x|³)` or `8|y|/(3|z|⁶)`.
pub fn psi_n2(z: Complex64) -> Result<DensityEstimate> {
    check_off_axis(z, 2)?;
    let (x, y) = (z.re.abs(), z.im.abs());
    let r2 = x * x + y * y;
    let value = if r2 <= 1.0 && x <= 0.5 {
        8.0 * y / 3.0
    } else if x >= 0.5 && (x - 1.0).powi(2) + y * y <= 1.0 {
        y / (3.0 * x * x * x)
    } else {
        8.0 * y / (3.0 * r2 * r2 * r2)
    };
    Ok(exact(value, Method::ClosedN2))
}

/// Quadratic repulsion constant `(8/3)·min(1, 1/x₀², 1/(2|x₀|))³`.
pub(crate) fn repulsion_n2(x0: f64) -> f64 {
    let mut m: f64 = 1.0;
    if x0 != 0.0 {
        m = m.min(1.0 / (x0 * x0)).min(1.0 / (2.0 * x0.abs()));
    }
    8.0 / 3.0 * m * m * m
}

//! Small arithmetic functions: gcd, divisors, integer square roots, the
//! Möbius function and the Riemann zeta function at integers ≥ 2.

use crate::error::{domain, Result};

pub use num_integer::gcd;

/// Exact floor square root of a nonnegative 128-bit integer.
pub fn isqrt(n: i128) -> i128 {
    debug_assert!(n >= 0);
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_perfect_square(n: i128) -> bool {
    n >= 0 && {
        let r = isqrt(n);
        r * r == n
    }
}

/// Positive divisors of `n` in increasing order. `divisors(0)` is empty.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Precomputed divisor lists for `1..=limit`, used by the rational-root test
/// in the enumeration hot loop.
#[derive(Debug, Clone)]
pub struct DivisorTable {
    lists: Vec<Vec<u64>>,
}

impl DivisorTable {
    pub fn new(limit: u64) -> Self {
        let limit = limit as usize;
        let mut lists = vec![Vec::new(); limit + 1];
        for d in 1..=limit {
            let mut m = d;
            while m <= limit {
                lists[m].push(d as u64);
                m += d;
            }
        }
        DivisorTable { lists }
    }

    pub fn limit(&self) -> u64 {
        (self.lists.len() - 1) as u64
    }

    /// Divisors of `n`; falls back to trial division beyond the table.
    pub fn get(&self, n: u64) -> std::borrow::Cow<'_, [u64]> {
        match self.lists.get(n as usize) {
            Some(v) if n != 0 => std::borrow::Cow::Borrowed(v.as_slice()),
            _ => std::borrow::Cow::Owned(divisors(n)),
        }
    }
}

/// Möbius function by trial division.
pub fn mobius(j: u64) -> Result<i8> {
    if j == 0 {
        return domain("mobius(0) is undefined");
    }
    let mut n = j;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return Ok(0);
            }
            sign = -sign;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// Möbius values for `1..=limit` via a linear sieve; index 0 is unused.
pub fn mobius_table(limit: usize) -> Vec<i8> {
    let mut mu = vec![1i8; limit + 1];
    let mut is_composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    if limit >= 1 {
        mu[0] = 0;
    }
    for i in 2..=limit {
        if !is_composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > limit {
                break;
            }
            is_composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu
}

const ZETA_3: f64 = 1.202_056_903_159_594_3;

/// Upper bound for the tail `Σ_{j>m} j^{-d}` of the zeta series.
pub fn zeta_tail_bound(d: u32, m: u64) -> f64 {
    1.0 / ((d as f64 - 1.0) * (m as f64).powi(d as i32 - 1))
}

/// Riemann zeta at an integer `d ≥ 2`: built-in constants for `d ≤ 4`,
/// otherwise the direct series truncated where the tail bound drops below
/// 1e-17.
pub fn zeta(d: u32) -> Result<f64> {
    use std::f64::consts::PI;
    match d {
        0 | 1 => domain(format!("zeta({d}) is not finite at this argument")),
        2 => Ok(PI * PI / 6.0),
        3 => Ok(ZETA_3),
        4 => Ok(PI.powi(4) / 90.0),
        _ => {
            let mut m = 1u64;
            while zeta_tail_bound(d, m) > 1e-17 {
                m *= 2;
            }
            // smallest terms first
            let s: f64 = (1..=m).rev().map(|j| (j as f64).powi(-(d as i32))).sum();
            Ok(s)
        }
    }
}

/// Partial sum `Σ_{j≤m} μ(j)/j^d`.
pub fn mobius_partial_sum(d: u32, m: usize) -> f64 {
    let mu = mobius_table(m);
    (1..=m)
        .rev()
        .map(|j| mu[j] as f64 / (j as f64).powi(d as i32))
        .sum()
}

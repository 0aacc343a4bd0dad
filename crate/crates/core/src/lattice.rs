//! Integer and primitive integer points in dilated regions `tA ⊂ ℝ^d`.
//!
//! `λ(tA)` counts integer vectors in `tA`; `λ*(tA)` counts those whose
//! coordinates have gcd 1 (the origin is never primitive). Möbius inversion
//! links the two: `λ*(tA) = Σ_j μ(j)·(λ((t/j)A) − 1)` for star-shaped `A`
//! containing the origin. Scales are exact rationals, so membership is
//! decided in integer arithmetic.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, isqrt, mobius_table, zeta};
use crate::error::{domain, Error, Result};
use crate::regions::Coord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    /// `[−1,1]^d`
    Box,
    /// `[0,1]^d`
    UnitCube,
    /// Closed unit ball.
    Ball,
    /// `{v ≥ 0, Σ v_i ≤ 1}`
    Simplex,
}

impl FromStr for Shape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Shape> {
        match s {
            "box" => Ok(Shape::Box),
            "cube" => Ok(Shape::UnitCube),
            "ball" => Ok(Shape::Ball),
            "simplex" => Ok(Shape::Simplex),
            other => Err(Error::Parse(format!("unknown shape {other:?} (box, cube, ball, simplex)"))),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Box => "box",
            Shape::UnitCube => "cube",
            Shape::Ball => "ball",
            Shape::Simplex => "simplex",
        })
    }
}

/// Positive rational dilation factor `num/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scale {
    pub num: u64,
    pub den: u64,
}

impl Scale {
    pub fn new(num: u64, den: u64) -> Result<Scale> {
        if num == 0 || den == 0 {
            return domain("scale must be a positive rational");
        }
        let g = gcd(num, den);
        Ok(Scale { num: num / g, den: den / g })
    }

    pub fn integer(t: u64) -> Result<Scale> {
        Scale::new(t, 1)
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `t/j`.
    pub fn divided(&self, j: u64) -> Scale {
        Scale::new(self.num, self.den * j).expect("positive")
    }

    fn floor(&self) -> i64 {
        (self.num / self.den) as i64
    }
}

impl FromStr for Scale {
    type Err = Error;
    fn from_str(s: &str) -> Result<Scale> {
        let c: Coord = s.parse()?;
        let r = c.exact();
        match (r.numer().to_u64(), r.denom().to_u64()) {
            (Some(n), Some(d)) if n > 0 => Scale::new(n, d),
            _ => Err(Error::Parse(format!("scale {s:?} must be a positive rational of moderate size"))),
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeRegion {
    pub shape: Shape,
    pub dimension: usize,
}

impl LatticeRegion {
    pub fn new(shape: Shape, dimension: usize) -> Result<LatticeRegion> {
        if !(2..=8).contains(&dimension) {
            return domain(format!("dimension {dimension} must lie in 2..=8"));
        }
        Ok(LatticeRegion { shape, dimension })
    }

    /// `A ⊆ [−N, N]^d`.
    pub fn half_width(&self) -> u64 {
        1
    }

    pub fn exact_volume(&self) -> Option<f64> {
        let d = self.dimension;
        Some(match self.shape {
            Shape::Box => 2f64.powi(d as i32),
            Shape::UnitCube => 1.0,
            Shape::Ball => {
                // V_d = V_{d−2}·2π/d
                let mut v = if d % 2 == 0 { 1.0 } else { 2.0 };
                let mut k = if d % 2 == 0 { 2 } else { 3 };
                while k <= d {
                    v *= 2.0 * std::f64::consts::PI / k as f64;
                    k += 2;
                }
                v
            }
            Shape::Simplex => 1.0 / (1..=d).map(|k| k as f64).product::<f64>(),
        })
    }

    /// Exact test `v ∈ tA`.
    pub fn contains(&self, v: &[i64], t: Scale) -> bool {
        let (num, den) = (t.num as i128, t.den as i128);
        match self.shape {
            Shape::Box => v.iter().all(|&x| (x as i128).abs() * den <= num),
            Shape::UnitCube => v.iter().all(|&x| x >= 0 && x as i128 * den <= num),
            Shape::Ball => v.iter().map(|&x| (x as i128).pow(2)).sum::<i128>() * den * den <= num * num,
            Shape::Simplex => v.iter().all(|&x| x >= 0) && v.iter().map(|&x| x as i128).sum::<i128>() * den <= num,
        }
    }
}

/// Visit every integer vector in `[−r, r]^d` whose first coordinate is
/// `first`.
fn scan_slice(d: usize, r: i64, first: i64, mut visit: impl FnMut(&[i64])) {
    let mut v = vec![-r; d];
    v[0] = first;
    loop {
        visit(&v);
        let mut i = 1;
        while i < d {
            if v[i] < r {
                v[i] += 1;
                break;
            }
            v[i] = -r;
            i += 1;
        }
        if i == d {
            return;
        }
    }
}

fn scan(a: &LatticeRegion, t: Scale, primitive_only: bool) -> u64 {
    let r = t.floor() * a.half_width() as i64;
    (-r..=r)
        .into_par_iter()
        .map(|first| {
            let mut count = 0u64;
            scan_slice(a.dimension, r, first, |v| {
                if a.contains(v, t) && (!primitive_only || v.iter().fold(0u64, |g, &x| gcd(g, x.unsigned_abs())) == 1) {
                    count += 1;
                }
            });
            count
        })
        .sum()
}

/// Integer points `v` with `Σ v_i² ≤ k` in dimension `d`.
fn ball_count(d: usize, k: i128) -> u64 {
    if k < 0 {
        return 0;
    }
    let r = isqrt(k);
    if d == 1 {
        return (2 * r + 1) as u64;
    }
    (-r..=r).map(|x| ball_count(d - 1, k - x * x)).sum()
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1u64, |acc, i| acc * (n - k + i) / i)
}

/// `λ(tA)`: integer vectors in `tA`, origin included.
pub fn lambda_count(a: &LatticeRegion, t: Scale) -> u64 {
    let d = a.dimension as u32;
    let f = t.floor() as u64;
    match a.shape {
        Shape::Box => (2 * f + 1).pow(d),
        Shape::UnitCube => (f + 1).pow(d),
        Shape::Ball => ball_count(a.dimension, (t.num as i128).pow(2) / (t.den as i128).pow(2)),
        Shape::Simplex => binomial(f + d as u64, d as u64),
    }
}

/// `λ(tA)` by scanning the bounding box; reference for [`lambda_count`].
pub fn lambda_count_scan(a: &LatticeRegion, t: Scale) -> u64 {
    scan(a, t, false)
}

/// `λ*(tA)` by scanning and testing the gcd of every point.
pub fn lambda_star_brute(a: &LatticeRegion, t: Scale) -> u64 {
    scan(a, t, true)
}

/// `λ*(tA) = Σ_{j ≤ ⌊Nt⌋+1} μ(j)·(λ((t/j)A) − 1)`. The origin is removed
/// from each term; it lies in every dilate and is never primitive.
pub fn lambda_star_mobius(a: &LatticeRegion, t: Scale) -> u64 {
    let top = (t.floor() as u64 * a.half_width() + 1) as usize;
    let mu = mobius_table(top);
    let total: i128 = (1..=top)
        .filter(|&j| mu[j] != 0)
        .map(|j| mu[j] as i128 * (lambda_count(a, t.divided(j as u64)) as i128 - 1))
        .sum();
    total as u64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRow {
    pub t: f64,
    pub lambda_star: u64,
    /// `Vol(A)·t^d/ζ(d)`
    pub predicted: f64,
    pub ratio: f64,
    pub residual: f64,
    /// `residual/t^(d−1)`
    pub scaled_residual: f64,
    /// `residual/(t·log t)`, reported for `d = 2`.
    pub log_scaled_residual: Option<f64>,
}

pub fn asymptotic_report(a: &LatticeRegion, ts: &[Scale]) -> Result<Vec<AsymptoticRow>> {
    let vol = a
        .exact_volume()
        .ok_or_else(|| Error::Domain("region volume unknown".into()))?;
    let d = a.dimension;
    let z = zeta(d as u32)?;
    Ok(ts
        .iter()
        .map(|&t| {
            let tv = t.value();
            let lambda_star = lambda_star_mobius(a, t);
            let predicted = vol * tv.powi(d as i32) / z;
            let residual = lambda_star as f64 - predicted;
            AsymptoticRow {
                t: tv,
                lambda_star,
                predicted,
                ratio: lambda_star as f64 / predicted,
                residual,
                scaled_residual: residual / tv.powi(d as i32 - 1),
                log_scaled_residual: (d == 2 && tv > 1.0).then(|| residual / (tv * tv.ln())),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region(shape: Shape, d: usize) -> LatticeRegion {
        LatticeRegion::new(shape, d).unwrap()
    }

    fn t(v: u64) -> Scale {
        Scale::integer(v).unwrap()
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_count(&region(Shape::UnitCube, 2), t(5)), 36);
        assert_eq!(lambda_count(&region(Shape::Box, 2), t(2)), 25);
        assert_eq!(lambda_count(&region(Shape::Ball, 2), t(2)), 13);
    }

    #[test]
    fn lambda_star_examples() {
        assert_eq!(lambda_star_brute(&region(Shape::UnitCube, 2), t(5)), 21);
        assert_eq!(lambda_star_mobius(&region(Shape::UnitCube, 2), t(5)), 21);
        assert_eq!(lambda_star_brute(&region(Shape::Box, 2), t(1)), 8);
        assert_eq!(lambda_star_mobius(&region(Shape::Box, 2), t(1)), 8);
    }

    #[test]
    fn fast_lambda_matches_scan() {
        for shape in [Shape::Box, Shape::UnitCube, Shape::Ball, Shape::Simplex] {
            for d in 2..=4 {
                for num in [1, 3, 7, 10] {
                    for den in [1, 2, 3] {
                        let s = Scale::new(num, den).unwrap();
                        let a = region(shape, d);
                        assert_eq!(lambda_count(&a, s), lambda_count_scan(&a, s), "{shape} d={d} t={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn mobius_inversion_identity() {
        for shape in [Shape::Box, Shape::UnitCube, Shape::Ball, Shape::Simplex] {
            for d in 2..=3 {
                for num in [1, 2, 5, 9, 16] {
                    let s = Scale::new(num, 1 + num % 3).unwrap();
                    let a = region(shape, d);
                    assert_eq!(lambda_star_mobius(&a, s), lambda_star_brute(&a, s), "{shape} d={d} t={s}");
                }
            }
        }
    }

    #[test]
    fn symmetric_shapes_count_symmetrically() {
        // coordinate sign flips: the box count is 2^d times the positive
        // orthant count plus the points on coordinate hyperplanes
        let a = region(Shape::Box, 2);
        let c = region(Shape::UnitCube, 2);
        let full = lambda_star_brute(&a, t(6));
        let orthant = lambda_star_brute(&c, t(6));
        // cube points: (0,1), (1,0) on the axes plus the open-quadrant ones
        assert_eq!(full, 4 * (orthant - 2) + 4);
    }

    #[test]
    fn volumes() {
        assert!((region(Shape::Ball, 2).exact_volume().unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert!((region(Shape::Ball, 3).exact_volume().unwrap() - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-14);
        assert!((region(Shape::Ball, 4).exact_volume().unwrap() - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-14);
        assert_eq!(region(Shape::Simplex, 3).exact_volume().unwrap(), 1.0 / 6.0);
    }

    #[test]
    fn report_tends_to_inverse_zeta() {
        let rows = asymptotic_report(&region(Shape::UnitCube, 2), &[t(10), t(20), t(40), t(80)]).unwrap();
        let last = rows.last().unwrap();
        assert!((last.lambda_star as f64 / 6400.0 - 6.0 / std::f64::consts::PI.powi(2)).abs() < 0.05 * 0.6079);
        assert!(rows.iter().all(|r| r.scaled_residual.abs() < 5.0));
        assert!(rows.iter().all(|r| r.log_scaled_residual.is_some()));
    }

    #[test]
    fn scale_parsing() {
        assert_eq!("2.5".parse::<Scale>().unwrap(), Scale::new(5, 2).unwrap());
        assert!("-1".parse::<Scale>().is_err());
        assert!("0".parse::<Scale>().is_err());
    }
}

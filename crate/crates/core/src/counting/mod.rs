//! Exact enumeration of algebraic numbers of bounded degree and height in a
//! region, via their minimal (prime) polynomials.
//!
//! The class enumerated for degree `m` is every integer polynomial with
//! `1 ≤ a_m ≤ Q` and `|a_i| ≤ Q` otherwise. A prime polynomial contributes
//! its roots lying in the region; the reducible tally `R_Q` counts members
//! of the class (degrees `2..=n`) that factor over ℚ.

mod factor;

use std::collections::BTreeMap;
use std::ops::Add;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_perfect_square, DivisorTable};
use crate::error::{domain, Error, Result};
use crate::exact::QuadraticRoot;
use crate::poly::IntPolynomial;
use crate::regions::ComplexRegion;
use crate::roots::{classify, find_roots_f64, refine, CertifiedRoot, Membership, Precision};

pub use factor::{is_irreducible_exhaustive, is_irreducible_over_rationals, is_prime_polynomial, rational_root};

pub const MAX_DEGREE: usize = 16;
pub const MAX_HEIGHT: u64 = 1_000_000;

/// Stripe `index` of `total`: leading coefficients `a` with
/// `(a − 1) mod total = index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shard {
    pub index: u32,
    pub total: u32,
}

impl Shard {
    pub const WHOLE: Shard = Shard { index: 0, total: 1 };

    pub fn new(index: u32, total: u32) -> Result<Shard> {
        if total == 0 || index >= total {
            return domain(format!("shard {index} of {total} is out of range"));
        }
        Ok(Shard { index, total })
    }

    fn owns(&self, lead: i64) -> bool {
        ((lead - 1) as u64) % self.total as u64 == self.index as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountOptions {
    /// Target certification radius for roots of degree ≥ 3.
    pub root_tol: f64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { root_tol: crate::roots::DEFAULT_TARGET_RADIUS }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountResult {
    pub n: usize,
    pub q: u64,
    pub region: String,
    /// Certified-inside roots of prime polynomials.
    pub psi: u64,
    /// `k ↦` number of prime polynomials with exactly `k` certified roots
    /// inside, for `k = 1..=n`.
    pub gamma: BTreeMap<usize, u64>,
    /// Roots of prime polynomials whose membership could not be certified.
    pub ambiguous: u64,
    pub reducible: u64,
    /// Degree `m ↦` inside roots contributed by degree-`m` prime polynomials.
    pub degree_breakdown: BTreeMap<usize, u64>,
    /// Shard indices covered by this result.
    pub shards: Vec<u32>,
    pub shard_total: u32,
}

impl CountResult {
    /// True when no root was left undecided.
    pub fn is_exact(&self) -> bool {
        self.ambiguous == 0
    }

    /// `Ψ` lies in `[psi, psi + ambiguous]`.
    pub fn psi_interval(&self) -> (u64, u64) {
        (self.psi, self.psi + self.ambiguous)
    }

    pub fn is_complete(&self) -> bool {
        self.shards.len() == self.shard_total as usize
    }
}

#[derive(Clone, Debug, Default)]
struct Tally {
    psi: u64,
    gamma: [u64; MAX_DEGREE + 1],
    ambiguous: u64,
    reducible: u64,
    degree: [u64; MAX_DEGREE + 1],
}

impl Add for Tally {
    type Output = Tally;
    fn add(mut self, o: Tally) -> Tally {
        self.psi += o.psi;
        self.ambiguous += o.ambiguous;
        self.reducible += o.reducible;
        for i in 0..=MAX_DEGREE {
            self.gamma[i] += o.gamma[i];
            self.degree[i] += o.degree[i];
        }
        self
    }
}

impl Tally {
    fn record_prime(&mut self, m: usize, inside: usize, ambiguous: usize) {
        if inside > 0 {
            self.psi += inside as u64;
            self.gamma[inside] += 1;
            self.degree[m] += inside as u64;
        }
        self.ambiguous += ambiguous as u64;
    }
}

struct Context<'a> {
    region: &'a ComplexRegion,
    q: i64,
    table: DivisorTable,
    opts: CountOptions,
    with_roots: bool,
}

fn content_is_one(coeffs: &[i64]) -> bool {
    let mut g = 0u64;
    for &a in coeffs {
        g = gcd(g, a.unsigned_abs());
        if g == 1 {
            return true;
        }
    }
    g == 1
}

/// Roots of `a x² + b x + c` with negative discriminant. Both parts carry
/// at most two roundings, so `3u·|z|` bounds the error.
fn quadratic_pair(a: i64, b: i64, disc: i64) -> [CertifiedRoot; 2] {
    let two_a = (2 * a) as f64;
    let x = -(b as f64) / two_a;
    let y = ((-disc) as f64).sqrt() / two_a;
    let make = |im: f64| {
        let value = Complex64::new(x, im);
        CertifiedRoot {
            value,
            radius: 3.0 * f64::EPSILON * value.norm(),
            polynomial_degree: 2,
            precision: Precision::Native,
            low_precision: false,
        }
    };
    [make(y), make(-y)]
}

fn count_quadratic(ctx: &Context, a: i64, b: i64, c: i64, tally: &mut Tally) {
    let disc = b * b - 4 * a * c;
    if disc >= 0 {
        if is_perfect_square(disc as i128) {
            tally.reducible += 1;
        }
        return;
    }
    if !ctx.with_roots {
        return;
    }
    let mut inside = 0;
    for (root, upper) in quadratic_pair(a, b, disc).iter().zip([true, false]) {
        let hit = match classify(root, ctx.region) {
            Membership::Inside => true,
            Membership::Outside => false,
            Membership::Ambiguous => QuadraticRoot::new(a, b, c, upper)
                .map(|z| z.inside(ctx.region))
                .unwrap_or(false),
        };
        inside += hit as usize;
    }
    if inside > 0 && content_is_one(&[a, b, c]) {
        tally.record_prime(2, inside, 0);
    }
}

/// Discriminant of `a x³ + b x² + c x + d`; negative iff exactly one real
/// root.
fn cubic_discriminant(d: i64, c: i64, b: i64, a: i64) -> i128 {
    let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
    18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c - 27 * a * a * d * d
}

/// Memberships of the roots, refining ambiguous ones once more.
fn memberships(ctx: &Context, coeffs: &[i64], roots: &[CertifiedRoot]) -> (usize, usize) {
    let mut inside = 0;
    let mut ambiguous = 0;
    for root in roots {
        let mut m = classify(root, ctx.region);
        if m == Membership::Ambiguous {
            let p = IntPolynomial::new(coeffs.to_vec());
            m = classify(&refine(root, &p, 1e6), ctx.region);
        }
        match m {
            Membership::Inside => inside += 1,
            Membership::Ambiguous => ambiguous += 1,
            Membership::Outside => {}
        }
    }
    (inside, ambiguous)
}

fn count_general(ctx: &Context, coeffs: &[i64], tally: &mut Tally) {
    let m = coeffs.len() - 1;
    let as_f64: Vec<f64> = coeffs.iter().map(|&a| a as f64).collect();
    if m == 3 {
        if rational_root(coeffs, Some(&ctx.table)).is_some() {
            tally.reducible += 1;
            return;
        }
        if !ctx.with_roots || cubic_discriminant(coeffs[0], coeffs[1], coeffs[2], coeffs[3]) >= 0 {
            return;
        }
        let Ok(roots) = find_roots_f64(&as_f64, ctx.opts.root_tol) else { return };
        let (inside, ambiguous) = memberships(ctx, coeffs, &roots);
        if inside + ambiguous > 0 && content_is_one(coeffs) {
            tally.record_prime(m, inside, ambiguous);
        }
        return;
    }
    let Ok(roots) = find_roots_f64(&as_f64, ctx.opts.root_tol) else { return };
    if !factor::irreducible_with(coeffs, Some(&roots), Some(&ctx.table)) {
        tally.reducible += 1;
        return;
    }
    if !ctx.with_roots {
        return;
    }
    let (inside, ambiguous) = memberships(ctx, coeffs, &roots);
    if inside + ambiguous > 0 && content_is_one(coeffs) {
        tally.record_prime(m, inside, ambiguous);
    }
}

/// All polynomials with the given degree, leading and next coefficient.
fn count_block(ctx: &Context, m: usize, lead: i64, next: i64) -> Tally {
    let q = ctx.q;
    let mut tally = Tally::default();
    if m == 2 {
        for c in -q..=q {
            count_quadratic(ctx, lead, next, c, &mut tally);
        }
        return tally;
    }
    let mut coeffs = vec![-q; m + 1];
    coeffs[m] = lead;
    coeffs[m - 1] = next;
    loop {
        count_general(ctx, &coeffs, &mut tally);
        let mut i = 0;
        while i < m - 1 {
            if coeffs[i] < q {
                coeffs[i] += 1;
                break;
            }
            coeffs[i] = -q;
            i += 1;
        }
        if i == m - 1 {
            return tally;
        }
    }
}

fn validate(n: usize, q: u64) -> Result<()> {
    if !(2..=MAX_DEGREE).contains(&n) {
        return domain(format!("degree bound n={n} must lie in 2..={MAX_DEGREE}"));
    }
    if q == 0 || q > MAX_HEIGHT {
        return domain(format!("height bound Q={q} must lie in 1..={MAX_HEIGHT}"));
    }
    Ok(())
}

fn run(n: usize, q: u64, region: &ComplexRegion, shard: Shard, opts: CountOptions, with_roots: bool) -> Tally {
    let ctx = Context { region, q: q as i64, table: DivisorTable::new(q), opts, with_roots };
    let qi = q as i64;
    let blocks: Vec<(usize, i64, i64)> = (2..=n)
        .flat_map(|m| (1..=qi).filter(|&a| shard.owns(a)).flat_map(move |a| (-qi..=qi).map(move |b| (m, a, b))))
        .collect();
    blocks
        .par_iter()
        .map(|&(m, a, b)| count_block(&ctx, m, a, b))
        .reduce(Tally::default, Tally::add)
}

fn result_from(n: usize, q: u64, region: &ComplexRegion, shard: Shard, t: Tally) -> CountResult {
    CountResult {
        n,
        q,
        region: region.to_string(),
        psi: t.psi,
        gamma: (1..=n).map(|k| (k, t.gamma[k])).collect(),
        ambiguous: t.ambiguous,
        reducible: t.reducible,
        degree_breakdown: (2..=n).map(|m| (m, t.degree[m])).collect(),
        shards: vec![shard.index],
        shard_total: shard.total,
    }
}

/// One shard of the enumeration with explicit options.
pub fn partitioned_enumerate_with(
    n: usize,
    q: u64,
    region: &ComplexRegion,
    shard: Shard,
    opts: CountOptions,
) -> Result<CountResult> {
    validate(n, q)?;
    Shard::new(shard.index, shard.total)?;
    let tally = run(n, q, region, shard, opts, true);
    Ok(result_from(n, q, region, shard, tally))
}

pub fn partitioned_enumerate(n: usize, q: u64, region: &ComplexRegion, shard: Shard) -> Result<CountResult> {
    partitioned_enumerate_with(n, q, region, shard, CountOptions::default())
}

/// `Ψ(Q; Ω)` with its per-`k` breakdown and the reducible tally.
pub fn enumerate_count(n: usize, q: u64, region: &ComplexRegion) -> Result<CountResult> {
    partitioned_enumerate(n, q, region, Shard::WHOLE)
}

pub fn enumerate_count_with(n: usize, q: u64, region: &ComplexRegion, opts: CountOptions) -> Result<CountResult> {
    partitioned_enumerate_with(n, q, region, Shard::WHOLE, opts)
}

/// `R_Q`: polynomials of degree `2..=n` in the class that factor over ℚ.
pub fn reducible_count(n: usize, q: u64) -> Result<u64> {
    validate(n, q)?;
    // any valid region; roots are not examined
    let region = ComplexRegion::disk(Complex64::new(0.0, 1.0), 0.5)?;
    Ok(run(n, q, &region, Shard::WHOLE, CountOptions::default(), false).reducible)
}

/// Combine shard results of one run. Rejects mismatched runs and repeated
/// shard indices.
pub fn merge(parts: &[CountResult]) -> Result<CountResult> {
    let first = parts.first().ok_or_else(|| Error::Merge("nothing to merge".into()))?;
    let mut out = CountResult {
        psi: 0,
        ambiguous: 0,
        reducible: 0,
        gamma: first.gamma.keys().map(|&k| (k, 0)).collect(),
        degree_breakdown: first.degree_breakdown.keys().map(|&k| (k, 0)).collect(),
        shards: Vec::new(),
        ..first.clone()
    };
    for part in parts {
        if (part.n, part.q, &part.region, part.shard_total) != (first.n, first.q, &first.region, first.shard_total) {
            return Err(Error::Merge("shards come from different runs".into()));
        }
        for &s in &part.shards {
            if out.shards.contains(&s) {
                return Err(Error::Merge(format!("shard {s} appears twice")));
            }
            out.shards.push(s);
        }
        out.psi += part.psi;
        out.ambiguous += part.ambiguous;
        out.reducible += part.reducible;
        for (k, v) in &part.gamma {
            *out.gamma.entry(*k).or_default() += v;
        }
        for (k, v) in &part.degree_breakdown {
            *out.degree_breakdown.entry(*k).or_default() += v;
        }
    }
    out.shards.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region(s: &str) -> ComplexRegion {
        s.parse().unwrap()
    }

    /// Brute force over height-1 quadratics with the closed-form roots.
    fn oracle_q1(r: &ComplexRegion) -> u64 {
        let mut total = 0;
        for a in 1..=1i64 {
            for b in -1..=1i64 {
                for c in -1..=1i64 {
                    let disc = b * b - 4 * a * c;
                    if disc < 0 {
                        let y = ((-disc) as f64).sqrt() / 2.0;
                        for im in [y, -y] {
                            total += r.contains(Complex64::new(-b as f64 / 2.0, im)) as u64;
                        }
                    }
                }
            }
        }
        total
    }

    #[test]
    fn height_one_examples() {
        for s in ["disk:0,1,0.3", "rect:-0.9,0.9,0.5,1.5", "rect:-0.9,0.9,-1.5,-0.5"] {
            let r = region(s);
            let res = enumerate_count(2, 1, &r).unwrap();
            assert_eq!(res.psi, oracle_q1(&r));
            assert_eq!(res.ambiguous, 0);
        }
        assert_eq!(enumerate_count(2, 1, &region("disk:0,1,0.3")).unwrap().psi, 1);
        assert_eq!(enumerate_count(2, 1, &region("rect:-0.9,0.9,0.5,1.5")).unwrap().psi, 3);
    }

    #[test]
    fn reducible_height_one_quadratics() {
        // a=1: b²−4c a perfect square for (b,c) in {(0,0),(0,-1),(1,0),(-1,0)}
        let mut oracle = 0;
        for b in -1i64..=1 {
            for c in -1i64..=1 {
                let d = b * b - 4 * c;
                if d >= 0 && is_perfect_square(d as i128) {
                    oracle += 1;
                }
            }
        }
        assert_eq!(reducible_count(2, 1).unwrap(), oracle);
        assert_eq!(oracle, 4);
    }

    #[test]
    fn shards_merge_to_whole() {
        let r = region("disk:0,1,0.3");
        let whole = enumerate_count(2, 6, &r).unwrap();
        let parts: Vec<_> = (0..4)
            .map(|i| partitioned_enumerate(2, 6, &r, Shard::new(i, 4).unwrap()).unwrap())
            .collect();
        let merged = merge(&parts).unwrap();
        assert!(merged.is_complete());
        assert_eq!(
            (merged.psi, merged.reducible, &merged.gamma),
            (whole.psi, whole.reducible, &whole.gamma)
        );
        let dup = vec![parts[0].clone(), parts[0].clone()];
        assert!(merge(&dup).is_err());
        assert_eq!(merge(&parts[..1]).unwrap().psi, parts[0].psi);
        assert!(!merge(&parts[..1]).unwrap().is_complete());
    }

    #[test]
    fn total_one_shard_equals_enumeration() {
        let r = region("rect:0.2,0.6,0.3,0.8");
        assert_eq!(
            partitioned_enumerate(3, 3, &r, Shard::new(0, 1).unwrap()).unwrap(),
            enumerate_count(3, 3, &r).unwrap()
        );
        assert!(Shard::new(4, 4).is_err());
    }

    #[test]
    fn psi_is_weighted_gamma_sum() {
        let r = region("rect:-1.5,1.5,0.05,1.5;rect:-1.5,1.5,-1.5,-0.05");
        let res = enumerate_count(4, 2, &r).unwrap();
        let weighted: u64 = res.gamma.iter().map(|(k, g)| *k as u64 * g).sum();
        assert_eq!(res.psi, weighted);
        assert_eq!(res.degree_breakdown.values().sum::<u64>(), res.psi);
        // both half-planes: quartics with two conjugate pairs reach k = 4
        assert!(res.gamma[&4] > 0);
    }

    #[test]
    fn half_plane_bounds_gamma() {
        let r = region("rect:-1.5,1.5,0.05,1.5");
        let res = enumerate_count(4, 2, &r).unwrap();
        assert_eq!(res.gamma[&3], 0);
        assert_eq!(res.gamma[&4], 0);
        assert!(res.gamma[&2] > 0);
    }

    #[test]
    fn reducible_count_matches_enumeration_tally() {
        let r = region("disk:0,1,0.3");
        for (n, q) in [(2, 5), (3, 3), (4, 1)] {
            assert_eq!(enumerate_count(n, q, &r).unwrap().reducible, reducible_count(n, q).unwrap());
        }
    }

    #[test]
    fn reducible_cubics_match_exhaustive_oracle() {
        let mut oracle = 0;
        let q = 2i64;
        for m in 2..=3usize {
            let total = (2 * q + 1).pow(m as u32);
            for a in 1..=q {
                for idx in 0..total {
                    let mut v = Vec::with_capacity(m + 1);
                    let mut k = idx;
                    for _ in 0..m {
                        v.push(k % (2 * q + 1) - q);
                        k /= 2 * q + 1;
                    }
                    v.push(a);
                    if !is_irreducible_exhaustive(&IntPolynomial::new(v)) {
                        oracle += 1;
                    }
                }
            }
        }
        assert_eq!(reducible_count(3, 2).unwrap(), oracle);
    }

    #[test]
    fn bad_parameters() {
        let r = region("disk:0,1,0.3");
        assert!(enumerate_count(1, 3, &r).is_err());
        assert!(enumerate_count(2, 0, &r).is_err());
    }
}

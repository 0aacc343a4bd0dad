//! Polynomial roots with a posteriori error disks, and region membership
//! that reports boundary cases instead of guessing.
//!
//! Roots come from closed forms (degree ≤ 2) or simultaneous Aberth–Ehrlich
//! iteration. Each approximation `v` gets the Newton-residual radius
//! `m·|p(v)|/|p'(v)|`, inflated by a rigorous bound on the evaluation
//! error. A disk of that radius always holds a root; when the `m` disks are
//! pairwise disjoint each holds exactly one. Approximations that miss the
//! target radius climb the precision ladder.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::poly::IntPolynomial;
use crate::precision::{rounding_gap, Cx, DoubleDouble, Real, Soft128};
use crate::regions::ComplexRegion;

pub const DEFAULT_TARGET_RADIUS: f64 = 1e-12;

/// Working precision that produced a root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Precision {
    Native,
    DoubleDouble,
    Extended,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CertifiedRoot {
    pub value: Complex64,
    /// The closed disk of this radius around `value` holds the root.
    pub radius: f64,
    pub polynomial_degree: usize,
    pub precision: Precision,
    /// Set when the radius misses the target or the disk may hold several
    /// roots.
    pub low_precision: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Membership {
    Inside,
    Outside,
    Ambiguous,
}

fn eval<R: Real>(coeffs: &[f64], z: Cx<R>) -> (Cx<R>, Cx<R>) {
    let zero = Cx::new(R::zero(), R::zero());
    let mut p = zero;
    let mut dp = zero;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + Cx::new(R::from_f64(c), R::zero());
    }
    (p, dp)
}

fn cnorm<R: Real>(z: Cx<R>) -> f64 {
    z.to_c64().norm()
}

/// Newton-residual radius at `z`, valid despite rounding in `R`.
fn newton_radius<R: Real>(coeffs: &[f64], z: Cx<R>) -> f64 {
    let m = coeffs.len() - 1;
    let (p, dp) = eval(coeffs, z);
    let r = z.to_c64().norm() + rounding_gap(z);
    // Σ|a_i| r^i and Σ i|a_i| r^(i-1)
    let mut s = 0.0;
    let mut ds = 0.0;
    for &c in coeffs.iter().rev() {
        ds = ds * r + s;
        s = s * r + c.abs();
    }
    let gamma = 8.0 * (m as f64 + 1.0) * R::UNIT_ROUNDOFF;
    let guard = 1.0 + 1e-14;
    let err_p = gamma * s * guard;
    let err_dp = gamma * ds * guard;
    let num = cnorm(p) * guard + err_p;
    let den = cnorm(dp) / guard - err_dp;
    if !(den > 0.0) || !num.is_finite() {
        return f64::INFINITY;
    }
    m as f64 * num / den * guard
}

fn initial_guesses(coeffs: &[f64]) -> Vec<Complex64> {
    let m = coeffs.len() - 1;
    let lead = coeffs[m].abs();
    // Fujiwara-style bound and geometric mean of root moduli
    let bound = (1..=m)
        .map(|k| (coeffs[m - k].abs() / lead).powf(1.0 / k as f64))
        .fold(0.0, f64::max)
        * 2.0;
    let mean = if coeffs[0] != 0.0 {
        (coeffs[0].abs() / lead).powf(1.0 / m as f64)
    } else {
        bound / 2.0
    };
    let rho = if mean > 0.0 && mean.is_finite() { mean.min(bound) } else { 1.0 };
    (0..m)
        .map(|j| Complex64::from_polar(rho, std::f64::consts::TAU * j as f64 / m as f64 + 0.4))
        .collect()
}

/// Aberth–Ehrlich sweeps in precision `R`; returns whether it settled.
fn aberth<R: Real>(coeffs: &[f64], z: &mut [Cx<R>], max_iters: usize) -> bool {
    let one = Cx::new(R::from_f64(1.0), R::zero());
    let tol = 4.0 * R::UNIT_ROUNDOFF;
    for _ in 0..max_iters {
        let mut settled = true;
        for j in 0..z.len() {
            let (p, dp) = eval(coeffs, z[j]);
            if cnorm(p) == 0.0 {
                continue;
            }
            let newton = p / dp;
            let mut s = Cx::new(R::zero(), R::zero());
            for k in 0..z.len() {
                if k != j {
                    s = s + one / (z[j] - z[k]);
                }
            }
            let w = newton / (one - newton * s);
            let wn = cnorm(w);
            if !wn.is_finite() {
                // nudge off a critical point or a collision
                let nudge = 1e-3 * (1.0 + cnorm(z[j]));
                z[j] = z[j] + Cx::new(R::from_f64(nudge), R::from_f64(nudge * 0.7));
                settled = false;
                continue;
            }
            z[j] = z[j] - w;
            if wn > tol * (1.0 + cnorm(z[j])) {
                settled = false;
            }
        }
        if settled {
            return true;
        }
    }
    false
}

fn quadratic_roots(c: f64, b: f64, a: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a.abs());
        [Complex64::new(re, im), Complex64::new(re, -im)]
    } else {
        let sign = if b >= 0.0 { 1.0 } else { -1.0 };
        let q = -0.5 * (b + sign * disc.sqrt());
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(q / a, 0.0), Complex64::new(c / q, 0.0)]
    }
}

struct Attempt {
    values: Vec<Complex64>,
    radii: Vec<f64>,
}

fn attempt<R: Real>(coeffs: &[f64], start: &[Complex64], iters: usize) -> Attempt {
    let mut z: Vec<Cx<R>> = start.iter().map(|&s| Cx::from_c64(s)).collect();
    if coeffs.len() > 3 || iters > 0 {
        aberth(coeffs, &mut z, iters);
    }
    let values: Vec<Complex64> = z.iter().map(|&v| v.to_c64()).collect();
    let radii = z
        .iter()
        .map(|&v| newton_radius(coeffs, v) + rounding_gap(v) * (1.0 + 1e-15))
        .collect();
    Attempt { values, radii }
}

fn pairwise_disjoint(values: &[Complex64], radii: &[f64]) -> bool {
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let d = (values[i] - values[j]).norm() * (1.0 - 1e-15);
            if !(d > radii[i] + radii[j]) {
                return false;
            }
        }
    }
    true
}

fn meets_target(a: &Attempt, target: f64) -> bool {
    a.values
        .iter()
        .zip(&a.radii)
        .all(|(v, &r)| r <= target * v.norm().max(1.0))
        && pairwise_disjoint(&a.values, &a.radii)
}

/// Radius covering a whole cluster of overlapping disks: every root in the
/// cluster lies within the cluster's summed diameters of any member.
fn cluster_radii(values: &[Complex64], radii: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while c[i] != i {
            c[i] = c[c[i]];
            i = c[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= radii[i] + radii[j] {
                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                comp[a] = b;
            }
        }
    }
    let mut span = vec![0.0; n];
    for i in 0..n {
        let root = find(&mut comp, i);
        span[root] += 2.0 * radii[i];
    }
    (0..n).map(|i| span[find(&mut comp, i)].max(radii[i])).collect()
}

/// Roots of `Σ coeffs[i] x^i` (exact `f64` coefficients, nonzero leading).
pub fn find_roots_f64(coeffs: &[f64], target_radius: f64) -> Result<Vec<CertifiedRoot>> {
    let coeffs = {
        let mut end = coeffs.len();
        while end > 0 && coeffs[end - 1] == 0.0 {
            end -= 1;
        }
        &coeffs[..end]
    };
    if coeffs.iter().any(|c| !c.is_finite()) {
        return domain("non-finite coefficient");
    }
    if coeffs.len() < 2 {
        return domain("polynomial must have degree at least 1");
    }
    let m = coeffs.len() - 1;
    let start: Vec<Complex64> = match m {
        1 => vec![Complex64::new(-coeffs[0] / coeffs[1], 0.0)],
        2 => quadratic_roots(coeffs[0], coeffs[1], coeffs[2]).to_vec(),
        _ => initial_guesses(coeffs),
    };
    let native = attempt::<f64>(coeffs, &start, if m <= 2 { 0 } else { 500 });
    let (best, precision) = if meets_target(&native, target_radius) {
        (native, Precision::Native)
    } else {
        let dd = attempt::<DoubleDouble>(coeffs, &native.values, 100);
        if meets_target(&dd, target_radius) {
            (dd, Precision::DoubleDouble)
        } else {
            let start = if pairwise_disjoint(&dd.values, &dd.radii) { &dd.values } else { &native.values };
            (attempt::<Soft128>(coeffs, start, 100), Precision::Extended)
        }
    };
    let ok = meets_target(&best, target_radius);
    let radii = if pairwise_disjoint(&best.values, &best.radii) {
        best.radii.clone()
    } else {
        cluster_radii(&best.values, &best.radii)
    };
    Ok(best
        .values
        .iter()
        .zip(radii)
        .map(|(&value, radius)| CertifiedRoot {
            value,
            radius,
            polynomial_degree: m,
            precision,
            low_precision: !ok,
        })
        .collect())
}

/// All complex roots of a nonconstant integer polynomial.
pub fn find_roots(p: &IntPolynomial, target_radius: f64) -> Result<Vec<CertifiedRoot>> {
    let limit = 1i64 << 53;
    if p.coeffs().iter().any(|&c| c.abs() > limit) {
        return domain("coefficients beyond 2^53 are not supported");
    }
    let coeffs: Vec<f64> = p.coeffs().iter().map(|&c| c as f64).collect();
    find_roots_f64(&coeffs, target_radius)
}

/// Newton refinement of one isolated root in doubled precision until the
/// radius shrinks by `factor`; flags the root when that fails.
pub fn refine(root: &CertifiedRoot, p: &IntPolynomial, factor: f64) -> CertifiedRoot {
    let coeffs: Vec<f64> = p.coeffs().iter().map(|&c| c as f64).collect();
    let goal = root.radius / factor.max(1.0);
    fn newton<R: Real>(coeffs: &[f64], start: Complex64) -> (Complex64, f64) {
        let mut z = Cx::<R>::from_c64(start);
        for _ in 0..200 {
            let (p, dp) = eval(coeffs, z);
            if cnorm(dp) == 0.0 {
                break;
            }
            let step = p / dp;
            z = z - step;
            if cnorm(step) <= 2.0 * R::UNIT_ROUNDOFF * (1.0 + cnorm(z)) {
                break;
            }
        }
        (z.to_c64(), newton_radius(&coeffs, z) + rounding_gap(z) * (1.0 + 1e-15))
    }
    let candidates = [
        (newton::<DoubleDouble>(&coeffs, root.value), Precision::DoubleDouble),
        (newton::<Soft128>(&coeffs, root.value), Precision::Extended),
    ];
    let mut best: Option<CertifiedRoot> = None;
    for ((value, radius), precision) in candidates {
        // stays inside the isolating disk, so it is the same root
        let nested = (value - root.value).norm() + radius <= root.radius;
        if nested && radius.is_finite() {
            let r = CertifiedRoot { value, radius, precision, low_precision: radius > goal, ..*root };
            if radius <= goal {
                return r;
            }
            if best.map_or(true, |b| radius < b.radius) {
                best = Some(r);
            }
        }
    }
    best.unwrap_or(CertifiedRoot { low_precision: true, ..*root })
}

/// Real-coefficient variant used by simulation.
pub fn find_roots_real(coeffs: &[f64]) -> Result<Vec<CertifiedRoot>> {
    find_roots_f64(coeffs, DEFAULT_TARGET_RADIUS)
}

/// Inside when the whole disk lies in `Ω`, Outside when it misses the
/// closure, Ambiguous otherwise (including roots on the boundary).
pub fn classify(root: &CertifiedRoot, region: &ComplexRegion) -> Membership {
    let v = root.value;
    // rounding in the boundary-distance computation
    let slack = 1e-14 * (1.0 + v.norm() + region.scale());
    let margin = region.distance_to_boundary(v);
    if !(margin > root.radius + slack) {
        return Membership::Ambiguous;
    }
    if region.contains(v) {
        Membership::Inside
    } else {
        Membership::Outside
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(desc: &[i64]) -> IntPolynomial {
        IntPolynomial::from_descending(desc)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    fn assert_roots(desc: &[i64], expected: &[Complex64]) {
        let roots = find_roots(&poly(desc), DEFAULT_TARGET_RADIUS).unwrap();
        let got = sorted(roots.iter().map(|r| r.value).collect());
        let exp = sorted(expected.to_vec());
        for (g, e) in got.iter().zip(&exp) {
            assert!((g - e).norm() < 1e-14, "{g} vs {e}");
        }
        for r in &roots {
            assert!(!r.low_precision && r.radius <= 1e-12, "{r:?}");
        }
    }

    #[test]
    fn closed_form_examples() {
        let h = 3f64.sqrt() / 2.0;
        assert_roots(&[1, 0, 1], &[Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)]);
        assert_roots(&[1, -2, 2], &[Complex64::new(1.0, 1.0), Complex64::new(1.0, -1.0)]);
        assert_roots(&[1, 1, 1], &[Complex64::new(-0.5, h), Complex64::new(-0.5, -h)]);
        assert_roots(&[2, -3], &[Complex64::new(1.5, 0.0)]);
        assert_roots(&[1, -3, 2], &[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]);
    }

    #[test]
    fn cubic_real_root_matches_bisection() {
        let f = |x: f64| x * x * x - x - 1.0;
        let (mut lo, mut hi) = (1.0, 2.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid
            } else {
                lo = mid
            }
        }
        let roots = find_roots(&poly(&[1, 0, -1, -1]), DEFAULT_TARGET_RADIUS).unwrap();
        let real = roots.iter().find(|r| r.value.im.abs() < 1e-10).unwrap();
        assert!((real.value.re - lo).abs() < 1e-14);
        assert!(f(real.value.re).abs() <= 1e-14);
    }

    #[test]
    fn refine_examples() {
        let p = poly(&[1, 0, 1]);
        let start = CertifiedRoot {
            value: Complex64::new(0.0, 1.0),
            radius: 1e-8,
            polynomial_degree: 2,
            precision: Precision::Native,
            low_precision: false,
        };
        let r = refine(&start, &p, 1e8);
        assert!(r.radius <= 1e-16 && !r.low_precision, "{r:?}");

        let p = poly(&[1, -2, 2]);
        let start = CertifiedRoot { value: Complex64::new(1.0001, 0.9999), radius: 1e-3, ..start };
        let r = refine(&start, &p, 1e9);
        assert!((r.value - Complex64::new(1.0, 1.0)).norm() < 1e-15);
        assert!(r.radius <= 1e-12);
    }

    #[test]
    fn classify_examples() {
        let disk: ComplexRegion = "disk:0,1,0.3".parse().unwrap();
        let root = |re, im, radius| CertifiedRoot {
            value: Complex64::new(re, im),
            radius,
            polynomial_degree: 2,
            precision: Precision::Native,
            low_precision: false,
        };
        assert_eq!(classify(&root(0.0, 1.0, 1e-14), &disk), Membership::Inside);
        assert_eq!(classify(&root(1.0, 1.0, 1e-14), &disk), Membership::Outside);
        assert_eq!(classify(&root(0.3, 1.0, 1e-14), &disk), Membership::Ambiguous);
    }

    #[test]
    fn repeated_root_is_flagged_not_dropped() {
        let roots = find_roots(&poly(&[1, 0, 2, 0, 1]), DEFAULT_TARGET_RADIUS).unwrap();
        assert_eq!(roots.len(), 4);
        for r in &roots {
            assert!(r.low_precision);
            assert!((r.value.norm() - 1.0).abs() <= r.radius);
        }
    }

    #[test]
    fn clustered_roots_climb_the_ladder() {
        // (x^2 - 2)(x - 1.41421356) scaled to integers keeps two close roots
        let roots = find_roots(&poly(&[100_000_000, -141_421_356, -200_000_000, 282_842_712]), 1e-12)
            .unwrap();
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert!(!r.low_precision, "{r:?}");
        }
    }

    proptest! {
        #[test]
        fn vieta_and_conjugate_pairs(coeffs in prop::collection::vec(-20i64..=20, 3..8), lead in 1i64..=20) {
            let mut c = coeffs.clone();
            c.push(lead);
            let p = IntPolynomial::new(c.clone());
            let roots = find_roots(&p, DEFAULT_TARGET_RADIUS).unwrap();
            let m = c.len() - 1;
            prop_assert_eq!(roots.len(), m);
            let total: f64 = roots.iter().map(|r| r.radius).sum();
            let sum: Complex64 = roots.iter().map(|r| r.value).sum();
            let expect_sum = -(c[m - 1] as f64) / lead as f64;
            prop_assert!((sum - expect_sum).norm() <= 10.0 * total + 1e-9 * (1.0 + expect_sum.abs()));
            let prod: Complex64 = roots.iter().map(|r| r.value).product();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let expect_prod = sign * c[0] as f64 / lead as f64;
            let scale: f64 = roots.iter().map(|r| r.value.norm().max(1.0)).product();
            prop_assert!((prod - expect_prod).norm() <= 10.0 * total * scale + 1e-9 * scale);
            for r in &roots {
                let partner = roots.iter().map(|s| (s.value - r.value.conj()).norm()).fold(f64::INFINITY, f64::min);
                prop_assert!(partner <= 2.0 * r.radius + 1e-300 || r.value.im.abs() <= r.radius);
            }
        }

        #[test]
        fn disks_disjoint_for_squarefree_cubics(a in -30i64..=30, c in 1i64..=30) {
            // x^3 + a x + c is squarefree unless 4a^3 + 27c^2 = 0
            prop_assume!(4 * a * a * a + 27 * c * c != 0);
            let roots = find_roots(&poly(&[1, 0, a, c]), DEFAULT_TARGET_RADIUS).unwrap();
            let v: Vec<_> = roots.iter().map(|r| r.value).collect();
            let rad: Vec<_> = roots.iter().map(|r| r.radius).collect();
            prop_assert!(pairwise_disjoint(&v, &rad));
            prop_assert!(roots.iter().all(|r| !r.low_precision));
        }
    }
}

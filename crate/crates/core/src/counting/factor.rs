//! Irreducibility over ℚ for integer polynomials.
//!
//! Degrees up to three reduce to a rational-root test. Higher degrees search
//! for integer factors of each degree `d ≤ m/2`: either guided by certified
//! roots (a factor's coefficients are elementary symmetric functions of a
//! subset of roots, so each subset proposes at most one candidate) or by
//! bounded trial division over all admissible coefficient vectors.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{divisors, gcd, DivisorTable};
use crate::roots::CertifiedRoot;

/// `Σ a_i p^i q^(m−i)`, the numerator of `f(p/q)·q^m`, is zero.
pub(crate) fn vanishes_at(coeffs: &[i64], p: i64, q: u64) -> bool {
    let mut acc: i128 = 0;
    let mut qpow: i128 = 1;
    // Horner in homogeneous form: acc = acc·p + a_i·q^(m−i)
    let m = coeffs.len() - 1;
    let mut ok = true;
    for (k, &a) in coeffs.iter().rev().enumerate() {
        if k > 0 {
            qpow = match qpow.checked_mul(q as i128) {
                Some(v) => v,
                None => {
                    ok = false;
                    break;
                }
            };
        }
        let term = (a as i128).checked_mul(qpow);
        acc = match (acc.checked_mul(p as i128), term) {
            (Some(x), Some(t)) => match x.checked_add(t) {
                Some(v) => v,
                None => {
                    ok = false;
                    break;
                }
            },
            _ => {
                ok = false;
                break;
            }
        };
    }
    if ok {
        return acc == 0;
    }
    let (p, q) = (BigInt::from(p), BigInt::from(q));
    let mut acc = BigInt::zero();
    for (k, &a) in coeffs.iter().rev().enumerate() {
        acc = acc * &p + BigInt::from(a) * num_traits::pow(q.clone(), k.min(m));
    }
    acc.is_zero()
}

fn eval_i128(coeffs: &[i64], x: i128) -> Option<i128> {
    coeffs
        .iter()
        .rev()
        .try_fold(0i128, |acc, &a| acc.checked_mul(x)?.checked_add(a as i128))
}

/// A rational root `p/q` (lowest terms, `q > 0`) if one exists.
pub fn rational_root(coeffs: &[i64], table: Option<&DivisorTable>) -> Option<(i64, u64)> {
    let m = coeffs.len().checked_sub(1)?;
    if m == 0 {
        return None;
    }
    if coeffs[0] == 0 {
        return Some((0, 1));
    }
    let divs = |n: u64| -> Vec<u64> {
        match table {
            Some(t) => t.get(n).into_owned(),
            None => divisors(n),
        }
    };
    let lead = coeffs[m].unsigned_abs();
    let cons = coeffs[0].unsigned_abs();
    let f1 = eval_i128(coeffs, 1);
    let fm1 = eval_i128(coeffs, -1);
    for q in divs(lead) {
        for p in divs(cons) {
            if gcd(p, q) != 1 {
                continue;
            }
            for p in [p as i64, -(p as i64)] {
                // (q x − p) | f forces (q − p) | f(1) and (q + p) | f(−1)
                let qi = q as i128;
                let pi = p as i128;
                if let Some(v) = f1 {
                    if qi != pi && v % (qi - pi) != 0 {
                        continue;
                    }
                }
                if let Some(v) = fm1 {
                    if qi != -pi && v % (qi + pi) != 0 {
                        continue;
                    }
                }
                if vanishes_at(coeffs, p, q) {
                    return Some((p, q));
                }
            }
        }
    }
    None
}

fn big_divides(f: &[i64], g: &[i64]) -> bool {
    let mut r: Vec<BigInt> = f.iter().map(|&a| BigInt::from(a)).collect();
    let g: Vec<BigInt> = g.iter().map(|&a| BigInt::from(a)).collect();
    let dg = g.len() - 1;
    let lead = &g[dg];
    for top in (dg..r.len()).rev() {
        if r[top].is_zero() {
            continue;
        }
        if !(&r[top] % lead).is_zero() {
            return false;
        }
        let q = &r[top] / lead;
        for (j, gj) in g.iter().enumerate() {
            let idx = top - dg + j;
            r[idx] = &r[idx] - &q * gj;
        }
    }
    r.iter().all(|c| c.is_zero())
}

/// Exact divisibility of `f` by `g` in ℤ[x] (both ascending).
pub(crate) fn divides(f: &[i64], g: &[i64]) -> bool {
    let dg = g.len() - 1;
    if g.len() > f.len() || g[dg] == 0 {
        return false;
    }
    let mut r: Vec<i128> = f.iter().map(|&a| a as i128).collect();
    let lead = g[dg] as i128;
    for top in (dg..r.len()).rev() {
        if r[top] == 0 {
            continue;
        }
        if r[top] % lead != 0 {
            return false;
        }
        let q = r[top] / lead;
        for (j, &gj) in g.iter().enumerate() {
            let idx = top - dg + j;
            match q.checked_mul(gj as i128).and_then(|t| r[idx].checked_sub(t)) {
                Some(v) => r[idx] = v,
                None => return big_divides(f, g),
            }
        }
    }
    r.iter().all(|&c| c == 0)
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Coefficient bounds for a degree-`d` factor of `f`: the smaller of the
/// crude `2^m·√(m+1)·H` and the per-coefficient Mignotte bound.
fn factor_coefficient_bounds(f: &[i64], d: usize) -> Vec<i64> {
    let m = f.len() - 1;
    let height = f.iter().map(|a| a.unsigned_abs()).max().unwrap_or(0) as f64;
    let norm2 = f.iter().map(|&a| (a as f64).powi(2)).sum::<f64>().sqrt();
    let lead = f[m].unsigned_abs() as f64;
    let crude = 2f64.powi(m as i32) * ((m + 1) as f64).sqrt() * height;
    (0..=d)
        .map(|j| {
            let sharp = binomial(d - 1, j) * norm2
                + if j >= 1 { binomial(d - 1, j - 1) * lead } else { 0.0 };
            (crude.min(sharp) * (1.0 + 1e-12)).floor() as i64
        })
        .collect()
}

/// Trial division over every admissible degree-`d` factor.
fn has_factor_of_degree_exhaustive(f: &[i64], d: usize) -> bool {
    let m = f.len() - 1;
    let bounds = factor_coefficient_bounds(f, d);
    let probes: Vec<(i128, Option<i128>)> =
        [1i128, -1, 2, -2].iter().map(|&x| (x, eval_i128(f, x))).collect();
    let mut g = vec![0i64; d + 1];
    for lead in divisors(f[m].unsigned_abs()) {
        for c0 in divisors(f[0].unsigned_abs()) {
            for c0 in [c0 as i64, -(c0 as i64)] {
                g[d] = lead as i64;
                g[0] = c0;
                for j in 1..d {
                    g[j] = -bounds[j];
                }
                loop {
                    let admissible = probes.iter().all(|&(x, fx)| match (fx, eval_i128(&g, x)) {
                        (Some(fv), Some(gv)) => gv != 0 && fv % gv == 0 || gv == 0 && fv == 0,
                        _ => true,
                    });
                    if admissible && divides(f, &g) {
                        return true;
                    }
                    // odometer over the interior coefficients
                    let mut j = 1;
                    while j < d {
                        if g[j] < bounds[j] {
                            g[j] += 1;
                            break;
                        }
                        g[j] = -bounds[j];
                        j += 1;
                    }
                    if j >= d {
                        break;
                    }
                }
            }
        }
    }
    false
}

fn poly_from_roots(points: &[num_complex::Complex64]) -> Vec<num_complex::Complex64> {
    let mut c = vec![num_complex::Complex64::new(1.0, 0.0)];
    for &s in points {
        let mut next = vec![num_complex::Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= ci * s;
        }
        c = next;
    }
    c
}

fn abs_poly_from_roots(mags: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &s in mags {
        let mut next = vec![0.0; c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] += ci * s;
        }
        c = next;
    }
    c
}

/// Factor search guided by certified roots. `Some(found)` is decisive;
/// `None` means the root disks were too wide to pin every candidate.
fn has_factor_of_degree_guided(f: &[i64], roots: &[CertifiedRoot], d: usize) -> Option<bool> {
    let m = f.len() - 1;
    let leads = divisors(f[m].unsigned_abs());
    let mut inconclusive = false;
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let pts: Vec<_> = idx.iter().map(|&i| roots[i].value).collect();
        let approx = poly_from_roots(&pts);
        let mags: Vec<f64> = idx.iter().map(|&i| roots[i].value.norm()).collect();
        let wide: Vec<f64> = idx.iter().map(|&i| roots[i].value.norm() + roots[i].radius).collect();
        let base = abs_poly_from_roots(&mags);
        let upper = abs_poly_from_roots(&wide);
        let rounding = 8.0 * (d as f64 + 1.0) * f64::EPSILON;
        let err: Vec<f64> = (0..=d).map(|j| (upper[j] - base[j]) + rounding * upper[j]).collect();
        'lead: for &c in &leads {
            let c = c as f64;
            let mut g = vec![0i64; d + 1];
            let mut pinned = true;
            for j in 0..=d {
                let centre = c * approx[j].re;
                let half = c * err[j] * (1.0 + 1e-12) + 1e-300;
                if (c * approx[j].im).abs() > half {
                    continue 'lead;
                }
                let nearest = centre.round();
                if (centre - nearest).abs() > half {
                    continue 'lead;
                }
                if half >= 0.5 || nearest.abs() > 9.0e15 {
                    pinned = false;
                    break;
                }
                g[j] = nearest as i64;
            }
            if !pinned {
                inconclusive = true;
                continue;
            }
            if divides(f, &g) {
                return Some(true);
            }
        }
        // next combination
        let mut i = d;
        loop {
            if i == 0 {
                return if inconclusive { None } else { Some(false) };
            }
            i -= 1;
            if idx[i] < m - d + i {
                idx[i] += 1;
                for k in i + 1..d {
                    idx[k] = idx[k - 1] + 1;
                }
                break;
            }
        }
    }
}

fn primitive_part(coeffs: &[i64]) -> Vec<i64> {
    let c = coeffs.iter().fold(0u64, |g, &a| gcd(g, a.unsigned_abs())).max(1) as i64;
    coeffs.iter().map(|&a| a / c).collect()
}

fn trimmed(coeffs: &[i64]) -> &[i64] {
    let mut end = coeffs.len();
    while end > 0 && coeffs[end - 1] == 0 {
        end -= 1;
    }
    &coeffs[..end]
}

/// Irreducibility of the primitive part of `Σ coeffs[i] x^i` over ℚ.
/// `roots`, when given, must be the full certified root list.
pub(crate) fn irreducible_with(
    coeffs: &[i64],
    roots: Option<&[CertifiedRoot]>,
    table: Option<&DivisorTable>,
) -> bool {
    let f = primitive_part(trimmed(coeffs));
    let m = match f.len().checked_sub(1) {
        Some(m) if m >= 1 => m,
        _ => return false,
    };
    if m == 1 {
        return true;
    }
    if rational_root(&f, table).is_some() {
        return false;
    }
    if m <= 3 {
        return true;
    }
    let usable = roots.filter(|r| r.len() == m && r.iter().all(|x| !x.low_precision));
    for d in 2..=m / 2 {
        let guided = usable.and_then(|r| has_factor_of_degree_guided(&f, r, d));
        let found = match guided {
            Some(found) => found,
            None => has_factor_of_degree_exhaustive(&f, d),
        };
        if found {
            return false;
        }
    }
    true
}

/// True iff no factorization into integer polynomials of positive degree
/// exists (content is ignored). Zero and constant polynomials are not
/// irreducible.
pub fn is_irreducible_over_rationals(p: &crate::poly::IntPolynomial) -> bool {
    let roots = match p.degree() {
        Some(m) if m >= 4 => crate::roots::find_roots(p, crate::roots::DEFAULT_TARGET_RADIUS).ok(),
        _ => None,
    };
    irreducible_with(p.coeffs(), roots.as_deref(), None)
}

/// Reference implementation: rational roots, then exhaustive bounded
/// trial division for every factor degree.
pub fn is_irreducible_exhaustive(p: &crate::poly::IntPolynomial) -> bool {
    let f = primitive_part(p.coeffs());
    let m = match f.len().checked_sub(1) {
        Some(m) if m >= 1 => m,
        _ => return false,
    };
    if m == 1 {
        return true;
    }
    if rational_root(&f, None).is_some() {
        return false;
    }
    !(2..=m / 2).any(|d| has_factor_of_degree_exhaustive(&f, d))
}

/// Primitive, irreducible, positive leading coefficient.
pub fn is_prime_polynomial(p: &crate::poly::IntPolynomial) -> bool {
    match (p.leading(), p.content()) {
        (Some(lead), Ok(content)) => lead > 0 && content == 1 && is_irreducible_over_rationals(p),
        _ => false,
    }
}

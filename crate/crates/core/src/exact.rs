//! Exact position of a non-real quadratic root relative to region
//! boundaries. Root `x ± i√Y` with rational `x`, `Y` decides membership
//! with no rounding, so roots lying exactly on a boundary are never
//! misreported.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::regions::{ComplexRegion, Disk, Primitive, Rect};

/// `x + s·i·√y2` with `y2 > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticRoot {
    x: BigRational,
    y2: BigRational,
    upper: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    Inside,
    Boundary,
    Outside,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Sign of `s·√y2 − r` for `y2 ≥ 0`.
fn cmp_signed_sqrt(upper: bool, y2: &BigRational, r: &BigRational) -> Ordering {
    let r2 = r * r;
    if upper {
        if r.is_negative() {
            Ordering::Greater
        } else {
            y2.cmp(&r2)
        }
    } else if r.is_positive() {
        Ordering::Less
    } else {
        r2.cmp(y2)
    }
}

/// Sign of `l + k·√y2`.
fn sign_with_sqrt(l: &BigRational, k: &BigRational, y2: &BigRational) -> Ordering {
    let zero = BigRational::zero();
    let ls = l.cmp(&zero);
    let ks = k.cmp(&zero);
    if ks == Ordering::Equal || ls == ks {
        return if ls == Ordering::Equal { ks } else { ls };
    }
    if ls == Ordering::Equal {
        return ks;
    }
    // opposite signs: compare magnitudes l² and k²y2
    match (l * l).cmp(&(k * k * y2)) {
        Ordering::Greater => ls,
        Ordering::Less => ks,
        Ordering::Equal => Ordering::Equal,
    }
}

fn combine(orders: &[Ordering]) -> Position {
    // each entry compares a strictly-inside quantity with zero
    if orders.iter().all(|&o| o == Ordering::Greater) {
        Position::Inside
    } else if orders.iter().any(|&o| o == Ordering::Less) {
        Position::Outside
    } else {
        Position::Boundary
    }
}

impl QuadraticRoot {
    /// Root of `a x² + b x + c` with negative discriminant; `None` otherwise.
    pub fn new(a: i64, b: i64, c: i64, upper: bool) -> Option<Self> {
        let disc = b as i128 * b as i128 - 4 * a as i128 * c as i128;
        if a == 0 || disc >= 0 {
            return None;
        }
        let two_a = rat(2 * a);
        let x = rat(-b) / &two_a;
        let y2 = BigRational::from_integer(BigInt::from(-disc)) / (&two_a * &two_a);
        Some(QuadraticRoot { x, y2, upper })
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    /// `1/z = z̄/|z|²`.
    pub fn invert(&self) -> Self {
        let norm = &self.x * &self.x + &self.y2;
        QuadraticRoot {
            x: &self.x / &norm,
            y2: &self.y2 / (&norm * &norm),
            upper: !self.upper,
        }
    }

    fn in_rect(&self, r: &Rect) -> Position {
        let zero = BigRational::zero();
        combine(&[
            (&self.x - r.x_lo.exact()).cmp(&zero),
            (r.x_hi.exact() - &self.x).cmp(&zero),
            cmp_signed_sqrt(self.upper, &self.y2, r.y_lo.exact()),
            cmp_signed_sqrt(self.upper, &self.y2, r.y_hi.exact()).reverse(),
        ])
    }

    fn in_disk(&self, d: &Disk) -> Position {
        // r² − |z − c|² = r² − (x−cx)² − y2 − cy² + 2·cy·y
        let dx = &self.x - d.cx.exact();
        let l = d.r.exact() * d.r.exact() - &dx * &dx - &self.y2 - d.cy.exact() * d.cy.exact();
        let mut k = d.cy.exact() * rat(2);
        if !self.upper {
            k = -k;
        }
        combine(&[sign_with_sqrt(&l, &k, &self.y2)])
    }

    pub fn position_in(&self, p: &Primitive) -> Position {
        match p {
            Primitive::Rect(r) => self.in_rect(r),
            Primitive::Disk(d) => self.in_disk(d),
            Primitive::InvertedRect(r) => self.invert().in_rect(r),
        }
    }

    /// Membership in the open region; boundary points are outside.
    pub fn inside(&self, region: &ComplexRegion) -> bool {
        region
            .primitives()
            .iter()
            .any(|p| self.position_in(p) == Position::Inside)
    }
}

//! Working-precision ladder for root refinement: native `f64`, compensated
//! double-double, and a software float with a 128-bit mantissa.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

pub trait Real:
    Copy
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Conservative unit roundoff of one arithmetic operation.
    const UNIT_ROUNDOFF: f64;
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
}

impl Real for f64 {
    const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
}

// ---------------------------------------------------------------------------
// double-double

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        DoubleDouble { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self - o * DoubleDouble::from_f64(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * DoubleDouble::from_f64(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::from_f64(q3)
    }
}

impl Real for DoubleDouble {
    const UNIT_ROUNDOFF: f64 = 4.930_380_657_631_324e-32; // 2^-104
    fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

// ---------------------------------------------------------------------------
// 128-bit mantissa software float

/// `(-1)^neg · mant · 2^(exp-127)` with the top mantissa bit set; zero has
/// `mant == 0`. Arithmetic truncates, so the effective unit roundoff is a
/// couple of ulps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Soft128 {
    neg: bool,
    exp: i32,
    mant: u128,
}

const TOP: u128 = 1 << 127;
const LOW64: u128 = (1 << 64) - 1;

impl Soft128 {
    pub const ZERO: Soft128 = Soft128 { neg: false, exp: 0, mant: 0 };

    /// `m · 2^e2` with sign.
    fn from_parts(neg: bool, m: u128, e2: i32) -> Self {
        if m == 0 {
            return Self::ZERO;
        }
        let lz = m.leading_zeros() as i32;
        Soft128 { neg, exp: e2 - lz + 127, mant: m << lz }
    }

    pub fn is_zero(self) -> bool {
        self.mant == 0
    }

    fn cmp_magnitude(self, o: Self) -> Ordering {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.exp.cmp(&o.exp).then(self.mant.cmp(&o.mant)),
        }
    }

    pub fn abs(self) -> Self {
        Soft128 { neg: false, ..self }
    }
}

impl PartialOrd for Soft128 {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        let sa = if self.is_zero() { 0 } else if self.neg { -1 } else { 1 };
        let sb = if o.is_zero() { 0 } else if o.neg { -1 } else { 1 };
        Some(match sa.cmp(&sb) {
            Ordering::Equal if sa > 0 => self.cmp_magnitude(*o),
            Ordering::Equal if sa < 0 => o.cmp_magnitude(*self),
            ord => ord,
        })
    }
}

impl Neg for Soft128 {
    type Output = Self;
    fn neg(self) -> Self {
        if self.is_zero() {
            self
        } else {
            Soft128 { neg: !self.neg, ..self }
        }
    }
}

impl Add for Soft128 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (a, b) = if self.cmp_magnitude(o) == Ordering::Less {
            (o, self)
        } else {
            (self, o)
        };
        let shift = (a.exp - b.exp) as u32;
        if shift >= 128 {
            return a;
        }
        let bm = b.mant >> shift;
        if a.neg == b.neg {
            let (s, carry) = a.mant.overflowing_add(bm);
            if carry {
                Soft128 { neg: a.neg, exp: a.exp + 1, mant: (s >> 1) | TOP }
            } else {
                Soft128 { neg: a.neg, exp: a.exp, mant: s }
            }
        } else {
            let d = a.mant - bm;
            if d == 0 {
                return Self::ZERO;
            }
            let lz = d.leading_zeros() as i32;
            Soft128 { neg: a.neg, exp: a.exp - lz, mant: d << lz }
        }
    }
}

impl Sub for Soft128 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for Soft128 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::ZERO;
        }
        let (a1, a0) = (self.mant >> 64, self.mant & LOW64);
        let (b1, b0) = (o.mant >> 64, o.mant & LOW64);
        let p00 = a0 * b0;
        let p01 = a0 * b1;
        let p10 = a1 * b0;
        let p11 = a1 * b1;
        let mid = (p00 >> 64) + (p01 & LOW64) + (p10 & LOW64);
        let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
        let neg = self.neg != o.neg;
        if hi & TOP != 0 {
            Soft128 { neg, exp: self.exp + o.exp + 1, mant: hi }
        } else {
            let next = (mid & LOW64) >> 63;
            Soft128 { neg, exp: self.exp + o.exp, mant: (hi << 1) | next }
        }
    }
}

impl Div for Soft128 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        assert!(!o.is_zero(), "Soft128 division by zero");
        if self.is_zero() {
            return Self::ZERO;
        }
        let (ma, mb) = (self.mant, o.mant);
        let (mut q, mut r, steps, exp) = if ma >= mb {
            (1u128, ma - mb, 127, self.exp - o.exp)
        } else {
            (0u128, ma, 128, self.exp - o.exp - 1)
        };
        for _ in 0..steps {
            let carry = r >> 127;
            r <<= 1;
            q <<= 1;
            if carry == 1 || r >= mb {
                r = r.wrapping_sub(mb);
                q |= 1;
            }
        }
        Soft128 { neg: self.neg != o.neg, exp, mant: q }
    }
}

impl Real for Soft128 {
    const UNIT_ROUNDOFF: f64 = 2.350_988_701_644_575_3e-38; // 2^-125
    fn from_f64(x: f64) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Self::ZERO;
        }
        let bits = x.to_bits();
        let neg = bits >> 63 == 1;
        let e = ((bits >> 52) & 0x7ff) as i32;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e2) = if e == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), e - 1075)
        };
        Self::from_parts(neg, m as u128, e2)
    }
    fn to_f64(self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let top = (self.mant >> 75) + ((self.mant >> 74) & 1);
        let v = (top as f64) * 2f64.powi(self.exp - 52);
        if self.neg {
            -v
        } else {
            v
        }
    }
}

// ---------------------------------------------------------------------------
// complex numbers over a `Real`

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cx<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Cx<R> {
    pub fn new(re: R, im: R) -> Self {
        Cx { re, im }
    }

    pub fn from_c64(z: Complex64) -> Self {
        Cx { re: R::from_f64(z.re), im: R::from_f64(z.im) }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm_sqr(self) -> R {
        self.re * self.re + self.im * self.im
    }
}

impl<R: Real> Add for Cx<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Cx { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<R: Real> Sub for Cx<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Cx { re: self.re - o.re, im: self.im - o.im }
    }
}

impl<R: Real> Mul for Cx<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Cx {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl<R: Real> Div for Cx<R> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let d = o.norm_sqr();
        Cx {
            re: (self.re * o.re + self.im * o.im) / d,
            im: (self.im * o.re - self.re * o.im) / d,
        }
    }
}

/// Difference between a high-precision complex value and its `f64` rounding.
pub fn rounding_gap<R: Real>(z: Cx<R>) -> f64 {
    let back = Cx::<R>::from_c64(z.to_c64());
    let d = z - back;
    d.re.to_f64().hypot(d.im.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dd(x: f64) -> DoubleDouble {
        DoubleDouble::from_f64(x)
    }

    fn sf(x: f64) -> Soft128 {
        Soft128::from_f64(x)
    }

    #[test]
    fn double_double_third() {
        let third = dd(1.0) / dd(3.0);
        let back = third * dd(3.0) - dd(1.0);
        assert!(back.to_f64().abs() < 1e-31);
        // captures bits a plain f64 loses
        let x = dd(1.0) + dd(1e-20);
        assert_eq!((x - dd(1.0)).to_f64(), 1e-20);
    }

    #[test]
    fn soft128_roundtrip_and_identities() {
        for &x in &[1.0, -2.5, 3.0e-300, 1.2345678901234567e20, 0.1, -7.0] {
            assert_eq!(sf(x).to_f64(), x);
        }
        let third = sf(1.0) / sf(3.0);
        let back = third * sf(3.0) - sf(1.0);
        assert!(back.to_f64().abs() < 1e-37, "{back:?}");
        let x = sf(1.0) + sf(1e-30);
        assert!(((x - sf(1.0)).to_f64() - 1e-30).abs() < 1e-38);
        assert!(sf(-1.0) < sf(0.5));
        assert!(sf(-1.0) < sf(-0.5));
        assert!(Soft128::ZERO < sf(1e-300));
        assert_eq!((sf(2.0) - sf(2.0)), Soft128::ZERO);
    }

    #[test]
    fn complex_division_in_each_precision() {
        let a = Complex64::new(1.5, -2.0);
        let b = Complex64::new(0.25, 3.0);
        let want = a / b;
        let f = (Cx::<f64>::from_c64(a) / Cx::from_c64(b)).to_c64();
        let d = (Cx::<DoubleDouble>::from_c64(a) / Cx::from_c64(b)).to_c64();
        let s = (Cx::<Soft128>::from_c64(a) / Cx::from_c64(b)).to_c64();
        for v in [f, d, s] {
            assert!((v - want).norm() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn soft128_agrees_with_double_double(a in -1e6f64..1e6, b in -1e6f64..1e6, c in 0.5f64..1e3) {
            let exact = |x: DoubleDouble| x.to_f64();
            let tol = 1e-13 * (a.abs() * b.abs() + a.abs() + b.abs() + 1.0);
            prop_assert!(((sf(a) * sf(b) + sf(c)).to_f64() - exact(dd(a) * dd(b) + dd(c))).abs() <= tol);
            prop_assert!(((sf(a) - sf(b)) / sf(c)).to_f64() - exact((dd(a) - dd(b)) / dd(c)) <= tol);
        }
    }
}

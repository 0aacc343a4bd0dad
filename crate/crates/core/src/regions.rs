//! Plane regions avoiding the real axis: finite disjoint unions of open
//! rectangles, open disks and images of rectangles under `z ↦ 1/z`.
//!
//! Coordinates are kept as exact rationals next to their `f64` values so
//! that conjugation, negation and inversion are exact and boundary cases
//! can be decided without rounding.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// An exact rational coordinate with its nearest `f64`.
#[derive(Clone, Debug)]
pub struct Coord {
    exact: BigRational,
    approx: f64,
}

impl Coord {
    pub fn new(exact: BigRational) -> Self {
        let approx = exact.to_f64().unwrap_or(f64::NAN);
        Coord { exact, approx }
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(v)))
    }

    /// Exact value of a finite `f64`.
    pub fn from_f64(v: f64) -> Result<Self> {
        BigRational::from_float(v)
            .map(Self::new)
            .ok_or_else(|| Error::Parse(format!("non-finite coordinate {v}")))
    }

    pub fn exact(&self) -> &BigRational {
        &self.exact
    }

    pub fn value(&self) -> f64 {
        self.approx
    }

    fn neg(&self) -> Coord {
        Coord { exact: -&self.exact, approx: -self.approx }
    }
}

impl PartialEq for Coord {
    fn eq(&self, other: &Self) -> bool {
        self.exact == other.exact
    }
}

impl FromStr for Coord {
    type Err = Error;

    /// Accepts integers, decimals with optional exponent, and `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad coordinate {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(Coord::new(BigRational::new(p, q)));
        }
        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (neg, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty()
            || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let all: String = format!("{int_part}{frac_part}");
        let mut num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad())? };
        if neg {
            num = -num;
        }
        let scale = exponent - frac_part.len() as i32;
        let ten = BigInt::from(10);
        let value = if scale >= 0 {
            BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
        };
        Ok(Coord::new(value))
    }
}

impl fmt::Display for Coord {
    /// Terminating decimals print as decimals, anything else as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.exact;
        let mut den = r.denom().clone();
        let (mut twos, mut fives) = (0usize, 0usize);
        let two = BigInt::from(2);
        let five = BigInt::from(5);
        while (&den % &two).is_zero() {
            den /= &two;
            twos += 1;
        }
        while (&den % &five).is_zero() {
            den /= &five;
            fives += 1;
        }
        let places = twos.max(fives);
        if !den.is_one() || places > 40 {
            return write!(f, "{}/{}", r.numer(), r.denom());
        }
        let scaled = r * BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
        let n = scaled.to_integer();
        if places == 0 {
            return write!(f, "{n}");
        }
        let neg = n.is_negative();
        let digits = n.abs().to_string();
        let padded = format!("{digits:0>width$}", width = places + 1);
        let (ip, fp) = padded.split_at(padded.len() - places);
        let fp = fp.trim_end_matches('0');
        write!(f, "{}{}", if neg { "-" } else { "" }, ip)?;
        if !fp.is_empty() {
            write!(f, ".{fp}")?;
        }
        Ok(())
    }
}

/// Open axis-aligned rectangle `(x_lo, x_hi) × (y_lo, y_hi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rect {
    pub x_lo: Coord,
    pub x_hi: Coord,
    pub y_lo: Coord,
    pub y_hi: Coord,
}

impl Rect {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Result<Rect> {
        Ok(Rect {
            x_lo: Coord::from_f64(x_lo)?,
            x_hi: Coord::from_f64(x_hi)?,
            y_lo: Coord::from_f64(y_lo)?,
            y_hi: Coord::from_f64(y_hi)?,
        })
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        (self.x_lo.value(), self.x_hi.value(), self.y_lo.value(), self.y_hi.value())
    }

    fn contains(&self, z: Complex64) -> bool {
        let (x0, x1, y0, y1) = self.bounds();
        x0 < z.re && z.re < x1 && y0 < z.im && z.im < y1
    }

    fn distance_to_boundary(&self, z: Complex64) -> f64 {
        let (x0, x1, y0, y1) = self.bounds();
        if self.contains(z) {
            (z.re - x0).min(x1 - z.re).min(z.im - y0).min(y1 - z.im)
        } else {
            let dx = (x0 - z.re).max(0.0).max(z.re - x1);
            let dy = (y0 - z.im).max(0.0).max(z.im - y1);
            dx.hypot(dy)
        }
    }

    fn conjugate(&self) -> Rect {
        Rect {
            x_lo: self.x_lo.clone(),
            x_hi: self.x_hi.clone(),
            y_lo: self.y_hi.neg(),
            y_hi: self.y_lo.neg(),
        }
    }

    fn negate(&self) -> Rect {
        Rect {
            x_lo: self.x_hi.neg(),
            x_hi: self.x_lo.neg(),
            y_lo: self.y_hi.neg(),
            y_hi: self.y_lo.neg(),
        }
    }

    fn area(&self) -> f64 {
        let (x0, x1, y0, y1) = self.bounds();
        (x1 - x0) * (y1 - y0)
    }

    /// Smallest `|z|` over the closed rectangle.
    fn min_modulus(&self) -> f64 {
        self.distance_to_boundary(Complex64::new(0.0, 0.0))
    }

    fn validate(&self) -> Result<()> {
        if self.x_lo.exact >= self.x_hi.exact || self.y_lo.exact >= self.y_hi.exact {
            return Err(Error::InvalidRegion(format!("degenerate rectangle {}", RectDsl(self))));
        }
        if !(self.y_lo.exact.is_positive() || self.y_hi.exact.is_negative()) {
            return Err(Error::InvalidRegion(format!(
                "rectangle {} meets the real axis",
                RectDsl(self)
            )));
        }
        Ok(())
    }
}

/// Open disk.
#[derive(Clone, Debug, PartialEq)]
pub struct Disk {
    pub cx: Coord,
    pub cy: Coord,
    pub r: Coord,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Result<Disk> {
        Ok(Disk {
            cx: Coord::from_f64(center.re)?,
            cy: Coord::from_f64(center.im)?,
            r: Coord::from_f64(radius)?,
        })
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(self.cx.value(), self.cy.value())
    }

    pub fn radius(&self) -> f64 {
        self.r.value()
    }

    fn contains(&self, z: Complex64) -> bool {
        (z - self.center()).norm() < self.radius()
    }

    fn distance_to_boundary(&self, z: Complex64) -> f64 {
        ((z - self.center()).norm() - self.radius()).abs()
    }

    /// Image under `z ↦ 1/z`: center `c̄/(|c|²−r²)`, radius `r/(|c|²−r²)`.
    fn invert(&self) -> Disk {
        let denom = &self.cx.exact * &self.cx.exact + &self.cy.exact * &self.cy.exact
            - &self.r.exact * &self.r.exact;
        Disk {
            cx: Coord::new(&self.cx.exact / &denom),
            cy: Coord::new(-&self.cy.exact / &denom),
            r: Coord::new(&self.r.exact / &denom),
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.r.exact.is_positive() {
            return Err(Error::InvalidRegion("disk radius must be positive".into()));
        }
        if self.cy.exact.abs() <= self.r.exact {
            return Err(Error::InvalidRegion(format!(
                "disk {} meets the real axis",
                Primitive::Disk(self.clone())
            )));
        }
        Ok(())
    }
}

struct RectDsl<'a>(&'a Rect);

impl fmt::Display for RectDsl<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.0;
        write!(f, "{},{},{},{}", r.x_lo, r.x_hi, r.y_lo, r.y_hi)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Primitive {
    Rect(Rect),
    Disk(Disk),
    /// `{1/w : w ∈ rect}`; membership is tested by mapping the query back.
    InvertedRect(Rect),
}

/// Distance from `z` to the arc `{1/w : w on a rectangle edge}`. The edge is
/// the segment from `w0` to `w1` on a line not through the origin unless
/// `through_origin`.
fn inverted_edge_distance(z: Complex64, w0: Complex64, w1: Complex64) -> f64 {
    let p0 = w0.inv();
    let p1 = w1.inv();
    let endpoint = (z - p0).norm().min((z - p1).norm());
    let dir = w1 - w0;
    // distance from the origin to the edge's line
    let cross = w0.re * dir.im - w0.im * dir.re;
    if cross.abs() <= 1e-300 {
        // line through 0: image is a segment on the same line
        let d = p1 - p0;
        let t = (((z - p0) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
        return (z - (p0 + d * t)).norm();
    }
    // foot of the perpendicular from 0 to the line
    let foot = w0 - dir * ((w0 * dir.conj()).re / dir.norm_sqr());
    // the line maps to the circle through 0 with diameter endpoint 1/foot
    let center = foot.inv() * 0.5;
    let rho = center.norm();
    let to_z = z - center;
    if to_z.norm() == 0.0 {
        return rho.min(endpoint);
    }
    let q = center + to_z * (rho / to_z.norm());
    // does q lie on the arc, i.e. is 1/q on the segment?
    if q.norm() > 0.0 {
        let w = q.inv();
        let t = ((w - w0) * dir.conj()).re / dir.norm_sqr();
        if (0.0..=1.0).contains(&t) {
            return (to_z.norm() - rho).abs();
        }
    }
    endpoint
}

impl Primitive {
    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            Primitive::Rect(r) => r.contains(z),
            Primitive::Disk(d) => d.contains(z),
            Primitive::InvertedRect(r) => z.norm_sqr() > 0.0 && r.contains(z.inv()),
        }
    }

    pub fn distance_to_boundary(&self, z: Complex64) -> f64 {
        match self {
            Primitive::Rect(r) => r.distance_to_boundary(z),
            Primitive::Disk(d) => d.distance_to_boundary(z),
            Primitive::InvertedRect(r) => {
                let (x0, x1, y0, y1) = r.bounds();
                let c = [
                    Complex64::new(x0, y0),
                    Complex64::new(x1, y0),
                    Complex64::new(x1, y1),
                    Complex64::new(x0, y1),
                ];
                (0..4)
                    .map(|i| inverted_edge_distance(z, c[i], c[(i + 1) % 4]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn conjugate(&self) -> Primitive {
        match self {
            Primitive::Rect(r) => Primitive::Rect(r.conjugate()),
            Primitive::Disk(d) => Primitive::Disk(Disk {
                cx: d.cx.clone(),
                cy: d.cy.neg(),
                r: d.r.clone(),
            }),
            Primitive::InvertedRect(r) => Primitive::InvertedRect(r.conjugate()),
        }
    }

    pub fn negate(&self) -> Primitive {
        match self {
            Primitive::Rect(r) => Primitive::Rect(r.negate()),
            Primitive::Disk(d) => Primitive::Disk(Disk {
                cx: d.cx.neg(),
                cy: d.cy.neg(),
                r: d.r.clone(),
            }),
            Primitive::InvertedRect(r) => Primitive::InvertedRect(r.negate()),
        }
    }

    pub fn invert(&self) -> Primitive {
        match self {
            Primitive::Rect(r) => Primitive::InvertedRect(r.clone()),
            Primitive::Disk(d) => Primitive::Disk(d.invert()),
            Primitive::InvertedRect(r) => Primitive::Rect(r.clone()),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Primitive::Rect(r) => r.area(),
            Primitive::Disk(d) => std::f64::consts::PI * d.radius() * d.radius(),
            Primitive::InvertedRect(r) => inverted_rect_area(r),
        }
    }

    /// Axis-aligned `f64` bounding box `(x_lo, x_hi, y_lo, y_hi)`.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        match self {
            Primitive::Rect(r) => r.bounds(),
            Primitive::Disk(d) => {
                let c = d.center();
                let r = d.radius();
                (c.re - r, c.re + r, c.im - r, c.im + r)
            }
            Primitive::InvertedRect(r) => {
                // |1/w| ≤ 1/min|w|, and Im(1/w) has the sign opposite to Im w
                let bound = 1.0 / r.min_modulus();
                if r.y_lo.value() > 0.0 {
                    (-bound, bound, -bound, 0.0)
                } else {
                    (-bound, bound, 0.0, bound)
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Primitive::Rect(r) | Primitive::InvertedRect(r) => r.validate(),
            Primitive::Disk(d) => d.validate(),
        }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Complex64 {
        match self {
            Primitive::Rect(r) => {
                let (x0, x1, y0, y1) = r.bounds();
                Complex64::new(rng.gen_range(x0..x1), rng.gen_range(y0..y1))
            }
            Primitive::Disk(d) => {
                let rad = d.radius() * rng.gen::<f64>().sqrt();
                let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                d.center() + Complex64::from_polar(rad, theta)
            }
            Primitive::InvertedRect(r) => {
                // w with density ∝ |w|^-4 on the rectangle makes 1/w uniform
                let (x0, x1, y0, y1) = r.bounds();
                let m = r.min_modulus();
                loop {
                    let w = Complex64::new(rng.gen_range(x0..x1), rng.gen_range(y0..y1));
                    let accept = (m * m / w.norm_sqr()).powi(2);
                    if rng.gen::<f64>() < accept {
                        return w.inv();
                    }
                }
            }
        }
    }
}

/// `∫_rect |w|^-4 dν(w)`: closed form in x, composite Gauss–Legendre in y.
fn inverted_rect_area(r: &Rect) -> f64 {
    let (x0, x1, y0, y1) = r.bounds();
    let antiderivative = |x: f64, y: f64| {
        x / (2.0 * y * y * (x * x + y * y)) + (x / y).atan() / (2.0 * y * y * y)
    };
    let h = |y: f64| antiderivative(x1, y) - antiderivative(x0, y);
    gauss_legendre(h, y0, y1, 256)
}

pub(crate) fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const NODES: [f64; 4] = [
        0.183_434_642_495_649_8,
        0.525_532_409_916_329,
        0.796_666_477_413_626_7,
        0.960_289_856_497_536_3,
    ];
    const WEIGHTS: [f64; 4] = [
        0.362_683_783_378_362,
        0.313_706_645_877_887_3,
        0.222_381_034_453_374_5,
        0.101_228_536_290_376_3,
    ];
    let width = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let mid = a + (i as f64 + 0.5) * width;
            let half = width / 2.0;
            NODES
                .iter()
                .zip(WEIGHTS)
                .map(|(&x, w)| w * (f(mid - half * x) + f(mid + half * x)))
                .sum::<f64>()
                * half
        })
        .sum()
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Primitive::Rect(r) => write!(f, "rect:{}", RectDsl(r)),
            Primitive::InvertedRect(r) => write!(f, "invrect:{}", RectDsl(r)),
            Primitive::Disk(d) => write!(f, "disk:{},{},{}", d.cx, d.cy, d.r),
        }
    }
}

impl FromStr for Primitive {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected kind:args, got {s:?}")))?;
        let nums = args
            .split(',')
            .map(str::parse::<Coord>)
            .collect::<Result<Vec<_>>>()?;
        let arity = |n: usize| {
            if nums.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!("{kind} takes {n} numbers, got {}", nums.len())))
            }
        };
        let rect = |v: &[Coord]| Rect {
            x_lo: v[0].clone(),
            x_hi: v[1].clone(),
            y_lo: v[2].clone(),
            y_hi: v[3].clone(),
        };
        match kind.trim() {
            "rect" => arity(4).map(|_| Primitive::Rect(rect(&nums))),
            "invrect" => arity(4).map(|_| Primitive::InvertedRect(rect(&nums))),
            "disk" => arity(3).map(|_| {
                Primitive::Disk(Disk {
                    cx: nums[0].clone(),
                    cy: nums[1].clone(),
                    r: nums[2].clone(),
                })
            }),
            other => Err(Error::Parse(format!("unknown primitive {other:?}"))),
        }
    }
}

fn sq(x: &BigRational) -> BigRational {
    x * x
}

fn clamp(v: &BigRational, lo: &BigRational, hi: &BigRational) -> BigRational {
    if v < lo {
        lo.clone()
    } else if v > hi {
        hi.clone()
    } else {
        v.clone()
    }
}

fn rect_rect_overlap(a: &Rect, b: &Rect) -> bool {
    a.x_lo.exact < b.x_hi.exact
        && b.x_lo.exact < a.x_hi.exact
        && a.y_lo.exact < b.y_hi.exact
        && b.y_lo.exact < a.y_hi.exact
}

fn rect_disk_overlap(r: &Rect, d: &Disk) -> bool {
    let px = clamp(&d.cx.exact, &r.x_lo.exact, &r.x_hi.exact);
    let py = clamp(&d.cy.exact, &r.y_lo.exact, &r.y_hi.exact);
    sq(&(px - &d.cx.exact)) + sq(&(py - &d.cy.exact)) < sq(&d.r.exact)
}

fn disk_disk_overlap(a: &Disk, b: &Disk) -> bool {
    sq(&(&a.cx.exact - &b.cx.exact)) + sq(&(&a.cy.exact - &b.cy.exact))
        < sq(&(&a.r.exact + &b.r.exact))
}

fn boxes_overlap(a: (f64, f64, f64, f64), b: (f64, f64, f64, f64)) -> bool {
    let pad = 1e-12;
    a.0 < b.1 + pad && b.0 < a.1 + pad && a.2 < b.3 + pad && b.2 < a.3 + pad
}

/// `Ok(false)` when provably disjoint, `Ok(true)` when they overlap, `Err`
/// when disjointness cannot be certified (rectangle against inverted
/// rectangle with intersecting bounding boxes).
fn overlap(a: &Primitive, b: &Primitive) -> Result<bool> {
    use Primitive::*;
    Ok(match (a, b) {
        (Rect(p), Rect(q)) | (InvertedRect(p), InvertedRect(q)) => rect_rect_overlap(p, q),
        (Disk(p), Disk(q)) => disk_disk_overlap(p, q),
        (Rect(r), Disk(d)) | (Disk(d), Rect(r)) => rect_disk_overlap(r, d),
        (InvertedRect(r), Disk(d)) | (Disk(d), InvertedRect(r)) => rect_disk_overlap(r, &d.invert()),
        (Rect(_), InvertedRect(_)) | (InvertedRect(_), Rect(_)) => {
            if boxes_overlap(a.bounding_box(), b.bounding_box()) {
                return Err(Error::InvalidRegion(format!(
                    "cannot certify that {a} and {b} are disjoint"
                )));
            }
            false
        }
    })
}

/// Finite union of pairwise disjoint open primitives whose closures avoid
/// the real axis.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexRegion {
    primitives: Vec<Primitive>,
}

impl ComplexRegion {
    pub fn new(primitives: Vec<Primitive>) -> Result<Self> {
        if primitives.is_empty() {
            return Err(Error::InvalidRegion("region has no primitives".into()));
        }
        for p in &primitives {
            p.validate()?;
        }
        for (i, a) in primitives.iter().enumerate() {
            for b in &primitives[i + 1..] {
                if overlap(a, b)? {
                    return Err(Error::InvalidRegion(format!("{a} overlaps {b}")));
                }
            }
        }
        Ok(ComplexRegion { primitives })
    }

    pub fn rect(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Result<Self> {
        Self::new(vec![Primitive::Rect(Rect::new(x_lo, x_hi, y_lo, y_hi)?)])
    }

    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        Self::new(vec![Primitive::Disk(Disk::new(center, radius)?)])
    }

    pub fn primitives(&self) -> &[Primitive] {
        &self.primitives
    }

    /// Images of a valid region under the exact maps stay valid.
    fn mapped(&self, f: impl Fn(&Primitive) -> Primitive) -> ComplexRegion {
        ComplexRegion { primitives: self.primitives.iter().map(f).collect() }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.primitives.iter().any(|p| p.contains(z))
    }

    pub fn distance_to_boundary(&self, z: Complex64) -> f64 {
        self.primitives
            .iter()
            .map(|p| p.distance_to_boundary(z))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn conjugate(&self) -> ComplexRegion {
        self.mapped(Primitive::conjugate)
    }

    pub fn negate(&self) -> ComplexRegion {
        self.mapped(Primitive::negate)
    }

    pub fn invert(&self) -> ComplexRegion {
        self.mapped(Primitive::invert)
    }

    pub fn area(&self) -> f64 {
        self.primitives.iter().map(Primitive::area).sum()
    }

    /// Uniform point: primitive chosen with probability proportional to its
    /// area, then sampled uniformly inside it.
    pub fn sample_point(&self, rng: &mut impl Rng) -> Complex64 {
        let total = self.area();
        let mut u = rng.gen::<f64>() * total;
        for p in &self.primitives {
            let a = p.area();
            if u < a {
                return p.sample(rng);
            }
            u -= a;
        }
        self.primitives.last().expect("nonempty").sample(rng)
    }

    /// True when every primitive lies in the open upper or every one in the
    /// open lower half-plane.
    pub fn in_one_half_plane(&self) -> bool {
        let upper = |p: &Primitive| p.bounding_box().2 >= 0.0;
        self.primitives.iter().all(upper) || self.primitives.iter().all(|p| !upper(p))
    }

    /// Largest `|z|` coordinate scale, used for rounding slack.
    pub fn scale(&self) -> f64 {
        self.primitives
            .iter()
            .map(|p| {
                let (a, b, c, d) = p.bounding_box();
                a.abs().max(b.abs()).max(c.abs()).max(d.abs())
            })
            .fold(1.0, f64::max)
    }
}

impl fmt::Display for ComplexRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.primitives.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for ComplexRegion {
    type Err = Error;

    /// `rect:x_lo,x_hi,y_lo,y_hi`, `disk:cx,cy,r` or `invrect:…`, joined by `;`.
    fn from_str(s: &str) -> Result<Self> {
        let prims = s
            .split(';')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Primitive>>>()?;
        ComplexRegion::new(prims)
    }
}

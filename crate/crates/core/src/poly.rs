//! Dense integer polynomials and the structural transforms used by the
//! symmetry arguments (reciprocal, argument negation).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{domain, Error, Result};

/// Integer polynomial `a_0 + a_1 x + … + a_m x^m`, stored densely with the
/// constant term first. Trailing zero coefficients are trimmed, so the zero
/// polynomial has no coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    /// Build from coefficients listed highest degree first.
    pub fn from_descending(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().rev().copied().collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the last nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficients `a_0..=a_m`.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<i64> {
        self.coeffs.last().copied()
    }

    pub fn constant_term(&self) -> i64 {
        self.coeffs.first().copied().unwrap_or(0)
    }

    fn require_nonzero(&self, op: &str) -> Result<()> {
        if self.is_zero() {
            domain(format!("{op} of the zero polynomial"))
        } else {
            Ok(())
        }
    }

    /// Naive height: the largest absolute coefficient.
    pub fn height(&self) -> Result<u64> {
        self.require_nonzero("height")?;
        Ok(self.coeffs.iter().map(|a| a.unsigned_abs()).max().unwrap_or(0))
    }

    /// Gcd of the absolute values of the coefficients.
    pub fn content(&self) -> Result<u64> {
        self.require_nonzero("content")?;
        Ok(self
            .coeffs
            .iter()
            .fold(0u64, |g, &a| gcd(g, a.unsigned_abs())))
    }

    pub fn is_primitive(&self) -> Result<bool> {
        Ok(self.content()? == 1)
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a as f64)
    }

    pub fn derivative(&self) -> IntPolynomial {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| a * i as i64)
                .collect(),
        )
    }

    /// Multiplies by `-1` if needed so the leading coefficient is positive.
    pub fn sign_normalized(mut self) -> Self {
        if self.leading().is_some_and(|a| a < 0) {
            for a in &mut self.coeffs {
                *a = -*a;
            }
        }
        self
    }

    /// `x^m p(1/x)`, sign-normalized. Roots map `z ↦ 1/z`; height and
    /// irreducibility are preserved.
    pub fn reciprocal(&self) -> Result<IntPolynomial> {
        self.require_nonzero("reciprocal")?;
        if self.constant_term() == 0 {
            return domain("reciprocal requires a nonzero constant term");
        }
        let mut c = self.coeffs.clone();
        c.reverse();
        Ok(IntPolynomial::new(c).sign_normalized())
    }

    /// `±p(-x)`, sign-normalized. Roots are negated.
    pub fn negate_argument(&self) -> IntPolynomial {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &a)| if i % 2 == 1 { -a } else { a })
            .collect();
        IntPolynomial::new(c).sign_normalized()
    }

    pub fn scale(&self, c: i64) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    /// Compact CSV form `a_0,a_1,…,a_m`.
    pub fn to_csv(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn from_csv(s: &str) -> Result<IntPolynomial> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Parse(format!("bad coefficient {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}

impl TryFrom<Vec<i64>> for IntPolynomial {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Ok(IntPolynomial::new(v))
    }
}

impl From<IntPolynomial> for Vec<i64> {
    fn from(p: IntPolynomial) -> Vec<i64> {
        p.coeffs
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &a) in self.coeffs.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            let mag = a.unsigned_abs();
            if first {
                if a < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if a < 0 { '-' } else { '+' })?;
            }
            first = false;
            if mag != 1 || i == 0 {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    /// Parses the text form `a_m x^m + … + a_0` (whitespace optional, terms in
    /// any order, repeated powers summed).
    fn from_str(s: &str) -> Result<Self> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let bad = |msg: &str| Error::Parse(format!("{msg} in {s:?}"));
        let mut coeffs: Vec<i64> = Vec::new();
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if i != 0 {
                return Err(bad("expected '+' or '-'"));
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coef: Option<i64> = if i > start {
                Some(src[start..i].parse().map_err(|_| bad("coefficient overflow"))?)
            } else {
                None
            };
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
            }
            let power = if i < bytes.len() && bytes[i] == b'x' {
                i += 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let ps = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if ps == i {
                        return Err(bad("missing exponent"));
                    }
                    src[ps..i].parse::<usize>().map_err(|_| bad("bad exponent"))?
                } else {
                    1
                }
            } else {
                if coef.is_none() {
                    return Err(bad("empty term"));
                }
                0
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0);
            }
            coeffs[power] += sign * coef.unwrap_or(1);
        }
        Ok(IntPolynomial::new(coeffs))
    }
}

/// A polynomial that is primitive, irreducible over the rationals, of
/// positive degree and with positive leading coefficient; i.e. the minimal
/// polynomial of its roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePolynomial(IntPolynomial);

impl PrimePolynomial {
    pub fn inner(&self) -> &IntPolynomial {
        &self.0
    }

    pub fn into_inner(self) -> IntPolynomial {
        self.0
    }
}

impl TryFrom<IntPolynomial> for PrimePolynomial {
    type Error = Error;
    fn try_from(p: IntPolynomial) -> Result<Self> {
        if crate::counting::is_prime_polynomial(&p) {
            Ok(PrimePolynomial(p))
        } else {
            domain(format!("{p} is not a prime polynomial"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn height_examples() {
        assert_eq!(p("2x^2+3x+5").height().unwrap(), 5);
        assert_eq!(p("x^2 + 1").height().unwrap(), 1);
        assert_eq!(p("-7x^3 + x").height().unwrap(), 7);
        assert!(IntPolynomial::zero().height().is_err());
    }

    #[test]
    fn content_examples() {
        assert_eq!(p("2x^2+4x+2").content().unwrap(), 2);
        assert!(!p("2x^2+4x+2").is_primitive().unwrap());
        assert_eq!(p("x^2+x+1").content().unwrap(), 1);
        assert!(p("x^2+x+1").is_primitive().unwrap());
        assert_eq!(p("6x^3+10x").content().unwrap(), 2);
        assert!(IntPolynomial::zero().content().is_err());
    }

    #[test]
    fn evaluate_and_derivative() {
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(p("x^2+1").evaluate(i), Complex64::new(0.0, 0.0));
        assert_eq!(p("x^3-x-1").derivative(), p("3x^2-1"));
        assert_eq!(
            p("x^2-2x+2").evaluate(Complex64::new(1.0, 1.0)),
            Complex64::new(0.0, 0.0)
        );
        assert!(p("7").derivative().is_zero());
    }

    #[test]
    fn reciprocal_examples() {
        let r = p("2x^2+3x+5").reciprocal().unwrap();
        assert_eq!(r, p("5x^2+3x+2"));
        assert_eq!(r.height().unwrap(), 5);
        assert_eq!(p("x^2+1").reciprocal().unwrap(), p("x^2+1"));
        assert_eq!(p("-x^2+x+3").reciprocal().unwrap(), p("3x^2+x-1"));
        assert!(p("x^2+x").reciprocal().is_err());
    }

    #[test]
    fn negate_argument_examples() {
        assert_eq!(p("x^2+x+1").negate_argument(), p("x^2-x+1"));
        assert_eq!(p("x^2+1").negate_argument(), p("x^2+1"));
        assert_eq!(p("x^3-x-1").negate_argument(), p("x^3-x+1"));
    }

    #[test]
    fn text_and_csv_forms() {
        let q = p("2x^2+3x+5");
        assert_eq!(q.coeffs(), &[5, 3, 2]);
        assert_eq!(q.to_string(), "2x^2 + 3x + 5");
        assert_eq!(p("-7x^3 + x").to_string(), "-7x^3 + x");
        assert_eq!(p("x^2 - 2x + 1").to_string(), "x^2 - 2x + 1");
        assert_eq!(q.to_csv(), "5,3,2");
        assert_eq!(IntPolynomial::from_csv("5, 3, 2").unwrap(), q);
        assert_eq!(p(&q.to_string()), q);
        assert_eq!(p("3*x^2 - x^2"), p("2x^2"));
        assert!("x^".parse::<IntPolynomial>().is_err());
        assert!("".parse::<IntPolynomial>().is_err());
        assert!("2x3".parse::<IntPolynomial>().is_err());
        assert!(IntPolynomial::from_csv("1,a").is_err());
    }

    #[test]
    fn degree_tracks_last_nonzero() {
        let q = IntPolynomial::new(vec![1, 2, 0, 0]);
        assert_eq!(q.degree(), Some(1));
        assert_eq!(IntPolynomial::zero().degree(), None);
        assert_eq!(IntPolynomial::from_descending(&[1, 0, 1]), p("x^2+1"));
    }
}

//! Exact univariate polynomial arithmetic over arbitrary-precision rationals.
//!
//! Coefficient functions of a holonomic relation are polynomials in the
//! window index. Everything here is exact: values are [`Rational`]
//! (arbitrary-precision, lowest terms, positive denominator) and no operation
//! ever rounds.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Integer `n` as a [`Rational`].
pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q` as a [`Rational`]. Panics if `q == 0`.
pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in rational literal {0:?}")]
    ZeroDenominator(String),
}

/// Parse `"p"` or `"p/q"` (optional leading minus) into a [`Rational`].
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    BigRational::from_str(s).map_err(|_| {
        // from_str only distinguishes the zero-denominator case internally;
        // recover it so callers see a precise error.
        match s.split_once('/') {
            Some((_, den)) if BigInt::from_str(den).is_ok_and(|d| d.is_zero()) => {
                ParseRationalError::ZeroDenominator(s.to_string())
            }
            _ => ParseRationalError::Malformed(s.to_string()),
        }
    })
}

/// Canonical string form: `"p"` when the denominator is 1, else `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("the zero polynomial has no eventual sign index")]
pub struct ZeroPolynomialError;

/// Dense univariate polynomial over [`Rational`], low degree first.
///
/// Canonical form: no trailing zero coefficient; the zero polynomial is the
/// empty coefficient list, and its degree is `None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    /// Build from coefficients (index `k` is the coefficient of `x^k`),
    /// trimming trailing zeros.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// Convenience constructor from integer coefficients, low degree first.
    pub fn from_integers(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| rational_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Exact evaluation at an integer argument.
    pub fn eval(&self, at: i64) -> Rational {
        self.eval_big(&BigInt::from(at))
    }

    /// Exact evaluation at an arbitrary-precision integer argument.
    pub fn eval_big(&self, at: &BigInt) -> Rational {
        let x = Rational::from_integer(at.clone());
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &x + c;
        }
        acc
    }

    /// The polynomial `x ↦ P(x + offset)`.
    pub fn shift(&self, offset: i64) -> Polynomial {
        let c = rational_int(offset);
        // Horner in the polynomial ring: acc := acc * (x + c) + a_k.
        let mut acc: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        for a in self.coeffs.iter().rev() {
            let mut next = vec![Rational::zero(); acc.len() + 1];
            for (i, v) in acc.iter().enumerate() {
                next[i + 1] += v;
                next[i] += v * &c;
            }
            next[0] += a;
            acc = next;
        }
        Polynomial::new(acc)
    }

    /// Sign of `P(i)` for all sufficiently large `i`: the sign of the leading
    /// coefficient, or `0` exactly for the zero polynomial.
    pub fn eventual_sign(&self) -> i8 {
        match self.leading_coefficient() {
            None => 0,
            Some(c) if c.is_positive() => 1,
            Some(_) => -1,
        }
    }

    /// An integer `M >= 0` such that `sign(P(i)) == eventual_sign(P)` for
    /// every integer `i >= M`, via the Cauchy root bound
    /// `M = ceil(1 + max_k |a_k| / |a_d|)` over the non-leading coefficients.
    ///
    /// Rejects the zero polynomial, which has no such index.
    pub fn eventual_sign_index(&self) -> Result<BigInt, ZeroPolynomialError> {
        let lead = self.leading_coefficient().ok_or(ZeroPolynomialError)?;
        if self.coeffs.len() == 1 {
            // Constants have no roots; the sign is stable from 0 on.
            return Ok(BigInt::zero());
        }
        let lead_abs = lead.abs();
        let max_ratio = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead_abs)
            .max()
            .expect("non-constant polynomial has non-leading coefficients");
        Ok((max_ratio + Rational::one()).ceil().to_integer())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, other: &Polynomial) -> Polynomial {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Polynomial::new(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, other: &Polynomial) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        if other.coeffs.len() > coeffs.len() {
            coeffs.resize(other.coeffs.len(), Rational::zero());
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] -= c;
        }
        Polynomial::new(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl TryFrom<Vec<String>> for Polynomial {
    type Error = ParseRationalError;

    fn try_from(strings: Vec<String>) -> Result<Self, Self::Error> {
        let coeffs = strings
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Polynomial::new(coeffs))
    }
}

impl From<Polynomial> for Vec<String> {
    fn from(p: Polynomial) -> Vec<String> {
        p.coeffs.iter().map(format_rational).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(coeffs: &[i64]) -> Polynomial {
        Polynomial::from_integers(coeffs)
    }

    #[test]
    fn eval_examples() {
        // x^2 + 1 at 3
        assert_eq!(p(&[1, 0, 1]).eval(3), rational_int(10));
        assert_eq!(Polynomial::zero().eval(7), rational_int(0));
        // 2x - 1 at 0
        assert_eq!(p(&[-1, 2]).eval(0), rational_int(-1));
    }

    #[test]
    fn shift_examples() {
        // x^2 shifted by -1 is x^2 - 2x + 1
        assert_eq!(p(&[0, 0, 1]).shift(-1), p(&[1, -2, 1]));
        assert_eq!(p(&[5]).shift(3), p(&[5]));
        assert_eq!(Polynomial::zero().shift(4), Polynomial::zero());
    }

    #[test]
    fn combine_cancels_to_canonical_zero() {
        let x = p(&[0, 1]);
        assert_eq!(&x - &x, Polynomial::zero());
        assert!((&x - &x).coeffs().is_empty());
    }

    #[test]
    fn eventual_sign_examples() {
        assert_eq!(p(&[-1000, 2]).eventual_sign(), 1);
        assert_eq!(Polynomial::zero().eventual_sign(), 0);
        assert_eq!(p(&[0, 50, -1]).eventual_sign(), -1);
    }

    #[test]
    fn eventual_sign_index_examples() {
        let m = p(&[-1, 2]).eventual_sign_index().unwrap();
        assert_eq!(m, BigInt::from(2));
        assert_eq!(p(&[-1, 2]).eval(2), rational_int(3));

        assert_eq!(p(&[7]).eventual_sign_index().unwrap(), BigInt::from(0));

        let m = p(&[-4, 0, 1]).eventual_sign_index().unwrap();
        assert_eq!(m, BigInt::from(5));
        for i in 5..50 {
            assert!(p(&[-4, 0, 1]).eval(i).is_positive());
        }

        assert_eq!(
            Polynomial::zero().eventual_sign_index(),
            Err(ZeroPolynomialError)
        );
    }

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["-1/2", "2", "0", "7/3", "-10"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        assert_eq!(parse_rational("4/6").unwrap(), rational(2, 3));
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert!(parse_rational("").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn serde_polynomial() {
        let q: Polynomial = serde_json::from_str(r#"["-1/2", "2"]"#).unwrap();
        assert_eq!(q, Polynomial::new(vec![rational(-1, 2), rational_int(2)]));
        assert_eq!(serde_json::to_string(&q).unwrap(), r#"["-1/2","2"]"#);
        // Trailing zeros normalize away on input.
        let r: Polynomial = serde_json::from_str(r#"["1", "0", "0"]"#).unwrap();
        assert_eq!(r, p(&[1]));
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((-50i64..=50, 1i64..=6), 0..=5).prop_map(|cs| {
            Polynomial::new(cs.into_iter().map(|(num, den)| rational(num, den)).collect())
        })
    }

    proptest! {
        #[test]
        fn add_matches_pointwise(a in arb_poly(), b in arb_poly(), i in -30i64..30) {
            prop_assert_eq!((&a + &b).eval(i), a.eval(i) + b.eval(i));
            prop_assert_eq!((&a - &b).eval(i), a.eval(i) - b.eval(i));
        }

        #[test]
        fn shift_matches_pointwise(a in arb_poly(), c in -10i64..=10, i in -30i64..30) {
            prop_assert_eq!(a.shift(c).eval(i), a.eval(i + c));
        }

        #[test]
        fn canonical_form_no_zero_leading(a in arb_poly(), b in arb_poly()) {
            let s = &a + &b;
            prop_assert!(s.leading_coefficient().is_none_or(|c| !c.is_zero()));
            let d = &a - &b;
            prop_assert!(d.leading_coefficient().is_none_or(|c| !c.is_zero()));
        }

        #[test]
        fn sign_stable_beyond_index(a in arb_poly()) {
            prop_assume!(!a.is_zero());
            let m = a.eventual_sign_index().unwrap();
            let sign = a.eventual_sign();
            // 200 sampled integers at and beyond the bound.
            for k in 0..200 {
                let v = a.eval_big(&(&m + BigInt::from(k * 7 + 1)));
                let got = if v.is_zero() { 0i8 } else if v.is_positive() { 1 } else { -1 };
                prop_assert_eq!(got, sign);
            }
            let at_m = a.eval_big(&m);
            let got = if at_m.is_zero() { 0i8 } else if at_m.is_positive() { 1 } else { -1 };
            prop_assert_eq!(got, sign);
        }
    }
}

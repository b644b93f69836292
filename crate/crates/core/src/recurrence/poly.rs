//! Exact multivariate polynomials over the rationals in the variables
//! `a`, `b` and the Frobenius exponent `s`.
//!
//! The truncation condition `c_{n+1}(a, b) = 0` is an integer-coefficient
//! polynomial identity once denominators are cleared, so construction and
//! canonicalization happen entirely in `BigRational` arithmetic; floats only
//! appear when a caller asks for them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

pub type Rational = BigRational;

pub(crate) fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn integer(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// Sparse polynomial with exponents `(deg_a, deg_b, deg_s)`.
///
/// Invariant: no explicit zero coefficients are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RationalPolynomial {
    terms: BTreeMap<(u32, u32, u32), Rational>,
}

impl RationalPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(0, 0, 0, c)
    }

    pub fn term(deg_a: u32, deg_b: u32, deg_s: u32, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert((deg_a, deg_b, deg_s), coeff);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, deg_a: u32, deg_b: u32, deg_s: u32) -> Rational {
        self.terms
            .get(&(deg_a, deg_b, deg_s))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn degree_a(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_b(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn degree_s(&self) -> u32 {
        self.terms.keys().map(|k| k.2).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (key, c) in &other.terms {
            let entry = terms.entry(*key).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(key);
            }
        }
        Self { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<(u32, u32, u32), Rational> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let key = (ka.0 + kb.0, ka.1 + kb.1, ka.2 + kb.2);
                let entry = terms.entry(key).or_insert_with(Rational::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, c * factor))
                .collect(),
        }
    }

    /// Substitute an exact value for `s`, collapsing the `s` exponent.
    pub fn substitute_s(&self, s: &Rational) -> Self {
        self.substitute_axis(2, s)
    }

    /// Substitute an exact value for `b`.
    pub fn substitute_b(&self, b: &Rational) -> Self {
        self.substitute_axis(1, b)
    }

    fn substitute_axis(&self, axis: usize, value: &Rational) -> Self {
        let mut terms: BTreeMap<(u32, u32, u32), Rational> = BTreeMap::new();
        for (&(da, db, ds), c) in &self.terms {
            let (pow, key) = match axis {
                1 => (db, (da, 0, ds)),
                2 => (ds, (da, db, 0)),
                _ => unreachable!(),
            };
            let mut coeff = c.clone();
            for _ in 0..pow {
                coeff *= value;
            }
            let entry = terms.entry(key).or_insert_with(Rational::zero);
            *entry += coeff;
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }

    /// Coefficient list in `a` (ascending degree), requiring `b` and `s`
    /// already substituted out.
    pub fn univariate_in_a(&self) -> Option<Vec<Rational>> {
        if self.terms.keys().any(|k| k.1 != 0 || k.2 != 0) {
            return None;
        }
        let deg = self.degree_a() as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (&(da, _, _), c) in &self.terms {
            coeffs[da as usize] = c.clone();
        }
        Some(coeffs)
    }

    pub fn eval(&self, a: &Rational, b: &Rational, s: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(da, db, ds), c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..da {
                t *= a;
            }
            for _ in 0..db {
                t *= b;
            }
            for _ in 0..ds {
                t *= s;
            }
            acc += t;
        }
        acc
    }

    /// Canonical form: multiply by the positive rational clearing all
    /// denominators and reducing the integer content to 1, then fix the sign
    /// so the leading coefficient in `a` is positive.
    pub fn canonicalized(&self) -> Self {
        self.canonicalized_with_scale().0
    }

    /// Canonical form together with the rational `k` such that
    /// `canonical = k * self`.
    pub(crate) fn canonicalized_with_scale(&self) -> (Self, Rational) {
        if self.is_zero() {
            return (Self::zero(), Rational::one());
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = num_integer::lcm(den_lcm, c.denom().clone());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c * Rational::from_integer(den_lcm.clone());
            debug_assert!(scaled.denom().is_one());
            num_gcd = num_integer::gcd(num_gcd, scaled.numer().abs());
        }
        let mut factor = Rational::new(den_lcm, num_gcd);
        let lead = self
            .terms
            .iter()
            .next_back()
            .map(|(_, c)| c.clone())
            .expect("nonzero polynomial has a leading term");
        if (lead * &factor).is_negative() {
            factor = -factor;
        }
        (self.scale(&factor), factor)
    }
}

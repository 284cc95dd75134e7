//! Exact arithmetic in `Z[q, q^-1]`.
//!
//! A [`LaurentPoly`] stores its nonzero terms in a `BTreeMap` from exponent to
//! an arbitrary-precision coefficient, so equal values always have identical
//! representations. The bar involution `q -> q^-1` and the split of a
//! polynomial into its strictly negative, constant and strictly positive
//! parts are what the canonical-basis solver is built on.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^exp`.
    pub fn monomial(c: impl Into<BigInt>, exp: i32) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    pub fn q_inv() -> Self {
        Self::monomial(1, -1)
    }

    /// The loop value `beta = -q - q^-1`.
    pub fn beta() -> Self {
        Self::from_terms([(1, -1), (-1, -1)])
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut out = BTreeMap::<i32, BigInt>::new();
        for (e, c) in terms {
            *out.entry(e).or_default() += c.into();
        }
        out.retain(|_, c| !c.is_zero());
        Self { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: i32) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// The bar involution `q -> q^-1`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Terms with exponent `<= -1`, i.e. the `q^-1 Z[q^-1]` component.
    pub fn strictly_negative_part(&self) -> Self {
        Self {
            terms: self
                .terms
                .range(..0)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Terms with exponent `>= 1`.
    pub fn strictly_positive_part(&self) -> Self {
        Self {
            terms: self
                .terms
                .range(1..)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    /// True iff every term has exponent `<= -1` (the zero polynomial counts).
    pub fn is_strictly_negative(&self) -> bool {
        self.max_exponent().is_none_or(|e| e < 0)
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `(-1)^k * self`.
    pub fn signed(&self, k: usize) -> Self {
        if k.is_multiple_of(2) {
            self.clone()
        } else {
            -self
        }
    }

    /// Exact evaluation at a nonzero rational point.
    pub fn eval_at(&self, x: &BigRational) -> Result<BigRational> {
        if x.is_zero() {
            return Err(Error::ZeroEvaluationPoint);
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let base = if *e >= 0 { x.clone() } else { x.recip() };
            let p = num_traits::pow(base, e.unsigned_abs() as usize);
            acc += p * BigRational::from_integer(c.clone());
        }
        Ok(acc)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            let entry = self.terms.entry(*e).or_default();
            *entry += c;
            if entry.is_zero() {
                self.terms.remove(e);
            }
        }
    }
}

impl AddAssign for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        *self += &rhs;
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            let entry = self.terms.entry(*e).or_default();
            *entry -= c;
            if entry.is_zero() {
                self.terms.remove(e);
            }
        }
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = BTreeMap::<i32, BigInt>::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                *out.entry(e1 + e2).or_default() += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        LaurentPoly { terms: out }
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

fn fmt_monomial(exp: i32) -> String {
    match exp {
        1 => "q".to_string(),
        e => format!("q^{e}"),
    }
}

/// Descending exponents, e.g. `q^2 - 2 + q^-1`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if *e == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&fmt_monomial(*e))?;
            } else {
                write!(f, "{mag}{}", fmt_monomial(*e))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Parses the textual form produced by `Display`. Whitespace between
    /// tokens is optional.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ if terms.is_empty() => (1, rest),
                _ => return Err(Error::Parse(format!("expected sign in {s:?}"))),
            };
            // a term ends at the next '+' or '-' that is not an exponent sign
            let bytes = body.as_bytes();
            let mut end = bytes.len();
            for i in 0..bytes.len() {
                if (bytes[i] == b'+' || bytes[i] == b'-') && i > 0 && bytes[i - 1] != b'^' {
                    end = i;
                    break;
                }
            }
            let (term, tail) = body.split_at(end);
            rest = tail;
            let (coeff_str, exp) = match term.find('q') {
                None => (term, 0),
                Some(pos) => {
                    let after = &term[pos + 1..];
                    let exp = if after.is_empty() {
                        1
                    } else if let Some(e) = after.strip_prefix('^') {
                        e.parse::<i32>()
                            .map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?
                    } else {
                        return Err(Error::Parse(format!("bad term {term:?}")));
                    };
                    (&term[..pos], exp)
                }
            };
            let coeff = if coeff_str.is_empty() {
                if exp == 0 && !term.contains('q') {
                    return Err(Error::Parse(format!("empty term in {s:?}")));
                }
                BigInt::one()
            } else {
                coeff_str
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {coeff_str:?}")))?
            };
            terms.push((exp, coeff * sign));
        }
        Ok(Self::from_terms(terms))
    }
}

/// JSON form: `{"-1": 1, "2": 1}`, keys in ascending numeric order.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            let num = serde_json::Number::from_str(&c.to_string())
                .map_err(serde::ser::Error::custom)?;
            map.serialize_entry(&e.to_string(), &num)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, serde_json::Number>::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(raw.len());
        for (k, v) in raw {
            let e = k.parse::<i32>().map_err(D::Error::custom)?;
            let c = v.to_string().parse::<BigInt>().map_err(D::Error::custom)?;
            terms.push((e, c));
        }
        Ok(Self::from_terms(terms))
    }
}

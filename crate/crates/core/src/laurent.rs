//! Laurent polynomials in `q^{1/2}` with integer coefficients.
//!
//! Exponents are stored in half-units: the key `k` stands for `q^{k/2}`, i.e.
//! the polynomial is a Laurent polynomial in `w = q^{1/2}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("q-analog of {0} is undefined (argument must be positive)")]
    NonPositive(i64),
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("{numerator} is not divisible by {denominator} (remainder {remainder})")]
    NotDivisible {
        numerator: HalfLaurent,
        denominator: HalfLaurent,
        remainder: HalfLaurent,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HalfLaurent {
    coeffs: BTreeMap<i64, BigInt>,
}

impl HalfLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
    }

    /// `c · q^{half_exp/2}`.
    pub fn monomial(half_exp: i64, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(half_exp, c.into());
        p
    }

    /// `q^{1/2}`.
    pub fn w() -> Self {
        Self::monomial(1, 1)
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    /// `[a]_q = q^{(a-1)/2} + q^{(a-3)/2} + ... + q^{-(a-1)/2}`.
    pub fn q_analog(a: i64) -> Result<Self, LaurentError> {
        if a < 1 {
            return Err(LaurentError::NonPositive(a));
        }
        Ok(Self::from_terms((0..a).map(|k| (a - 1 - 2 * k, 1))))
    }

    /// `q^{a/2} - q^{-a/2}`; zero for `a = 0`.
    pub fn q_difference(a: i64) -> Self {
        Self::from_terms([(a, 1), (-a, -1)])
    }

    /// `q^{a/2} + q^{-a/2}`.
    pub fn q_sum(a: i64) -> Self {
        Self::from_terms([(a, 1), (-a, 1)])
    }

    fn add_term(&mut self, half_exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(half_exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&half_exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, half_exp: i64) -> BigInt {
        self.coeffs.get(&half_exp).cloned().unwrap_or_default()
    }

    /// Terms in descending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs.iter().rev().map(|(&e, c)| (e, c))
    }

    pub fn max_half_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_half_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    /// Multiplication by `q^{half_exp/2}`.
    pub fn shift(&self, half_exp: i64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, v)| (e + half_exp, v.clone()))
                .collect(),
        }
    }

    /// Divides every coefficient by `d`, if all are divisible.
    pub fn div_integer(&self, d: &BigInt) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let mut out = BTreeMap::new();
        for (&e, c) in &self.coeffs {
            let (quot, rem) = c.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            out.insert(e, quot);
        }
        Some(Self { coeffs: out })
    }

    /// Exact quotient `num / den` in `Z[q^{±1/2}]`.
    pub fn exact_div(&self, den: &HalfLaurent) -> Result<HalfLaurent, LaurentError> {
        let (d_lo, d_hi) = match (den.min_half_exp(), den.max_half_exp()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Err(LaurentError::DivisionByZero),
        };
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let n_lo = self.min_half_exp().unwrap();
        let lead = den.coeff(d_hi);
        let mut rem = self.clone();
        let mut quot = Self::zero();
        // long division from the top; the quotient's lowest term sits at n_lo - d_lo
        while let Some(r_hi) = rem.max_half_exp() {
            if r_hi - d_hi < n_lo - d_lo {
                break;
            }
            let (c, r) = rem.coeff(r_hi).div_rem(&lead);
            if !r.is_zero() {
                break;
            }
            let step = Self::monomial(r_hi - d_hi, c);
            rem = &rem - &(&step * den);
            quot += step;
        }
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(LaurentError::NotDivisible {
                numerator: self.clone(),
                denominator: den.clone(),
                remainder: rem,
            })
        }
    }

    /// Value at `q = 1`: the sum of coefficients.
    pub fn eval_q1(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Value at `q^{1/2} = i`, as a Gaussian integer `(re, im)`.
    ///
    /// No enumerative meaning is attached to this specialization.
    pub fn eval_gaussian_i(&self) -> (BigInt, BigInt) {
        let mut re = BigInt::zero();
        let mut im = BigInt::zero();
        for (&e, c) in &self.coeffs {
            match e.rem_euclid(4) {
                0 => re += c,
                1 => im += c,
                2 => re -= c,
                _ => im -= c,
            }
        }
        (re, im)
    }

    /// Invariance under `q ↔ q^{-1}`.
    pub fn is_symmetric(&self) -> bool {
        self.coeffs
            .iter()
            .all(|(&e, c)| self.coeffs.get(&-e) == Some(c))
    }

    /// `coeff(k) = -coeff(-k)` for all `k`.
    pub fn is_antisymmetric(&self) -> bool {
        self.coeffs
            .iter()
            .all(|(&e, c)| self.coeffs.get(&-e) == Some(&-c))
    }

    /// The substitution `q ↦ q^{-1}`.
    pub fn invert(&self) -> Self {
        HalfLaurent {
            coeffs: self.coeffs.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Only integral powers of `q` occur.
    pub fn has_integral_exponents(&self) -> bool {
        self.coeffs.keys().all(|e| e % 2 == 0)
    }

    /// JSON form: `[[halfExponent, coeff], ...]`, descending.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("laurent polynomial serializes")
    }
}

fn coeff_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(c.to_string()),
    }
}

impl Serialize for HalfLaurent {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for (e, c) in self.terms() {
            seq.serialize_element(&(e, coeff_json(c)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for HalfLaurent {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: Vec<(i64, serde_json::Value)> = Vec::deserialize(deserializer)?;
        let mut p = HalfLaurent::zero();
        for (e, c) in raw {
            let c: BigInt = match &c {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| serde::de::Error::custom("non-integer coefficient"))?,
                serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom)?,
                _ => return Err(serde::de::Error::custom("coefficient must be an integer")),
            };
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl fmt::Display for HalfLaurent {
    /// Descending exponents with explicit signs, e.g. `q^2 + 1 - q^-3/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let power = match e {
                0 => None,
                2 => Some("q".to_string()),
                e if e % 2 == 0 => Some(format!("q^{}", e / 2)),
                e => Some(format!("q^{e}/2")),
            };
            match power {
                None => write!(f, "{abs}")?,
                Some(pw) if abs.is_one() => write!(f, "{pw}")?,
                Some(pw) => write!(f, "{abs}{pw}")?,
            }
        }
        Ok(())
    }
}

impl Add for &HalfLaurent {
    type Output = HalfLaurent;
    fn add(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = self.clone();
        out += rhs.clone();
        out
    }
}

impl Add for HalfLaurent {
    type Output = HalfLaurent;
    fn add(mut self, rhs: HalfLaurent) -> HalfLaurent {
        self += rhs;
        self
    }
}

impl AddAssign for HalfLaurent {
    fn add_assign(&mut self, rhs: HalfLaurent) {
        for (e, c) in rhs.coeffs {
            self.add_term(e, c);
        }
    }
}

impl Neg for &HalfLaurent {
    type Output = HalfLaurent;
    fn neg(self) -> HalfLaurent {
        HalfLaurent {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for HalfLaurent {
    type Output = HalfLaurent;
    fn neg(self) -> HalfLaurent {
        -&self
    }
}

impl Sub for &HalfLaurent {
    type Output = HalfLaurent;
    fn sub(self, rhs: &HalfLaurent) -> HalfLaurent {
        self + &(-rhs)
    }
}

impl Sub for HalfLaurent {
    type Output = HalfLaurent;
    fn sub(self, rhs: HalfLaurent) -> HalfLaurent {
        &self - &rhs
    }
}

impl Mul for &HalfLaurent {
    type Output = HalfLaurent;
    fn mul(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = HalfLaurent::zero();
        for (&ea, ca) in &self.coeffs {
            for (&eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for HalfLaurent {
    type Output = HalfLaurent;
    fn mul(self, rhs: HalfLaurent) -> HalfLaurent {
        &self * &rhs
    }
}

impl std::iter::Sum for HalfLaurent {
    fn sum<I: Iterator<Item = HalfLaurent>>(iter: I) -> HalfLaurent {
        iter.fold(HalfLaurent::zero(), Add::add)
    }
}

impl std::iter::Product for HalfLaurent {
    fn product<I: Iterator<Item = HalfLaurent>>(iter: I) -> HalfLaurent {
        iter.fold(HalfLaurent::one(), |a, b| &a * &b)
    }
}

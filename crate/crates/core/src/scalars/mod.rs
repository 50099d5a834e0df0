//! Exact scalars: rationals, univariate polynomials and rational functions in
//! the spectral parameter, q-integers and the elementary bracket factor.
//!
//! The deformation parameter is always realized as `q = w^4` for a rational
//! base `w`, so every power `q^a` with `a` a quarter-integer is an integer
//! power of `w` and stays inside the rationals.

mod bracket;
mod poly;
mod ratfun;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use bracket::{Bracket, BracketProduct};
pub use poly::Poly;
pub use ratfun::RatFun;

use crate::error::{Error, Result};

/// Arbitrary precision rational number. Always stored reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds `p/q` from machine integers. Panics on a zero denominator.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            if q.is_zero() {
                return Err(Error::Parse(s.to_string()));
            }
            Rational::new(p, q)
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| Error::Parse(s.to_string()))?;
            Rational::from_integer(p)
        }
    };
    Ok(parsed)
}

/// Field operations shared by the numeric scalars (`Rational`) and the
/// u-symbolic scalars (`RatFun`).
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: Rational) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn checked_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }

    fn pow_i(&self, k: i64) -> Option<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc * base.clone();
        }
        Some(acc)
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// A sample of the deformation parameter: `q = w^4`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QSample {
    #[serde(with = "rational_string")]
    w: Rational,
}

impl QSample {
    pub fn new(w: Rational) -> Result<Self> {
        if Zero::is_zero(&w) || w.abs().is_one() {
            return Err(Error::DegenerateParameter(format!("w = {w}")));
        }
        Ok(QSample { w })
    }

    pub fn from_ratio(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::DegenerateParameter("zero denominator".into()));
        }
        Self::new(rat(p, q))
    }

    pub fn w(&self) -> &Rational {
        &self.w
    }

    pub fn q(&self) -> Rational {
        self.w_pow(4)
    }

    /// `w^k`, never fails since `w != 0`.
    pub fn w_pow(&self, k: i64) -> Rational {
        Field::pow_i(&self.w, k).expect("w is nonzero")
    }

    /// `q^a` for a quarter-integer exponent `a`.
    pub fn q_pow(&self, a: &Rational) -> Result<Rational> {
        let quarters = a * int(4);
        if !quarters.is_integer() {
            return Err(Error::NotQuarterIntegral(a.to_string()));
        }
        let k: i64 = quarters
            .to_integer()
            .try_into()
            .map_err(|_| Error::NotQuarterIntegral(a.to_string()))?;
        Ok(self.w_pow(k))
    }
}

impl fmt::Display for QSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w={}", self.w)
    }
}

/// q-integer `[k]_q = (q^k - q^-k)/(q - q^-1)`.
pub fn qint<F: Field>(k: i64, q: &F) -> Result<F> {
    let degenerate = || Error::DegenerateParameter(format!("q = {q}"));
    let qinv = q.inv().ok_or_else(degenerate)?;
    let denom = q.clone() - qinv;
    if denom.is_zero() {
        return Err(degenerate());
    }
    let num = q.pow_i(k).ok_or_else(degenerate)? - q.pow_i(-k).ok_or_else(degenerate)?;
    num.checked_div(&denom).ok_or_else(degenerate)
}

/// q-factorial `[k]_q! = [1]_q [2]_q ... [k]_q`.
pub fn qfactorial<F: Field>(k: u32, q: &F) -> Result<F> {
    let mut acc = F::one();
    for j in 1..=k {
        acc = acc * qint(j as i64, q)?;
    }
    Ok(acc)
}

/// The elementary eigenvalue ratio `<a>_s = (1 + s u q^a)/(u + s q^a)`.
pub fn bracket<F: Field>(a: &Rational, sign: i8, u: &F, w: &QSample) -> Result<F> {
    let qa = F::from_rational(w.q_pow(a)?);
    let s = F::from_rational(int(sign.signum() as i64));
    let num = F::one() + s.clone() * u.clone() * qa.clone();
    let den = u.clone() + s * qa;
    num.checked_div(&den).ok_or_else(|| Error::Pole {
        what: format!("<{a}>_{}", if sign > 0 { '+' } else { '-' }),
        at: u.to_string(),
    })
}

/// serde adapter writing a rational as its decimal-free `p/q` string.
pub mod rational_string {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

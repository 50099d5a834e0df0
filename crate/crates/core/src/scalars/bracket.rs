use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use super::{bracket, int, Field, QSample, Rational};
use crate::error::Result;

/// One bracket factor `<a>_sign` with `a` a quarter-integer, stored as `4a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bracket {
    pub quarters: i64,
    pub sign: i8,
}

impl Bracket {
    pub fn new(a: &Rational, sign: i8) -> Self {
        let q = a * int(4);
        assert!(
            q.is_integer(),
            "bracket exponent {a} is not a quarter-integer"
        );
        Bracket {
            quarters: q.to_integer().try_into().expect("exponent fits in i64"),
            sign: if sign >= 0 { 1 } else { -1 },
        }
    }

    pub fn exponent(&self) -> Rational {
        super::rat(self.quarters, 4)
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "⟨{}⟩{}",
            self.exponent(),
            if self.sign > 0 { '₊' } else { '₋' }
        )
    }
}

/// Exact product of bracket factors, symbolic in both `q` and `u`.
///
/// Canonical form: every factor has a positive exponent. This uses
/// `<-a>_s = 1/<a>_s`, `<0>_+ = 1` and `<0>_- = -1`. For generic `q` the
/// factors `<a>_+`, `<a>_-` with `a > 0` have pairwise distinct zeros and
/// poles in `u`, so two canonical products are equal as functions iff their
/// maps and signs agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BracketProduct {
    negated: bool,
    factors: BTreeMap<Bracket, i32>,
}

impl BracketProduct {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn single(a: &Rational, sign: i8) -> Self {
        let mut p = Self::one();
        p.mul_bracket(a, sign, 1);
        p
    }

    /// Multiplies in `<a>_sign ^ power`.
    pub fn mul_bracket(&mut self, a: &Rational, sign: i8, power: i32) {
        if Zero::is_zero(a) {
            if sign < 0 && power % 2 != 0 {
                self.negated = !self.negated;
            }
            return;
        }
        let (key, power) = if a.is_negative() {
            (Bracket::new(&-a, sign), -power)
        } else {
            (Bracket::new(a, sign), power)
        };
        let e = self.factors.entry(key).or_insert(0);
        *e += power;
        if *e == 0 {
            self.factors.remove(&key);
        }
    }

    pub fn mul(&self, other: &BracketProduct) -> BracketProduct {
        let mut out = self.clone();
        out.negated ^= other.negated;
        for (b, &p) in &other.factors {
            out.mul_bracket(&b.exponent(), b.sign, p);
        }
        out
    }

    pub fn inverse(&self) -> BracketProduct {
        BracketProduct {
            negated: self.negated,
            factors: self.factors.iter().map(|(b, p)| (*b, -p)).collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        !self.negated && self.factors.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Bracket, &i32)> {
        self.factors.iter()
    }

    /// Evaluates at a concrete `w` and spectral parameter (numeric or symbolic).
    pub fn eval<F: Field>(&self, w: &QSample, u: &F) -> Result<F> {
        let mut acc = if self.negated { -F::one() } else { F::one() };
        for (b, &p) in &self.factors {
            let v = bracket(&b.exponent(), b.sign, u, w)?;
            let v = v.pow_i(p as i64).ok_or_else(|| crate::error::Error::Pole {
                what: b.to_string(),
                at: u.to_string(),
            })?;
            acc = acc * v;
        }
        Ok(acc)
    }

    /// Zeros and poles in `u` of the product at sample `w`, as `±q^a` values.
    pub fn singular_points(&self, w: &QSample) -> Result<Vec<Rational>> {
        let mut out = Vec::new();
        for b in self.factors.keys() {
            let qa = w.q_pow(&b.exponent())?;
            let s = int(b.sign as i64);
            // zero at u = -s q^-a, pole at u = -s q^a
            out.push(-(&s) * qa.recip());
            out.push(-s * qa);
        }
        Ok(out)
    }
}

impl fmt::Display for BracketProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (b, &p) in &self.factors {
            if !first {
                write!(f, "·")?;
            }
            first = false;
            write!(f, "{b}")?;
            if p != 1 {
                write!(f, "^{p}")?;
            }
        }
        Ok(())
    }
}

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Field, Poly, Rational};

/// Element of the rational function field Q(u). The denominator is monic and
/// coprime to the numerator; zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    /// Builds `num/den` in reduced form. Returns `None` for a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFun {
                num,
                den: Poly::one(),
            });
        }
        let g = Poly::gcd(&num, &den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.lead().expect("nonzero").recip();
        Some(RatFun {
            num: num.scale(&lead),
            den: den.scale(&lead),
        })
    }

    pub fn var() -> Self {
        RatFun {
            num: Poly::var(),
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        RatFun {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    /// Evaluates at a rational point; `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if Zero::is_zero(&d) {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Integer-coefficient numerator and denominator with the same value.
    pub fn integer_form(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let (pn, fnum) = self.num.primitive_part();
        let (pd, fden) = self.den.primitive_part();
        let ratio = fnum / fden;
        let a = ratio.numer().clone();
        let b = ratio.denom().clone();
        (
            pn.into_iter().map(|c| c * &a).collect(),
            pd.into_iter().map(|c| c * &b).collect(),
        )
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.integer_form();
        write!(f, "(")?;
        Poly::fmt_int_coeffs(&n, f)?;
        write!(f, ")/(")?;
        if d.is_empty() {
            write!(f, "1")?;
        } else {
            Poly::fmt_int_coeffs(&d, f)?;
        }
        write!(f, ")")
    }
}

impl Field for RatFun {
    fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }
    fn one() -> Self {
        RatFun {
            num: Poly::one(),
            den: Poly::one(),
        }
    }
    fn from_rational(r: Rational) -> Self {
        RatFun::constant(r)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            RatFun::new(self.den.clone(), self.num.clone())
        }
    }
}

impl Add for RatFun {
    type Output = RatFun;
    fn add(self, rhs: RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den).expect("nonzero");
        }
        RatFun::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero")
    }
}

impl Sub for RatFun {
    type Output = RatFun;
    fn sub(self, rhs: RatFun) -> RatFun {
        self + (-rhs)
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Mul for RatFun {
    type Output = RatFun;
    fn mul(self, rhs: RatFun) -> RatFun {
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl From<Rational> for RatFun {
    fn from(r: Rational) -> Self {
        RatFun::constant(r)
    }
}

impl RatFun {
    pub fn is_one(&self) -> bool {
        self.den.degree() == Some(0)
            && self.num == self.den
            && self.num.lead().is_some_and(One::is_one)
    }
}

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::scalars::{rat, Rational};

/// Weight in the ε-basis with half-integer coordinates, stored doubled.
///
/// The inner product is `(ε_i, ε_j) = δ_ij`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Weight {
    twice: Vec<i64>,
}

impl Weight {
    pub fn zero(len: usize) -> Self {
        Weight {
            twice: vec![0; len],
        }
    }

    /// From integer ε-coordinates.
    pub fn from_ints(coords: &[i64]) -> Self {
        Weight {
            twice: coords.iter().map(|c| 2 * c).collect(),
        }
    }

    /// From doubled ε-coordinates.
    pub fn from_doubled(twice: Vec<i64>) -> Self {
        Weight { twice }
    }

    /// `ε_i` (zero-based `i`).
    pub fn eps(len: usize, i: usize) -> Self {
        let mut w = Self::zero(len);
        w.twice[i] = 2;
        w
    }

    pub fn len(&self) -> usize {
        self.twice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.twice.is_empty()
    }

    pub fn doubled(&self) -> &[i64] {
        &self.twice
    }

    pub fn coord(&self, i: usize) -> Rational {
        rat(self.twice[i], 2)
    }

    pub fn is_zero(&self) -> bool {
        self.twice.iter().all(|&c| c == 0)
    }

    pub fn inner(&self, other: &Weight) -> Rational {
        assert_eq!(self.len(), other.len(), "weight length mismatch");
        let s: i64 = self
            .twice
            .iter()
            .zip(&other.twice)
            .map(|(a, b)| a * b)
            .sum();
        rat(s, 4)
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight {
            twice: self.twice.iter().map(|c| c * k).collect(),
        }
    }

    /// Doubled-coordinate total used as a sort key.
    pub fn height_key(&self) -> i64 {
        self.twice.iter().sum()
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        assert_eq!(self.len(), rhs.len(), "weight length mismatch");
        Weight {
            twice: self
                .twice
                .iter()
                .zip(&rhs.twice)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        assert_eq!(self.len(), rhs.len(), "weight length mismatch");
        Weight {
            twice: self
                .twice
                .iter()
                .zip(&rhs.twice)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight {
            twice: self.twice.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.twice.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if c % 2 == 0 {
                write!(f, "{}", c / 2)?;
            } else {
                write!(f, "{c}/2")?;
            }
        }
        write!(f, ")")
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_inner() {
        let w = Weight::from_doubled(vec![3, 1]);
        assert_eq!(w.to_string(), "(3/2,1/2)");
        assert_eq!(w.inner(&w), rat(10, 4));
        let v = &Weight::from_ints(&[2, 1]) + &w.scale(2);
        assert_eq!(v, Weight::from_ints(&[5, 2]));
    }
}

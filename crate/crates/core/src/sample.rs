//! Seeded generic sample points `(w, u)` with small numerators and denominators.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalars::{rat, QSample, Rational};

/// Attempts before a sample search gives up.
pub const MAX_ATTEMPTS: usize = 5;

pub struct Sampler {
    rng: ChaCha8Rng,
    bound: i64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bound: 9,
        }
    }

    /// Nonzero `p/q` with `|p|, q ≤ bound`.
    pub fn rational(&mut self) -> Rational {
        loop {
            let p = self.rng.gen_range(-self.bound..=self.bound);
            let q = self.rng.gen_range(1..=self.bound);
            if p != 0 {
                return rat(p, q);
            }
        }
    }

    /// Positive `w` with `w ≠ 1`.
    pub fn w(&mut self) -> QSample {
        loop {
            let w = self.rational().abs();
            if !w.is_one() {
                return QSample::new(w).expect("w is nonzero and not ±1");
            }
        }
    }

    /// `u ∉ {0, ±1}` avoiding the given points and their reciprocals.
    pub fn u(&mut self, avoid: &[Rational]) -> Rational {
        loop {
            let u = self.rational();
            if u.abs().is_one() {
                continue;
            }
            let bad = avoid
                .iter()
                .any(|a| a == &u || (!a.is_zero() && a.recip() == u));
            if !bad {
                return u;
            }
        }
    }
}

/// Whether an error means "try another sample point".
pub fn is_retryable(e: &Error) -> bool {
    matches!(
        e,
        Error::NonGeneric { .. } | Error::Pole { .. } | Error::DegenerateParameter(_)
    )
}

/// Runs `f` on fresh samples until it succeeds or a non-retryable error occurs.
pub fn with_retries<T>(s: &mut Sampler, mut f: impl FnMut(&mut Sampler) -> Result<T>) -> Result<T> {
    for _ in 0..MAX_ATTEMPTS {
        match f(s) {
            Err(e) if is_retryable(&e) => continue,
            other => return other,
        }
    }
    Err(Error::SamplingExhausted {
        attempts: MAX_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_stream() {
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for _ in 0..20 {
            assert_eq!(a.w(), b.w());
            assert_eq!(a.u(&[]), b.u(&[]));
        }
    }

    #[test]
    fn avoids_points() {
        let mut s = Sampler::new(1);
        let avoid: Vec<Rational> = (1..=9).map(|p| rat(p, 2)).collect();
        for _ in 0..50 {
            let u = s.u(&avoid);
            assert!(!avoid.contains(&u) && !avoid.iter().any(|a| a.recip() == u));
        }
    }

    #[test]
    fn retries_then_gives_up() {
        let mut s = Sampler::new(3);
        let mut calls = 0;
        let r: Result<()> = with_retries(&mut s, |_| {
            calls += 1;
            Err(Error::NonGeneric { dim: 2 })
        });
        assert!(matches!(r, Err(Error::SamplingExhausted { attempts: 5 })));
        assert_eq!(calls, 5);
    }
}

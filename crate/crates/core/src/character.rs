//! Weight multiplicities by Freudenthal's formula and tensor decomposition by
//! character multiplication. Used as an independent oracle for branching.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::liealg::ClassicalType;
use crate::scalars::{int, Rational};
use crate::weight::Weight;

/// Formal character: weight → multiplicity.
pub type Character = BTreeMap<Weight, u64>;

/// Dominant representative of the Weyl orbit (signed permutations).
pub fn dominant_conjugate(w: &Weight) -> Weight {
    let mut d: Vec<i64> = w.doubled().iter().map(|c| c.abs()).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    Weight::from_doubled(d)
}

/// All distinct signed permutations of `w`.
pub fn weyl_orbit(w: &Weight) -> Vec<Weight> {
    let mut abs: Vec<i64> = w.doubled().iter().map(|c| c.abs()).collect();
    abs.sort_unstable();
    let mut perms = Vec::new();
    permutations(&mut abs, 0, &mut perms);
    let mut out = BTreeSet::new();
    for p in perms {
        let nonzero: Vec<usize> = (0..p.len()).filter(|&i| p[i] != 0).collect();
        for mask in 0u64..(1 << nonzero.len()) {
            let mut v = p.clone();
            for (bit, &i) in nonzero.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    v[i] = -v[i];
                }
            }
            out.insert(Weight::from_doubled(v));
        }
    }
    out.into_iter().collect()
}

/// Distinct permutations of a sorted slice, in lexicographic order.
fn permutations(v: &mut Vec<i64>, start: usize, out: &mut Vec<Vec<i64>>) {
    if start == v.len() {
        out.push(v.clone());
        return;
    }
    let mut used = BTreeSet::new();
    for i in start..v.len() {
        if used.insert(v[i]) {
            v.swap(start, i);
            permutations(v, start + 1, out);
            v.swap(start, i);
        }
    }
}

/// Multiplicities of the dominant weights of `V(λ)`.
pub fn dominant_multiplicities(
    ty: ClassicalType,
    lambda: &Weight,
) -> Result<BTreeMap<Weight, u64>> {
    if !ty.is_dominant(lambda) {
        return Err(Error::Validation(format!("{lambda} is not dominant")));
    }
    let l = lambda.len();
    let roots = ty.positive_roots(l);
    let rho = ty.rho(l);
    let mut seen = BTreeSet::from([lambda.clone()]);
    let mut queue = VecDeque::from([lambda.clone()]);
    while let Some(mu) = queue.pop_front() {
        for a in &roots {
            let nu = &mu - a;
            if ty.is_dominant(&nu) && seen.insert(nu.clone()) {
                queue.push_back(nu);
            }
        }
    }
    let mut order: Vec<Weight> = seen.iter().cloned().collect();
    order.sort_by_key(|mu| std::cmp::Reverse(mu.inner(&rho)));
    let top = (lambda + &rho).inner(&(lambda + &rho));
    let mut mult: BTreeMap<Weight, u64> = BTreeMap::new();
    for mu in order {
        if &mu == lambda {
            mult.insert(mu, 1);
            continue;
        }
        let mut acc = Rational::zero();
        for a in &roots {
            let mut k = 1;
            loop {
                let up = &mu + &a.scale(k);
                let Some(&m) = mult.get(&dominant_conjugate(&up)) else {
                    break;
                };
                acc += int(m as i64) * up.inner(a);
                k += 1;
            }
        }
        let denom = top.clone() - (&mu + &rho).inner(&(&mu + &rho));
        let m = int(2) * acc / denom;
        if !m.is_integer() {
            return Err(Error::ContractViolation(format!(
                "non-integral multiplicity {m} at {mu}"
            )));
        }
        let m = m
            .to_integer()
            .to_u64()
            .ok_or_else(|| Error::ContractViolation("negative multiplicity".into()))?;
        mult.insert(mu, m);
    }
    Ok(mult)
}

/// Full character of `V(λ)`.
pub fn character(ty: ClassicalType, lambda: &Weight) -> Result<Character> {
    let mut out = Character::new();
    for (mu, m) in dominant_multiplicities(ty, lambda)? {
        if m > 0 {
            for w in weyl_orbit(&mu) {
                out.insert(w, m);
            }
        }
    }
    Ok(out)
}

pub fn dimension(ch: &Character) -> u64 {
    ch.values().sum()
}

/// Product of two characters.
pub fn multiply(a: &Character, b: &Character) -> Character {
    let mut out = Character::new();
    for (x, m) in a {
        for (y, n) in b {
            *out.entry(x + y).or_insert(0) += m * n;
        }
    }
    out
}

/// Irreducible constituents of a character by repeatedly stripping the
/// lexicographically largest weight.
pub fn decompose_character(ty: ClassicalType, ch: &Character) -> Result<BTreeMap<Weight, u64>> {
    let mut rest: BTreeMap<Weight, i64> = ch.iter().map(|(w, &m)| (w.clone(), m as i64)).collect();
    let mut out = BTreeMap::new();
    while let Some((top, &m)) = rest.iter().next_back() {
        let top = top.clone();
        if m < 0 || !ty.is_dominant(&top) {
            return Err(Error::ContractViolation(format!(
                "virtual character at {top}"
            )));
        }
        for (w, k) in character(ty, &top)? {
            let e = rest.entry(w).or_insert(0);
            *e -= m * k as i64;
        }
        rest.retain(|_, v| *v != 0);
        out.insert(top, m as u64);
    }
    Ok(out)
}

/// `V(λ) ⊗ V(μ)` by brute-force character multiplication.
pub fn tensor_decomposition(
    ty: ClassicalType,
    lambda: &Weight,
    mu: &Weight,
) -> Result<BTreeMap<Weight, u64>> {
    decompose_character(ty, &multiply(&character(ty, lambda)?, &character(ty, mu)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_match_weyl() {
        for ty in [ClassicalType::B, ClassicalType::C] {
            for l in 1..=4 {
                let candidates = [
                    Weight::eps(l, 0),
                    Weight::eps(l, 0).scale(2),
                    ty.fundamental(l, l),
                    &ty.fundamental(l, 1) + &ty.fundamental(l, l),
                ];
                for lam in candidates {
                    let ch = character(ty, &lam).unwrap();
                    assert_eq!(
                        dimension(&ch),
                        ty.weyl_dim(&lam).unwrap(),
                        "{ty:?}{l} {lam}"
                    );
                }
            }
        }
    }

    #[test]
    fn b2_adjoint_zero_weight() {
        let m = dominant_multiplicities(ClassicalType::B, &Weight::from_ints(&[1, 1])).unwrap();
        assert_eq!(m[&Weight::zero(2)], 2);
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(weyl_orbit(&Weight::from_ints(&[2, 1, 0])).len(), 24);
        assert_eq!(weyl_orbit(&Weight::from_doubled(vec![1, 1, 1])).len(), 8);
        assert_eq!(weyl_orbit(&Weight::zero(3)).len(), 1);
    }

    #[test]
    fn vector_square_b3() {
        let v = Weight::eps(3, 0);
        let d = tensor_decomposition(ClassicalType::B, &v, &v).unwrap();
        let want: BTreeMap<Weight, u64> = [
            (Weight::from_ints(&[2, 0, 0]), 1),
            (Weight::from_ints(&[1, 1, 0]), 1),
            (Weight::zero(3), 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(d, want);
    }

    #[test]
    fn spinor_square_b2() {
        let s = Weight::from_doubled(vec![1, 1]);
        let d = tensor_decomposition(ClassicalType::B, &s, &s).unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.values().all(|&m| m == 1));
    }
}

//! Coproduct actions on tensor products, highest-weight vectors, isotypic
//! projectors and the classical parity oracle.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{invert_dense, Echelon, SparseMatrix, SparseVec};
use crate::qrep::{QuantumImage, Representation};
use crate::scalars::{QSample, Rational};
use crate::weight::Weight;

/// A generator of the affine algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    E(usize),
    F(usize),
    /// `q^{sign·h_i/2}`
    K(usize, i64),
}

/// `V ⊗ W` with generator images fixed at one `q`, or classical (`q = 1`).
#[derive(Clone, Debug)]
pub struct TensorModule {
    pub left: Representation,
    pub right: Representation,
    pub weights: Vec<Weight>,
    images: (QuantumImage, QuantumImage),
    classical: bool,
}

fn classical_image(rep: &Representation) -> QuantumImage {
    let id = SparseMatrix::identity(rep.dim());
    QuantumImage {
        e: rep.e.clone(),
        f: rep.f.clone(),
        k: vec![id.clone(); rep.rank() + 1],
        kinv: vec![id; rep.rank() + 1],
    }
}

impl TensorModule {
    pub fn new(left: &Representation, right: &Representation, w: &QSample) -> Result<Self> {
        Self::build(left, right, (left.quantum(w)?, right.quantum(w)?), false)
    }

    /// The undeformed tensor product, `Δ(x) = x ⊗ 1 + 1 ⊗ x`.
    pub fn classical(left: &Representation, right: &Representation) -> Result<Self> {
        Self::build(
            left,
            right,
            (classical_image(left), classical_image(right)),
            true,
        )
    }

    fn build(
        left: &Representation,
        right: &Representation,
        images: (QuantumImage, QuantumImage),
        classical: bool,
    ) -> Result<Self> {
        if left.spec != right.spec {
            return Err(Error::Validation(
                "tensor factors belong to different algebras".into(),
            ));
        }
        let weights = left
            .weights
            .iter()
            .flat_map(|a| right.weights.iter().map(move |b| a + b))
            .collect();
        Ok(TensorModule {
            left: left.clone(),
            right: right.clone(),
            weights,
            images,
            classical,
        })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn rank(&self) -> usize {
        self.left.rank()
    }

    pub fn is_classical(&self) -> bool {
        self.classical
    }

    /// Matrix of `Δ^u(g)`, or of the opposite coproduct `Δ^{T,u}(g)`.
    ///
    /// `Δ(e_i) = q^{−h_i/2} ⊗ e_i + e_i ⊗ q^{h_i/2}` and likewise for `f_i`;
    /// `D_u` scales `e₀` by `u` and `f₀` by `u⁻¹` on the first factor.
    pub fn coproduct_action(
        &self,
        g: Generator,
        u: &Rational,
        opposite: bool,
    ) -> Result<SparseMatrix> {
        let (a, b) = &self.images;
        let i = match g {
            Generator::E(i) | Generator::F(i) | Generator::K(i, _) => i,
        };
        if let Generator::K(i, s) = g {
            let (ka, kb) = if s > 0 {
                (&a.k[i], &b.k[i])
            } else {
                (&a.kinv[i], &b.kinv[i])
            };
            return Ok(ka.kron(kb));
        }
        let (xa, xb) = match g {
            Generator::E(i) => (&a.e[i], &b.e[i]),
            Generator::F(i) => (&a.f[i], &b.f[i]),
            Generator::K(..) => unreachable!(),
        };
        let t = if i == 0 {
            match g {
                Generator::E(_) => u.clone(),
                _ => u.recip(),
            }
        } else {
            Rational::one()
        };
        let m = if opposite {
            xa.scale(&t).kron(&b.kinv[i]).add(&a.k[i].kron(xb))
        } else {
            a.kinv[i].kron(xb).add(&xa.scale(&t).kron(&b.k[i]))
        };
        Ok(m)
    }

    /// Permutation `P(v ⊗ w) = w ⊗ v`, defined when both factors coincide.
    pub fn flip(&self) -> SparseMatrix {
        let d1 = self.left.dim();
        let d2 = self.right.dim();
        SparseMatrix::from_triplets(
            d1 * d2,
            d1 * d2,
            (0..d1).flat_map(|a| (0..d2).map(move |b| (b * d1 + a, a * d2 + b, Rational::one()))),
        )
    }

    /// Basis indices grouped by total weight.
    pub fn weight_spaces(&self) -> BTreeMap<Weight, Vec<usize>> {
        let mut out: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (idx, w) in self.weights.iter().enumerate() {
            out.entry(w.clone()).or_default().push(idx);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Component {
    pub weight: Weight,
    pub hw_vector: SparseVec,
    pub basis: Vec<SparseVec>,
}

impl Component {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug)]
pub struct IsotypicDecomposition {
    /// Sorted by highest weight, largest first.
    pub components: Vec<Component>,
    pub projectors: Vec<SparseMatrix>,
}

impl IsotypicDecomposition {
    pub fn position(&self, nu: &Weight) -> Option<usize> {
        self.components.iter().position(|c| &c.weight == nu)
    }

    pub fn projector(&self, nu: &Weight) -> Option<&SparseMatrix> {
        self.position(nu).map(|i| &self.projectors[i])
    }
}

/// Summary line of a component for reports.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ComponentSummary {
    pub weight: Weight,
    pub label: String,
    pub dim: usize,
    #[serde(with = "crate::scalars::rational_string")]
    pub casimir: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity: Option<i8>,
}

fn restrict(v: &SparseVec, local: &BTreeMap<usize, usize>) -> SparseVec {
    v.iter()
        .filter_map(|(k, x)| local.get(k).map(|&j| (j, x.clone())))
        .collect()
}

/// Decomposes `V ⊗ W` under `U_q(L₀)`: highest-weight vectors per weight
/// space, components spanned by the lowering operators, projectors from the
/// adapted basis.
pub fn decompose(t: &TensorModule) -> Result<IsotypicDecomposition> {
    let l = t.rank();
    let one = Rational::one();
    let raise: Vec<SparseMatrix> = (1..=l)
        .map(|i| t.coproduct_action(Generator::E(i), &one, false))
        .collect::<Result<_>>()?;
    let lower: Vec<SparseMatrix> = (1..=l)
        .map(|i| t.coproduct_action(Generator::F(i), &one, false))
        .collect::<Result<_>>()?;
    let spaces = t.weight_spaces();
    let l0 = t.left.spec.l0;

    let mut components = Vec::new();
    for (mu, idxs) in spaces.iter().rev() {
        if !l0.is_dominant(mu) {
            continue;
        }
        let local: BTreeMap<usize, usize> = idxs.iter().enumerate().map(|(j, &k)| (k, j)).collect();
        let mut ech = Echelon::new();
        for e in &raise {
            let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
            for &col in idxs {
                for r in 0..e.nrows() {
                    let v = e.get(r, col);
                    if !v.is_zero() {
                        rows.entry(r).or_default().insert(local[&col], v);
                    }
                }
            }
            for row in rows.values() {
                ech.insert(row);
            }
        }
        let kernel = ech.null_space(idxs.len());
        if kernel.len() > 1 {
            return Err(Error::ContractViolation(format!(
                "highest weight {mu} occurs with multiplicity {}",
                kernel.len()
            )));
        }
        let Some(k) = kernel.into_iter().next() else {
            continue;
        };
        let hw: SparseVec = k.iter().map(|(&j, x)| (idxs[j], x.clone())).collect();
        components.push(Component {
            weight: mu.clone(),
            hw_vector: hw.clone(),
            basis: span(&hw, &lower),
        });
    }

    let total: usize = components.iter().map(Component::dim).sum();
    if total != t.dim() {
        return Err(Error::ContractViolation(format!(
            "components span {total} of {} dimensions",
            t.dim()
        )));
    }

    // per weight space: S_μ E_ν S_μ⁻¹
    let n = t.dim();
    let mut projectors = vec![SparseMatrix::zeros(n, n); components.len()];
    for (mu, idxs) in &spaces {
        let local: BTreeMap<usize, usize> = idxs.iter().enumerate().map(|(j, &k)| (k, j)).collect();
        let mut cols: Vec<(usize, SparseVec)> = Vec::new();
        for (ci, c) in components.iter().enumerate() {
            for b in &c.basis {
                let first = *b.keys().next().expect("nonzero basis vector");
                if &t.weights[first] == mu {
                    cols.push((ci, restrict(b, &local)));
                }
            }
        }
        let m = idxs.len();
        if cols.len() != m {
            return Err(Error::ContractViolation(format!(
                "weight space {mu} is not spanned"
            )));
        }
        let s: Vec<Vec<Rational>> = (0..m)
            .map(|r| {
                cols.iter()
                    .map(|(_, v)| v.get(&r).cloned().unwrap_or_default())
                    .collect()
            })
            .collect();
        let sinv = invert_dense(&s)
            .ok_or_else(|| Error::ContractViolation(format!("adapted basis singular at {mu}")))?;
        for (j, (ci, v)) in cols.iter().enumerate() {
            for (&r, x) in v {
                for (c, y) in sinv[j].iter().enumerate() {
                    if !y.is_zero() {
                        projectors[*ci].add_to(idxs[r], idxs[c], &(x * y));
                    }
                }
            }
        }
    }
    Ok(IsotypicDecomposition {
        components,
        projectors,
    })
}

fn span(start: &SparseVec, lower: &[SparseMatrix]) -> Vec<SparseVec> {
    let mut ech = Echelon::new();
    let mut basis = Vec::new();
    let mut queue = std::collections::VecDeque::from([start.clone()]);
    while let Some(v) = queue.pop_front() {
        if !ech.insert(&v) {
            continue;
        }
        for f in lower {
            let y = f.apply(&v);
            if !y.is_empty() {
                queue.push_back(y);
            }
        }
        basis.push(v);
    }
    basis
}

/// Sign of the flip on each component of the classical square `V ⊗ V`:
/// `+1` in the symmetric square, `−1` in the alternating square.
pub fn classical_parity_signs(rep: &Representation) -> Result<BTreeMap<Weight, i8>> {
    let t = TensorModule::classical(rep, rep)?;
    let dec = decompose(&t)?;
    let p = t.flip();
    let mut out = BTreeMap::new();
    for c in &dec.components {
        let image = p.apply(&c.hw_vector);
        let neg: SparseVec = c.hw_vector.iter().map(|(&k, v)| (k, -v.clone())).collect();
        let sign = if image == c.hw_vector {
            1
        } else if image == neg {
            -1
        } else {
            return Err(Error::ContractViolation(format!(
                "component {} has mixed symmetry",
                c.weight
            )));
        };
        out.insert(c.weight.clone(), sign);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{Family, FamilySpec};
    use crate::qrep::build_seed_rep;

    fn seed(f: Family, l: usize) -> Representation {
        build_seed_rep(&FamilySpec::new(f, l).unwrap()).unwrap()
    }

    fn dims(dec: &IsotypicDecomposition) -> Vec<(Weight, usize)> {
        dec.components
            .iter()
            .map(|c| (c.weight.clone(), c.dim()))
            .collect()
    }

    #[test]
    fn k_is_grouplike() {
        let r = seed(Family::A2Even, 1);
        let w = QSample::from_ratio(2, 1).unwrap();
        let t = TensorModule::new(&r, &r, &w).unwrap();
        let k = t
            .coproduct_action(Generator::K(1, 1), &Rational::one(), false)
            .unwrap();
        let k1 = r.k_half(1, 1, &w);
        assert_eq!(k, k1.kron(&k1));
    }

    #[test]
    fn u_one_is_plain_coproduct() {
        let r = seed(Family::A2Even, 2);
        let w = QSample::from_ratio(3, 2).unwrap();
        let t = TensorModule::new(&r, &r, &w).unwrap();
        let q = r.quantum(&w).unwrap();
        let plain = q.kinv[0].kron(&q.e[0]).add(&q.e[0].kron(&q.k[0]));
        assert_eq!(
            t.coproduct_action(Generator::E(0), &Rational::one(), false)
                .unwrap(),
            plain
        );
    }

    #[test]
    fn e1_respects_weights() {
        let r = seed(Family::A2Even, 1);
        let t = TensorModule::new(&r, &r, &QSample::from_ratio(2, 1).unwrap()).unwrap();
        let e1 = t
            .coproduct_action(Generator::E(1), &Rational::one(), false)
            .unwrap();
        let alpha = r.spec.root(1);
        for (i, j, _) in e1.triplets() {
            assert_eq!(&(&t.weights[i] - &t.weights[j]), alpha);
        }
        assert_eq!(e1.nnz(), 12);
    }

    #[test]
    fn seed_squares_decompose() {
        let w = QSample::from_ratio(2, 1).unwrap();
        let cases = [
            (
                Family::A2Even,
                2,
                vec![(vec![2, 0], 14), (vec![1, 1], 10), (vec![0, 0], 1)],
            ),
            (
                Family::D2,
                2,
                vec![(vec![1, 1], 10), (vec![1, 0], 5), (vec![0, 0], 1)],
            ),
            (
                Family::A2Odd,
                3,
                vec![(vec![2, 0, 0], 21), (vec![1, 1, 0], 14), (vec![0, 0, 0], 1)],
            ),
        ];
        for (f, l, want) in cases {
            let r = seed(f, l);
            let t = TensorModule::new(&r, &r, &w).unwrap();
            let dec = decompose(&t).unwrap();
            let want: Vec<(Weight, usize)> = want
                .into_iter()
                .map(|(w, d)| (Weight::from_ints(&w), d))
                .collect();
            assert_eq!(dims(&dec), want, "{f} l={l}");
            let n = t.dim();
            let mut sum = SparseMatrix::zeros(n, n);
            for (a, pa) in dec.projectors.iter().enumerate() {
                sum = sum.add(pa);
                for (b, pb) in dec.projectors.iter().enumerate() {
                    let prod = pa.mul(pb);
                    if a == b {
                        assert_eq!(&prod, pa);
                    } else {
                        assert!(prod.is_zero());
                    }
                }
            }
            assert_eq!(sum, SparseMatrix::identity(n));
        }
    }

    #[test]
    fn classical_parities() {
        let e = |v: &[i64]| Weight::from_ints(v);
        let p = classical_parity_signs(&seed(Family::A2Even, 1)).unwrap();
        assert_eq!(p[&e(&[2])], 1);
        assert_eq!(p[&e(&[0])], 1);
        assert_eq!(p[&e(&[1])], -1);
        let p = classical_parity_signs(&seed(Family::A2Odd, 3)).unwrap();
        assert_eq!(p[&e(&[2, 0, 0])], 1);
        assert_eq!(p[&e(&[1, 1, 0])], -1);
        assert_eq!(p[&e(&[0, 0, 0])], -1);
        // the B₂ spinor is the sp(4) vector: Sym² = 10, Alt² = 5 + 1
        let p = classical_parity_signs(&seed(Family::D2, 2)).unwrap();
        assert_eq!(p[&e(&[1, 1])], 1);
        assert_eq!(p[&e(&[1, 0])], -1);
        assert_eq!(p[&e(&[0, 0])], -1);
    }
}

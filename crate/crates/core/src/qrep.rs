//! Seed representations (vector of B_l, vector of C_l, spinor of B_l) with
//! affine generator images, and the quantum relation checker.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::{
    check_classical_relations, kac_generators, Family, FamilySpec, KacGenerators, RelationReport,
};
use crate::linalg::{to_triplets, Echelon, SparseMatrix, SparseVec, Triplet};
use crate::scalars::{int, qfactorial, QSample, Rational};
use crate::weight::Weight;

/// A finite-dimensional module carrying the affine generators `e_i, f_i`
/// (0 ≤ i ≤ l) in classical normalization, with a weight basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub spec: FamilySpec,
    pub highest_weight: Weight,
    pub weights: Vec<Weight>,
    pub e: Vec<SparseMatrix>,
    pub f: Vec<SparseMatrix>,
}

/// Generator images at a concrete `q = w⁴`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumImage {
    pub e: Vec<SparseMatrix>,
    pub f: Vec<SparseMatrix>,
    /// `q^{h_i/2}`
    pub k: Vec<SparseMatrix>,
    /// `q^{-h_i/2}`
    pub kinv: Vec<SparseMatrix>,
}

/// `[m]_q = (q^m − q^{−m})/(q − q^{−1})` for a half-integer `m`.
pub fn qnumber(m: &Rational, w: &QSample) -> Result<Rational> {
    let num = w.q_pow(m)? - w.q_pow(&-m)?;
    let den = w.q() - w.q().recip();
    Ok(num / den)
}

impl Representation {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn rank(&self) -> usize {
        self.spec.l
    }

    /// Eigenvalues `(μ, ᾱ_i)` of `h_i` on the basis.
    pub fn h_eigenvalues(&self, i: usize) -> Vec<Rational> {
        self.weights
            .iter()
            .map(|mu| mu.inner(self.spec.root(i)))
            .collect()
    }

    pub fn h(&self, i: usize) -> SparseMatrix {
        SparseMatrix::diagonal(&self.h_eigenvalues(i))
    }

    pub fn classical(&self) -> KacGenerators {
        KacGenerators {
            e: self.e.clone(),
            f: self.f.clone(),
            h: (0..=self.rank()).map(|i| self.h(i)).collect(),
        }
    }

    /// `q^{±h_i/2}` as a diagonal matrix, `sign = ±1`.
    pub fn k_half(&self, i: usize, sign: i64, w: &QSample) -> SparseMatrix {
        let d: Vec<Rational> = self
            .h_eigenvalues(i)
            .iter()
            .map(|m| {
                let e = m * int(2 * sign);
                assert!(e.is_integer(), "h eigenvalue is not a half-integer");
                w.w_pow(e.to_integer().try_into().expect("small exponent"))
            })
            .collect();
        SparseMatrix::diagonal(&d)
    }

    /// Scalar `κ_i(q) = [m]_q / m` with `m` the largest `h_i` eigenvalue, so
    /// that `[e_i, κ_i f_i] = [h_i]_q` on strings of length at most three.
    pub fn f_scale(&self, i: usize, w: &QSample) -> Result<Rational> {
        let m = self
            .h_eigenvalues(i)
            .into_iter()
            .max()
            .ok_or_else(|| Error::Validation("empty representation".into()))?;
        if m.is_zero() {
            return Ok(Rational::one());
        }
        Ok(qnumber(&m, w)? / m)
    }

    pub fn quantum(&self, w: &QSample) -> Result<QuantumImage> {
        let r = self.rank();
        let mut f = Vec::with_capacity(r + 1);
        for i in 0..=r {
            f.push(self.f[i].scale(&self.f_scale(i, w)?));
        }
        Ok(QuantumImage {
            e: self.e.clone(),
            f,
            k: (0..=r).map(|i| self.k_half(i, 1, w)).collect(),
            kinv: (0..=r).map(|i| self.k_half(i, -1, w)).collect(),
        })
    }

    /// Checks that every generator shifts weights by its root.
    pub fn check_weight_additivity(&self) -> RelationReport {
        let mut rep = RelationReport::default();
        for i in 0..=self.rank() {
            let alpha = self.spec.root(i);
            for (name, m, sign) in [("e", &self.e[i], 1), ("f", &self.f[i], -1)] {
                let mut bad = SparseMatrix::zeros(self.dim(), self.dim());
                for (r, c, v) in m.triplets() {
                    if &self.weights[r] - &self.weights[c] != alpha.scale(sign) {
                        bad.set(r, c, v.clone());
                    }
                }
                rep.push(format!("weight({name}{i})"), &bad);
            }
        }
        rep
    }

    /// Dimension of the U(L₀)-submodule generated by `v` (generators i ≥ 1).
    pub fn generated_dim(&self, v: &SparseVec) -> usize {
        let mut ech = Echelon::new();
        let mut queue = vec![v.clone()];
        while let Some(x) = queue.pop() {
            if !ech.insert(&x) {
                continue;
            }
            for i in 1..=self.rank() {
                for g in [&self.e[i], &self.f[i]] {
                    let y = g.apply(&x);
                    if !y.is_empty() {
                        queue.push(y);
                    }
                }
            }
        }
        ech.rank()
    }

    /// Irreducibility under U(L₀) when all weight spaces are one-dimensional.
    pub fn is_l0_irreducible(&self) -> Result<bool> {
        let distinct: BTreeSet<&Weight> = self.weights.iter().collect();
        if distinct.len() != self.dim() {
            return Err(Error::UnsupportedRegime(
                "irreducibility test needs one-dimensional weight spaces".into(),
            ));
        }
        Ok((0..self.dim()).all(|b| {
            let mut v = SparseVec::new();
            v.insert(b, Rational::one());
            self.generated_dim(&v) == self.dim()
        }))
    }

    pub fn export(&self) -> RepresentationExport {
        RepresentationExport {
            family: self.spec.family,
            l: self.spec.l,
            highest_weight: self.highest_weight.clone(),
            dimension: self.dim(),
            weights: self.weights.clone(),
            generators: (0..=self.rank())
                .flat_map(|i| {
                    [
                        (format!("e{i}"), to_triplets(&self.e[i])),
                        (format!("f{i}"), to_triplets(&self.f[i])),
                    ]
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RepresentationExport {
    pub family: Family,
    pub l: usize,
    pub highest_weight: Weight,
    pub dimension: usize,
    pub weights: Vec<Weight>,
    pub generators: BTreeMap<String, Vec<Triplet>>,
}

/// Weight of each basis vector `v_1..v_n` of the defining module.
fn vector_weights(spec: &FamilySpec) -> Vec<Weight> {
    let l = spec.l;
    let mut out: Vec<Weight> = (0..l).map(|i| Weight::eps(l, i)).collect();
    if spec.family == Family::A2Even {
        out.push(Weight::zero(l));
    }
    out.extend((0..l).rev().map(|i| -&Weight::eps(l, i)));
    out
}

fn spinor_weights(l: usize) -> Vec<Weight> {
    // bit j set means the j-th coordinate is −½
    (0..1usize << l)
        .map(|s| {
            Weight::from_doubled(
                (0..l)
                    .map(|j| if s >> j & 1 == 1 { -1 } else { 1 })
                    .collect(),
            )
        })
        .collect()
}

/// Solves for the affine generator of weight `sign·ᾱ₀` from the linear
/// constraints `[x, y_k] = 0` (opposite generators, k ≥ 1) and `[x, x_k] = 0`
/// for `a_0k = 0`. Returns the null-space basis.
fn propagate(
    spec: &FamilySpec,
    weights: &[Weight],
    same: &[SparseMatrix],
    opposite: &[SparseMatrix],
    sign: i64,
) -> Vec<SparseMatrix> {
    let d = weights.len();
    let target = spec.root(0).scale(sign);
    let slots: Vec<(usize, usize)> = (0..d)
        .flat_map(|r| (0..d).map(move |c| (r, c)))
        .filter(|&(r, c)| &weights[r] - &weights[c] == target)
        .collect();
    let mut partners: Vec<&SparseMatrix> = opposite[1..].iter().collect();
    partners.extend(
        (1..=spec.l)
            .filter(|&k| spec.cartan(0, k) == 0)
            .map(|k| &same[k]),
    );
    let mut rows: BTreeMap<(usize, usize, usize), SparseVec> = BTreeMap::new();
    for (t, &(r, c)) in slots.iter().enumerate() {
        let unit = SparseMatrix::unit(d, r, c);
        for (p, m) in partners.iter().enumerate() {
            for (i, j, v) in SparseMatrix::commutator(&unit, m).triplets() {
                rows.entry((p, i, j)).or_default().insert(t, v.clone());
            }
        }
    }
    let mut ech = Echelon::new();
    for row in rows.values() {
        ech.insert(row);
    }
    ech.null_space(slots.len())
        .into_iter()
        .map(|v| {
            let lead = v
                .values()
                .next()
                .cloned()
                .unwrap_or_else(Rational::one)
                .recip();
            SparseMatrix::from_triplets(
                d,
                d,
                v.iter().map(|(&t, x)| (slots[t].0, slots[t].1, x * &lead)),
            )
        })
        .collect()
}

fn build_spinor(spec: &FamilySpec) -> Result<Representation> {
    let l = spec.l;
    let weights = spinor_weights(l);
    let d = weights.len();
    let mut e = vec![SparseMatrix::zeros(d, d); l + 1];
    let mut f = e.clone();
    for s in 0..d {
        let neg = |j: usize| s >> j & 1 == 1;
        for i in 1..l {
            // (s_i, s_{i+1}) = (−, +) → (+, −)
            if neg(i - 1) && !neg(i) {
                let t = s ^ (1 << (i - 1)) ^ (1 << i);
                e[i].set(t, s, int(1));
                f[i].set(s, t, int(1));
            }
        }
        if neg(l - 1) {
            let t = s ^ (1 << (l - 1));
            e[l].set(t, s, int(1));
            f[l].set(s, t, Rational::new(1.into(), 2.into()));
        }
    }
    let e0 = propagate(spec, &weights, &e, &f, 1);
    let f0 = propagate(spec, &weights, &f, &e, -1);
    if e0.len() != 1 || f0.len() != 1 {
        return Err(Error::ContractViolation(format!(
            "affine generator of the spinor is not unique: {} / {} solutions",
            e0.len(),
            f0.len()
        )));
    }
    e[0] = e0.into_iter().next().expect("one solution");
    let f0 = f0.into_iter().next().expect("one solution");
    // fix the scale of f₀ by [e₀, f₀] = h₀ on the first vector where it is nonzero
    let comm = SparseMatrix::commutator(&e[0], &f0);
    let h0: Vec<Rational> = weights.iter().map(|mu| mu.inner(spec.root(0))).collect();
    let b = (0..d)
        .find(|&b| !comm.get(b, b).is_zero())
        .ok_or_else(|| Error::ContractViolation("[e0, f0] vanishes on the spinor".into()))?;
    f[0] = f0.scale(&(&h0[b] / comm.get(b, b)));
    Ok(Representation {
        spec: spec.clone(),
        highest_weight: spec.spinor_weight(),
        weights,
        e,
        f,
    })
}

/// Builds the seed representation of the family and certifies it: classical
/// relations, weight additivity and the quantum relations at `w = 3`.
pub fn build_seed_rep(spec: &FamilySpec) -> Result<Representation> {
    let rep = match spec.family {
        Family::A2Even | Family::A2Odd => {
            let g = kac_generators(spec);
            Representation {
                spec: spec.clone(),
                highest_weight: spec.seed_weight(),
                weights: vector_weights(spec),
                e: g.e,
                f: g.f,
            }
        }
        Family::D2 => build_spinor(spec)?,
    };
    let fail = |r: &RelationReport| {
        r.failures().next().map(|c| Error::RelationFailure {
            relation: c.relation.clone(),
        })
    };
    let classical = check_classical_relations(&rep.classical(), spec);
    if let Some(err) = fail(&classical).or_else(|| fail(&rep.check_weight_additivity())) {
        return Err(err);
    }
    let quantum = check_quantum_relations(&rep, &QSample::from_ratio(3, 1)?)?;
    if let Some(err) = fail(&quantum) {
        return Err(err);
    }
    Ok(rep)
}

/// Checks every defining relation of `U_q` on the image: Cartan conjugation,
/// `[e_i, f_j] = δ_ij (q^{h_i} − q^{−h_i})/(q − q^{−1})` and both q-Serre relations.
pub fn check_quantum_image(
    img: &QuantumImage,
    spec: &FamilySpec,
    w: &QSample,
) -> Result<RelationReport> {
    let r = spec.l;
    let d = img.e[0].nrows();
    let mut rep = RelationReport::default();
    let q = w.q();
    let qq = &q - q.recip();
    for i in 0..=r {
        for j in 0..=r {
            // q^{h_i/2} x_j q^{−h_i/2} = q^{±(α_i,α_j)/2} x_j, i.e. w^{±2(α_i,α_j)}
            let c = spec.form(i, j) * int(2);
            let c: i64 = c.to_integer().try_into().expect("small form value");
            let conj_e = img.k[i].mul(&img.e[j]).mul(&img.kinv[i]);
            rep.push(
                format!("K{i} e{j} K{i}^-1"),
                &conj_e.sub(&img.e[j].scale(&w.w_pow(c))),
            );
            let conj_f = img.k[i].mul(&img.f[j]).mul(&img.kinv[i]);
            rep.push(
                format!("K{i} f{j} K{i}^-1"),
                &conj_f.sub(&img.f[j].scale(&w.w_pow(-c))),
            );

            let comm = SparseMatrix::commutator(&img.e[i], &img.f[j]);
            let target = if i == j {
                let k2 = img.k[i].mul(&img.k[i]);
                let kinv2 = img.kinv[i].mul(&img.kinv[i]);
                k2.sub(&kinv2).scale(&qq.recip())
            } else {
                SparseMatrix::zeros(d, d)
            };
            rep.push(format!("[e{i},f{j}]"), &comm.sub(&target));

            if i != j {
                let n = 1 - spec.cartan(i, j);
                // q_i = q^{(α_i,α_i)/2} = w^{2(α_i,α_i)}
                let qi_exp: i64 = (spec.form(i, i) * int(2))
                    .to_integer()
                    .try_into()
                    .expect("small");
                let qi = w.w_pow(qi_exp);
                rep.push(
                    format!("qserre(e{i},e{j})"),
                    &q_serre(&img.e[i], &img.e[j], n, &qi)?,
                );
                rep.push(
                    format!("qserre(f{i},f{j})"),
                    &q_serre(&img.f[i], &img.f[j], n, &qi)?,
                );
            }
        }
    }
    Ok(rep)
}

/// `Σ_{k=0}^{n} (−1)^k x^{(n−k)} y x^{(k)}` with divided powers in `q_i`.
fn q_serre(x: &SparseMatrix, y: &SparseMatrix, n: i64, qi: &Rational) -> Result<SparseMatrix> {
    let n = n as u32;
    let mut acc = SparseMatrix::zeros(x.nrows(), x.ncols());
    for k in 0..=n {
        let c = (qfactorial(n - k, qi)? * qfactorial(k, qi)?).recip();
        let c = if k % 2 == 0 { c } else { -c };
        acc = acc.add(&x.pow(n - k).mul(y).mul(&x.pow(k)).scale(&c));
    }
    Ok(acc)
}

pub fn check_quantum_relations(rep: &Representation, w: &QSample) -> Result<RelationReport> {
    check_quantum_image(&rep.quantum(w)?, &rep.spec, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn seed(f: Family, l: usize) -> Representation {
        build_seed_rep(&FamilySpec::new(f, l).unwrap()).unwrap()
    }

    #[test]
    fn a2even_l1_h0() {
        let r = seed(Family::A2Even, 1);
        assert_eq!(r.dim(), 3);
        assert_eq!(r.h_eigenvalues(0), vec![int(-2), int(0), int(2)]);
        assert_eq!(
            r.weights,
            vec![
                Weight::from_ints(&[1]),
                Weight::zero(1),
                Weight::from_ints(&[-1])
            ]
        );
    }

    #[test]
    fn vector_h_matches_kac_cartan() {
        for (f, l) in [(Family::A2Even, 3), (Family::A2Odd, 3), (Family::A2Odd, 4)] {
            let spec = FamilySpec::new(f, l).unwrap();
            let g = kac_generators(&spec);
            let r = build_seed_rep(&spec).unwrap();
            for i in 0..=l {
                assert_eq!(r.h(i), g.h[i], "{f} l={l} h{i}");
            }
        }
    }

    #[test]
    fn a2odd_e0_matrix() {
        let r = seed(Family::A2Odd, 3);
        assert_eq!(r.dim(), 6);
        let want = SparseMatrix::from_triplets(6, 6, [(4, 0, int(1)), (5, 1, int(1))]);
        assert_eq!(r.e[0], want);
    }

    #[test]
    fn spinor_weights_and_k() {
        let r = seed(Family::D2, 2);
        assert_eq!(r.dim(), 4);
        assert_eq!(r.weights[0], Weight::from_doubled(vec![1, 1]));
        assert_eq!(r.h_eigenvalues(2)[0], rat(1, 2));
        // q^{h₂/2} = q^{1/4} = w on (½, ½)
        let w = QSample::from_ratio(3, 2).unwrap();
        assert_eq!(r.k_half(2, 1, &w).get(0, 0), rat(3, 2));
    }

    #[test]
    fn spinor_e0_flips_first_sign() {
        for l in 2..=4 {
            let r = seed(Family::D2, l);
            for (row, col, v) in r.e[0].triplets() {
                assert_eq!(row, col ^ 1);
                assert_eq!(v, &int(1));
            }
            assert_eq!(r.e[0].nnz(), 1 << (l - 1));
            assert!(r.is_l0_irreducible().unwrap());
        }
    }

    #[test]
    fn quantum_relations_examples() {
        let w2 = QSample::from_ratio(2, 1).unwrap();
        assert!(check_quantum_relations(&seed(Family::A2Even, 2), &w2)
            .unwrap()
            .all_passed());
        let w32 = QSample::from_ratio(3, 2).unwrap();
        assert!(check_quantum_relations(&seed(Family::D2, 2), &w32)
            .unwrap()
            .all_passed());
    }

    #[test]
    fn zeroed_e0_fails() {
        let r = seed(Family::A2Even, 2);
        let w = QSample::from_ratio(2, 1).unwrap();
        let mut img = r.quantum(&w).unwrap();
        img.e[0] = SparseMatrix::zeros(r.dim(), r.dim());
        let rep = check_quantum_image(&img, &r.spec, &w).unwrap();
        assert!(rep.failures().any(|c| c.relation == "[e0,f0]"));
    }

    #[test]
    fn classical_f_fails_quantum_without_scaling() {
        let r = seed(Family::A2Odd, 3);
        let w = QSample::from_ratio(2, 1).unwrap();
        let mut img = r.quantum(&w).unwrap();
        img.f[3] = r.f[3].clone();
        let rep = check_quantum_image(&img, &r.spec, &w).unwrap();
        assert!(rep.failures().any(|c| c.relation == "[e3,f3]"));
    }
}

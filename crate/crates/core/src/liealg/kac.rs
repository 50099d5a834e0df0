//! Kac generators inside gl(n) and the classical relation checker.

use num_traits::Zero;
use serde::Serialize;

use super::{Family, FamilySpec};
use crate::linalg::{to_triplets, SparseMatrix, Triplet};
use crate::scalars::{int, Rational};

/// Classical Chevalley-type generators `E_i, F_i, H_i`, index 0 being the affine node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KacGenerators {
    pub e: Vec<SparseMatrix>,
    pub f: Vec<SparseMatrix>,
    pub h: Vec<SparseMatrix>,
}

impl KacGenerators {
    pub fn rank(&self) -> usize {
        self.e.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.e[0].nrows()
    }
}

/// `e_ij` in gl(n), 1-based.
fn e(n: usize, i: usize, j: usize) -> SparseMatrix {
    SparseMatrix::unit(n, i - 1, j - 1)
}

fn sign(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}

/// Index bar `ī = m + 1 − i` over the block `1..=m`.
struct Bar {
    n: usize,
    m: usize,
}

impl Bar {
    fn bar(&self, i: usize) -> usize {
        self.m + 1 - i
    }

    /// `a_ij = e_ij − (−1)^{i+j} e_{j̄ī}`
    fn a(&self, i: usize, j: usize) -> SparseMatrix {
        e(self.n, i, j).sub(&e(self.n, self.bar(j), self.bar(i)).scale(&sign(i + j)))
    }
}

/// Generators of the twisted affine algebra acting on its defining gl(n) module.
pub fn kac_generators(spec: &FamilySpec) -> KacGenerators {
    let l = spec.l;
    let n = spec.n;
    let m = match spec.family {
        Family::D2 => 2 * l + 1,
        _ => n,
    };
    let b = Bar { n, m };
    let mut es = vec![SparseMatrix::zeros(n, n); l + 1];
    let mut fs = es.clone();
    let mut hs = es.clone();
    for i in 1..l {
        es[i] = b.a(i, i + 1);
        fs[i] = b.a(i + 1, i);
        hs[i] = b.a(i, i).sub(&b.a(i + 1, i + 1));
    }
    match spec.family {
        Family::A2Even | Family::D2 => {
            es[l] = b.a(l, l + 1);
            fs[l] = b.a(l + 1, l);
            hs[l] = b.a(l, l);
        }
        Family::A2Odd => {
            es[l] = e(n, l, l + 1);
            fs[l] = e(n, l + 1, l).scale(&int(2));
            hs[l] = b.a(l, l).scale(&int(2));
        }
    }
    match spec.family {
        Family::A2Even => {
            es[0] = e(n, n, 1).scale(&int(2));
            fs[0] = e(n, 1, n);
            hs[0] = b.a(1, 1).scale(&int(-2));
        }
        Family::A2Odd => {
            es[0] = e(n, n - 1, 1).add(&e(n, n, 2));
            fs[0] = e(n, 1, n - 1).add(&e(n, 2, n));
            hs[0] = b.a(1, 1).add(&b.a(2, 2)).scale(&int(-1));
        }
        Family::D2 => {
            es[0] = e(n, n - 1, n).add(&e(n, n, 1));
            fs[0] = e(n, 1, n).add(&e(n, n, n - 1));
            hs[0] = b.a(1, 1).scale(&int(-1));
        }
    }
    KacGenerators {
        e: es,
        f: fs,
        h: hs,
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RelationCheck {
    pub relation: String,
    pub passed: bool,
    /// Nonzero entries of `lhs − rhs`, present only for failures.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residual: Vec<Triplet>,
}

impl RelationCheck {
    pub fn new(relation: String, residual: &SparseMatrix) -> Self {
        RelationCheck {
            relation,
            passed: residual.is_zero(),
            residual: to_triplets(residual),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn push(&mut self, relation: String, residual: &SparseMatrix) {
        self.checks.push(RelationCheck::new(relation, residual));
    }
}

/// `ad_x^k (y)`
fn ad_pow(x: &SparseMatrix, y: &SparseMatrix, k: i64) -> SparseMatrix {
    let mut acc = y.clone();
    for _ in 0..k {
        acc = SparseMatrix::commutator(x, &acc);
    }
    acc
}

/// Checks `[H_i,H_j] = 0`, `[H_i,E_j] = (ᾱ_i,ᾱ_j)E_j`, `[H_i,F_j] = −(ᾱ_i,ᾱ_j)F_j`,
/// `[E_i,F_j] = δ_ij H_i` and both Serre relations `ad^{1−a_ij}`.
pub fn check_classical_relations(g: &KacGenerators, spec: &FamilySpec) -> RelationReport {
    let r = g.rank();
    let mut rep = RelationReport::default();
    for i in 0..=r {
        for j in 0..=r {
            let c = spec.form(i, j);
            rep.push(
                format!("[H{i},H{j}]=0"),
                &SparseMatrix::commutator(&g.h[i], &g.h[j]),
            );
            rep.push(
                format!("[H{i},E{j}]=({c})E{j}"),
                &SparseMatrix::commutator(&g.h[i], &g.e[j]).sub(&g.e[j].scale(&c)),
            );
            rep.push(
                format!("[H{i},F{j}]=-({c})F{j}"),
                &SparseMatrix::commutator(&g.h[i], &g.f[j]).add(&g.f[j].scale(&c)),
            );
            let ef = SparseMatrix::commutator(&g.e[i], &g.f[j]);
            let target = if i == j {
                g.h[i].clone()
            } else {
                SparseMatrix::zeros(g.dim(), g.dim())
            };
            rep.push(format!("[E{i},F{j}]=δH"), &ef.sub(&target));
            if i != j {
                let k = 1 - spec.cartan(i, j);
                rep.push(format!("ad(E{i})^{k}E{j}=0"), &ad_pow(&g.e[i], &g.e[j], k));
                rep.push(format!("ad(F{i})^{k}F{j}=0"), &ad_pow(&g.f[i], &g.f[j], k));
            }
        }
    }
    rep
}

/// `(X, Y) = ½ tr(XY)`
pub fn trace_form(x: &SparseMatrix, y: &SparseMatrix) -> Rational {
    let p = x.mul(y);
    let mut t = Rational::zero();
    for i in 0..p.nrows() {
        t += p.get(i, i);
    }
    t / int(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(f: Family, l: usize) -> (FamilySpec, KacGenerators) {
        let s = FamilySpec::new(f, l).unwrap();
        let g = kac_generators(&s);
        (s, g)
    }

    #[test]
    fn a2even_l1_matrices() {
        let (_, g) = gens(Family::A2Even, 1);
        assert_eq!(g.e[1], e(3, 1, 2).add(&e(3, 2, 3)));
        assert_eq!(g.h[1], e(3, 1, 1).sub(&e(3, 3, 3)));
        assert_eq!(SparseMatrix::commutator(&g.e[0], &g.f[0]), g.h[0]);
        assert_eq!(g.e[0], e(3, 3, 1).scale(&int(2)));
    }

    #[test]
    fn a2odd_affine_generator() {
        let (_, g) = gens(Family::A2Odd, 3);
        assert_eq!(g.e[0], e(6, 5, 1).add(&e(6, 6, 2)));
    }

    #[test]
    fn all_families_pass() {
        for fam in Family::ALL {
            for l in fam.min_rank()..=5 {
                let (s, g) = gens(fam, l);
                let rep = check_classical_relations(&g, &s);
                let bad: Vec<_> = rep.failures().map(|c| c.relation.clone()).collect();
                assert!(bad.is_empty(), "{fam} l={l}: {bad:?}");
            }
        }
    }

    #[test]
    fn trace_form_matches_root_form() {
        for fam in Family::ALL {
            for l in fam.min_rank()..=4 {
                let (s, g) = gens(fam, l);
                for i in 0..=l {
                    for j in 0..=l {
                        let want = if i == j { int(1) } else { int(0) };
                        assert_eq!(
                            trace_form(&g.e[i], &g.f[j]),
                            want,
                            "{fam} l={l} (E{i},F{j})"
                        );
                        assert_eq!(trace_form(&g.h[i], &g.h[j]), s.form(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn perturbed_generator_fails_serre() {
        let (s, mut g) = gens(Family::A2Even, 2);
        g.e[1].add_to(0, 2, &int(1));
        let rep = check_classical_relations(&g, &s);
        assert!(rep.failures().any(|c| c.relation.starts_with("ad(E")));
    }
}

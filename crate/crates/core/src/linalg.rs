//! Sparse exact linear algebra over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::scalars::Rational;

pub type SparseVec = BTreeMap<usize, Rational>;

/// Row-major sparse matrix. Stored entries are never zero.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix({}x{}, [", self.nrows, self.ncols)?;
        for (i, j, v) in self.triplets() {
            write!(f, " ({i},{j})={v}")?;
        }
        write!(f, " ])")
    }
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            rows: vec![SparseVec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    /// Matrix unit `e_ij` (zero-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.set(i, j, Rational::one());
        m
    }

    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for (i, j, v) in entries {
            m.add_to(i, j, &v);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.rows[i].get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(i < self.nrows && j < self.ncols, "index out of range");
        if v.is_zero() {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Rational) {
        if v.is_zero() {
            return;
        }
        let slot = self.rows[i].entry(j).or_insert_with(Rational::zero);
        *slot += v;
        if slot.is_zero() {
            self.rows[i].remove(&j);
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BTreeMap::is_empty)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(&j, v)| (i, j, v)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zeros(self.nrows, self.ncols);
        }
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|(&j, v)| (j, v * c)).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut out = self.clone();
        for (i, j, v) in other.triplets() {
            out.add_to(i, j, v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let mut out = Self::zeros(self.nrows, other.ncols);
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = SparseVec::new();
            for (k, a) in row {
                for (j, b) in &other.rows[*k] {
                    *acc.entry(*j).or_insert_with(Rational::zero) += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.rows[i] = acc;
        }
        out
    }

    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.mul(b).sub(&b.mul(a))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.ncols, self.nrows);
        for (i, j, v) in self.triplets() {
            out.rows[j].insert(i, v.clone());
        }
        out
    }

    /// Kronecker product `self ⊗ other`, index `(i, k) -> i * dim(other) + k`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.nrows * other.nrows, self.ncols * other.ncols);
        for (i, j, a) in self.triplets() {
            for (k, l, b) in other.triplets() {
                out.rows[i * other.nrows + k].insert(j * other.ncols + l, a * b);
            }
        }
        out
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = Rational::zero();
            for (j, a) in row {
                if let Some(b) = v.get(j) {
                    acc += a * b;
                }
            }
            if !acc.is_zero() {
                out.insert(i, acc);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.nrows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Entry of largest height (max of numerator/denominator magnitude), for reports.
    pub fn max_abs_entry(&self) -> Option<Rational> {
        use num_traits::Signed;
        self.triplets().map(|(_, _, v)| v.abs()).max()
    }
}

/// A sparse matrix entry in a JSON report.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Triplet {
    pub row: usize,
    pub col: usize,
    pub value: String,
}

pub fn to_triplets(m: &SparseMatrix) -> Vec<Triplet> {
    m.triplets()
        .map(|(row, col, v)| Triplet {
            row,
            col,
            value: v.to_string(),
        })
        .collect()
}

/// Incremental reduced row echelon form. Each stored row has a pivot entry 1
/// and no entries in any other pivot column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the stored pivots.
    pub fn reduce(&self, row: &SparseVec) -> SparseVec {
        let mut row = row.clone();
        let hits: Vec<usize> = row
            .keys()
            .filter(|c| self.pivots.contains_key(c))
            .copied()
            .collect();
        for c in hits {
            let Some(coef) = row.get(&c).cloned() else {
                continue;
            };
            for (j, v) in &self.pivots[&c] {
                let slot = row.entry(*j).or_insert_with(Rational::zero);
                *slot -= &coef * v;
            }
            row.retain(|_, v| !v.is_zero());
        }
        row
    }

    /// Inserts a row; returns `false` if it was dependent on the stored rows.
    pub fn insert(&mut self, row: &SparseVec) -> bool {
        let row = self.reduce(row);
        let Some((&pc, pv)) = row.iter().next() else {
            return false;
        };
        let inv = pv.recip();
        let row: SparseVec = row.iter().map(|(&j, v)| (j, v * &inv)).collect();
        for other in self.pivots.values_mut() {
            if let Some(coef) = other.get(&pc).cloned() {
                for (j, v) in &row {
                    let slot = other.entry(*j).or_insert_with(Rational::zero);
                    *slot -= &coef * v;
                }
                other.retain(|_, v| !v.is_zero());
            }
        }
        self.pivots.insert(pc, row);
        true
    }

    /// Basis of the solution space of `row · x = 0` for every stored row.
    pub fn null_space(&self, ncols: usize) -> Vec<SparseVec> {
        let mut out = Vec::new();
        for free in (0..ncols).filter(|c| !self.pivots.contains_key(c)) {
            let mut v = SparseVec::new();
            v.insert(free, Rational::one());
            for (&p, row) in &self.pivots {
                if let Some(c) = row.get(&free) {
                    v.insert(p, -c.clone());
                }
            }
            out.push(v);
        }
        out
    }
}

/// Null space of the system given by sparse rows over `ncols` unknowns.
pub fn null_space<'a>(
    rows: impl IntoIterator<Item = &'a SparseVec>,
    ncols: usize,
) -> Vec<SparseVec> {
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(r);
    }
    ech.null_space(ncols)
}

/// Dense inverse by Gauss-Jordan elimination; `None` if singular.
pub fn invert_dense(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].recip();
        for j in 0..n {
            a[col][j] *= &p;
            inv[col][j] *= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[r][j] -= t;
                let t = &f * &inv[col][j];
                inv[r][j] -= t;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    #[test]
    fn kron_and_product() {
        let a = SparseMatrix::from_triplets(2, 2, [(0, 1, int(1))]);
        let b = SparseMatrix::from_triplets(2, 2, [(1, 0, int(2))]);
        let ab = a.kron(&b);
        assert_eq!(ab.get(1, 2), int(2));
        assert_eq!(ab.nnz(), 1);
        let prod = a.mul(&b);
        assert_eq!(prod, SparseMatrix::from_triplets(2, 2, [(0, 0, int(2))]));
        assert_eq!(SparseMatrix::commutator(&a, &b).get(1, 1), int(-2));
    }

    #[test]
    fn null_space_of_rank_one_system() {
        let mut r = SparseVec::new();
        r.insert(0, int(1));
        r.insert(1, int(-2));
        let mut r2 = SparseVec::new();
        r2.insert(0, int(2));
        r2.insert(1, int(-4));
        let ns = null_space([&r, &r2], 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot: Rational = v
                .iter()
                .map(|(j, x)| r.get(j).cloned().unwrap_or_default() * x)
                .sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn dense_inverse() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        let inv = invert_dense(&m).unwrap();
        assert_eq!(inv, vec![vec![int(1), int(-1)], vec![int(-1), int(2)]]);
        assert!(invert_dense(&[vec![int(1), int(2)], vec![rat(1, 2), int(1)]]).is_none());
    }
}

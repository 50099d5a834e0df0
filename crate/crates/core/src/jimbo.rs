//! Direct solution of Jimbo's intertwining equations as an exact null-space
//! problem, and the checks built on it: Yang–Baxter, unitarity, parity
//! spectrum and agreement with graph eigenvalues.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::FamilySpec;
use crate::linalg::{invert_dense, to_triplets, Echelon, SparseMatrix, SparseVec, Triplet};
use crate::qrep::Representation;
use crate::scalars::{int, rational_string, BracketProduct, QSample, Rational};
use crate::tensor::{decompose, Generator, IsotypicDecomposition, TensorModule};
use crate::weight::Weight;

/// A solved R-matrix at one sample point.
#[derive(Clone, Debug)]
pub struct RMatrixResult {
    pub w: QSample,
    pub u: Rational,
    /// `R(u)` on `V ⊗ W`.
    pub r: SparseMatrix,
    /// `Ř(u) = P R(u)`.
    pub check: SparseMatrix,
    pub weights: Vec<Weight>,
    pub unknowns: usize,
    pub equations: usize,
    pub null_dim: usize,
    /// Index of `v_top ⊗ v_top`, where `Ř` is normalized to act as 1.
    pub top: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RMatrixExport {
    pub w: String,
    pub u: String,
    pub dimension: usize,
    pub unknowns: usize,
    pub equations: usize,
    pub null_dim: usize,
    pub normalization: String,
    pub r: Vec<Triplet>,
}

impl RMatrixResult {
    pub fn dim(&self) -> usize {
        self.r.nrows()
    }

    pub fn export(&self) -> RMatrixExport {
        RMatrixExport {
            w: self.w.w().to_string(),
            u: self.u.to_string(),
            dimension: self.dim(),
            unknowns: self.unknowns,
            equations: self.equations,
            null_dim: self.null_dim,
            normalization: "check-R acts as 1 on the top highest-weight vector".into(),
            r: to_triplets(&self.r),
        }
    }
}

/// Generators whose intertwining conditions determine `R`: `e_i, f_i` for
/// `i ≥ 1` and `e₀`.
fn jimbo_generators(l: usize) -> Vec<Generator> {
    let mut g: Vec<Generator> = (1..=l)
        .flat_map(|i| [Generator::E(i), Generator::F(i)])
        .collect();
    g.push(Generator::E(0));
    g
}

/// Solves `R Δ^u(a) = Δ^{T,u}(a) R` for `R` block-diagonal in total weight.
pub fn solve_rmatrix(
    left: &Representation,
    right: &Representation,
    w: &QSample,
    u: &Rational,
) -> Result<RMatrixResult> {
    let t = TensorModule::new(left, right, w)?;
    solve_on(&t, w, u)
}

fn solve_on(t: &TensorModule, w: &QSample, u: &Rational) -> Result<RMatrixResult> {
    let n = t.dim();
    let mut slot: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut slots = Vec::new();
    for idxs in t.weight_spaces().values() {
        for &r in idxs {
            for &c in idxs {
                slot.insert((r, c), slots.len());
                slots.push((r, c));
            }
        }
    }
    // unknowns of R grouped by row
    let mut by_row: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (s, &(r, c)) in slots.iter().enumerate() {
        by_row[r].push((c, s));
    }

    let mut ech = Echelon::new();
    let mut equations = 0;
    for g in jimbo_generators(t.rank()) {
        let x = t.coproduct_action(g, u, false)?;
        let y = t.coproduct_action(g, u, true)?;
        let yt = y.transpose();
        let mut eqs: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        // (R X)_{rc} = Σ_k R_{rk} X_{kc}
        for r in 0..n {
            for &(k, s) in &by_row[r] {
                for (&c, v) in x.row(k) {
                    *eqs.entry((r, c))
                        .or_default()
                        .entry(s)
                        .or_insert_with(Rational::zero) += v;
                }
            }
        }
        // (Y R)_{rc} = Σ_k Y_{rk} R_{kc}
        for k in 0..n {
            for (&r, v) in yt.row(k) {
                for &(c, s) in &by_row[k] {
                    *eqs.entry((r, c))
                        .or_default()
                        .entry(s)
                        .or_insert_with(Rational::zero) -= v;
                }
            }
        }
        for row in eqs.values_mut() {
            row.retain(|_, v| !v.is_zero());
            if !row.is_empty() {
                equations += 1;
                ech.insert(row);
            }
        }
    }
    let null = ech.null_space(slots.len());
    match null.len() {
        0 => return Err(Error::InconsistentSystem),
        1 => {}
        dim => return Err(Error::NonGeneric { dim }),
    }
    let sol = &null[0];
    let top = top_index(&t.weights)?;
    let norm = sol
        .get(&slot[&(top, top)])
        .cloned()
        .ok_or_else(|| Error::ContractViolation("R vanishes on the top vector".into()))?;
    let inv = norm.recip();
    let r = SparseMatrix::from_triplets(
        n,
        n,
        sol.iter().map(|(&s, v)| (slots[s].0, slots[s].1, v * &inv)),
    );
    let check = t.flip().mul(&r);
    Ok(RMatrixResult {
        w: w.clone(),
        u: u.clone(),
        r,
        check,
        weights: t.weights.clone(),
        unknowns: slots.len(),
        equations,
        null_dim: 1,
        top,
    })
}

fn top_index(weights: &[Weight]) -> Result<usize> {
    let max = weights
        .iter()
        .max()
        .ok_or_else(|| Error::Validation("empty module".into()))?;
    let hits: Vec<usize> = (0..weights.len()).filter(|&i| &weights[i] == max).collect();
    if hits.len() != 1 {
        return Err(Error::ContractViolation("top weight is not simple".into()));
    }
    Ok(hits[0])
}

/// Residual of the intertwining conditions for a given matrix, including the
/// Cartan generators. Zero means `m` is an intertwiner.
pub fn intertwining_residual(
    t: &TensorModule,
    m: &SparseMatrix,
    u: &Rational,
) -> Result<SparseMatrix> {
    let mut gens = jimbo_generators(t.rank());
    gens.push(Generator::F(0));
    gens.extend((0..=t.rank()).map(|i| Generator::K(i, 1)));
    let mut acc = SparseMatrix::zeros(t.dim(), t.dim());
    for g in gens {
        let x = t.coproduct_action(g, u, false)?;
        let y = t.coproduct_action(g, u, true)?;
        acc = acc.add(&m.mul(&x).sub(&y.mul(m)));
    }
    Ok(acc)
}

/// Inverse of a matrix that is block-diagonal in total weight.
pub fn block_inverse(m: &SparseMatrix, weights: &[Weight]) -> Result<SparseMatrix> {
    let mut spaces: BTreeMap<&Weight, Vec<usize>> = BTreeMap::new();
    for (i, w) in weights.iter().enumerate() {
        spaces.entry(w).or_default().push(i);
    }
    let mut out = SparseMatrix::zeros(m.nrows(), m.ncols());
    for idxs in spaces.values() {
        let dense: Vec<Vec<Rational>> = idxs
            .iter()
            .map(|&r| idxs.iter().map(|&c| m.get(r, c)).collect())
            .collect();
        let inv = invert_dense(&dense)
            .ok_or_else(|| Error::ContractViolation("singular weight block".into()))?;
        for (a, &r) in idxs.iter().enumerate() {
            for (b, &c) in idxs.iter().enumerate() {
                out.set(r, c, inv[a][b].clone());
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct YbeReport {
    #[serde(with = "rational_string")]
    pub w: Rational,
    #[serde(with = "rational_string")]
    pub u: Rational,
    #[serde(with = "rational_string")]
    pub v: Rational,
    pub dimension: usize,
    pub passed: bool,
    /// Largest absolute entry of `lhs − rhs`.
    #[serde(with = "rational_string")]
    pub max_residual: Rational,
}

/// `R¹²(u) R¹³(uv) R²³(v) = R²³(v) R¹³(uv) R¹²(u)` on `V ⊗ V ⊗ V`.
pub fn check_ybe(
    rep: &Representation,
    w: &QSample,
    u: &Rational,
    v: &Rational,
) -> Result<YbeReport> {
    let t = TensorModule::new(rep, rep, w)?;
    let ru = solve_on(&t, w, u)?.r;
    let rv = solve_on(&t, w, v)?.r;
    let ruv = solve_on(&t, w, &(u * v))?.r;
    let d = rep.dim();
    let id = SparseMatrix::identity(d);
    let p23 = id.kron(&t.flip());
    let r12 = |m: &SparseMatrix| m.kron(&id);
    let r23 = |m: &SparseMatrix| id.kron(m);
    let r13 = |m: &SparseMatrix| p23.mul(&r12(m)).mul(&p23);
    let lhs = r12(&ru).mul(&r13(&ruv)).mul(&r23(&rv));
    let rhs = r23(&rv).mul(&r13(&ruv)).mul(&r12(&ru));
    let diff = lhs.sub(&rhs);
    Ok(YbeReport {
        w: w.w().clone(),
        u: u.clone(),
        v: v.clone(),
        dimension: d * d * d,
        passed: diff.is_zero(),
        max_residual: diff.max_abs_entry().unwrap_or_default(),
    })
}

/// `Ř(u) Ř(u⁻¹) = I`; both results must share `w` and have reciprocal `u`.
pub fn check_unitarity(a: &RMatrixResult, b: &RMatrixResult) -> bool {
    a.w == b.w
        && &a.u * &b.u == Rational::one()
        && a.check.mul(&b.check) == SparseMatrix::identity(a.dim())
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralLine {
    pub weight: Weight,
    pub expected_formula: String,
    #[serde(with = "rational_string")]
    pub expected: Rational,
    #[serde(with = "rational_string")]
    pub found: Rational,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    #[serde(with = "rational_string")]
    pub w: Rational,
    #[serde(with = "rational_string")]
    pub u: Rational,
    pub components: Vec<SpectralLine>,
    /// `Ř(u) Ř(1)⁻¹ = Σ ρ_ν(u) P_ν` as matrices.
    pub matrix_identity: bool,
    pub passed: bool,
}

/// Compares `M = Ř(u) Ř(1)⁻¹` with `Σ_ν ρ_ν(u) P_ν`.
pub fn spectral_compare(
    at_u: &RMatrixResult,
    at_one: &RMatrixResult,
    dec: &IsotypicDecomposition,
    table: &BTreeMap<Weight, BracketProduct>,
) -> Result<SpectralReport> {
    if !at_one.u.is_one() || at_u.w != at_one.w {
        return Err(Error::Validation(
            "spectral comparison needs R(1) at the same w".into(),
        ));
    }
    let m = at_u
        .check
        .mul(&block_inverse(&at_one.check, &at_one.weights)?);
    let mut expected_m = SparseMatrix::zeros(m.nrows(), m.ncols());
    let mut components = Vec::new();
    for (c, p) in dec.components.iter().zip(&dec.projectors) {
        let rho = table.get(&c.weight).ok_or_else(|| {
            Error::Validation(format!("no eigenvalue for component {}", c.weight))
        })?;
        let expected = rho.eval(&at_u.w, &at_u.u)?;
        let found = eigenvalue_on(&m, &c.hw_vector)?;
        expected_m = expected_m.add(&p.scale(&expected));
        components.push(SpectralLine {
            weight: c.weight.clone(),
            expected_formula: rho.to_string(),
            passed: expected == found,
            expected,
            found,
        });
    }
    let matrix_identity = m == expected_m;
    let passed = matrix_identity && components.iter().all(|c| c.passed);
    Ok(SpectralReport {
        w: at_u.w.w().clone(),
        u: at_u.u.clone(),
        components,
        matrix_identity,
        passed,
    })
}

/// `λ` with `m v = λ v`; error if `v` is not an eigenvector.
pub fn eigenvalue_on(m: &SparseMatrix, v: &SparseVec) -> Result<Rational> {
    let image = m.apply(v);
    let (&k, x) = v
        .iter()
        .next()
        .ok_or_else(|| Error::Validation("zero vector".into()))?;
    let lambda = image.get(&k).cloned().unwrap_or_default() / x;
    let scaled: SparseVec = v
        .iter()
        .map(|(&j, y)| (j, y * &lambda))
        .filter(|(_, y)| !y.is_zero())
        .collect();
    if scaled != image {
        return Err(Error::ContractViolation(
            "vector is not an eigenvector".into(),
        ));
    }
    Ok(lambda)
}

/// Parities read off the braid limit `Ř(0)`, whose eigenvalue on `V(ν)` must be
/// `ε_ν q^{(C(ν) − C(top))/2}`. `Ř(1)` itself is the identity.
pub fn parity_spectrum(
    at_zero: &RMatrixResult,
    dec: &IsotypicDecomposition,
    spec: &FamilySpec,
) -> Result<BTreeMap<Weight, i8>> {
    if !at_zero.u.is_zero() {
        return Err(Error::Validation(
            "parity spectrum needs the u = 0 solution".into(),
        ));
    }
    let top = dec
        .components
        .first()
        .ok_or_else(|| Error::Validation("empty decomposition".into()))?;
    let c_top = spec.casimir(&top.weight)?;
    let mut out = BTreeMap::new();
    for c in &dec.components {
        let e = eigenvalue_on(&at_zero.check, &c.hw_vector)?;
        let mag = at_zero
            .w
            .q_pow(&((spec.casimir(&c.weight)? - &c_top) / int(2)))?;
        let s = if e == mag {
            1
        } else if e == -mag {
            -1
        } else {
            return Err(Error::ContractViolation(format!(
                "Ř(0) has eigenvalue {e} on {}",
                c.weight
            )));
        };
        out.insert(c.weight.clone(), s);
    }
    Ok(out)
}

/// Decomposition and solves at `u` and `1`.
pub fn solve_with_decomposition(
    rep: &Representation,
    w: &QSample,
    u: &Rational,
) -> Result<(IsotypicDecomposition, RMatrixResult, RMatrixResult)> {
    let t = TensorModule::new(rep, rep, w)?;
    let dec = decompose(&t)?;
    let at_u = solve_on(&t, w, u)?;
    let at_one = solve_on(&t, w, &Rational::one())?;
    Ok((dec, at_u, at_one))
}

/// Largest absolute entry, zero for the zero matrix.
pub fn max_abs(m: &SparseMatrix) -> Rational {
    m.triplets()
        .map(|(_, _, v)| v.abs())
        .max()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::Family;
    use crate::qrep::build_seed_rep;
    use crate::scalars::rat;

    fn seed(f: Family, l: usize) -> Representation {
        build_seed_rep(&FamilySpec::new(f, l).unwrap()).unwrap()
    }

    fn w(p: i64, q: i64) -> QSample {
        QSample::from_ratio(p, q).unwrap()
    }

    #[test]
    fn a2even_l1_unique_solution() {
        let r = seed(Family::A2Even, 1);
        let res = solve_rmatrix(&r, &r, &w(2, 1), &rat(3, 5)).unwrap();
        assert_eq!(res.dim(), 9);
        assert_eq!(res.null_dim, 1);
        let t = TensorModule::new(&r, &r, &w(2, 1)).unwrap();
        assert!(intertwining_residual(&t, &res.r, &rat(3, 5))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn check_r_at_one_is_involution() {
        for (f, l) in [(Family::A2Even, 1), (Family::A2Even, 2), (Family::D2, 2)] {
            let r = seed(f, l);
            let one = solve_rmatrix(&r, &r, &w(3, 2), &int(1)).unwrap();
            assert_eq!(
                one.check.mul(&one.check),
                SparseMatrix::identity(one.dim()),
                "{f} l={l}"
            );
        }
    }

    #[test]
    fn reciprocal_rescaling_is_invisible() {
        let mut r = seed(Family::A2Even, 2);
        let base = solve_rmatrix(&r, &r, &w(2, 1), &rat(3, 5)).unwrap();
        r.e[0] = r.e[0].scale(&int(2));
        r.f[0] = r.f[0].scale(&rat(1, 2));
        let scaled = solve_rmatrix(&r, &r, &w(2, 1), &rat(3, 5)).unwrap();
        assert_eq!(base.r, scaled.r);
    }

    #[test]
    fn ybe_small_cases() {
        let rep = check_ybe(&seed(Family::A2Even, 1), &w(2, 1), &rat(3, 5), &rat(7, 11)).unwrap();
        assert!(rep.passed);
        assert!(rep.max_residual.is_zero());
        let rep = check_ybe(&seed(Family::D2, 2), &w(3, 2), &rat(-2, 7), &rat(5, 3)).unwrap();
        assert!(rep.passed);
        let rep = check_ybe(&seed(Family::A2Even, 1), &w(2, 1), &int(1), &int(1)).unwrap();
        assert!(rep.passed);
    }

    #[test]
    fn unitarity_and_negative_control() {
        let r = seed(Family::A2Even, 2);
        let a = solve_rmatrix(&r, &r, &w(2, 1), &rat(3, 5)).unwrap();
        let b = solve_rmatrix(&r, &r, &w(2, 1), &rat(5, 3)).unwrap();
        assert!(check_unitarity(&a, &b));
        let mut bad = b.clone();
        bad.check = bad.check.scale(&int(2));
        assert!(!check_unitarity(&a, &bad));
    }

    #[test]
    fn spectral_a2even_l2() {
        let r = seed(Family::A2Even, 2);
        let (dec, at_u, at_one) = solve_with_decomposition(&r, &w(2, 1), &rat(3, 5)).unwrap();
        let mut table = BTreeMap::new();
        table.insert(Weight::from_ints(&[2, 0]), BracketProduct::one());
        table.insert(
            Weight::from_ints(&[1, 1]),
            BracketProduct::single(&int(2), -1),
        );
        table.insert(
            Weight::from_ints(&[0, 0]),
            BracketProduct::single(&int(5), 1),
        );
        let rep = spectral_compare(&at_u, &at_one, &dec, &table).unwrap();
        assert!(rep.passed, "{rep:#?}");
    }

    #[test]
    fn spectral_d2_l2() {
        let r = seed(Family::D2, 2);
        let (dec, at_u, at_one) = solve_with_decomposition(&r, &w(3, 2), &rat(2, 7)).unwrap();
        let mut table = BTreeMap::new();
        table.insert(Weight::from_ints(&[1, 1]), BracketProduct::one());
        table.insert(
            Weight::from_ints(&[1, 0]),
            BracketProduct::single(&int(1), -1),
        );
        let mut p = BracketProduct::single(&int(1), -1);
        p.mul_bracket(&int(2), 1, 1);
        table.insert(Weight::from_ints(&[0, 0]), p);
        let rep = spectral_compare(&at_u, &at_one, &dec, &table).unwrap();
        assert!(rep.passed, "{rep:#?}");
    }

    #[test]
    fn check_r_at_one_is_identity() {
        let r = seed(Family::A2Odd, 3);
        let one = solve_rmatrix(&r, &r, &w(2, 1), &int(1)).unwrap();
        assert_eq!(one.check, SparseMatrix::identity(one.dim()));
    }

    #[test]
    fn parity_from_braid_limit() {
        let cases = [
            (Family::D2, 2, vec![-1, -1, 1]),
            (Family::A2Even, 2, vec![1, -1, 1]),
            (Family::A2Odd, 3, vec![-1, -1, 1]),
        ];
        for (f, l, want) in cases {
            let r = seed(f, l);
            let t = TensorModule::new(&r, &r, &w(3, 2)).unwrap();
            let dec = decompose(&t).unwrap();
            let zero = solve_on(&t, &w(3, 2), &int(0)).unwrap();
            let p = parity_spectrum(&zero, &dec, &r.spec).unwrap();
            assert_eq!(p.values().copied().collect::<Vec<_>>(), want, "{f} l={l}");
            assert_eq!(
                p,
                crate::tensor::classical_parity_signs(&r).unwrap(),
                "{f} l={l}"
            );
        }
    }
}

//! Classical data for the three twisted families: simple roots, the fixed
//! subalgebra L₀, Casimir eigenvalues and the Weyl dimension formula.

mod kac;

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalars::{int, Rational};
use crate::weight::Weight;

pub use kac::{
    check_classical_relations, kac_generators, trace_form, KacGenerators, RelationCheck,
    RelationReport,
};

/// The twisted affine algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    /// A₂ₗ⁽²⁾ with L₀ = B_l.
    #[serde(rename = "a2even")]
    A2Even,
    /// A₂ₗ₋₁⁽²⁾ with L₀ = C_l.
    #[serde(rename = "a2odd")]
    A2Odd,
    /// Dₗ₊₁⁽²⁾ with L₀ = B_l.
    #[serde(rename = "d2")]
    D2,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::A2Even, Family::A2Odd, Family::D2];

    pub fn name(self) -> &'static str {
        match self {
            Family::A2Even => "a2even",
            Family::A2Odd => "a2odd",
            Family::D2 => "d2",
        }
    }

    pub fn min_rank(self) -> usize {
        match self {
            Family::A2Even => 1,
            Family::A2Odd => 3,
            Family::D2 => 2,
        }
    }

    pub fn classical_type(self) -> ClassicalType {
        match self {
            Family::A2Even | Family::D2 => ClassicalType::B,
            Family::A2Odd => ClassicalType::C,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a2even" => Ok(Family::A2Even),
            "a2odd" => Ok(Family::A2Odd),
            "d2" => Ok(Family::D2),
            _ => Err(Error::Validation(format!("unknown family {s:?}"))),
        }
    }
}

/// Type of the fixed-point subalgebra L₀.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ClassicalType {
    /// so(2l+1)
    B,
    /// sp(2l)
    C,
}

impl ClassicalType {
    /// Positive roots in the ε-basis.
    pub fn positive_roots(self, l: usize) -> Vec<Weight> {
        let mut out = Vec::new();
        for i in 0..l {
            for j in i + 1..l {
                out.push(&Weight::eps(l, i) - &Weight::eps(l, j));
                out.push(&Weight::eps(l, i) + &Weight::eps(l, j));
            }
            out.push(match self {
                ClassicalType::B => Weight::eps(l, i),
                ClassicalType::C => Weight::eps(l, i).scale(2),
            });
        }
        out
    }

    /// Simple roots α₁..α_l of L₀.
    pub fn simple_roots(self, l: usize) -> Vec<Weight> {
        let mut out: Vec<Weight> = (0..l - 1)
            .map(|i| &Weight::eps(l, i) - &Weight::eps(l, i + 1))
            .collect();
        out.push(match self {
            ClassicalType::B => Weight::eps(l, l - 1),
            ClassicalType::C => Weight::eps(l, l - 1).scale(2),
        });
        out
    }

    /// Weyl vector: `(l−½, …, ½)` for B_l, `(l, …, 1)` for C_l.
    pub fn rho(self, l: usize) -> Weight {
        Weight::from_doubled(
            (0..l)
                .map(|i| {
                    let k = (l - i) as i64;
                    match self {
                        ClassicalType::B => 2 * k - 1,
                        ClassicalType::C => 2 * k,
                    }
                })
                .collect(),
        )
    }

    /// Whether `nu` is an integral dominant weight.
    pub fn is_dominant(self, nu: &Weight) -> bool {
        let d = nu.doubled();
        let integral = match self {
            ClassicalType::B => {
                d.iter().all(|c| c % 2 == 0) || d.iter().all(|c| c.rem_euclid(2) == 1)
            }
            ClassicalType::C => d.iter().all(|c| c % 2 == 0),
        };
        integral && d.windows(2).all(|p| p[0] >= p[1]) && d.last().is_none_or(|&c| c >= 0)
    }

    /// Dynkin labels of `nu` with respect to the fundamental weights.
    pub fn dynkin_labels(self, nu: &Weight) -> Vec<i64> {
        let d = nu.doubled();
        let l = d.len();
        let mut out: Vec<i64> = (0..l - 1).map(|i| (d[i] - d[i + 1]) / 2).collect();
        out.push(match self {
            ClassicalType::B => d[l - 1],
            ClassicalType::C => d[l - 1] / 2,
        });
        out
    }

    /// Fundamental weight ω_i (1-based `i`).
    pub fn fundamental(self, l: usize, i: usize) -> Weight {
        assert!(
            (1..=l).contains(&i),
            "fundamental weight index out of range"
        );
        if self == ClassicalType::B && i == l {
            return Weight::from_doubled(vec![1; l]);
        }
        Weight::from_doubled((0..l).map(|j| if j < i { 2 } else { 0 }).collect())
    }

    /// Label like `2λ₁+λ₃` in terms of the fundamental weights of L₀.
    pub fn label(self, nu: &Weight) -> String {
        format_labels(&self.dynkin_labels(nu))
    }

    pub fn casimir(self, nu: &Weight) -> Rational {
        let rho2 = self.rho(nu.len()).scale(2);
        nu.inner(&(nu + &rho2))
    }

    pub fn weyl_dim(self, nu: &Weight) -> Result<u64> {
        if !self.is_dominant(nu) {
            return Err(Error::Validation(format!(
                "{nu} is not dominant for {self:?}"
            )));
        }
        let l = nu.len();
        let rho = self.rho(l);
        let shifted = nu + &rho;
        let mut acc = Rational::one();
        for alpha in self.positive_roots(l) {
            acc = acc * shifted.inner(&alpha) / rho.inner(&alpha);
        }
        if !acc.is_integer() {
            return Err(Error::ContractViolation(format!(
                "non-integral dimension {acc}"
            )));
        }
        acc.to_integer()
            .try_into()
            .map_err(|_| Error::ContractViolation("dimension overflows u64".into()))
    }
}

fn format_labels(m: &[i64]) -> String {
    let terms: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &m)| m != 0)
        .map(|(i, &m)| {
            let sub = subscript(i + 1);
            if m == 1 {
                format!("λ{sub}")
            } else {
                format!("{m}λ{sub}")
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

pub(crate) fn subscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).expect("decimal digit") as usize])
        .collect()
}

/// Root data of one twisted affine algebra at rank `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub family: Family,
    pub l: usize,
    /// Size of the gl(n) in which the Kac generators live.
    pub n: usize,
    pub l0: ClassicalType,
    pub theta0: Weight,
    /// `simple_roots[0]` is ᾱ₀, `simple_roots[i]` is ᾱ_i.
    pub simple_roots: Vec<Weight>,
    pub rho: Weight,
}

impl FamilySpec {
    pub fn new(family: Family, l: usize) -> Result<Self> {
        if l < family.min_rank() {
            return Err(Error::Validation(format!(
                "{family} requires l >= {}, got l = {l}",
                family.min_rank()
            )));
        }
        let l0 = family.classical_type();
        let e1 = Weight::eps(l, 0);
        let (n, theta0) = match family {
            Family::A2Even => (2 * l + 1, e1.scale(2)),
            Family::A2Odd => (2 * l, &e1 + &Weight::eps(l, 1)),
            Family::D2 => (2 * l + 2, e1),
        };
        let mut simple_roots = vec![-&theta0];
        simple_roots.extend(l0.simple_roots(l));
        Ok(FamilySpec {
            family,
            l,
            n,
            l0,
            theta0,
            simple_roots,
            rho: l0.rho(l),
        })
    }

    pub fn root(&self, i: usize) -> &Weight {
        &self.simple_roots[i]
    }

    pub fn form(&self, i: usize, j: usize) -> Rational {
        self.simple_roots[i].inner(&self.simple_roots[j])
    }

    /// Twisted Cartan matrix entry `a_ij = 2(ᾱ_i, ᾱ_j)/(ᾱ_i, ᾱ_i)`.
    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        let v = int(2) * self.form(i, j) / self.form(i, i);
        assert!(v.is_integer(), "non-integral Cartan entry");
        v.to_integer().try_into().expect("small Cartan entry")
    }

    pub fn casimir(&self, nu: &Weight) -> Result<Rational> {
        if nu.len() != self.l || !self.l0.is_dominant(nu) {
            return Err(Error::Validation(format!(
                "{nu} is not a dominant weight of {:?}{}",
                self.l0, self.l
            )));
        }
        Ok(self.l0.casimir(nu))
    }

    pub fn weyl_dim(&self, nu: &Weight) -> Result<u64> {
        self.l0.weyl_dim(nu)
    }

    /// Label in the family's convention. A2-even uses `λ_j = ε₁ + … + ε_j` for
    /// all `j`, so its `λ_l` is twice the spinor weight.
    pub fn label(&self, nu: &Weight) -> String {
        if self.family != Family::A2Even || nu.doubled().iter().any(|c| c % 2 != 0) {
            return self.l0.label(nu);
        }
        let d = nu.doubled();
        let m: Vec<i64> = (0..d.len())
            .map(|j| (d[j] - d.get(j + 1).copied().unwrap_or(0)) / 2)
            .collect();
        format_labels(&m)
    }

    /// `ε₁ + … + ε_j` (the restriction of the j-th fundamental weight of gl).
    pub fn lambda(&self, j: usize) -> Weight {
        Weight::from_doubled((0..self.l).map(|i| if i < j { 2 } else { 0 }).collect())
    }

    /// `½(ε₁ + … + ε_l)`.
    pub fn spinor_weight(&self) -> Weight {
        Weight::from_doubled(vec![1; self.l])
    }

    /// Highest weight of the seed representation.
    pub fn seed_weight(&self) -> Weight {
        match self.family {
            Family::A2Even | Family::A2Odd => self.lambda(1),
            Family::D2 => self.spinor_weight(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    #[test]
    fn simple_roots_and_theta() {
        let s = FamilySpec::new(Family::A2Even, 2).unwrap();
        assert_eq!(s.root(1), &Weight::from_ints(&[1, -1]));
        assert_eq!(s.root(2), &Weight::from_ints(&[0, 1]));
        assert_eq!(s.root(0), &Weight::from_ints(&[-2, 0]));
        assert_eq!(s.theta0, Weight::from_ints(&[2, 0]));

        let s = FamilySpec::new(Family::A2Odd, 3).unwrap();
        assert_eq!(s.root(0), &Weight::from_ints(&[-1, -1, 0]));
        let s = FamilySpec::new(Family::D2, 2).unwrap();
        assert_eq!(s.root(0), &Weight::from_ints(&[-1, 0]));
        assert_eq!(s.root(2), &Weight::from_ints(&[0, 1]));
    }

    #[test]
    fn rank_bounds() {
        assert!(FamilySpec::new(Family::A2Odd, 2).is_err());
        assert!(FamilySpec::new(Family::D2, 1).is_err());
        assert!(FamilySpec::new(Family::A2Even, 0).is_err());
        assert!(FamilySpec::new(Family::A2Even, 1).is_ok());
    }

    #[test]
    fn cartan_matrices_are_symmetrizable() {
        for fam in Family::ALL {
            for l in fam.min_rank()..=5 {
                let s = FamilySpec::new(fam, l).unwrap();
                for i in 0..=l {
                    for j in 0..=l {
                        // d_i a_ij symmetric with d_i = (α_i, α_i)/2
                        let lhs = s.form(i, i) * int(s.cartan(i, j));
                        let rhs = s.form(j, j) * int(s.cartan(j, i));
                        assert_eq!(lhs, rhs);
                    }
                    assert_eq!(s.cartan(i, i), 2);
                }
            }
        }
    }

    #[test]
    fn casimir_examples() {
        let s = FamilySpec::new(Family::A2Even, 2).unwrap();
        assert_eq!(s.casimir(&Weight::zero(2)).unwrap(), int(0));
        assert_eq!(s.casimir(&Weight::from_ints(&[2, 1])).unwrap(), int(12));
        for l in 1..6 {
            let s = FamilySpec::new(Family::A2Even, l).unwrap();
            assert_eq!(
                s.casimir(&s.lambda(1).scale(2)).unwrap(),
                int(2 * (2 * l as i64 + 1))
            );
        }
        assert!(s.casimir(&Weight::from_ints(&[0, 1])).is_err());
    }

    #[test]
    fn weyl_dimensions() {
        for l in 1..6 {
            assert_eq!(
                ClassicalType::B.weyl_dim(&Weight::eps(l, 0)).unwrap() as usize,
                2 * l + 1
            );
        }
        assert_eq!(
            ClassicalType::B
                .weyl_dim(&Weight::from_doubled(vec![1, 1]))
                .unwrap(),
            4
        );
        assert_eq!(
            ClassicalType::C
                .weyl_dim(&Weight::from_ints(&[1, 1, 0]))
                .unwrap(),
            14
        );
        assert_eq!(
            ClassicalType::B
                .weyl_dim(&Weight::from_ints(&[2, 0]))
                .unwrap(),
            14
        );
        assert_eq!(
            ClassicalType::B
                .weyl_dim(&Weight::from_ints(&[1, 1]))
                .unwrap(),
            10
        );
    }

    #[test]
    fn labels() {
        let b = ClassicalType::B;
        assert_eq!(b.label(&Weight::from_ints(&[2, 0])), "2λ₁");
        assert_eq!(b.label(&Weight::from_ints(&[1, 1])), "2λ₂");
        assert_eq!(b.label(&Weight::from_doubled(vec![3, 1, 1])), "λ₁+λ₃");
        assert_eq!(ClassicalType::C.label(&Weight::from_ints(&[1, 1, 0])), "λ₂");
        assert_eq!(b.label(&Weight::zero(3)), "0");
        assert_eq!(b.casimir(&Weight::from_doubled(vec![1, 1])), rat(5, 2));
    }
}

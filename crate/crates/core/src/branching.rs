//! Closed-form tensor decompositions of L₀-irreducible modules, their grouping
//! into irreducible L-modules, and θ₀-tensor containment by Klimyk's rule.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::{ClassicalType, Family, FamilySpec};
use crate::weight::Weight;

/// A pair of L₀-irreducible highest weights: `λ_k ⊗ λ_r` (A2-even),
/// `kλ₁ ⊗ rλ₁` (A2-odd) or `aλ_l ⊗ bλ_l` (D2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorPair {
    pub family: Family,
    pub l: usize,
    pub first: usize,
    pub second: usize,
}

impl TensorPair {
    pub fn new(family: Family, l: usize, first: usize, second: usize) -> Result<Self> {
        FamilySpec::new(family, l)?;
        if first > second {
            return Err(Error::Validation(format!(
                "parameters must be ordered, got {first} > {second}"
            )));
        }
        match family {
            Family::A2Even if first < 1 || second > l => {
                return Err(Error::Validation(format!(
                    "a2even needs 1 <= k <= r <= l, got k={first} r={second} l={l}"
                )));
            }
            Family::A2Odd if first < 1 => {
                return Err(Error::Validation(format!(
                    "a2odd needs 1 <= k <= r, got k={first}"
                )));
            }
            Family::D2 if second < 1 => {
                return Err(Error::Validation("d2 needs b >= 1".into()));
            }
            _ => {}
        }
        Ok(TensorPair {
            family,
            l,
            first,
            second,
        })
    }

    /// `V(λ) ⊗ V(λ)` with both factors the seed representation.
    pub fn seed_square(family: Family, l: usize) -> Result<Self> {
        Self::new(family, l, 1, 1)
    }

    pub fn spec(&self) -> FamilySpec {
        FamilySpec::new(self.family, self.l).expect("validated at construction")
    }

    pub fn is_seed_square(&self) -> bool {
        self.first == 1 && self.second == 1
    }

    fn factor(&self, p: usize) -> Weight {
        let s = self.spec();
        match self.family {
            Family::A2Even => s.lambda(p),
            Family::A2Odd => s.lambda(1).scale(p as i64),
            Family::D2 => s.spinor_weight().scale(p as i64),
        }
    }

    pub fn lambda(&self) -> Weight {
        self.factor(self.first)
    }

    pub fn mu(&self) -> Weight {
        self.factor(self.second)
    }

    pub fn top(&self) -> Weight {
        &self.lambda() + &self.mu()
    }

    /// Names of the two parameters for this family.
    pub fn param_names(&self) -> (&'static str, &'static str) {
        match self.family {
            Family::D2 => ("a", "b"),
            _ => ("k", "r"),
        }
    }
}

impl fmt::Display for TensorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = self.param_names();
        write!(
            f,
            "{} l={} {p}={} {q}={}",
            self.family, self.l, self.first, self.second
        )
    }
}

/// Identifier of the irreducible L-module containing a component.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LParent(pub Vec<i64>);

impl fmt::Display for LParent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Position of a component in the family's closed-form parametrization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ComponentIndex {
    /// `V₀(λ_c + λ_d)` with `d` from the wrap rule.
    A2Even { a: usize, c: usize },
    /// `V₀((k+r−2a)λ₁ + bλ₂)`.
    A2Odd { a: usize, b: usize },
    /// `V₀(Λ + (b−a)λ_l)`.
    D2 { big_lambda: Vec<i64> },
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchComponent {
    pub weight: Weight,
    pub label: String,
    pub index: ComponentIndex,
    pub parent: LParent,
    pub dim: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchingTable {
    pub pair: TensorPair,
    pub components: Vec<BranchComponent>,
}

impl BranchingTable {
    pub fn weights(&self) -> impl Iterator<Item = &Weight> {
        self.components.iter().map(|c| &c.weight)
    }

    pub fn get(&self, nu: &Weight) -> Option<&BranchComponent> {
        self.components.iter().find(|c| &c.weight == nu)
    }

    pub fn total_dim(&self) -> u64 {
        self.components.iter().map(|c| c.dim).sum()
    }

    /// Components grouped by L-parent.
    pub fn parents(&self) -> BTreeMap<LParent, Vec<Weight>> {
        let mut out: BTreeMap<LParent, Vec<Weight>> = BTreeMap::new();
        for c in &self.components {
            out.entry(c.parent.clone())
                .or_default()
                .push(c.weight.clone());
        }
        out
    }
}

/// `λ_c + λ_d` with gl-style `λ_j = ε₁ + … + ε_j`.
fn lambda_sum(spec: &FamilySpec, c: usize, d: usize) -> Weight {
    &spec.lambda(c) + &spec.lambda(d)
}

/// Wrap rule for A2-even: `d` reflects to `2l+1−x` once it would exceed `l`.
fn a2even_d(k: usize, r: usize, l: usize, a: usize, c: usize) -> usize {
    let x = k + r + c - 2 * a;
    if 2 * a + l >= c + r + k {
        x
    } else {
        2 * l + 1 - x
    }
}

pub fn decompose_tensor_closed_form(pair: &TensorPair) -> Result<BranchingTable> {
    let spec = pair.spec();
    let (k, r, l) = (pair.first, pair.second, pair.l);
    let mut comps = Vec::new();
    match pair.family {
        Family::A2Even => {
            for a in 0..=k {
                for c in 0..=a {
                    let d = a2even_d(k, r, l, a, c);
                    comps.push((
                        lambda_sum(&spec, c.min(d), c.max(d)),
                        ComponentIndex::A2Even { a, c },
                        LParent(vec![a as i64]),
                    ));
                }
            }
        }
        Family::A2Odd => {
            for a in 0..=k {
                for b in 0..=a {
                    let first = (k + r - 2 * a + b) as i64;
                    let mut coords = vec![0; l];
                    coords[0] = first;
                    coords[1] = b as i64;
                    comps.push((
                        Weight::from_ints(&coords),
                        ComponentIndex::A2Odd { a, b },
                        LParent(vec![a as i64]),
                    ));
                }
            }
        }
        Family::D2 => {
            let (a, b) = (k as i64, r as i64);
            for big in ladder(l, a) {
                let doubled: Vec<i64> = big.iter().map(|x| 2 * x + (b - a)).collect();
                let parent = LParent(
                    (0..l)
                        .filter(|i| (i + 1 + l) % 2 == 0)
                        .map(|i| big[i])
                        .collect(),
                );
                comps.push((
                    Weight::from_doubled(doubled),
                    ComponentIndex::D2 { big_lambda: big },
                    parent,
                ));
            }
        }
    }
    let mut components = Vec::with_capacity(comps.len());
    for (weight, index, parent) in comps {
        let dim = spec.weyl_dim(&weight)?;
        components.push(BranchComponent {
            label: spec.label(&weight),
            weight,
            index,
            parent,
            dim,
        });
    }
    components.sort_by(|x, y| y.weight.cmp(&x.weight));
    if components.windows(2).any(|w| w[0].weight == w[1].weight) {
        return Err(Error::ContractViolation(format!(
            "{pair}: decomposition has multiplicities"
        )));
    }
    let table = BranchingTable {
        pair: pair.clone(),
        components,
    };
    let want = spec.weyl_dim(&pair.lambda())? * spec.weyl_dim(&pair.mu())?;
    if table.total_dim() != want {
        return Err(Error::ContractViolation(format!(
            "{pair}: component dimensions sum to {}, expected {want}",
            table.total_dim()
        )));
    }
    Ok(table)
}

/// All `a ≥ Λ₁ ≥ … ≥ Λ_l ≥ 0`, in lexicographically decreasing order.
pub fn ladder(l: usize, a: i64) -> Vec<Vec<i64>> {
    fn go(l: usize, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for x in (0..=cap).rev() {
            cur.push(x);
            go(l, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(l, a, &mut Vec::new(), &mut out);
    out
}

pub fn l_parent_of(table: &BranchingTable, nu: &Weight) -> Result<LParent> {
    table
        .get(nu)
        .map(|c| c.parent.clone())
        .ok_or_else(|| Error::Validation(format!("{nu} does not occur in {}", table.pair)))
}

/// Weights of the L₀-module `V₀(θ₀)` with multiplicity.
pub fn theta0_weights(spec: &FamilySpec) -> Vec<Weight> {
    let l = spec.l;
    let mut vector: Vec<Weight> = (0..l)
        .flat_map(|i| [Weight::eps(l, i), -&Weight::eps(l, i)])
        .collect();
    if spec.l0 == ClassicalType::B {
        vector.push(Weight::zero(l));
    }
    let mut out = Vec::new();
    match spec.family {
        Family::D2 => return vector,
        Family::A2Even => {
            for i in 0..vector.len() {
                for j in i..vector.len() {
                    out.push(&vector[i] + &vector[j]);
                }
            }
        }
        Family::A2Odd => {
            for i in 0..vector.len() {
                for j in i + 1..vector.len() {
                    out.push(&vector[i] + &vector[j]);
                }
            }
        }
    }
    let z = out
        .iter()
        .position(|w| w.is_zero())
        .expect("zero weight present");
    out.remove(z);
    out
}

/// Reflects `x` into the dominant chamber; `None` on a wall, otherwise the
/// dominant image and the sign of the Weyl element.
fn reflect_dominant(x: &Weight) -> Option<(Weight, i64)> {
    let d = x.doubled();
    let mut sign = 1;
    let mut abs = Vec::with_capacity(d.len());
    for &c in d {
        if c == 0 {
            return None;
        }
        if c < 0 {
            sign = -sign;
        }
        abs.push(c.abs());
    }
    for i in 0..abs.len() {
        for j in i + 1..abs.len() {
            if abs[i] == abs[j] {
                return None;
            }
            if abs[i] < abs[j] {
                sign = -sign;
            }
        }
    }
    abs.sort_unstable_by(|a, b| b.cmp(a));
    Some((Weight::from_doubled(abs), sign))
}

/// Multiplicity of `V₀(ν′)` in `V₀(θ₀) ⊗ V₀(ν)` by Klimyk's rule.
pub fn theta_tensor_multiplicity(spec: &FamilySpec, nu: &Weight, nu_prime: &Weight) -> i64 {
    let rho = &spec.rho;
    let target = nu_prime + rho;
    theta0_weights(spec)
        .iter()
        .filter_map(|m| reflect_dominant(&(&(nu + m) + rho)))
        .filter(|(w, _)| w == &target)
        .map(|(_, s)| s)
        .sum()
}

/// `V₀(ν′) ⊆ V₀(θ₀) ⊗ V₀(ν)`.
pub fn contains_in_theta_tensor(spec: &FamilySpec, nu: &Weight, nu_prime: &Weight) -> bool {
    theta_tensor_multiplicity(spec, nu, nu_prime) > 0
}

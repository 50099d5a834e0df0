//! Extended twisted tensor product graphs: parities, eigenvalues by recursion
//! with loop checking, the closed-form eigenvalue products, and export.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::branching::{
    contains_in_theta_tensor, decompose_tensor_closed_form, ComponentIndex, LParent, TensorPair,
};
use crate::error::{Error, Result};
use crate::liealg::Family;
use crate::scalars::{int, rat, rational_string, BracketProduct, QSample, RatFun, Rational};
use crate::weight::Weight;

#[derive(Clone, Debug, Serialize)]
pub struct TpgNode {
    pub weight: Weight,
    pub label: String,
    #[serde(with = "rational_string")]
    pub casimir: Rational,
    pub parity: i8,
    pub parent: LParent,
    pub index: ComponentIndex,
}

/// Extended twisted tensor product graph. Node 0 is the top node `λ + μ`.
#[derive(Clone, Debug, Serialize)]
pub struct TPGraph {
    pub pair: TensorPair,
    pub nodes: Vec<TpgNode>,
    /// Pairs `(i, j)` with `i < j`.
    pub edges: Vec<(usize, usize)>,
}

impl TPGraph {
    pub fn node(&self, nu: &Weight) -> Option<usize> {
        self.nodes.iter().position(|n| &n.weight == nu)
    }

    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == i {
                Some(b)
            } else if b == i {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn has_edge(&self, x: &Weight, y: &Weight) -> bool {
        match (self.node(x), self.node(y)) {
            (Some(i), Some(j)) => self.edges.contains(&(i.min(j), i.max(j))),
            _ => false,
        }
    }

    pub fn parities(&self) -> BTreeMap<Weight, i8> {
        self.nodes
            .iter()
            .map(|n| (n.weight.clone(), n.parity))
            .collect()
    }

    /// Number of independent cycles.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + 1 - self.nodes.len()
    }
}

/// Nodes from the closed-form decomposition, edges from θ₀-tensor containment,
/// parities by 2-colouring the L-parent quotient anchored at the top node.
pub fn build_graph(pair: &TensorPair) -> Result<TPGraph> {
    let spec = pair.spec();
    let table = decompose_tensor_closed_form(pair)?;
    let mut nodes = Vec::with_capacity(table.components.len());
    for c in &table.components {
        nodes.push(TpgNode {
            casimir: spec.casimir(&c.weight)?,
            weight: c.weight.clone(),
            label: c.label.clone(),
            parity: 0,
            parent: c.parent.clone(),
            index: c.index.clone(),
        });
    }
    if nodes.first().map(|n| n.weight.clone()) != Some(pair.top()) {
        return Err(Error::ContractViolation(format!(
            "{pair}: top component missing"
        )));
    }
    let mut edges = Vec::new();
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if contains_in_theta_tensor(&spec, &nodes[i].weight, &nodes[j].weight) {
                edges.push((i, j));
            }
        }
    }
    let mut g = TPGraph {
        pair: pair.clone(),
        nodes,
        edges,
    };
    colour(&mut g)?;
    Ok(g)
}

fn colour(g: &mut TPGraph) -> Result<()> {
    let mut colour: BTreeMap<LParent, i8> = BTreeMap::new();
    colour.insert(g.nodes[0].parent.clone(), 1);
    let mut seen = vec![false; g.nodes.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        let ci = colour[&g.nodes[i].parent];
        let nbrs: Vec<usize> = g.neighbours(i).collect();
        for j in nbrs {
            let want = if g.nodes[j].parent == g.nodes[i].parent {
                ci
            } else {
                -ci
            };
            match colour.get(&g.nodes[j].parent) {
                Some(&c) if c != want => {
                    return Err(Error::ContractViolation(format!(
                        "{}: parity colouring fails on edge {} -- {}",
                        g.pair, g.nodes[i].label, g.nodes[j].label
                    )));
                }
                Some(_) => {}
                None => {
                    colour.insert(g.nodes[j].parent.clone(), want);
                }
            }
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::ContractViolation(format!(
            "{}: graph is not connected at {}",
            g.pair, g.nodes[i].label
        )));
    }
    for n in &mut g.nodes {
        n.parity = colour[&n.parent];
    }
    Ok(())
}

/// Relation on one edge: `ρ_ν = ⟨(C(ν′) − C(ν))/2⟩_{ε_ν ε_ν′} ρ_ν′`.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeCheck {
    pub from: Weight,
    pub to: Weight,
    #[serde(with = "rational_string")]
    pub half_casimir_gap: Rational,
    pub sign: i8,
    pub tree: bool,
    pub consistent: bool,
}

/// `ν → ρ_ν(u)` as exact bracket products.
#[derive(Clone, Debug, Serialize)]
pub struct EigenvalueTable {
    pub pair: TensorPair,
    pub method: String,
    #[serde(serialize_with = "ser_entries")]
    pub entries: BTreeMap<Weight, BracketProduct>,
    /// One line per graph edge, empty for closed forms.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificate: Vec<EdgeCheck>,
}

fn ser_entries<S: serde::Serializer>(
    m: &BTreeMap<Weight, BracketProduct>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m.iter().rev() {
        map.serialize_entry(&k.to_string(), &v.to_string())?;
    }
    map.end()
}

impl EigenvalueTable {
    pub fn get(&self, nu: &Weight) -> Option<&BracketProduct> {
        self.entries.get(nu)
    }

    /// All entries at a numeric sample.
    pub fn eval(&self, w: &QSample, u: &Rational) -> Result<BTreeMap<Weight, Rational>> {
        self.entries
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.eval(w, u)?)))
            .collect()
    }

    /// All entries as rational functions of `u` at fixed `w`.
    pub fn symbolic(&self, w: &QSample) -> Result<BTreeMap<Weight, RatFun>> {
        let u = RatFun::var();
        self.entries
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.eval(w, &u)?)))
            .collect()
    }

    pub fn loops_checked(&self) -> usize {
        self.certificate.iter().filter(|c| !c.tree).count()
    }
}

fn edge_bracket(g: &TPGraph, from: usize, to: usize) -> (Rational, i8) {
    let (a, b) = (&g.nodes[from], &g.nodes[to]);
    let gap = (&a.casimir - &b.casimir) / int(2);
    (gap, a.parity * b.parity)
}

/// Breadth-first recursion from the top node, then every non-tree edge is
/// checked as an identity of bracket products.
pub fn eigenvalues_by_recursion(g: &TPGraph) -> Result<EigenvalueTable> {
    let n = g.nodes.len();
    let mut rho: Vec<Option<BracketProduct>> = vec![None; n];
    rho[0] = Some(BracketProduct::one());
    let mut tree = Vec::new();
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        let nbrs: Vec<usize> = g.neighbours(i).collect();
        for j in nbrs {
            if rho[j].is_none() {
                let (gap, s) = edge_bracket(g, i, j);
                let mut r = rho[i].clone().expect("visited");
                r.mul_bracket(&gap, s, 1);
                rho[j] = Some(r);
                tree.push((i.min(j), i.max(j)));
                queue.push_back(j);
            }
        }
    }
    let mut certificate = Vec::new();
    for &(i, j) in &g.edges {
        let (gap, s) = edge_bracket(g, i, j);
        let (Some(ri), Some(rj)) = (&rho[i], &rho[j]) else {
            return Err(Error::ContractViolation(format!(
                "{}: graph is not connected",
                g.pair
            )));
        };
        let mut expected = ri.clone();
        expected.mul_bracket(&gap, s, 1);
        let consistent = &expected == rj;
        let is_tree = tree.contains(&(i, j));
        if !consistent {
            return Err(Error::LoopInconsistent {
                edge: format!("{} -- {}", g.nodes[i].label, g.nodes[j].label),
                expected: expected.to_string(),
                found: rj.to_string(),
            });
        }
        certificate.push(EdgeCheck {
            from: g.nodes[i].weight.clone(),
            to: g.nodes[j].weight.clone(),
            half_casimir_gap: gap,
            sign: s,
            tree: is_tree,
            consistent,
        });
    }
    let entries = g
        .nodes
        .iter()
        .zip(rho)
        .map(|(nd, r)| (nd.weight.clone(), r.expect("connected")))
        .collect();
    Ok(EigenvalueTable {
        pair: g.pair.clone(),
        method: "recursion".into(),
        entries,
        certificate,
    })
}

/// Whether the closed-form products cover this pair.
pub fn closed_form_supported(pair: &TensorPair) -> bool {
    match pair.family {
        Family::A2Even => pair.first + pair.second <= pair.l,
        Family::A2Odd | Family::D2 => true,
    }
}

/// The closed-form eigenvalue products.
pub fn eigenvalues_closed_form(pair: &TensorPair) -> Result<EigenvalueTable> {
    if !closed_form_supported(pair) {
        return Err(Error::UnsupportedRegime(format!(
            "{pair}: closed form needs k + r <= l; use the recursion"
        )));
    }
    let table = decompose_tensor_closed_form(pair)?;
    let (k, r, l) = (pair.first as i64, pair.second as i64, pair.l as i64);
    let mut entries = BTreeMap::new();
    for comp in &table.components {
        let mut p = BracketProduct::one();
        match &comp.index {
            ComponentIndex::A2Even { a, c } => {
                let (a, c) = (*a as i64, *c as i64);
                let n = 2 * l + 1;
                for i in a..k {
                    p.mul_bracket(&int(k + r - 2 * i), -1, 1);
                }
                for j in 1..=a - c {
                    p.mul_bracket(&int(n - r - k + 2 * j), 1, 1);
                }
            }
            ComponentIndex::A2Odd { a, b } => {
                let (a, b) = (*a as i64, *b as i64);
                let n = 2 * l;
                for i in 1..=a - b {
                    p.mul_bracket(&int(n + k + r - 2 * i), 1, 1);
                }
                for j in 1..=a {
                    p.mul_bracket(&int(k + r + 2 - 2 * j), -1, 1);
                }
            }
            ComponentIndex::D2 { big_lambda } => {
                let (a, b) = (k, r);
                for (idx, &li) in big_lambda.iter().enumerate() {
                    let i = idx as i64 + 1;
                    let sign = if (l + i + 1) % 2 == 0 { 1 } else { -1 };
                    for kk in li..a {
                        p.mul_bracket(&(int(kk - i + l + 1) + rat(b - a, 2)), sign, 1);
                    }
                }
            }
        }
        entries.insert(comp.weight.clone(), p);
    }
    Ok(EigenvalueTable {
        pair: pair.clone(),
        method: "closed-form".into(),
        entries,
        certificate: Vec::new(),
    })
}

fn parity_char(p: i8) -> char {
    if p > 0 {
        '+'
    } else {
        '-'
    }
}

/// DOT rendering with node labels `ν | C | ±`.
pub fn to_dot(g: &TPGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph tpg {{");
    let _ = writeln!(out, "  label=\"{}\";", g.pair);
    for (i, n) in g.nodes.iter().enumerate() {
        let _ = writeln!(
            out,
            "  n{i} [label=\"{} | {} | {}\"];",
            n.label,
            n.casimir,
            parity_char(n.parity)
        );
    }
    for (i, j) in &g.edges {
        let _ = writeln!(out, "  n{i} -- n{j};");
    }
    out.push_str("}\n");
    out
}

pub fn to_json(g: &TPGraph) -> Result<String> {
    Ok(serde_json::to_string_pretty(g)?)
}

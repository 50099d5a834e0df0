//! Verification pipeline and exports behind the command-line interface.
//!
//! Every report is plain JSON with ordered keys and no timestamps, so equal
//! configurations produce byte-identical bundles.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};

use crate::branching::{decompose_tensor_closed_form, BranchingTable, TensorPair};
use crate::character::tensor_decomposition;
use crate::error::{Error, Result};
use crate::jimbo::{
    check_unitarity, check_ybe, parity_spectrum, solve_rmatrix, spectral_compare, RMatrixResult,
};
use crate::liealg::{check_classical_relations, Family};
use crate::qrep::{build_seed_rep, check_quantum_relations, Representation};
use crate::sample::{with_retries, Sampler};
use crate::scalars::{int, QSample, Rational};
use crate::tensor::{classical_parity_signs, decompose, TensorModule};
use crate::tpg::{
    build_graph, closed_form_supported, eigenvalues_by_recursion, eigenvalues_closed_form, to_dot,
    EigenvalueTable, TPGraph,
};

pub const SCHEMA: &str = "twistr-report/1";

/// Character products above this dimension skip the brute-force oracle.
const ORACLE_LIMIT: u64 = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Numeric,
    Symbolic,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub pair: TensorPair,
    pub mode: Mode,
    pub seed: u64,
    pub samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Passed,
    Failed,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub schema: &'static str,
    pub stage: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageSummary {
    pub stage: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub file: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub schema: &'static str,
    pub config: RunConfig,
    pub passed: bool,
    pub stages: Vec<StageSummary>,
}

#[derive(Clone, Debug)]
pub struct Bundle {
    pub summary: Summary,
    pub stages: Vec<StageReport>,
}

impl Bundle {
    pub fn passed(&self) -> bool {
        self.summary.passed
    }

    /// Writes `report.json` and one file per stage; returns the paths written.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        for (s, st) in self.summary.stages.iter().zip(&self.stages) {
            let p = dir.join(&s.file);
            std::fs::write(&p, json_string(st)?)?;
            paths.push(p);
        }
        let p = dir.join("report.json");
        std::fs::write(&p, json_string(&self.summary)?)?;
        paths.push(p);
        Ok(paths)
    }

    /// First failing stage and its note.
    pub fn first_failure(&self) -> Option<(&str, Option<&str>)> {
        self.stages
            .iter()
            .find(|s| s.status == Status::Failed)
            .map(|s| (s.stage.as_str(), s.note.as_deref()))
    }
}

/// Pretty JSON with a trailing newline, as written to report files.
pub fn json_string<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

type StageOutcome = (Status, Option<String>, Value);

fn pass(detail: Value) -> Result<StageOutcome> {
    Ok((Status::Passed, None, detail))
}

fn verdict(ok: bool, note: impl FnOnce() -> String, detail: Value) -> Result<StageOutcome> {
    if ok {
        pass(detail)
    } else {
        Ok((Status::Failed, Some(note()), detail))
    }
}

/// Objects shared between stages.
struct Context {
    cfg: RunConfig,
    rep: Option<Representation>,
    table: Option<BranchingTable>,
    graph: Option<TPGraph>,
    eigen: Option<EigenvalueTable>,
    points: Vec<QSample>,
}

pub fn run_verify(cfg: &RunConfig) -> Bundle {
    let mut sampler = Sampler::new(cfg.seed);
    let points = (0..cfg.samples.max(1)).map(|_| sampler.w()).collect();
    let mut ctx = Context {
        cfg: cfg.clone(),
        rep: None,
        table: None,
        graph: None,
        eigen: None,
        points,
    };
    type StageFn = fn(&mut Context, &mut Sampler) -> Result<StageOutcome>;
    let stages: [(&str, StageFn); 5] = [
        ("relations", stage_relations),
        ("decomposition", stage_decomposition),
        ("graph", stage_graph),
        ("eigenvalues", stage_eigenvalues),
        ("rmatrix", stage_rmatrix),
    ];
    let mut reports = Vec::new();
    let mut summaries = Vec::new();
    for (i, (name, f)) in stages.iter().enumerate() {
        let (status, note, detail) = match f(&mut ctx, &mut sampler) {
            Ok(o) => o,
            Err(e) => (Status::Failed, Some(e.to_string()), Value::Null),
        };
        summaries.push(StageSummary {
            stage: name.to_string(),
            status,
            note: note.clone(),
            file: format!("{:02}-{name}.json", i + 1),
        });
        reports.push(StageReport {
            schema: SCHEMA,
            stage: name.to_string(),
            status,
            note,
            detail,
        });
    }
    let passed = reports.iter().all(|r| r.status != Status::Failed);
    Bundle {
        summary: Summary {
            schema: SCHEMA,
            config: cfg.clone(),
            passed,
            stages: summaries,
        },
        stages: reports,
    }
}

fn stage_relations(ctx: &mut Context, _: &mut Sampler) -> Result<StageOutcome> {
    let spec = ctx.cfg.pair.spec();
    let rep = build_seed_rep(&spec)?;
    let classical = check_classical_relations(&rep.classical(), &spec);
    let additivity = rep.check_weight_additivity();
    let mut quantum = Vec::new();
    let mut ok = classical.all_passed() && additivity.all_passed();
    let mut first_bad = classical
        .failures()
        .chain(additivity.failures())
        .next()
        .map(|c| c.relation.clone());
    for w in &ctx.points {
        let r = check_quantum_relations(&rep, w)?;
        if !r.all_passed() {
            ok = false;
            first_bad.get_or_insert_with(|| {
                format!(
                    "{} at w={}",
                    r.failures().next().expect("failure").relation,
                    w.w()
                )
            });
        }
        quantum.push(json!({
            "w": w.w().to_string(),
            "checks": r.checks.len(),
            "passed": r.all_passed(),
            "failures": r.failures().collect::<Vec<_>>(),
        }));
    }
    let detail = json!({
        "representation": {
            "highest_weight": rep.highest_weight,
            "label": spec.label(&rep.highest_weight),
            "dimension": rep.dim(),
        },
        "classical": {
            "checks": classical.checks.len(),
            "passed": classical.all_passed(),
            "failures": classical.failures().collect::<Vec<_>>(),
        },
        "weight_additivity": additivity.all_passed(),
        "quantum": quantum,
    });
    ctx.rep = Some(rep);
    verdict(ok, || first_bad.unwrap_or_default(), detail)
}

fn stage_decomposition(ctx: &mut Context, _: &mut Sampler) -> Result<StageOutcome> {
    let pair = &ctx.cfg.pair;
    let spec = pair.spec();
    let table = decompose_tensor_closed_form(pair)?;
    let product = spec.weyl_dim(&pair.lambda())? * spec.weyl_dim(&pair.mu())?;
    let mut ok = true;
    let mut note = None;
    let oracle = if product <= ORACLE_LIMIT {
        let o = tensor_decomposition(spec.l0, &pair.lambda(), &pair.mu())?;
        let mine: BTreeMap<_, u64> = table.weights().map(|w| (w.clone(), 1)).collect();
        if o != mine {
            ok = false;
            note = Some("closed-form decomposition disagrees with character oracle".to_string());
        }
        json!(o == mine)
    } else {
        json!("skipped: product too large")
    };
    let mut direct = Value::Null;
    if pair.is_seed_square() {
        let rep = ctx
            .rep
            .as_ref()
            .ok_or_else(|| Error::Validation("no seed representation".into()))?;
        let t = TensorModule::new(rep, rep, &ctx.points[0])?;
        let dec = decompose(&t)?;
        let found: Vec<(String, usize)> = dec
            .components
            .iter()
            .map(|c| (c.weight.to_string(), c.dim()))
            .collect();
        let want: Vec<(String, usize)> = table
            .components
            .iter()
            .map(|c| (c.weight.to_string(), c.dim as usize))
            .collect();
        if found != want {
            ok = false;
            note.get_or_insert_with(|| {
                "explicit decomposition disagrees with closed form".to_string()
            });
        }
        direct = json!({ "w": ctx.points[0].w().to_string(), "agrees": found == want });
    }
    let components: Vec<Value> = table
        .components
        .iter()
        .map(|c| {
            json!({
                "weight": c.weight,
                "label": c.label,
                "dim": c.dim,
                "casimir": spec.casimir(&c.weight).map(|x| x.to_string()).unwrap_or_default(),
                "parent": c.parent.to_string(),
            })
        })
        .collect();
    let detail = json!({
        "pair": pair.to_string(),
        "dimension": product,
        "components": components,
        "character_oracle": oracle,
        "explicit": direct,
    });
    ctx.table = Some(table);
    verdict(ok, || note.unwrap_or_default(), detail)
}

fn stage_graph(ctx: &mut Context, _: &mut Sampler) -> Result<StageOutcome> {
    let g = build_graph(&ctx.cfg.pair)?;
    let rec = eigenvalues_by_recursion(&g)?;
    let mut ok = true;
    let mut classical = Value::Null;
    if ctx.cfg.pair.is_seed_square() {
        let rep = ctx
            .rep
            .as_ref()
            .ok_or_else(|| Error::Validation("no seed representation".into()))?;
        let signs = classical_parity_signs(rep)?;
        ok = signs == g.parities();
        classical = json!(ok);
    }
    let nodes: Vec<Value> = g
        .nodes
        .iter()
        .map(|n| json!({ "label": n.label, "casimir": n.casimir.to_string(), "parity": n.parity, "parent": n.parent.to_string() }))
        .collect();
    let edges: Vec<Value> = g
        .edges
        .iter()
        .map(|&(i, j)| json!([g.nodes[i].label, g.nodes[j].label]))
        .collect();
    let detail = json!({
        "nodes": nodes,
        "edges": edges,
        "cycle_rank": g.cycle_rank(),
        "loops_checked": rec.loops_checked(),
        "parities_match_classical": classical,
        "dot": to_dot(&g),
    });
    ctx.graph = Some(g);
    ctx.eigen = Some(rec);
    verdict(
        ok,
        || "graph parities disagree with the classical flip".into(),
        detail,
    )
}

fn stage_eigenvalues(ctx: &mut Context, sampler: &mut Sampler) -> Result<StageOutcome> {
    let rec = ctx
        .eigen
        .clone()
        .ok_or_else(|| Error::Validation("no graph".into()))?;
    let mut ok = true;
    let mut note = None;
    let closed = if closed_form_supported(&ctx.cfg.pair) {
        let cf = eigenvalues_closed_form(&ctx.cfg.pair)?;
        if cf.entries != rec.entries {
            ok = false;
            note = Some("closed form disagrees with recursion".to_string());
        }
        json!(cf.entries == rec.entries)
    } else {
        json!("unsupported: recursion only")
    };
    let labels: BTreeMap<_, _> = ctx
        .table
        .as_ref()
        .map(|t| {
            t.components
                .iter()
                .map(|c| (c.weight.clone(), c.label.clone()))
                .collect()
        })
        .unwrap_or_default();
    let mut samples = Vec::new();
    for w in &ctx.points {
        let avoid = singular(&rec, w)?;
        let u = sampler.u(&avoid);
        let a = rec.eval(w, &u)?;
        let b = rec.eval(w, &u.recip())?;
        let unitary = a.iter().all(|(k, v)| v * &b[k] == Rational::one());
        if !unitary {
            ok = false;
            note.get_or_insert_with(|| format!("ρ(u)ρ(1/u) ≠ 1 at w={} u={u}", w.w()));
        }
        let values: BTreeMap<String, String> = match ctx.cfg.mode {
            Mode::Numeric => a
                .iter()
                .rev()
                .map(|(k, v)| (labels[k].clone(), v.to_string()))
                .collect(),
            Mode::Symbolic => rec
                .symbolic(w)?
                .iter()
                .rev()
                .map(|(k, v)| (labels[k].clone(), v.to_string()))
                .collect(),
        };
        let mut s = json!({ "w": w.w().to_string(), "unitarity": unitary, "values": values });
        if ctx.cfg.mode == Mode::Numeric {
            s["u"] = json!(u.to_string());
        }
        samples.push(s);
    }
    let formulas: BTreeMap<String, String> = rec
        .entries
        .iter()
        .map(|(k, v)| (labels[k].clone(), v.to_string()))
        .collect();
    let detail = json!({
        "mode": ctx.cfg.mode,
        "recursion": formulas,
        "closed_form_agrees": closed,
        "samples": samples,
    });
    verdict(ok, || note.unwrap_or_default(), detail)
}

fn singular(t: &EigenvalueTable, w: &QSample) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for p in t.entries.values() {
        out.extend(p.singular_points(w)?);
    }
    Ok(out)
}

/// One certificate of the direct solve at a sample point.
#[derive(Clone, Debug, Serialize)]
pub struct SolveCertificate {
    pub w: String,
    pub u: String,
    pub v: String,
    pub unknowns: usize,
    pub null_dim: usize,
    pub unitarity: bool,
    pub spectral: bool,
    pub parity: bool,
    pub ybe: bool,
    pub ybe_max_residual: String,
}

/// Solves at `(w, u)`, `(w, 1/u)`, `(w, 1)`, `(w, 0)` and checks unitarity,
/// spectral agreement, parities and Yang–Baxter at `(u, v)`.
pub fn certify_point(
    rep: &Representation,
    g: &TPGraph,
    eigen: &EigenvalueTable,
    w: &QSample,
    u: &Rational,
    v: &Rational,
) -> Result<SolveCertificate> {
    let spec = &rep.spec;
    let at_u = solve_rmatrix(rep, rep, w, u)?;
    let at_inv = solve_rmatrix(rep, rep, w, &u.recip())?;
    let at_one = solve_rmatrix(rep, rep, w, &int(1))?;
    let at_zero = solve_rmatrix(rep, rep, w, &int(0))?;
    let dec = decompose(&TensorModule::new(rep, rep, w)?)?;
    let spectral = spectral_compare(&at_u, &at_one, &dec, &eigen.entries)?;
    let parity = parity_spectrum(&at_zero, &dec, spec)?;
    let classical = classical_parity_signs(rep)?;
    let ybe = check_ybe(rep, w, u, v)?;
    Ok(SolveCertificate {
        w: w.w().to_string(),
        u: u.to_string(),
        v: v.to_string(),
        unknowns: at_u.unknowns,
        null_dim: at_u.null_dim,
        unitarity: check_unitarity(&at_u, &at_inv),
        spectral: spectral.passed,
        parity: parity == g.parities() && parity == classical,
        ybe: ybe.passed,
        ybe_max_residual: ybe.max_residual.to_string(),
    })
}

impl SolveCertificate {
    pub fn passed(&self) -> bool {
        self.null_dim == 1 && self.unitarity && self.spectral && self.parity && self.ybe
    }
}

/// `certify_point` at sampled `u, v` (and `w` unless given), resampling
/// when a point turns out to be degenerate.
pub fn certify_sample(
    rep: &Representation,
    g: &TPGraph,
    eigen: &EigenvalueTable,
    w: Option<&QSample>,
    sampler: &mut Sampler,
) -> Result<SolveCertificate> {
    let mut fixed = w.cloned();
    with_retries(sampler, |s| {
        let w = fixed.take().unwrap_or_else(|| s.w());
        let avoid = singular(eigen, &w)?;
        let u = s.u(&avoid);
        let v = s.u(&avoid);
        if avoid.contains(&(&u * &v)) {
            return Err(Error::DegenerateParameter(format!(
                "uv = {} is singular",
                &u * &v
            )));
        }
        certify_point(rep, g, eigen, &w, &u, &v)
    })
}

fn stage_rmatrix(ctx: &mut Context, sampler: &mut Sampler) -> Result<StageOutcome> {
    if !ctx.cfg.pair.is_seed_square() {
        return Ok((
            Status::Skipped,
            Some("skipped: non-seed pair".into()),
            json!({ "reason": "the direct solve needs both factors to be the seed representation" }),
        ));
    }
    let rep = ctx
        .rep
        .clone()
        .ok_or_else(|| Error::Validation("no seed representation".into()))?;
    let g = ctx
        .graph
        .clone()
        .ok_or_else(|| Error::Validation("no graph".into()))?;
    let eigen = ctx
        .eigen
        .clone()
        .ok_or_else(|| Error::Validation("no eigenvalues".into()))?;
    let mut certs = Vec::new();
    let points = ctx.points.clone();
    for (i, w0) in points.iter().enumerate() {
        let cert = certify_sample(&rep, &g, &eigen, Some(w0), sampler)?;
        let ok = cert.passed();
        certs.push(cert);
        if !ok {
            let c = &certs[i];
            let note = format!(
                "sample {i} (w={}, u={}, v={}): unitarity={} spectral={} parity={} ybe={}",
                c.w, c.u, c.v, c.unitarity, c.spectral, c.parity, c.ybe
            );
            return Ok((Status::Failed, Some(note), json!({ "certificates": certs })));
        }
    }
    let dim = rep.dim();
    pass(json!({ "dimension": dim * dim, "certificates": certs }))
}

/// Objects available to `export`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportWhat {
    Graph,
    Eigenvalues,
    Rmatrix,
    Rep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
    Text,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Dot => "dot",
            Format::Text => "txt",
        }
    }
}

/// Renders one object; returns the file name and its contents.
pub fn export(cfg: &RunConfig, what: ExportWhat, format: Format) -> Result<(String, String)> {
    let pair = &cfg.pair;
    let stem = format!("{}-l{}-{}-{}", pair.family, pair.l, pair.first, pair.second);
    let usage = |what: &str| {
        Err(Error::Validation(format!(
            "{what} cannot be exported as {format:?}"
        )))
    };
    let body = match what {
        ExportWhat::Graph => {
            let g = build_graph(pair)?;
            match format {
                Format::Dot => to_dot(&g),
                Format::Json => json_string(&g)?,
                Format::Text => graph_text(&g),
            }
        }
        ExportWhat::Eigenvalues => {
            let g = build_graph(pair)?;
            let t = eigenvalues_by_recursion(&g)?;
            let labels: BTreeMap<_, _> = g
                .nodes
                .iter()
                .map(|n| (n.weight.clone(), n.label.clone()))
                .collect();
            let w = Sampler::new(cfg.seed).w();
            match format {
                Format::Json => {
                    let mut rows = Vec::new();
                    let sym = t.symbolic(&w)?;
                    for n in &g.nodes {
                        let mut row = json!({
                            "weight": n.weight,
                            "label": n.label,
                            "formula": t.entries[&n.weight].to_string(),
                        });
                        if cfg.mode == Mode::Symbolic {
                            row["rational_function"] = json!(sym[&n.weight].to_string());
                        }
                        rows.push(row);
                    }
                    json_string(&json!({
                        "schema": SCHEMA,
                        "pair": pair.to_string(),
                        "mode": cfg.mode,
                        "w": w.w().to_string(),
                        "eigenvalues": rows,
                    }))?
                }
                Format::Text => {
                    let mut s = String::new();
                    for n in &g.nodes {
                        let _ = writeln!(s, "{}: {}", labels[&n.weight], t.entries[&n.weight]);
                    }
                    s
                }
                Format::Dot => return usage("eigenvalues"),
            }
        }
        ExportWhat::Rmatrix => {
            if format != Format::Json {
                return usage("rmatrix");
            }
            if !pair.is_seed_square() {
                return Err(Error::Validation(
                    "rmatrix export needs the seed pair (parameters 1 1)".into(),
                ));
            }
            let rep = build_seed_rep(&pair.spec())?;
            let mut s = Sampler::new(cfg.seed);
            let r: RMatrixResult = with_retries(&mut s, |s| {
                let w = s.w();
                let u = s.u(&[]);
                solve_rmatrix(&rep, &rep, &w, &u)
            })?;
            json_string(
                &json!({ "schema": SCHEMA, "pair": pair.to_string(), "rmatrix": r.export() }),
            )?
        }
        ExportWhat::Rep => {
            let rep = build_seed_rep(&pair.spec())?;
            match format {
                Format::Json => json_string(&rep.export())?,
                Format::Text => {
                    let spec = &rep.spec;
                    let mut s = format!("{} dim {}\n", spec.label(&rep.highest_weight), rep.dim());
                    for (i, w) in rep.weights.iter().enumerate() {
                        let _ = writeln!(s, "{i}: {w}");
                    }
                    s
                }
                Format::Dot => return usage("rep"),
            }
        }
    };
    let name = match what {
        ExportWhat::Graph => "graph",
        ExportWhat::Eigenvalues => "eigenvalues",
        ExportWhat::Rmatrix => "rmatrix",
        ExportWhat::Rep => "rep",
    };
    Ok((format!("{name}-{stem}.{}", format.ext()), body))
}

fn graph_text(g: &TPGraph) -> String {
    let mut s = String::new();
    for n in &g.nodes {
        let _ = writeln!(
            s,
            "{} | {} | {}",
            n.label,
            n.casimir,
            if n.parity > 0 { '+' } else { '-' }
        );
    }
    for &(i, j) in &g.edges {
        let _ = writeln!(s, "{} -- {}", g.nodes[i].label, g.nodes[j].label);
    }
    s
}

/// Builds the tensor pair from CLI-style parameters; `None` means 1.
pub fn pair_from_params(
    family: Family,
    l: usize,
    kr: (Option<usize>, Option<usize>),
    ab: (Option<usize>, Option<usize>),
) -> Result<TensorPair> {
    let (p, q) = match family {
        Family::D2 => {
            if kr.0.is_some() || kr.1.is_some() {
                return Err(Error::Validation("d2 takes --a/--b, not --k/--r".into()));
            }
            ab
        }
        _ => {
            if ab.0.is_some() || ab.1.is_some() {
                return Err(Error::Validation(format!(
                    "{family} takes --k/--r, not --a/--b"
                )));
            }
            kr
        }
    };
    TensorPair::new(family, l, p.unwrap_or(1), q.unwrap_or(1))
}

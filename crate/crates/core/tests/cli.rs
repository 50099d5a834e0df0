use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn twistr(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistr"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn verify_seed_square() {
    let dir = tempfile::tempdir().unwrap();
    let args = "verify --family a2even --l 2 --k 1 --r 1 --seed 7 --samples 3";
    let o = twistr(&args.split(' ').collect::<Vec<_>>(), dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let report = read_json(&dir.path().join("report.json"));
    assert_eq!(report["schema"], "twistr-report/1");
    assert_eq!(report["passed"], true);
    let stages: Vec<&str> = report["stages"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["stage"].as_str().unwrap())
        .collect();
    assert_eq!(
        stages,
        [
            "relations",
            "decomposition",
            "graph",
            "eigenvalues",
            "rmatrix"
        ]
    );
    let rm = read_json(&dir.path().join("05-rmatrix.json"));
    let certs = rm["detail"]["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 3);
    assert!(certs
        .iter()
        .all(|c| c["ybe"] == true && c["ybe_max_residual"] == "0"));
}

#[test]
fn verify_non_seed_pair_skips_solve() {
    let dir = tempfile::tempdir().unwrap();
    let o = twistr(
        &[
            "verify", "--family", "d2", "--l", "2", "--a", "1", "--b", "2",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("skipped: non-seed pair"), "{stdout}");
    let report = read_json(&dir.path().join("report.json"));
    assert_eq!(report["stages"][2]["status"], "passed");
    assert_eq!(report["stages"][3]["status"], "passed");
    assert_eq!(report["stages"][4]["status"], "skipped");
}

#[test]
fn invalid_rank_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = twistr(&["verify", "--family", "a2odd", "--l", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("l >= 3"));
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn mismatched_parameters_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = twistr(
        &["verify", "--family", "d2", "--l", "2", "--k", "1"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    let o = twistr(
        &[
            "export",
            "eigenvalues",
            "--family",
            "a2even",
            "--l",
            "2",
            "--format",
            "dot",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn export_rmatrix() {
    let dir = tempfile::tempdir().unwrap();
    let o = twistr(
        &["export", "rmatrix", "--family", "a2even", "--l", "1"],
        dir.path(),
    );
    assert!(o.status.success());
    let v = read_json(&dir.path().join("rmatrix-a2even-l1-1-1.json"));
    assert_eq!(v["rmatrix"]["dimension"], 9);
    let r = v["rmatrix"]["r"].as_array().unwrap();
    assert!(r
        .iter()
        .all(|t| t["row"].as_u64().unwrap() < 9 && t["value"].is_string()));
}

#[test]
fn export_graph_dot_fig1() {
    let dir = tempfile::tempdir().unwrap();
    let o = twistr(
        &[
            "export", "graph", "--family", "a2even", "--l", "6", "--k", "2", "--r", "3",
            "--format", "dot",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let dot = std::fs::read_to_string(dir.path().join("graph-a2even-l6-2-3.dot")).unwrap();
    assert!(dot.starts_with("graph tpg {"));
    assert_eq!(dot.matches("[label=").count(), 6);
    assert!(dot.contains(" -- "));
}

#[test]
fn export_symbolic_eigenvalues() {
    let dir = tempfile::tempdir().unwrap();
    let o = twistr(
        &[
            "export",
            "eigenvalues",
            "--family",
            "a2odd",
            "--l",
            "3",
            "--mode",
            "symbolic",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let v = read_json(&dir.path().join("eigenvalues-a2odd-l3-1-1.json"));
    let rows = v["eigenvalues"].as_array().unwrap();
    let formulas: Vec<&str> = rows
        .iter()
        .map(|r| r["formula"].as_str().unwrap())
        .collect();
    assert_eq!(formulas, ["1", "⟨2⟩₋", "⟨2⟩₋·⟨6⟩₊"]);
    assert!(rows
        .iter()
        .all(|r| r["rational_function"].as_str().unwrap().contains('/')));
    assert!(rows[2]["rational_function"]
        .as_str()
        .unwrap()
        .contains("u^2"));
}

#[test]
fn export_text_and_rep() {
    let dir = tempfile::tempdir().unwrap();
    let o = twistr(
        &[
            "export", "graph", "--family", "a2even", "--l", "1", "--format", "text",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let txt = std::fs::read_to_string(dir.path().join("graph-a2even-l1-1-1.txt")).unwrap();
    assert!(txt.contains("λ₁ | 2 | -"));
    let o = twistr(&["export", "rep", "--family", "d2", "--l", "2"], dir.path());
    assert!(o.status.success());
    assert!(dir.path().join("rep-d2-l2-1-1.json").exists());
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_twistr"))
        .args(["export", "graph", "--family", "d2", "--l", "2"])
        .env("TWISTR_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("graph-d2-l2-1-1.json").exists());
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = [
        "verify",
        "--family",
        "d2",
        "--l",
        "2",
        "--seed",
        "11",
        "--samples",
        "2",
    ];
    assert!(twistr(&args, a.path()).status.success());
    assert!(twistr(&args, b.path()).status.success());
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 6);
    for n in names {
        assert_eq!(
            std::fs::read(a.path().join(&n)).unwrap(),
            std::fs::read(b.path().join(&n)).unwrap(),
            "{n:?}"
        );
    }
}

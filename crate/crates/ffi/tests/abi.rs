use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use twistr_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    twistr_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = twistr_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_owned()
}

#[test]
fn graph_roundtrip() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(
            twistr_graph_new(TWISTR_FAMILY_A2EVEN, 2, 1, 1, &mut g),
            TWISTR_OK
        );
        assert!(twistr_last_error().is_null());
        let mut n = 0;
        assert_eq!(twistr_graph_node_count(g, &mut n), TWISTR_OK);
        assert_eq!(n, 3);
        let mut labels = Vec::new();
        let mut parities = Vec::new();
        let mut eigen = Vec::new();
        for i in 0..n {
            let mut s = ptr::null_mut();
            assert_eq!(twistr_graph_node_label(g, i, &mut s), TWISTR_OK);
            labels.push(take(s));
            let mut p = 0i8;
            assert_eq!(twistr_graph_node_parity(g, i, &mut p), TWISTR_OK);
            parities.push(p);
            assert_eq!(twistr_graph_eigenvalue(g, i, &mut s), TWISTR_OK);
            eigen.push(take(s));
        }
        assert_eq!(labels, ["2λ₁", "λ₂", "0"]);
        assert_eq!(parities, [1, -1, 1]);
        assert_eq!(eigen, ["1", "⟨2⟩₋", "⟨5⟩₊"]);

        let mut e = 0;
        assert_eq!(twistr_graph_edge_count(g, &mut e), TWISTR_OK);
        let (mut a, mut b) = (0, 0);
        assert_eq!(twistr_graph_edge(g, 0, &mut a, &mut b), TWISTR_OK);
        assert!(a < b && b < n);

        let w = CString::new("2/3").unwrap();
        let u = CString::new("1").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(
            twistr_graph_eigenvalue_at(g, 2, w.as_ptr(), u.as_ptr(), &mut s),
            TWISTR_OK
        );
        assert_eq!(take(s), "1");

        assert_eq!(twistr_graph_to_dot(g, &mut s), TWISTR_OK);
        assert!(take(s).starts_with("graph tpg {"));
        twistr_graph_free(g);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(
            twistr_graph_new(TWISTR_FAMILY_A2ODD, 2, 1, 1, &mut g),
            TWISTR_ERR_INVALID_ARGUMENT
        );
        assert!(g.is_null());
        assert!(last_error().contains("l >= 3"));
        assert_eq!(
            twistr_graph_new(9, 2, 1, 1, &mut g),
            TWISTR_ERR_INVALID_ARGUMENT
        );
        assert_eq!(
            twistr_graph_new(TWISTR_FAMILY_D2, 2, 1, 1, ptr::null_mut()),
            TWISTR_ERR_NULL_POINTER
        );
        let mut n = 0;
        assert_eq!(
            twistr_graph_node_count(ptr::null(), &mut n),
            TWISTR_ERR_NULL_POINTER
        );

        assert_eq!(
            twistr_graph_new(TWISTR_FAMILY_D2, 2, 1, 1, &mut g),
            TWISTR_OK
        );
        let mut p = 0i8;
        assert_eq!(
            twistr_graph_node_parity(g, 99, &mut p),
            TWISTR_ERR_OUT_OF_RANGE
        );
        let w = CString::new("1").unwrap();
        let u = CString::new("2").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(
            twistr_graph_eigenvalue_at(g, 1, w.as_ptr(), u.as_ptr(), &mut s),
            TWISTR_ERR_DEGENERATE
        );
        let bad = CString::new("x/y").unwrap();
        assert_eq!(
            twistr_graph_eigenvalue_at(g, 1, bad.as_ptr(), u.as_ptr(), &mut s),
            TWISTR_ERR_INVALID_ARGUMENT
        );
        twistr_graph_free(g);
        twistr_graph_free(ptr::null_mut());
        twistr_string_free(ptr::null_mut());
    }
}

#[test]
fn rmatrix_solve() {
    unsafe {
        let w = CString::new("3/2").unwrap();
        let u = CString::new("2/5").unwrap();
        let mut m = ptr::null_mut();
        assert_eq!(
            twistr_rmatrix_solve(TWISTR_FAMILY_A2EVEN, 1, w.as_ptr(), u.as_ptr(), &mut m),
            TWISTR_OK
        );
        let mut d = 0;
        assert_eq!(twistr_rmatrix_dimension(m, &mut d), TWISTR_OK);
        assert_eq!(d, 9);
        let mut nnz = 0;
        assert_eq!(twistr_rmatrix_nnz(m, &mut nnz), TWISTR_OK);
        assert!((9..81).contains(&nnz));
        let mut s = ptr::null_mut();
        assert_eq!(twistr_rmatrix_entry(m, 0, 0, &mut s), TWISTR_OK);
        assert_eq!(take(s), "1");
        assert_eq!(
            twistr_rmatrix_entry(m, 9, 0, &mut s),
            TWISTR_ERR_OUT_OF_RANGE
        );
        assert_eq!(twistr_rmatrix_to_json(m, &mut s), TWISTR_OK);
        let json = take(s);
        assert!(json.contains("\"dimension\": 9"));
        twistr_rmatrix_free(m);
    }
}

#[test]
fn verify_summary() {
    unsafe {
        let mut passed = 0;
        let mut s = ptr::null_mut();
        assert_eq!(
            twistr_verify(TWISTR_FAMILY_A2EVEN, 1, 1, 1, 7, 1, &mut passed, &mut s),
            TWISTR_OK
        );
        assert_eq!(passed, 1);
        assert!(take(s).contains("twistr-report/1"));
        assert!(!CStr::from_ptr(twistr_version())
            .to_str()
            .unwrap()
            .is_empty());
    }
}

#[test]
fn header_declares_api_and_compiles() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/twistr.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in [
        "twistr_graph_new",
        "twistr_graph_free",
        "twistr_rmatrix_solve",
        "twistr_rmatrix_free",
        "twistr_last_error",
        "twistr_string_free",
        "twistr_verify",
        "typedef struct TwistrGraph TwistrGraph;",
    ] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let status = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
        .expect("a C compiler is required");
    assert!(status.success());
}

//! C ABI over the twistr library.
//!
//! Every fallible call returns a status code and writes its result through an
//! out-pointer. On failure a message is kept per thread and can be fetched
//! with `twistr_last_error`. Strings returned to the caller are owned by the
//! caller and must be released with `twistr_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use twistr::branching::TensorPair;
use twistr::jimbo::{solve_rmatrix, RMatrixResult};
use twistr::liealg::Family;
use twistr::linalg::to_triplets;
use twistr::qrep::build_seed_rep;
use twistr::report::{run_verify, Mode, RunConfig};
use twistr::scalars::{parse_rational, QSample};
use twistr::tpg::{build_graph, eigenvalues_by_recursion, to_dot, EigenvalueTable, TPGraph};
use twistr::Error;

pub const TWISTR_OK: i32 = 0;
pub const TWISTR_ERR_NULL_POINTER: i32 = 1;
pub const TWISTR_ERR_INVALID_ARGUMENT: i32 = 2;
pub const TWISTR_ERR_UNSUPPORTED: i32 = 3;
pub const TWISTR_ERR_DEGENERATE: i32 = 4;
pub const TWISTR_ERR_CONTRACT: i32 = 5;
pub const TWISTR_ERR_IO: i32 = 6;
pub const TWISTR_ERR_OUT_OF_RANGE: i32 = 7;
pub const TWISTR_ERR_PANIC: i32 = 8;

pub const TWISTR_FAMILY_A2EVEN: i32 = 0;
pub const TWISTR_FAMILY_A2ODD: i32 = 1;
pub const TWISTR_FAMILY_D2: i32 = 2;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::Validation(_) | Error::Parse(_) | Error::NotQuarterIntegral(_) => {
            TWISTR_ERR_INVALID_ARGUMENT
        }
        Error::UnsupportedRegime(_) => TWISTR_ERR_UNSUPPORTED,
        Error::DegenerateParameter(_)
        | Error::Pole { .. }
        | Error::NonGeneric { .. }
        | Error::SamplingExhausted { .. } => TWISTR_ERR_DEGENERATE,
        Error::ContractViolation(_)
        | Error::RelationFailure { .. }
        | Error::LoopInconsistent { .. }
        | Error::InconsistentSystem => TWISTR_ERR_CONTRACT,
        Error::Io(_) | Error::Json(_) => TWISTR_ERR_IO,
    }
}

/// Failure inside the wrapper: status code plus message.
struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(code_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(TWISTR_ERR_NULL_POINTER, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TWISTR_OK
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            TWISTR_ERR_PANIC
        }
    }
}

fn family(code: i32) -> Result<Family, Fail> {
    match code {
        TWISTR_FAMILY_A2EVEN => Ok(Family::A2Even),
        TWISTR_FAMILY_A2ODD => Ok(Family::A2Odd),
        TWISTR_FAMILY_D2 => Ok(Family::D2),
        _ => Err(Fail(
            TWISTR_ERR_INVALID_ARGUMENT,
            format!("unknown family code {code}"),
        )),
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(TWISTR_ERR_INVALID_ARGUMENT, format!("{what} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| Fail(TWISTR_ERR_CONTRACT, "interior nul".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = v;
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

fn index(i: usize, len: usize) -> Result<usize, Fail> {
    if i < len {
        Ok(i)
    } else {
        Err(Fail(
            TWISTR_ERR_OUT_OF_RANGE,
            format!("index {i} out of range 0..{len}"),
        ))
    }
}

/// Opaque tensor product graph with its eigenvalue table.
pub struct TwistrGraph {
    graph: TPGraph,
    eigen: EigenvalueTable,
}

/// Opaque solved R-matrix at one sample point.
pub struct TwistrRMatrix {
    result: RMatrixResult,
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn twistr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. The string is
/// owned by the library and valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn twistr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn twistr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the tensor product graph of the pair `(p, q)`: `(k, r)` for the
/// A-families and `(a, b)` for D2.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn twistr_graph_new(
    family_code: i32,
    l: usize,
    p: usize,
    q: usize,
    out: *mut *mut TwistrGraph,
) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let pair = TensorPair::new(family(family_code)?, l, p, q)?;
        let graph = build_graph(&pair)?;
        let eigen = eigenvalues_by_recursion(&graph)?;
        *out = Box::into_raw(Box::new(TwistrGraph { graph, eigen }));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a graph from `twistr_graph_new`, freed once.
#[no_mangle]
pub unsafe extern "C" fn twistr_graph_free(g: *mut TwistrGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twistr_graph_node_count(g: *const TwistrGraph, out: *mut usize) -> i32 {
    guard(|| write(out, borrow(g, "graph")?.graph.nodes.len()))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twistr_graph_edge_count(g: *const TwistrGraph, out: *mut usize) -> i32 {
    guard(|| write(out, borrow(g, "graph")?.graph.edges.len()))
}

/// Endpoints of edge `i`; node 0 is the top component.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twistr_graph_edge(
    g: *const TwistrGraph,
    i: usize,
    from: *mut usize,
    to: *mut usize,
) -> i32 {
    guard(|| {
        let g = &borrow(g, "graph")?.graph;
        let (a, b) = g.edges[index(i, g.edges.len())?];
        write(from, a)?;
        write(to, b)
    })
}

/// Highest-weight label of node `i`, e.g. `"λ₁+λ₂"`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twistr_graph_node_label(
    g: *const TwistrGraph,
    i: usize,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let g = &borrow(g, "graph")?.graph;
        write_string(out, g.nodes[index(i, g.nodes.len())?].label.clone())
    })
}

/// Parity of node `i`, `+1` or `-1`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twistr_graph_node_parity(
    g: *const TwistrGraph,
    i: usize,
    out: *mut i8,
) -> i32 {
    guard(|| {
        let g = &borrow(g, "graph")?.graph;
        write(out, g.nodes[index(i, g.nodes.len())?].parity)
    })
}

/// Eigenvalue of node `i` as a bracket product, e.g. `"⟨2⟩₋·⟨5⟩₊"`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twistr_graph_eigenvalue(
    g: *const TwistrGraph,
    i: usize,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let h = borrow(g, "graph")?;
        let n = &h.graph.nodes[index(i, h.graph.nodes.len())?];
        write_string(out, h.eigen.entries[&n.weight].to_string())
    })
}

/// Eigenvalue of node `i` at rational `w` (with `q = w^4`) and `u`.
///
/// # Safety
/// Pointers must be valid; `w` and `u` are nul-terminated rationals like `"2/3"`.
#[no_mangle]
pub unsafe extern "C" fn twistr_graph_eigenvalue_at(
    g: *const TwistrGraph,
    i: usize,
    w: *const c_char,
    u: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let h = borrow(g, "graph")?;
        let n = &h.graph.nodes[index(i, h.graph.nodes.len())?];
        let w = QSample::new(parse_rational(read_str(w, "w")?)?)?;
        let u = parse_rational(read_str(u, "u")?)?;
        let v = h.eigen.entries[&n.weight].eval(&w, &u)?;
        write_string(out, v.to_string())
    })
}

/// Graphviz rendering of the graph.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twistr_graph_to_dot(g: *const TwistrGraph, out: *mut *mut c_char) -> i32 {
    guard(|| write_string(out, to_dot(&borrow(g, "graph")?.graph)))
}

/// Solves the Jimbo equations for the seed representation of the family at
/// rational `w` and `u`.
///
/// # Safety
/// Pointers must be valid; `w` and `u` are nul-terminated rationals.
#[no_mangle]
pub unsafe extern "C" fn twistr_rmatrix_solve(
    family_code: i32,
    l: usize,
    w: *const c_char,
    u: *const c_char,
    out: *mut *mut TwistrRMatrix,
) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = TensorPair::new(family(family_code)?, l, 1, 1)?.spec();
        let w = QSample::new(parse_rational(read_str(w, "w")?)?)?;
        let u = parse_rational(read_str(u, "u")?)?;
        let rep = build_seed_rep(&spec)?;
        let result = solve_rmatrix(&rep, &rep, &w, &u)?;
        *out = Box::into_raw(Box::new(TwistrRMatrix { result }));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a matrix from `twistr_rmatrix_solve`, freed once.
#[no_mangle]
pub unsafe extern "C" fn twistr_rmatrix_free(m: *mut TwistrRMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Side length of the square matrix.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twistr_rmatrix_dimension(m: *const TwistrRMatrix, out: *mut usize) -> i32 {
    guard(|| write(out, borrow(m, "rmatrix")?.result.dim()))
}

/// Entry `(row, col)` of `R(u)` as an exact rational string.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twistr_rmatrix_entry(
    m: *const TwistrRMatrix,
    row: usize,
    col: usize,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let r = &borrow(m, "rmatrix")?.result;
        let n = r.dim();
        let v = r.r.get(index(row, n)?, index(col, n)?);
        write_string(out, v.to_string())
    })
}

/// Number of nonzero entries of `R(u)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twistr_rmatrix_nnz(m: *const TwistrRMatrix, out: *mut usize) -> i32 {
    guard(|| write(out, to_triplets(&borrow(m, "rmatrix")?.result.r).len()))
}

/// JSON export of the solve, sparse triplets with string scalars.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twistr_rmatrix_to_json(
    m: *const TwistrRMatrix,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let e = borrow(m, "rmatrix")?.result.export();
        let s = twistr::report::json_string(&e)?;
        write_string(out, s)
    })
}

/// Runs the full verification pipeline and returns the summary report.
/// `passed` is set to 1 when no stage failed.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twistr_verify(
    family_code: i32,
    l: usize,
    p: usize,
    q: usize,
    seed: u64,
    samples: usize,
    passed: *mut i32,
    report: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let cfg = RunConfig {
            pair: TensorPair::new(family(family_code)?, l, p, q)?,
            mode: Mode::Numeric,
            seed,
            samples: samples.max(1),
        };
        let bundle = run_verify(&cfg);
        write(passed, bundle.passed() as i32)?;
        write_string(report, twistr::report::json_string(&bundle.summary)?)
    })
}

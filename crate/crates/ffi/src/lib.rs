//! C interface to `morsematch`.
//!
//! Complexes and results are opaque heap handles released with their
//! `*_free` function. Fallible calls return an [`MmStatus`]; on failure
//! [`mm_last_error_message`] describes the error for the calling thread.
//! Strings returned by the library are released with [`mm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use morsematch::error::SolverError;
use morsematch::homology::{betti_numbers, FieldSpec};
use morsematch::solver::{self, BranchingRule, SolveResult, SolveStatus, SolverConfig};
use morsematch::{io, HasseDiagram, SimplicialComplex};

/// Error codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Field = 4,
    Disconnected = 5,
    Solver = 6,
    BufferTooSmall = 7,
    InvalidArgument = 8,
    Panic = 9,
}

/// Outcome of a solve.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MmSolveStatus {
    Optimal = 0,
    Feasible = 1,
    TimeLimit = 2,
    NodeLimit = 3,
}

/// Solver settings; obtain defaults from [`mm_solve_options_default`].
/// Zero limits mean "no limit".
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct MmSolveOptions {
    pub time_limit_seconds: f64,
    pub node_limit: u64,
    pub separation_rounds: u32,
    pub heuristic_frequency: u32,
    pub max_cuts: u32,
    /// 0: most fractional, 1: pseudocost.
    pub branching: u32,
    pub gomory: bool,
    pub separate: bool,
    pub free_face_cuts: bool,
    pub split_components: bool,
}

pub struct MmComplex {
    complex: SimplicialComplex,
}

pub struct MmResult {
    complex: SimplicialComplex,
    config: SolverConfig,
    result: SolveResult,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("no interior nul"));
}

fn fail(status: MmStatus, message: impl Into<String>) -> MmStatus {
    set_error(message);
    status
}

fn guarded(body: impl FnOnce() -> MmStatus) -> MmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(MmStatus::Panic, "internal panic"),
    }
}

unsafe fn text_arg<'a>(text: *const c_char) -> Result<&'a str, MmStatus> {
    if text.is_null() {
        return Err(fail(MmStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(text).to_str().map_err(|_| fail(MmStatus::InvalidUtf8, "string is not UTF-8"))
}

/// Copies `values` into `out[..len]` and stores the full count in `written`.
unsafe fn copy_out(values: &[usize], out: *mut usize, len: usize, written: *mut usize) -> MmStatus {
    if !written.is_null() {
        *written = values.len();
    }
    if values.len() > len {
        return fail(MmStatus::BufferTooSmall, format!("need room for {} values", values.len()));
    }
    if !values.is_empty() {
        if out.is_null() {
            return fail(MmStatus::NullPointer, "null output buffer");
        }
        ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    }
    MmStatus::Ok
}

/// Message of the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses the facet-list text format.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mm_complex_from_text(text: *const c_char, out: *mut *mut MmComplex) -> MmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(MmStatus::NullPointer, "null output handle");
        }
        let text = match text_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match SimplicialComplex::parse(text) {
            Ok(complex) => {
                *out = Box::into_raw(Box::new(MmComplex { complex }));
                MmStatus::Ok
            }
            Err(e) => fail(MmStatus::Parse, e.to_string()),
        }
    })
}

/// Builds a complex from `count` facets stored back to back in `vertices`,
/// facet `k` having `lengths[k]` vertices.
///
/// # Safety
/// `vertices` must hold `sum(lengths)` entries, `lengths` must hold `count`
/// entries, and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mm_complex_from_facets(
    vertices: *const u32,
    lengths: *const usize,
    count: usize,
    out: *mut *mut MmComplex,
) -> MmStatus {
    guarded(|| {
        if out.is_null() || lengths.is_null() || (vertices.is_null() && count > 0) {
            return fail(MmStatus::NullPointer, "null argument");
        }
        let lengths = std::slice::from_raw_parts(lengths, count);
        let total: usize = lengths.iter().sum();
        let flat = if total == 0 { &[][..] } else { std::slice::from_raw_parts(vertices, total) };
        let mut facets = Vec::with_capacity(count);
        let mut start = 0;
        for &len in lengths {
            facets.push(flat[start..start + len].to_vec());
            start += len;
        }
        match SimplicialComplex::from_facets(&facets) {
            Ok(complex) => {
                *out = Box::into_raw(Box::new(MmComplex { complex }));
                MmStatus::Ok
            }
            Err(e) => fail(MmStatus::Parse, e.to_string()),
        }
    })
}

/// # Safety
/// `complex` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mm_complex_free(complex: *mut MmComplex) {
    if !complex.is_null() {
        drop(Box::from_raw(complex));
    }
}

/// Number of faces; 0 for a null handle.
///
/// # Safety
/// `complex` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mm_complex_num_faces(complex: *const MmComplex) -> usize {
    complex.as_ref().map_or(0, |c| c.complex.num_faces())
}

/// Number of Hasse diagram arcs; 0 for a null handle.
///
/// # Safety
/// `complex` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mm_complex_num_arcs(complex: *const MmComplex) -> usize {
    complex.as_ref().map_or(0, |c| HasseDiagram::new(&c.complex).num_arcs())
}

/// Dimension; 0 for a null handle.
///
/// # Safety
/// `complex` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mm_complex_dim(complex: *const MmComplex) -> usize {
    complex.as_ref().map_or(0, |c| c.complex.dim())
}

/// Face counts `f_0..f_d`.
///
/// # Safety
/// `out` must have room for `len` values; `written` may be null.
#[no_mangle]
pub unsafe extern "C" fn mm_complex_f_vector(
    complex: *const MmComplex,
    out: *mut usize,
    len: usize,
    written: *mut usize,
) -> MmStatus {
    guarded(|| match complex.as_ref() {
        Some(c) => copy_out(&c.complex.f_vector(), out, len, written),
        None => fail(MmStatus::NullPointer, "null complex"),
    })
}

/// Betti numbers over `field` ("q", "gf2", "gf3", ...).
///
/// # Safety
/// `field` must be a nul-terminated string, `out` must have room for `len`
/// values; `written` may be null.
#[no_mangle]
pub unsafe extern "C" fn mm_betti(
    complex: *const MmComplex,
    field: *const c_char,
    out: *mut usize,
    len: usize,
    written: *mut usize,
) -> MmStatus {
    guarded(|| {
        let Some(c) = complex.as_ref() else {
            return fail(MmStatus::NullPointer, "null complex");
        };
        let field = match text_arg(field) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match field.parse::<FieldSpec>() {
            Ok(f) => copy_out(&betti_numbers(&c.complex, f).betti, out, len, written),
            Err(e) => fail(MmStatus::Field, e.to_string()),
        }
    })
}

#[no_mangle]
pub extern "C" fn mm_solve_options_default() -> MmSolveOptions {
    let d = SolverConfig::default();
    MmSolveOptions {
        time_limit_seconds: 0.0,
        node_limit: 0,
        separation_rounds: d.separation_rounds as u32,
        heuristic_frequency: d.heuristic_frequency as u32,
        max_cuts: d.max_cuts as u32,
        branching: 0,
        gomory: d.gomory,
        separate: d.separate,
        free_face_cuts: d.free_face_cuts,
        split_components: d.split_components,
    }
}

fn config_from(options: &MmSolveOptions) -> Result<SolverConfig, String> {
    let branching = match options.branching {
        0 => BranchingRule::MostFractional,
        1 => BranchingRule::Pseudocost,
        other => return Err(format!("unknown branching rule {other}")),
    };
    let t = options.time_limit_seconds;
    if t.is_nan() || t < 0.0 || t.is_infinite() {
        return Err("time limit must be a finite non-negative number".into());
    }
    Ok(SolverConfig {
        separation_rounds: options.separation_rounds as usize,
        heuristic_frequency: options.heuristic_frequency as usize,
        max_cuts: options.max_cuts as usize,
        branching,
        gomory: options.gomory,
        separate: options.separate,
        free_face_cuts: options.free_face_cuts,
        time_limit: (t > 0.0).then(|| Duration::from_secs_f64(t)),
        node_limit: (options.node_limit > 0).then_some(options.node_limit as usize),
        split_components: options.split_components,
        ..SolverConfig::default()
    })
}

/// Solves for a maximum Morse matching. `options` may be null for defaults.
///
/// # Safety
/// `complex` must be a live handle, `options` null or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mm_solve(
    complex: *const MmComplex,
    options: *const MmSolveOptions,
    out: *mut *mut MmResult,
) -> MmStatus {
    guarded(|| {
        let Some(c) = complex.as_ref() else {
            return fail(MmStatus::NullPointer, "null complex");
        };
        if out.is_null() {
            return fail(MmStatus::NullPointer, "null output handle");
        }
        let options = options.as_ref().copied().unwrap_or_else(|| mm_solve_options_default());
        let config = match config_from(&options) {
            Ok(cfg) => cfg,
            Err(e) => return fail(MmStatus::InvalidArgument, e),
        };
        match solver::solve(&c.complex, &config) {
            Ok(result) => {
                *out = Box::into_raw(Box::new(MmResult { complex: c.complex.clone(), config, result }));
                MmStatus::Ok
            }
            Err(e @ SolverError::Disconnected { .. }) => fail(MmStatus::Disconnected, e.to_string()),
            Err(e @ SolverError::Config(_)) => fail(MmStatus::InvalidArgument, e.to_string()),
            Err(e @ SolverError::Field(_)) => fail(MmStatus::Field, e.to_string()),
            Err(e) => fail(MmStatus::Solver, e.to_string()),
        }
    })
}

/// # Safety
/// `result` must come from [`mm_solve`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mm_result_free(result: *mut MmResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mm_result_status(result: *const MmResult) -> MmSolveStatus {
    match result.as_ref().map(|r| r.result.status) {
        Some(SolveStatus::Optimal) => MmSolveStatus::Optimal,
        Some(SolveStatus::Feasible { .. }) | None => MmSolveStatus::Feasible,
        Some(SolveStatus::TimeLimit) => MmSolveStatus::TimeLimit,
        Some(SolveStatus::NodeLimit) => MmSolveStatus::NodeLimit,
    }
}

/// Total number of critical faces `c`.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mm_result_critical(result: *const MmResult) -> usize {
    result.as_ref().map_or(0, |r| r.result.report.total)
}

/// Critical faces per dimension.
///
/// # Safety
/// `out` must have room for `len` values; `written` may be null.
#[no_mangle]
pub unsafe extern "C" fn mm_result_critical_counts(
    result: *const MmResult,
    out: *mut usize,
    len: usize,
    written: *mut usize,
) -> MmStatus {
    guarded(|| match result.as_ref() {
        Some(r) => copy_out(&r.result.report.counts, out, len, written),
        None => fail(MmStatus::NullPointer, "null result"),
    })
}

/// Number of matched pairs.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mm_result_matching_size(result: *const MmResult) -> usize {
    result.as_ref().map_or(0, |r| r.result.matching.len())
}

/// Branch-and-bound nodes processed.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mm_result_nodes(result: *const MmResult) -> usize {
    result.as_ref().map_or(0, |r| r.result.stats.nodes)
}

/// Upper bound on the matching size; NaN for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mm_result_dual_bound(result: *const MmResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.result.dual_bound)
}

/// The result as a JSON document; release with [`mm_string_free`]. Null on
/// failure.
///
/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mm_result_to_json(result: *const MmResult) -> *mut c_char {
    let Some(r) = result.as_ref() else {
        set_error("null result");
        return ptr::null_mut();
    };
    match catch_unwind(AssertUnwindSafe(|| io::result_json(&r.complex, &r.result, &r.config).to_string())) {
        Ok(text) => CString::new(text).map_or(ptr::null_mut(), CString::into_raw),
        Err(_) => {
            set_error("internal panic");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

//! C interface to `nnorth`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_parse`
//! or solver calls and released with the matching `*_free`. Fallible calls
//! return an [`NnorthStatus`]; on failure the message is available from
//! [`nnorth_last_error_message`] on the same thread. Matrices are exchanged
//! as row-major `double` arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use nnorth::bench::{apply_overrides, parse_qaplib, parse_qaplib_str, read_dense_matrix};
use nnorth::penalty::vartheta;
use nnorth::problems::{random_stiefel_start, ProjectionProblem, QapInstance};
use nnorth::solvers::{round_to_feasible, AlmConfig, SolveReport, SolveStatus, SolverKind};
use nnorth::stiefel::{dist_to_stiefel, Mat, StiefelPoint};
use nnorth::{Error, Objective};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NnorthStatus {
    Ok = 0,
    NullPointer = 1,
    Dimension = 2,
    Parameter = 3,
    NotOrthonormal = 4,
    Retraction = 5,
    LineSearch = 6,
    Rounding = 7,
    Precondition = 8,
    OracleSize = 9,
    Parse = 10,
    UndefinedGap = 11,
    Input = 12,
    Io = 13,
    Utf8 = 14,
    Panic = 15,
}

impl From<&Error> for NnorthStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Dimension { .. } => Self::Dimension,
            Error::Parameter(_) => Self::Parameter,
            Error::NotOrthonormal(_) => Self::NotOrthonormal,
            Error::RetractionFailure => Self::Retraction,
            Error::LineSearchFailure { .. } => Self::LineSearch,
            Error::RoundingFailure(_) => Self::Rounding,
            Error::Precondition(_) => Self::Precondition,
            Error::OracleSize { .. } => Self::OracleSize,
            Error::Parse { .. } => Self::Parse,
            Error::UndefinedGap => Self::UndefinedGap,
            Error::Input(_) => Self::Input,
            Error::Io(_) => Self::Io,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NnorthSolver {
    SeppgPlus = 0,
    SeppgZero = 1,
    Alm = 2,
}

impl From<NnorthSolver> for SolverKind {
    fn from(s: NnorthSolver) -> Self {
        match s {
            NnorthSolver::SeppgPlus => SolverKind::SeppgPlus,
            NnorthSolver::SeppgZero => SolverKind::SeppgZero,
            NnorthSolver::Alm => SolverKind::Alm,
        }
    }
}

/// How a solve ended.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NnorthSolveStatus {
    Feasible = 0,
    Stagnated = 1,
    MaxOuter = 2,
    InnerFailure = 3,
}

/// Dense real matrix.
pub struct NnorthMatrix(Mat);

/// Quadratic assignment instance.
pub struct NnorthQap(QapInstance);

/// Result of a solver run.
pub struct NnorthReport(SolveReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Fail {
    Null(&'static str),
    Utf8,
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

/// Runs `body`, converting errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> NnorthStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => NnorthStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            NnorthStatus::NullPointer
        }
        Ok(Err(Fail::Utf8)) => {
            set_error("string argument is not valid UTF-8".into());
            NnorthStatus::Utf8
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(format!("{}: {e}", e.kind()));
            NnorthStatus::from(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            NnorthStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn c_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Utf8)
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message of the last failed call on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nnorth_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Copies `rows*cols` row-major values into a new matrix.
///
/// # Safety
/// `data` must point to `rows*cols` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nnorth_matrix_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut NnorthMatrix,
) -> NnorthStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if data.is_null() {
            return Err(Fail::Null("data"));
        }
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| Error::Input("matrix size overflows".into()))?;
        let vals = std::slice::from_raw_parts(data, len);
        *out = boxed(NnorthMatrix(Mat::from_row_slice(rows, cols, vals)));
        Ok(())
    })
}

/// Reads a whitespace-separated dense matrix file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nnorth_matrix_read(path: *const c_char, out: *mut *mut NnorthMatrix) -> NnorthStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let m = read_dense_matrix(Path::new(c_str(path, "path")?))?;
        *out = boxed(NnorthMatrix(m));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn nnorth_matrix_free(m: *mut NnorthMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of rows, 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnorth_matrix_rows(m: *const NnorthMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.nrows())
}

/// Number of columns, 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnorth_matrix_cols(m: *const NnorthMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.ncols())
}

/// Writes the entries row-major into `buf`, which must hold `len` doubles
/// with `len == rows*cols`.
///
/// # Safety
/// `m` must be a live handle and `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn nnorth_matrix_copy_to(m: *const NnorthMatrix, buf: *mut f64, len: usize) -> NnorthStatus {
    guard(|| {
        let m = &deref(m, "matrix")?.0;
        if buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        if len != m.len() {
            return Err(Error::Input(format!("buffer holds {len} values, matrix has {}", m.len())).into());
        }
        let dst = std::slice::from_raw_parts_mut(buf, len);
        for (k, v) in m.transpose().iter().enumerate() {
            dst[k] = *v;
        }
        Ok(())
    })
}

/// Random `n×r` matrix with orthonormal columns, reproducible from `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nnorth_random_stiefel_start(
    n: usize,
    r: usize,
    seed: u64,
    out: *mut *mut NnorthMatrix,
) -> NnorthStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if r == 0 || r > n {
            return Err(Error::Input(format!("need 1 <= r <= n, got n={n}, r={r}")).into());
        }
        *out = boxed(NnorthMatrix(random_stiefel_start(n, r, seed).into_inner()));
        Ok(())
    })
}

/// `Σ max(0, −xᵢⱼ)`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nnorth_vartheta(m: *const NnorthMatrix, out: *mut f64) -> NnorthStatus {
    guard(|| {
        let v = vartheta(&deref(m, "matrix")?.0);
        *out_ptr(out, "out")? = v;
        Ok(())
    })
}

/// Frobenius distance to the nearest matrix with orthonormal columns.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nnorth_dist_to_stiefel(m: *const NnorthMatrix, out: *mut f64) -> NnorthStatus {
    guard(|| {
        let m = &deref(m, "matrix")?.0;
        if m.nrows() < m.ncols() {
            return Err(Error::Input("matrix must have at least as many rows as columns".into()).into());
        }
        *out_ptr(out, "out")? = dist_to_stiefel(m);
        Ok(())
    })
}

/// Rounds onto the nonnegative matrices with orthonormal columns.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nnorth_round_to_feasible(m: *const NnorthMatrix, out: *mut *mut NnorthMatrix) -> NnorthStatus {
    guard(|| {
        let x = round_to_feasible(&deref(m, "matrix")?.0)?;
        *out_ptr(out, "out")? = boxed(NnorthMatrix(x.into_inner()));
        Ok(())
    })
}

/// Parses a QAPLIB `.dat` file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nnorth_qap_parse_file(path: *const c_char, out: *mut *mut NnorthQap) -> NnorthStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let q = parse_qaplib(Path::new(c_str(path, "path")?))?;
        *out = boxed(NnorthQap(q));
        Ok(())
    })
}

/// Parses QAPLIB text held in memory.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nnorth_qap_parse_str(text: *const c_char, out: *mut *mut NnorthQap) -> NnorthStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let q = parse_qaplib_str(c_str(text, "text")?, "")?;
        *out = boxed(NnorthQap(q));
        Ok(())
    })
}

/// # Safety
/// `q` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnorth_qap_free(q: *mut NnorthQap) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// Instance size `n`, 0 for a null handle.
///
/// # Safety
/// `q` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnorth_qap_size(q: *const NnorthQap) -> usize {
    q.as_ref().map_or(0, |q| q.0.n())
}

/// Cost of the assignment `i → perm[i]` (0-based).
///
/// # Safety
/// `q` must be a live handle, `perm` must point to `n` readable values, and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nnorth_qap_permutation_cost(
    q: *const NnorthQap,
    perm: *const usize,
    n: usize,
    out: *mut f64,
) -> NnorthStatus {
    guard(|| {
        let q = &deref(q, "qap")?.0;
        if perm.is_null() {
            return Err(Fail::Null("perm"));
        }
        let p = std::slice::from_raw_parts(perm, n);
        let mut seen = vec![false; q.n()];
        if n != q.n() || p.iter().any(|&j| j >= n || std::mem::replace(&mut seen[j], true)) {
            return Err(Error::Input(format!("not a permutation of 0..{}", q.n())).into());
        }
        *out_ptr(out, "out")? = q.permutation_cost(p);
        Ok(())
    })
}

unsafe fn run_solver<F: Objective>(
    f: &F,
    solver: NnorthSolver,
    x0: *const NnorthMatrix,
    config: *const c_char,
    rho0: Option<f64>,
    out: *mut *mut NnorthReport,
) -> Result<(), Fail> {
    let out = out_ptr(out, "out")?;
    let x0 = StiefelPoint::new(deref(x0, "x0")?.0.clone())?;
    let kind = SolverKind::from(solver);
    let mut penalty = kind.default_penalty_config();
    let mut alm = AlmConfig::default();
    if rho0.is_some() {
        penalty.rho0 = rho0;
        alm.mu0 = rho0;
    }
    if !config.is_null() {
        apply_overrides(c_str(config, "config")?, &mut penalty, &mut alm)?;
    }
    let report = nnorth::solve(kind, f, &x0, &penalty, &alm)?;
    *out = boxed(NnorthReport(report));
    Ok(())
}

/// Solves the lifted QAP from `x0`. `config` is optional `key = value` text.
///
/// # Safety
/// `q` and `x0` must be live handles, `config` null or NUL-terminated, and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nnorth_solve_qap(
    q: *const NnorthQap,
    solver: NnorthSolver,
    x0: *const NnorthMatrix,
    config: *const c_char,
    out: *mut *mut NnorthReport,
) -> NnorthStatus {
    guard(|| run_solver(&deref(q, "qap")?.0, solver, x0, config, None, out))
}

/// Projects `c` onto the feasible set starting from `x0`, with `ρ₀ = 1/‖c‖₂`
/// unless `config` sets it.
///
/// # Safety
/// `c` and `x0` must be live handles, `config` null or NUL-terminated, and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nnorth_solve_projection(
    c: *const NnorthMatrix,
    solver: NnorthSolver,
    x0: *const NnorthMatrix,
    config: *const c_char,
    out: *mut *mut NnorthReport,
) -> NnorthStatus {
    guard(|| {
        let c = &deref(c, "c")?.0;
        let norm = nnorth::stiefel::singular_values(c).first().copied().unwrap_or(0.0);
        let rho0 = (norm > 0.0).then(|| 1.0 / norm);
        run_solver(&ProjectionProblem::new(c.clone()), solver, x0, config, rho0, out)
    })
}

/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnorth_report_free(r: *mut NnorthReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Objective at the final iterate; NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnorth_report_f_final(report: *const NnorthReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.f_final)
}

/// Nonnegativity violation `Σ max(0, −xᵢⱼ)` of the final iterate; NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnorth_report_ninf(report: *const NnorthReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.ninf)
}

/// `‖XᵀX − I‖_F` of the final iterate; NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnorth_report_orth_residual(report: *const NnorthReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.orth_residual)
}

/// Inner gradient norm at exit; NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnorth_report_stationarity(report: *const NnorthReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.stationarity)
}

/// Outer iterations; 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnorth_report_outer_iters(report: *const NnorthReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.outer_iters)
}

/// Inner iterations summed over all outer iterations; 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnorth_report_inner_iters(report: *const NnorthReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.inner_iters_total)
}

/// Termination reason; `InnerFailure` for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnorth_report_status(report: *const NnorthReport) -> NnorthSolveStatus {
    match report.as_ref().map(|r| &r.0.status) {
        Some(SolveStatus::Feasible) => NnorthSolveStatus::Feasible,
        Some(SolveStatus::Stagnated) => NnorthSolveStatus::Stagnated,
        Some(SolveStatus::MaxOuter) => NnorthSolveStatus::MaxOuter,
        Some(SolveStatus::InnerFailure(_)) | None => NnorthSolveStatus::InnerFailure,
    }
}

/// Final iterate as a new matrix.
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nnorth_report_x_final(report: *const NnorthReport, out: *mut *mut NnorthMatrix) -> NnorthStatus {
    guard(|| {
        let r = &deref(report, "report")?.0;
        *out_ptr(out, "out")? = boxed(NnorthMatrix(r.x_final.mat().clone()));
        Ok(())
    })
}

/// Rounded feasible counterpart of the final iterate as a new matrix.
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nnorth_report_x_rounded(report: *const NnorthReport, out: *mut *mut NnorthMatrix) -> NnorthStatus {
    guard(|| {
        let r = &deref(report, "report")?.0;
        let x = r
            .x_rounded
            .as_ref()
            .ok_or_else(|| Error::RoundingFailure("final iterate could not be rounded".into()))?;
        *out_ptr(out, "out")? = boxed(NnorthMatrix(x.mat().clone()));
        Ok(())
    })
}

//! C ABI over `bohr-core`.
//!
//! Every fallible function returns a [`BohrStatus`]; on failure the message
//! is available from [`bohr_last_error_message`] on the same thread.
//! Matrices and reports are opaque handles owned by the caller and released
//! with their `_free` function. Strings returned by the library are released
//! with [`bohr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bohr_core::inequalities::{CheckOptions, CheckReport, Verdict};
use bohr_core::linalg::{eigenvalues, CMatrix, HermitianMatrix, C64};
use bohr_core::majorization::{ky_fan_norm, schatten_norm};
use bohr_core::{harness, Error};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BohrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotHermitian = 4,
    NoConvergence = 5,
    Parse = 6,
    NotCompletelyPositive = 7,
    Io = 8,
    /// A Rust panic was caught at the boundary.
    Internal = 99,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BohrVerdict {
    Holds = 0,
    Violated = 1,
    NotApplicable = 2,
}

/// Opaque complex matrix.
pub struct BohrMatrix(CMatrix);

/// Opaque check report.
pub struct BohrReport(CheckReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BohrStatus {
    match e {
        Error::Empty | Error::NonFinite | Error::InvalidParameter(_) | Error::Unknown { .. } => {
            BohrStatus::InvalidArgument
        }
        Error::NotSquare { .. } | Error::DimensionMismatch { .. } => BohrStatus::DimensionMismatch,
        Error::NotHermitian { .. } => BohrStatus::NotHermitian,
        Error::NoConvergence { .. } => BohrStatus::NoConvergence,
        Error::Parse(_) | Error::Json(_) => BohrStatus::Parse,
        Error::NotCompletelyPositive { .. } | Error::Reconstruction { .. } => BohrStatus::NotCompletelyPositive,
        Error::Io(_) => BohrStatus::Io,
        Error::SpectrumOutsideDomain { .. } | Error::NonFiniteValue { .. } | Error::SingularUnit(_) => {
            BohrStatus::InvalidArgument
        }
    }
}

fn fail(e: Error) -> BohrStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

fn null(what: &str) -> BohrStatus {
    set_error(format!("{what} is NULL"));
    BohrStatus::NullPointer
}

/// Runs `f`, turning a panic into [`BohrStatus::Internal`].
fn guard(f: impl FnOnce() -> BohrStatus) -> BohrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == BohrStatus::Ok {
                LAST_ERROR.with(|e| *e.borrow_mut() = None);
            }
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            BohrStatus::Internal
        }
    }
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn bohr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bohr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a `rows × cols` matrix from row-major real and imaginary parts.
/// `im` may be NULL for a real matrix.
///
/// # Safety
/// `re` (and `im` when not NULL) must point to `rows * cols` doubles and
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bohr_matrix_new(
    rows: usize,
    cols: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut BohrMatrix,
) -> BohrStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        if re.is_null() {
            return null("re");
        }
        let Some(len) = rows.checked_mul(cols) else {
            return fail(Error::InvalidParameter("rows * cols overflows".into()));
        };
        // SAFETY: the caller guarantees `len` readable doubles behind each pointer.
        let re = std::slice::from_raw_parts(re, len);
        let data: Vec<C64> = if im.is_null() {
            re.iter().map(|&x| C64::new(x, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(im, len);
            re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect()
        };
        match CMatrix::from_vec(rows, cols, data) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(BohrMatrix(m)));
                BohrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `m` must be NULL or a handle from [`bohr_matrix_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bohr_matrix_free(m: *mut BohrMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; `rows` and `cols` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bohr_matrix_shape(m: *const BohrMatrix, rows: *mut usize, cols: *mut usize) -> BohrStatus {
    guard(|| {
        if m.is_null() || rows.is_null() || cols.is_null() {
            return null("argument");
        }
        let (r, c) = (*m).0.shape();
        *rows = r;
        *cols = c;
        BohrStatus::Ok
    })
}

/// Descending eigenvalues of a Hermitian matrix, written to `out[0..n]`.
///
/// # Safety
/// `m` must be a live handle and `out` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn bohr_eigenvalues(m: *const BohrMatrix, out: *mut f64, len: usize) -> BohrStatus {
    guard(|| {
        if m.is_null() || out.is_null() {
            return null("argument");
        }
        let h = match HermitianMatrix::new((*m).0.clone()) {
            Ok(h) => h,
            Err(e) => return fail(e),
        };
        if len < h.dim() {
            return fail(Error::InvalidParameter(format!(
                "output holds {len} values, need {}",
                h.dim()
            )));
        }
        match eigenvalues(&h) {
            Ok(v) => {
                ptr::copy_nonoverlapping(v.as_ptr(), out, v.len());
                BohrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Sum of the `k` largest singular values.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bohr_ky_fan_norm(m: *const BohrMatrix, k: usize, out: *mut f64) -> BohrStatus {
    guard(|| {
        if m.is_null() || out.is_null() {
            return null("argument");
        }
        match ky_fan_norm(&(*m).0, k) {
            Ok(v) => {
                *out = v;
                BohrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// `(Σ s_j^p)^{1/p}`.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bohr_schatten_norm(m: *const BohrMatrix, p: f64, out: *mut f64) -> BohrStatus {
    guard(|| {
        if m.is_null() || out.is_null() {
            return null("argument");
        }
        match schatten_norm(&(*m).0, p) {
            Ok(v) => {
                *out = v;
                BohrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Checks an instance given as JSON text (the format read by `bohr check`).
/// A negative `tol` selects the default tolerance (or `BOHR_TOL`).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bohr_check_json(json: *const c_char, tol: f64, out: *mut *mut BohrReport) -> BohrStatus {
    guard(|| {
        if json.is_null() {
            return null("json");
        }
        if out.is_null() {
            return null("out");
        }
        let text = match CStr::from_ptr(json).to_str() {
            Ok(t) => t,
            Err(e) => return fail(Error::Parse(format!("instance is not UTF-8: {e}"))),
        };
        let opts = if tol < 0.0 {
            match CheckOptions::from_env() {
                Ok(o) => o,
                Err(e) => return fail(e),
            }
        } else if tol.is_finite() {
            CheckOptions::with_tol(tol)
        } else {
            return fail(Error::InvalidParameter(format!("tolerance {tol} is not finite")));
        };
        match harness::replay(text, &opts) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(BohrReport(r.report)));
                BohrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `r` must be NULL or a handle from [`bohr_check_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bohr_report_free(r: *mut BohrReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bohr_report_verdict(r: *const BohrReport, out: *mut BohrVerdict) -> BohrStatus {
    guard(|| {
        if r.is_null() || out.is_null() {
            return null("argument");
        }
        *out = match (*r).0.verdict {
            Verdict::Holds => BohrVerdict::Holds,
            Verdict::Violated => BohrVerdict::Violated,
            Verdict::NotApplicable => BohrVerdict::NotApplicable,
        };
        BohrStatus::Ok
    })
}

/// Smallest slack; NaN when the instance was not applicable.
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bohr_report_min_slack(r: *const BohrReport, out: *mut f64) -> BohrStatus {
    guard(|| {
        if r.is_null() || out.is_null() {
            return null("argument");
        }
        *out = (*r).0.min_slack;
        BohrStatus::Ok
    })
}

/// Number of compared values per side.
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bohr_report_len(r: *const BohrReport, out: *mut usize) -> BohrStatus {
    guard(|| {
        if r.is_null() || out.is_null() {
            return null("argument");
        }
        *out = (*r).0.partial_sums_lhs.len();
        BohrStatus::Ok
    })
}

/// Copies both sides into `lhs[0..len]` and `rhs[0..len]`.
///
/// # Safety
/// `r` must be a live handle; `lhs` and `rhs` must have room for `len`
/// doubles, where `len` is at least [`bohr_report_len`].
#[no_mangle]
pub unsafe extern "C" fn bohr_report_sides(
    r: *const BohrReport,
    lhs: *mut f64,
    rhs: *mut f64,
    len: usize,
) -> BohrStatus {
    guard(|| {
        if r.is_null() || lhs.is_null() || rhs.is_null() {
            return null("argument");
        }
        let rep = &(*r).0;
        let n = rep.partial_sums_lhs.len();
        if len < n {
            return fail(Error::InvalidParameter(format!("buffers hold {len} values, need {n}")));
        }
        ptr::copy_nonoverlapping(rep.partial_sums_lhs.as_ptr(), lhs, n);
        ptr::copy_nonoverlapping(rep.partial_sums_rhs.as_ptr(), rhs, n);
        BohrStatus::Ok
    })
}

/// The full report as JSON; release with [`bohr_string_free`].
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bohr_report_to_json(r: *const BohrReport, out: *mut *mut c_char) -> BohrStatus {
    guard(|| {
        if r.is_null() || out.is_null() {
            return null("argument");
        }
        match serde_json::to_string(&(*r).0) {
            Ok(s) => {
                *out = CString::new(s).expect("JSON has no NUL").into_raw();
                BohrStatus::Ok
            }
            Err(e) => fail(e.into()),
        }
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bohr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

//! C interface to the hadex constructions.
//!
//! Matrices are opaque handles released with `hadex_matrix_free`. Strings
//! returned by the library are released with `hadex_string_free`. Every
//! fallible call returns a `HadexStatus`; on failure the message is kept
//! per thread and read with `hadex_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hadex::hadamard::{excess_and_bound, excess_bound, SignMatrix};
use hadex::pipeline::{run_q1, run_q3, run_regular, Overrides};
use hadex::scheme::SchemePartition;
use hadex::Error;

/// Result codes. The numbering follows the command-line exit codes where they overlap.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HadexStatus {
    Ok = 0,
    VerificationFailed = 1,
    InvalidInput = 2,
    BudgetExceeded = 3,
    NullPointer = 4,
    Internal = 5,
}

/// Biregular families selectable by m.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HadexFamily {
    /// q = 4m²+4m+3.
    Q3 = 0,
    /// q = 2m²+2m+1.
    Q1 = 1,
}

/// Opaque ±1 matrix.
pub struct HadexMatrix {
    inner: SignMatrix,
}

/// The excess bound for one order.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HadexBound {
    pub k: i64,
    pub t: i64,
    pub s: i64,
    pub bound: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> HadexStatus {
    match hadex::cli::exit_code(err) {
        1 => HadexStatus::VerificationFailed,
        3 => HadexStatus::BudgetExceeded,
        _ => HadexStatus::InvalidInput,
    }
}

fn fail(err: Error) -> HadexStatus {
    set_error(err.to_string());
    status_of(&err)
}

fn guard(f: impl FnOnce() -> HadexStatus) -> HadexStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == HadexStatus::Ok {
                LAST_ERROR.with(|e| *e.borrow_mut() = None);
            }
            s
        }
        Err(_) => {
            set_error("internal panic");
            HadexStatus::Internal
        }
    }
}

fn null() -> HadexStatus {
    set_error("null pointer argument");
    HadexStatus::NullPointer
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, HadexStatus> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("input is not valid UTF-8");
        HadexStatus::InvalidInput
    })
}

unsafe fn emit(matrix: SignMatrix, out: *mut *mut HadexMatrix) {
    *out = Box::into_raw(Box::new(HadexMatrix { inner: matrix }));
}

unsafe fn emit_string(s: String, out: *mut *mut c_char) -> HadexStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            HadexStatus::Ok
        }
        Err(_) => {
            set_error("string contains an interior NUL");
            HadexStatus::Internal
        }
    }
}

/// Builds the signed matrix of a biregular family. A construction that misses
/// its promised row sums reports `VerificationFailed` and leaves `out` untouched.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn hadex_construct(
    family: HadexFamily,
    m: u64,
    out: *mut *mut HadexMatrix,
) -> HadexStatus {
    guard(|| {
        if out.is_null() {
            return null();
        }
        if m == 0 {
            set_error("m must be positive");
            return HadexStatus::InvalidInput;
        }
        let run = match family {
            HadexFamily::Q3 => run_q3(m, Overrides::default()),
            HadexFamily::Q1 => run_q1(m, Overrides::default()),
        };
        match run {
            Ok(o) if o.promise_met => {
                emit(o.construction.transformed, out);
                HadexStatus::Ok
            }
            Ok(_) => {
                set_error("construction does not attain the promised row sums");
                HadexStatus::VerificationFailed
            }
            Err(e) => fail(e),
        }
    })
}

/// Builds the regular matrix of order 4m² from a partition in the text format
/// read by the command-line tool.
///
/// # Safety
/// `partition` must be a NUL-terminated string and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn hadex_construct_regular(
    partition: *const c_char,
    out: *mut *mut HadexMatrix,
) -> HadexStatus {
    guard(|| {
        if out.is_null() {
            return null();
        }
        let text = match read_str(partition) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let part = match SchemePartition::parse(text) {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        match run_regular(&part, Overrides::default()) {
            Ok(o) if o.promise_met => {
                emit(o.construction.transformed, out);
                HadexStatus::Ok
            }
            Ok(_) => {
                set_error("construction is not regular");
                HadexStatus::VerificationFailed
            }
            Err(e) => fail(e),
        }
    })
}

/// Parses a matrix: the order on the first line, then one row of `+`/`-` per line.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn hadex_matrix_parse(
    text: *const c_char,
    out: *mut *mut HadexMatrix,
) -> HadexStatus {
    guard(|| {
        if out.is_null() {
            return null();
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match SignMatrix::parse(text) {
            Ok(h) => {
                emit(h, out);
                HadexStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a matrix. Null is ignored.
///
/// # Safety
/// `matrix` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hadex_matrix_free(matrix: *mut HadexMatrix) {
    if !matrix.is_null() {
        drop(Box::from_raw(matrix));
    }
}

/// Order of the matrix, or 0 for null.
///
/// # Safety
/// `matrix` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hadex_matrix_order(matrix: *const HadexMatrix) -> usize {
    matrix.as_ref().map_or(0, |m| m.inner.order())
}

/// Entry (i, j) as +1 or -1. Returns 0 for null or out-of-range indices.
///
/// # Safety
/// `matrix` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hadex_matrix_get(matrix: *const HadexMatrix, i: usize, j: usize) -> i8 {
    match matrix.as_ref() {
        Some(m) if i < m.inner.order() && j < m.inner.order() => m.inner.get(i, j),
        _ => 0,
    }
}

/// Sum of row i.
///
/// # Safety
/// `matrix` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hadex_matrix_row_sum(
    matrix: *const HadexMatrix,
    i: usize,
    out: *mut i64,
) -> HadexStatus {
    guard(|| {
        let (Some(m), false) = (matrix.as_ref(), out.is_null()) else {
            return null();
        };
        if i >= m.inner.order() {
            set_error(format!(
                "row {i} out of range for order {}",
                m.inner.order()
            ));
            return HadexStatus::InvalidInput;
        }
        *out = m.inner.row_sum(i);
        HadexStatus::Ok
    })
}

/// `Ok` when the rows are pairwise orthogonal, `VerificationFailed` otherwise.
///
/// # Safety
/// `matrix` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hadex_matrix_is_hadamard(matrix: *const HadexMatrix) -> HadexStatus {
    guard(|| match matrix.as_ref() {
        None => null(),
        Some(m) => match m.inner.check_hadamard() {
            Ok(()) => HadexStatus::Ok,
            Err(e) => fail(e),
        },
    })
}

/// Sum of all entries.
///
/// # Safety
/// `matrix` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hadex_matrix_excess(
    matrix: *const HadexMatrix,
    out: *mut i64,
) -> HadexStatus {
    guard(|| {
        let (Some(m), false) = (matrix.as_ref(), out.is_null()) else {
            return null();
        };
        *out = m.inner.excess();
        HadexStatus::Ok
    })
}

/// Text form of the matrix, one row per line.
///
/// # Safety
/// `matrix` must be a live handle and `out` writable. Free the result with `hadex_string_free`.
#[no_mangle]
pub unsafe extern "C" fn hadex_matrix_to_text(
    matrix: *const HadexMatrix,
    out: *mut *mut c_char,
) -> HadexStatus {
    guard(|| {
        let (Some(m), false) = (matrix.as_ref(), out.is_null()) else {
            return null();
        };
        emit_string(m.inner.to_text(), out)
    })
}

/// Excess report as JSON. Fails with `VerificationFailed` on a non-Hadamard matrix.
///
/// # Safety
/// `matrix` must be a live handle and `out` writable. Free the result with `hadex_string_free`.
#[no_mangle]
pub unsafe extern "C" fn hadex_matrix_report_json(
    matrix: *const HadexMatrix,
    out: *mut *mut c_char,
) -> HadexStatus {
    guard(|| {
        let (Some(m), false) = (matrix.as_ref(), out.is_null()) else {
            return null();
        };
        match excess_and_bound(&m.inner) {
            Ok(r) => match serde_json::to_string(&r) {
                Ok(s) => emit_string(s, out),
                Err(e) => {
                    set_error(e.to_string());
                    HadexStatus::Internal
                }
            },
            Err(e) => fail(e),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hadex_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn hadex_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Upper bound on the excess of a Hadamard matrix of order n.
#[no_mangle]
pub extern "C" fn hadex_excess_bound(n: u64) -> HadexBound {
    let b = excess_bound(n);
    HadexBound {
        k: b.k,
        t: b.t,
        s: b.s,
        bound: b.bound,
    }
}

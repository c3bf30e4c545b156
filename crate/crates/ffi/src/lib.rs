//! C interface to the exact integer linear algebra and the `M(7)` verifier.
//!
//! Objects cross the boundary as opaque handles that the caller frees with the
//! matching `*_free` function. Every fallible call returns a [`D2Status`];
//! negative values are errors and [`d2_last_error_message`] describes the most
//! recent one on the calling thread. Strings returned by the library are
//! released with [`d2_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use metacyclic_d2::exactlin::{hnf, kernel_basis, snf, solve_right, Solution};
use metacyclic_d2::fixtures::FixtureSet;
use metacyclic_d2::m7pipeline::{verify_m7, M7Options};
use metacyclic_d2::report::Report;
use metacyclic_d2::{Error, IntMatrix};

/// Result codes.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum D2Status {
    Ok = 0,
    /// The linear system has no integer solution.
    NoSolution = 1,
    NullPointer = -1,
    InvalidUtf8 = -2,
    Parse = -3,
    Dimension = -4,
    InvalidArgument = -5,
    Io = -6,
    Panic = -7,
}

/// Opaque integer matrix.
pub struct D2Matrix(IntMatrix);

/// Opaque verification report.
pub struct D2Report(Report);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn status_of(err: &Error) -> D2Status {
    match err {
        Error::Parse { .. } => D2Status::Parse,
        Error::Dimension(_) | Error::Shape(_) => D2Status::Dimension,
        Error::Io { .. } => D2Status::Io,
        Error::Fixture { source, .. } => status_of(source),
        _ => D2Status::InvalidArgument,
    }
}

fn fail(err: Error) -> D2Status {
    let st = status_of(&err);
    set_error(err.to_string());
    st
}

/// Runs `f`, turning panics into [`D2Status::Panic`].
fn guard(f: impl FnOnce() -> D2Status) -> D2Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            D2Status::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, D2Status> {
    if s.is_null() {
        set_error("null string argument");
        return Err(D2Status::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        D2Status::InvalidUtf8
    })
}

unsafe fn read_matrix<'a>(m: *const D2Matrix) -> Result<&'a IntMatrix, D2Status> {
    if m.is_null() {
        set_error("null matrix handle");
        return Err(D2Status::NullPointer);
    }
    Ok(&(*m).0)
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

macro_rules! try_st {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! need_out {
    ($p:expr) => {
        if $p.is_null() {
            set_error("null output pointer");
            return D2Status::NullPointer;
        }
    };
}

/// Message for the last error on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn d2_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a matrix in the text format (`rows cols` header, then rows).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn d2_matrix_parse(text: *const c_char, out: *mut *mut D2Matrix) -> D2Status {
    guard(|| {
        need_out!(out);
        let t = try_st!(read_str(text));
        match t.parse::<IntMatrix>() {
            Ok(m) => {
                write_out(out, D2Matrix(m));
                D2Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `m` must be NULL or a handle from this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn d2_matrix_free(m: *mut D2Matrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn d2_matrix_rows(m: *const D2Matrix) -> usize {
    if m.is_null() {
        0
    } else {
        (*m).0.rows()
    }
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn d2_matrix_cols(m: *const D2Matrix) -> usize {
    if m.is_null() {
        0
    } else {
        (*m).0.cols()
    }
}

/// Text form of the matrix; free with [`d2_string_free`]. NULL on error.
///
/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn d2_matrix_to_string(m: *const D2Matrix) -> *mut c_char {
    match read_matrix(m) {
        Ok(a) => into_c_string(a.to_string()),
        Err(_) => ptr::null_mut(),
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn d2_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Row Hermite normal form `H = U·A`. `u_out` may be NULL.
///
/// # Safety
/// `a` must be a live handle, `h_out` writable, `u_out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn d2_matrix_hnf(a: *const D2Matrix, h_out: *mut *mut D2Matrix, u_out: *mut *mut D2Matrix) -> D2Status {
    guard(|| {
        need_out!(h_out);
        let a = try_st!(read_matrix(a));
        let r = hnf(a);
        write_out(h_out, D2Matrix(r.h));
        if !u_out.is_null() {
            write_out(u_out, D2Matrix(r.u));
        }
        D2Status::Ok
    })
}

/// Smith normal form `D = U·A·V`; only `D` is returned.
///
/// # Safety
/// `a` must be a live handle and `d_out` writable.
#[no_mangle]
pub unsafe extern "C" fn d2_matrix_snf(a: *const D2Matrix, d_out: *mut *mut D2Matrix) -> D2Status {
    guard(|| {
        need_out!(d_out);
        let a = try_st!(read_matrix(a));
        write_out(d_out, D2Matrix(snf(a).d));
        D2Status::Ok
    })
}

/// Saturated basis (as rows) of `{v : v·A = 0}`.
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn d2_matrix_kernel(a: *const D2Matrix, out: *mut *mut D2Matrix) -> D2Status {
    guard(|| {
        need_out!(out);
        let a = try_st!(read_matrix(a));
        write_out(out, D2Matrix(kernel_basis(a)));
        D2Status::Ok
    })
}

/// Integer solution of `A·X = B`. Returns [`D2Status::NoSolution`] (and leaves
/// `x_out` untouched) when none exists; the divisibility witness is then
/// available from [`d2_last_error_message`].
///
/// # Safety
/// `a`, `b` must be live handles and `x_out` writable.
#[no_mangle]
pub unsafe extern "C" fn d2_matrix_solve_right(
    a: *const D2Matrix,
    b: *const D2Matrix,
    x_out: *mut *mut D2Matrix,
) -> D2Status {
    guard(|| {
        need_out!(x_out);
        let a = try_st!(read_matrix(a));
        let b = try_st!(read_matrix(b));
        match solve_right(a, b) {
            Ok(Solution::Solvable(x)) => {
                write_out(x_out, D2Matrix(x));
                D2Status::Ok
            }
            Ok(Solution::Unsolvable(c)) => {
                set_error(c.to_string());
                D2Status::NoSolution
            }
            Err(e) => fail(e),
        }
    })
}

/// Runs the `M(7)` chain. `fixtures_dir` may be NULL for the built-in
/// matrices. A report is produced whether or not its checks pass.
///
/// # Safety
/// `fixtures_dir` must be NULL or a NUL-terminated path and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn d2_verify_m7(eq7_only: bool, fixtures_dir: *const c_char, out: *mut *mut D2Report) -> D2Status {
    guard(|| {
        need_out!(out);
        let fx = if fixtures_dir.is_null() {
            FixtureSet::builtin()
        } else {
            let dir = try_st!(read_str(fixtures_dir));
            match FixtureSet::load_dir(Path::new(dir)) {
                Ok(f) => f,
                Err(e) => return fail(e),
            }
        };
        let opts = M7Options { eq7_only, ..M7Options::default() };
        match verify_m7(&fx, &opts) {
            Ok(r) => {
                write_out(out, D2Report(r));
                D2Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// JSON form of the report; free with [`d2_string_free`].
///
/// # Safety
/// `r` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn d2_report_json(r: *const D2Report) -> *mut c_char {
    if r.is_null() {
        return ptr::null_mut();
    }
    into_c_string((*r).0.to_json())
}

/// 1 when no check failed, 0 when one did, -1 for a NULL handle.
///
/// # Safety
/// `r` must be NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn d2_report_passed(r: *const D2Report) -> i32 {
    if r.is_null() {
        return -1;
    }
    i32::from((*r).0.passed())
}

/// Number of failing checks, or 0 for a NULL handle.
///
/// # Safety
/// `r` must be NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn d2_report_fail_count(r: *const D2Report) -> usize {
    if r.is_null() {
        0
    } else {
        (*r).0.summary.fail
    }
}

/// # Safety
/// `r` must be NULL or a report handle that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn d2_report_free(r: *mut D2Report) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

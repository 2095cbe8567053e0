//! C ABI over `cyclohom`.
//!
//! Objects cross the boundary as opaque handles that must be released with
//! the matching `*_free` function. Every fallible call returns a
//! [`CyclohomStatus`]; on failure, `cyclohom_last_error` copies a message for
//! the calling thread. Strings are written into caller-provided buffers: the
//! required size including the terminating NUL is stored in `*needed`, and
//! `CYCLOHOM_STATUS_BUFFER_TOO_SMALL` is returned when `capacity` is short.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use cyclohom::complex::{ComplexFile, SimplicialComplex};
use cyclohom::exactlinalg::{smith_normal_form, IntMatrix};
use cyclohom::polynomial::{cyclotomic, IntPoly};
use cyclohom::verify::{self, CheckId, VerificationReport, VerifyOptions};
use cyclohom::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CyclohomStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotSquarefree = 3,
    ParseError = 4,
    Overflow = 5,
    BufferTooSmall = 6,
    CheckFailed = 7,
    Internal = 8,
}

/// A cyclotomic polynomial.
pub struct CyclohomPoly {
    inner: Arc<IntPoly>,
}

/// A list of verification reports.
pub struct CyclohomReport {
    inner: Vec<VerificationReport>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> CyclohomStatus {
    match e {
        Error::NotSquarefree(_) | Error::RepeatedPrime(_) => CyclohomStatus::NotSquarefree,
        Error::Parse(_) => CyclohomStatus::ParseError,
        Error::InvalidArgument(_) | Error::DimensionMismatch(_) | Error::Precondition(_) | Error::NotMonic => {
            CyclohomStatus::InvalidArgument
        }
        _ => CyclohomStatus::Internal,
    }
}

fn fail(status: CyclohomStatus, msg: impl Into<String>) -> CyclohomStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> CyclohomStatus {
    fail(status_of(&e), e.to_string())
}

/// Runs `f`, turning panics into `CYCLOHOM_STATUS_INTERNAL`.
fn guard(f: impl FnOnce() -> CyclohomStatus) -> CyclohomStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(CyclohomStatus::Internal, "panic inside cyclohom"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, CyclohomStatus> {
    if s.is_null() {
        return Err(fail(CyclohomStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(CyclohomStatus::InvalidArgument, "string is not UTF-8"))
}

unsafe fn write_str(s: &str, buf: *mut c_char, capacity: usize, needed: *mut usize) -> CyclohomStatus {
    let want = s.len() + 1;
    if !needed.is_null() {
        *needed = want;
    }
    if buf.is_null() || capacity < want {
        return fail(CyclohomStatus::BufferTooSmall, format!("{want} bytes needed"));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    CyclohomStatus::Ok
}

/// Copies the calling thread's last error message.
///
/// # Safety
/// `buf` must point to `capacity` writable bytes or be null; `needed` must be
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn cyclohom_last_error(buf: *mut c_char, capacity: usize, needed: *mut usize) -> CyclohomStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    write_str(&msg, buf, capacity, needed)
}

/// Computes the `n`-th cyclotomic polynomial.
///
/// # Safety
/// `out` must be a valid pointer; the handle written there is owned by the
/// caller.
#[no_mangle]
pub unsafe extern "C" fn cyclohom_cyclotomic(n: u64, out: *mut *mut CyclohomPoly) -> CyclohomStatus {
    guard(|| {
        if out.is_null() {
            return fail(CyclohomStatus::NullPointer, "null output handle");
        }
        match cyclotomic(n) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(CyclohomPoly { inner: p }));
                CyclohomStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Degree of the polynomial, or -1 for a null handle.
///
/// # Safety
/// `poly` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cyclohom_poly_degree(poly: *const CyclohomPoly) -> i64 {
    match poly.as_ref() {
        Some(p) => p.inner.degree().map_or(-1, |d| d as i64),
        None => -1,
    }
}

/// Coefficient of `x^j` as a 64-bit integer.
///
/// # Safety
/// `poly` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyclohom_poly_coefficient(poly: *const CyclohomPoly, j: usize, out: *mut i64) -> CyclohomStatus {
    guard(|| {
        let (Some(p), false) = (poly.as_ref(), out.is_null()) else {
            return fail(CyclohomStatus::NullPointer, "null argument");
        };
        match i64::try_from(p.inner.coeff(j)) {
            Ok(v) => {
                *out = v;
                CyclohomStatus::Ok
            }
            Err(_) => fail(CyclohomStatus::Overflow, format!("coefficient {j} exceeds 64 bits")),
        }
    })
}

/// Space-separated decimal coefficients, constant term first.
///
/// # Safety
/// See the string buffer convention at the top of the header.
#[no_mangle]
pub unsafe extern "C" fn cyclohom_poly_to_string(
    poly: *const CyclohomPoly,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> CyclohomStatus {
    guard(|| match poly.as_ref() {
        Some(p) => write_str(&p.inner.to_string(), buf, capacity, needed),
        None => fail(CyclohomStatus::NullPointer, "null polynomial"),
    })
}

/// # Safety
/// `poly` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cyclohom_poly_free(poly: *mut CyclohomPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Runs the comma-separated `checks` for `n`. A failed check still yields a
/// report; `CYCLOHOM_STATUS_CHECK_FAILED` signals it.
///
/// # Safety
/// `checks` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyclohom_verify(
    n: u64,
    checks: *const c_char,
    seed: u64,
    out: *mut *mut CyclohomReport,
) -> CyclohomStatus {
    guard(|| {
        if out.is_null() {
            return fail(CyclohomStatus::NullPointer, "null output handle");
        }
        let names = match read_str(checks) {
            Ok(s) => s,
            Err(s) => return s,
        };
        if n < 2 || !cyclohom::numtheory::is_squarefree(n) {
            return fail(CyclohomStatus::NotSquarefree, format!("{n} is not a squarefree integer >= 2"));
        }
        let ids: Result<Vec<CheckId>, Error> = names
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(str::parse)
            .collect();
        let ids = match ids {
            Ok(v) if !v.is_empty() => v,
            Ok(_) => return fail(CyclohomStatus::InvalidArgument, "no checks selected"),
            Err(e) => return from_error(e),
        };
        let opts = VerifyOptions { seed, ..VerifyOptions::default() };
        let reports: Vec<VerificationReport> = ids.iter().map(|&c| verify::run_check(n, c, &opts)).collect();
        let passed = reports.iter().all(|r| r.passed());
        *out = Box::into_raw(Box::new(CyclohomReport { inner: reports }));
        if passed {
            CyclohomStatus::Ok
        } else {
            fail(CyclohomStatus::CheckFailed, "one or more checks failed")
        }
    })
}

/// 1 when every check in the report passed, 0 otherwise or for null.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cyclohom_report_passed(report: *const CyclohomReport) -> i32 {
    report.as_ref().map_or(0, |r| r.inner.iter().all(|x| x.passed()) as i32)
}

/// The report as JSON.
///
/// # Safety
/// See the string buffer convention at the top of the header.
#[no_mangle]
pub unsafe extern "C" fn cyclohom_report_json(
    report: *const CyclohomReport,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> CyclohomStatus {
    guard(|| match report.as_ref() {
        Some(r) => write_str(&verify::reports_to_json(&r.inner), buf, capacity, needed),
        None => fail(CyclohomStatus::NullPointer, "null report"),
    })
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cyclohom_report_free(report: *mut CyclohomReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Smith normal form diagonal of a matrix in "rows cols nnz" / "i j value"
/// triplet text, written space-separated.
///
/// # Safety
/// `matrix` must be NUL-terminated; see the string buffer convention at the top of the header.
#[no_mangle]
pub unsafe extern "C" fn cyclohom_snf(
    matrix: *const c_char,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> CyclohomStatus {
    guard(|| {
        let text = match read_str(matrix) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match IntMatrix::parse_triplet_text(text) {
            Ok(m) => {
                let d: Vec<String> = smith_normal_form(&m, false).diagonal.iter().map(|x| x.to_string()).collect();
                write_str(&d.join(" "), buf, capacity, needed)
            }
            Err(e) => from_error(e),
        }
    })
}

/// Reduced homology in degree `dim` of a complex given as JSON
/// (`{"parts": [...], "facets": [[...], ...], "full_skeleton": false}`),
/// written as e.g. `Z`, `Z/2` or `0`.
///
/// # Safety
/// `complex_json` must be NUL-terminated; see the string buffer convention at the top
/// of the header.
#[no_mangle]
pub unsafe extern "C" fn cyclohom_homology(
    complex_json: *const c_char,
    dim: i64,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> CyclohomStatus {
    guard(|| {
        let text = match read_str(complex_json) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let file: ComplexFile = match serde_json::from_str(text) {
            Ok(f) => f,
            Err(e) => return fail(CyclohomStatus::ParseError, e.to_string()),
        };
        match SimplicialComplex::from_file(&file) {
            Ok(k) => write_str(&k.reduced_homology(dim as isize).to_string(), buf, capacity, needed),
            Err(e) => from_error(e),
        }
    })
}

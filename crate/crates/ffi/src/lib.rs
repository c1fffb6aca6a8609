//! C interface to `seplen`.
//!
//! Every entry point returns a [`SeplenStatus`]. On failure the message is
//! kept per thread and can be read with [`seplen_last_error`]. Handles are
//! opaque and owned by the caller until passed to the matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use seplen::critical::{verify_critical, CriticalOptions};
use seplen::io::{parse_point, to_canonical_json};
use seplen::scalar::Exact;
use seplen::{jacobian_rank, l_c, DimensionVector, Error, PointMatrix, TwoNParams};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeplenStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidDims = 2,
    Parse = 3,
    ResourceCap = 4,
    Structure = 5,
    InvalidArgument = 6,
    Internal = 7,
    Panic = 8,
}

/// A product-vector point parsed from JSON.
pub struct SeplenPoint {
    inner: PointMatrix<Exact>,
}

/// Outcome of a verification, with its canonical JSON form.
pub struct SeplenReport {
    passed: bool,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> SeplenStatus {
    match err {
        Error::InvalidDims(_) => SeplenStatus::InvalidDims,
        Error::Parse(_) | Error::Json(_) => SeplenStatus::Parse,
        Error::ResourceCap { .. } => SeplenStatus::ResourceCap,
        Error::Structure(_) => SeplenStatus::Structure,
        Error::InvalidArgument(_) | Error::Dimension(_) | Error::IndexOutOfRange(_) => {
            SeplenStatus::InvalidArgument
        }
        _ => SeplenStatus::Internal,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SeplenStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SeplenStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            SeplenStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            SeplenStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn dims_from(p: *const usize, len: usize) -> Result<DimensionVector, Fail> {
    let d = slice(p, len, "dims")?;
    Ok(DimensionVector::new(d.to_vec())?)
}

fn report(passed: bool, json: String) -> Box<SeplenReport> {
    Box::new(SeplenReport {
        passed,
        json: CString::new(json).expect("JSON has no interior NUL"),
    })
}

/// Writes `L_c` for the dimension vector `dims[0..n]` to `out`.
///
/// # Safety
/// `dims` must point to `n` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn seplen_lc(dims: *const usize, n: usize, out: *mut usize) -> SeplenStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let d = dims_from(dims, n)?;
        *out = l_c(&d);
        Ok(())
    })
}

/// Parses a point from JSON (`{"dims": [...], "rows": [...]}`).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn seplen_point_from_json(json: *const c_char, out: *mut *mut SeplenPoint) -> SeplenStatus {
    guard(|| {
        if json.is_null() {
            return Err(Fail::Null("json"));
        }
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        *out = ptr::null_mut();
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Error::Parse(format!("input is not UTF-8: {e}")))?;
        let inner = parse_point(text)?;
        *out = Box::into_raw(Box::new(SeplenPoint { inner }));
        Ok(())
    })
}

/// # Safety
/// `point` must come from [`seplen_point_from_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn seplen_point_free(point: *mut SeplenPoint) {
    if !point.is_null() {
        drop(Box::from_raw(point));
    }
}

/// Exact rank of the real Jacobian at `point`.
///
/// # Safety
/// `point` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn seplen_jacobian_rank(point: *const SeplenPoint, out: *mut usize) -> SeplenStatus {
    guard(|| {
        let p = point.as_ref().ok_or(Fail::Null("point"))?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        *out = jacobian_rank(&p.inner, None);
        Ok(())
    })
}

/// Checks that `L_c` is critical for `dims[0..n]`. `cap` of 0 means no cap.
/// The report passes when the verdict is confirmed.
///
/// # Safety
/// `dims` must point to `n` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn seplen_verify_critical(
    dims: *const usize,
    n: usize,
    samples: usize,
    seed: u64,
    cap: usize,
    out: *mut *mut SeplenReport,
) -> SeplenStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        *out = ptr::null_mut();
        let d = dims_from(dims, n)?;
        let opts = CriticalOptions {
            samples,
            seed,
            cap,
            force: cap == 0,
            ..CriticalOptions::default()
        };
        let rep = verify_critical(&d, &opts)?;
        *out = Box::into_raw(report(rep.confirmed(), to_canonical_json(&rep)?));
        Ok(())
    })
}

/// Runs the `2 x N` determinant checks for integer parameters `a[0..n]`, `b[0..n]`.
///
/// # Safety
/// `a` and `b` must each point to `n` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn seplen_twoxn_verify(
    a: *const i64,
    b: *const i64,
    n: usize,
    out: *mut *mut SeplenReport,
) -> SeplenStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        *out = ptr::null_mut();
        let params = TwoNParams::from_integers(slice(a, n, "a")?, slice(b, n, "b")?)?;
        let rep = seplen::verify_theorem(&params)?;
        *out = Box::into_raw(report(rep.passed, to_canonical_json(&rep)?));
        Ok(())
    })
}

/// 1 if the report passed, 0 if not or if `report` is null.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn seplen_report_passed(report: *const SeplenReport) -> i32 {
    report.as_ref().map_or(0, |r| r.passed as i32)
}

/// Canonical JSON of the report. Free with [`seplen_string_free`].
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn seplen_report_json(report: *const SeplenReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => r.json.clone().into_raw(),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `report` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn seplen_report_free(report: *mut SeplenReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must come from [`seplen_report_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn seplen_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn seplen_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

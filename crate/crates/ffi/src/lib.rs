//! C ABI over `block_toeplitz`.
//!
//! Matrices and specs cross the boundary as opaque handles; everything else
//! is JSON text. Every function returns a [`BtzStatus`]; on failure the
//! message is available from [`btz_last_error_message`] on the same thread.
//! Strings returned through `out` parameters must be released with
//! [`btz_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use block_toeplitz::block::BlockMatrix;
use block_toeplitz::cli::{parse_instance_str, verify_instance, SuiteSummary};
use block_toeplitz::error::Error;
use block_toeplitz::harness::{run_theorem_suite, Theorem, TrialConfig};
use block_toeplitz::normality::{normal_defect, normality_criterion};
use block_toeplitz::toeplitz::ToeplitzSpec;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BtzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    DimensionMismatch = 4,
    Precondition = 5,
    UnknownId = 6,
    InvalidAlgebra = 7,
    Panic = 8,
    Internal = 9,
}

/// Opaque Toeplitz spec.
pub struct BtzSpec(ToeplitzSpec);

/// Opaque block matrix.
pub struct BtzMatrix(BlockMatrix);

struct Failure(BtzStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::DimensionMismatch(_) | Error::IndexOutOfRange { .. } => BtzStatus::DimensionMismatch,
            Error::PreconditionViolation(_) => BtzStatus::Precondition,
            Error::UnknownTheorem(_) | Error::UnknownConstraint(_) | Error::UnknownAlgebraKind(_) => {
                BtzStatus::UnknownId
            }
            Error::NotCommutative(..) | Error::NotClosed(..) | Error::EmptyBasis => BtzStatus::InvalidAlgebra,
            Error::Parse(_) | Error::Json(_) => BtzStatus::ParseError,
            _ => BtzStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(BtzStatus::ParseError, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BtzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            BtzStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            BtzStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(BtzStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(BtzStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(BtzStatus::Internal, e.to_string()))?;
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(c.into_raw());
    Ok(())
}

unsafe fn put_json<T: serde::Serialize>(out: *mut *mut c_char, value: &T) -> Result<(), Failure> {
    put_string(out, serde_json::to_string(value)?)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn btz_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn btz_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn btz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a spec from JSON `{"n", "d", "diag", "lower", "upper"}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn btz_spec_from_json(json: *const c_char, out: *mut *mut BtzSpec) -> BtzStatus {
    guard(|| {
        let spec: ToeplitzSpec = serde_json::from_str(text(json, "json")?)?;
        put(out, Box::into_raw(Box::new(BtzSpec(spec))))
    })
}

/// # Safety
/// `spec` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn btz_spec_free(spec: *mut BtzSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn btz_spec_to_json(spec: *const BtzSpec, out: *mut *mut c_char) -> BtzStatus {
    guard(|| put_json(out, &handle(spec, "spec")?.0))
}

/// Block order and block size of a spec.
///
/// # Safety
/// `spec` must be a live handle; `n` and `d` must be writable.
#[no_mangle]
pub unsafe extern "C" fn btz_spec_dims(spec: *const BtzSpec, n: *mut usize, d: *mut usize) -> BtzStatus {
    guard(|| {
        let s = &handle(spec, "spec")?.0;
        put(n, s.n())?;
        put(d, s.d())
    })
}

/// Expand a spec into a new matrix handle.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn btz_spec_build(spec: *const BtzSpec, out: *mut *mut BtzMatrix) -> BtzStatus {
    guard(|| {
        let m = handle(spec, "spec")?.0.build();
        put(out, Box::into_raw(Box::new(BtzMatrix(m))))
    })
}

/// Normality decided by the block criterion on the spec entries.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn btz_spec_is_normal(spec: *const BtzSpec, out: *mut bool) -> BtzStatus {
    guard(|| put(out, normality_criterion(&handle(spec, "spec")?.0).is_normal))
}

/// Full normality report (verdict, 1-based witness pair, defect matrix) as JSON.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn btz_spec_normality_json(spec: *const BtzSpec, out: *mut *mut c_char) -> BtzStatus {
    guard(|| put_json(out, &normality_criterion(&handle(spec, "spec")?.0)))
}

/// Parse a block matrix: nested `[row][col][i][j]` scalars, or a plain
/// scalar matrix read as block size 1.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn btz_matrix_from_json(json: *const c_char, out: *mut *mut BtzMatrix) -> BtzStatus {
    guard(|| {
        let m: BlockMatrix = serde_json::from_str(text(json, "json")?)?;
        put(out, Box::into_raw(Box::new(BtzMatrix(m))))
    })
}

/// # Safety
/// `m` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn btz_matrix_free(m: *mut BtzMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn btz_matrix_to_json(m: *const BtzMatrix, out: *mut *mut c_char) -> BtzStatus {
    guard(|| put_json(out, &handle(m, "matrix")?.0))
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn btz_matrix_is_toeplitz(m: *const BtzMatrix, out: *mut bool) -> BtzStatus {
    guard(|| put(out, ToeplitzSpec::recognize(&handle(m, "matrix")?.0, None).is_some()))
}

/// Recover the spec of a block Toeplitz matrix. Fails with
/// `BTZ_STATUS_PRECONDITION` when the matrix is not block Toeplitz.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn btz_matrix_to_spec(m: *const BtzMatrix, out: *mut *mut BtzSpec) -> BtzStatus {
    guard(|| {
        let spec = ToeplitzSpec::recognize(&handle(m, "matrix")?.0, None)
            .ok_or_else(|| Failure(BtzStatus::Precondition, "matrix is not block Toeplitz".into()))?;
        put(out, Box::into_raw(Box::new(BtzSpec(spec))))
    })
}

/// Normality decided directly from M M* - M* M.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn btz_matrix_is_normal(m: *const BtzMatrix, out: *mut bool) -> BtzStatus {
    guard(|| put(out, normal_defect(&handle(m, "matrix")?.0).is_zero()))
}

/// Classify an instance given as JSON text, the same input `btz verify`
/// accepts. `x_json` may be NULL; otherwise it overrides the instance's X.
/// Writes the verification report as JSON.
///
/// # Safety
/// `instance` must be a NUL-terminated string, `x_json` NULL or one, and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn btz_verify_json(
    instance: *const c_char,
    x_json: *const c_char,
    out: *mut *mut c_char,
) -> BtzStatus {
    guard(|| {
        let src = text(instance, "instance")?;
        let x = if x_json.is_null() { None } else { Some(text(x_json, "x_json")?) };
        let inst = parse_instance_str("<instance>", src, x)?;
        put_json(out, &verify_instance(&inst)?)
    })
}

/// Run one randomized suite with default shape ranges and write its summary
/// as JSON. `failed` in the summary counts disagreements with the oracle.
///
/// # Safety
/// `theorem_id` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn btz_run_suite(
    theorem_id: *const c_char,
    seed: u64,
    trials: usize,
    out: *mut *mut c_char,
) -> BtzStatus {
    guard(|| {
        let theorem: Theorem = text(theorem_id, "theorem_id")?.parse()?;
        let config = TrialConfig { seed, trials, ..TrialConfig::default() };
        config.validate()?;
        let outcomes = run_theorem_suite(theorem, &config)?;
        put_json(out, &SuiteSummary::from_outcomes(theorem, &outcomes))
    })
}

//! C ABI over the verification library.
//!
//! Objects cross the boundary as opaque handles (`NkSpace`, `NkReport`)
//! created by `nk_*` constructors and released with the matching `*_free`.
//! Every fallible call returns an [`NkStatus`]; on failure a message is
//! available from [`nk_last_error`] on the same thread. Strings returned to
//! the caller are owned by the caller and released with [`nk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nearly_kahler::commands::{self, Options, ScalarMode};
use nearly_kahler::report::{Report, Verdict};
use nearly_kahler::spec_io::SpaceSpec;
use nearly_kahler::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NkStatus {
    Ok = 0,
    /// The computation ran and a mathematical check failed.
    MathFail = 1,
    /// Malformed input document, unknown name or invalid argument.
    InvalidInput = 2,
    NullPointer = 3,
    Utf8 = 4,
    /// A panic was caught at the boundary.
    Internal = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct NkOptions {
    pub tolerance: f64,
    /// Nonzero for exact arithmetic where possible.
    pub exact: i32,
    pub seed: u64,
    pub grid: i64,
    pub samples: usize,
    pub sweep_denominator: i64,
    pub sweep_max_numerator: i64,
}

impl From<&NkOptions> for Options {
    fn from(o: &NkOptions) -> Self {
        Options {
            tolerance: o.tolerance,
            scalar: if o.exact != 0 { ScalarMode::Exact } else { ScalarMode::Float },
            seed: o.seed,
            grid: o.grid,
            samples: o.samples,
            sweep_denominator: o.sweep_denominator,
            sweep_max_numerator: o.sweep_max_numerator,
        }
    }
}

/// Validated space document.
pub struct NkSpace(SpaceSpec);

/// Verification report.
pub struct NkReport(Report);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> NkStatus {
    match e {
        Error::Parse(_) | Error::Dimension(_) => NkStatus::InvalidInput,
        _ => NkStatus::MathFail,
    }
}

fn guard(f: impl FnOnce() -> Result<NkStatus, (NkStatus, String)>) -> NkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal error: panic caught at the C boundary");
            NkStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (NkStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, (NkStatus, String)> {
    if p.is_null() {
        return Err((NkStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (NkStatus::Utf8, e.to_string()))
}

fn null_check<T>(p: *const T, what: &str) -> Result<(), (NkStatus, String)> {
    if p.is_null() {
        Err((NkStatus::NullPointer, format!("null {what}")))
    } else {
        Ok(())
    }
}

unsafe fn options(o: *const NkOptions) -> Options {
    if o.is_null() {
        Options::default()
    } else {
        Options::from(&*o)
    }
}

unsafe fn put_report(out: *mut *mut NkReport, r: Report) -> NkStatus {
    *out = Box::into_raw(Box::new(NkReport(r)));
    NkStatus::Ok
}

fn to_c_string(s: String) -> Result<*mut c_char, (NkStatus, String)> {
    CString::new(s).map(CString::into_raw).map_err(|e| (NkStatus::Internal, e.to_string()))
}

/// Library defaults: tolerance 1e-10, exact arithmetic, seed 0, grid 4,
/// 100 samples, sweep `k/4` with `|k| ≤ 20`.
#[no_mangle]
pub extern "C" fn nk_options_default() -> NkOptions {
    let o = Options::default();
    NkOptions {
        tolerance: o.tolerance,
        exact: 1,
        seed: o.seed,
        grid: o.grid,
        samples: o.samples,
        sweep_denominator: o.sweep_denominator,
        sweep_max_numerator: o.sweep_max_numerator,
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn nk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and validates a space document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nk_space_from_json(json: *const c_char, out: *mut *mut NkSpace) -> NkStatus {
    guard(|| {
        null_check(out, "output pointer")?;
        let spec = SpaceSpec::from_json(read_str(json)?).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(NkSpace(spec)));
        Ok(NkStatus::Ok)
    })
}

/// Document of a catalog model: `s3xs3`, `s3xs3-112`, `flag`, `cp3`,
/// `ledger-obata`.
///
/// # Safety
/// `model` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nk_space_emit(model: *const c_char, out: *mut *mut NkSpace) -> NkStatus {
    guard(|| {
        null_check(out, "output pointer")?;
        let spec = commands::emit(read_str(model)?).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(NkSpace(spec)));
        Ok(NkStatus::Ok)
    })
}

/// Dimension of the Lie algebra.
///
/// # Safety
/// `space` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nk_space_dimension(space: *const NkSpace, out: *mut usize) -> NkStatus {
    guard(|| {
        null_check(space, "space")?;
        null_check(out, "output pointer")?;
        *out = (*space).0.dimension;
        Ok(NkStatus::Ok)
    })
}

/// Serializes the document; free the result with `nk_string_free`.
///
/// # Safety
/// `space` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nk_space_to_json(space: *const NkSpace, out: *mut *mut c_char) -> NkStatus {
    guard(|| {
        null_check(space, "space")?;
        null_check(out, "output pointer")?;
        *out = to_c_string((*space).0.to_json())?;
        Ok(NkStatus::Ok)
    })
}

/// # Safety
/// `space` must come from this library (or be NULL) and not be used after.
#[no_mangle]
pub unsafe extern "C" fn nk_space_free(space: *mut NkSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// SU(3)-structure and nearly Kähler system on the document's `omega`
/// (and `psi`), with the cone when `cone` is nonzero. A report is produced
/// whether or not the checks pass; inspect it with `nk_report_passed`.
///
/// # Safety
/// `space` must come from this library, `options` be NULL or valid, and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nk_check(
    space: *const NkSpace,
    options: *const NkOptions,
    cone: i32,
    out: *mut *mut NkReport,
) -> NkStatus {
    guard(|| {
        null_check(space, "space")?;
        null_check(out, "output pointer")?;
        let r = commands::check_spec(&(*space).0, &self::options(options), cone != 0).map_err(lib_err)?;
        Ok(put_report(out, r))
    })
}

/// Catalog verification: `s3xs3`, `flag`, `cp3`, `s6`, `ledger-obata`,
/// `cone`.
///
/// # Safety
/// `name` must be a NUL-terminated string, `options` NULL or valid, and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nk_verify(name: *const c_char, options: *const NkOptions, out: *mut *mut NkReport) -> NkStatus {
    guard(|| {
        null_check(out, "output pointer")?;
        let r = commands::verify(read_str(name)?, &self::options(options)).map_err(lib_err)?;
        Ok(put_report(out, r))
    })
}

/// Dimension table of isotropy and transitive algebras.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nk_table(out: *mut *mut NkReport) -> NkStatus {
    guard(|| {
        null_check(out, "output pointer")?;
        let r = commands::table(&Options::default()).map_err(lib_err)?;
        Ok(put_report(out, r))
    })
}

/// Nonzero when no check failed.
///
/// # Safety
/// `report` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nk_report_passed(report: *const NkReport, out: *mut i32) -> NkStatus {
    guard(|| {
        null_check(report, "report")?;
        null_check(out, "output pointer")?;
        *out = ((*report).0.overall() == Verdict::Pass) as i32;
        Ok(NkStatus::Ok)
    })
}

/// Number of individual checks in the report.
///
/// # Safety
/// `report` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nk_report_check_count(report: *const NkReport, out: *mut usize) -> NkStatus {
    guard(|| {
        null_check(report, "report")?;
        null_check(out, "output pointer")?;
        *out = (*report).0.checks.len();
        Ok(NkStatus::Ok)
    })
}

/// JSON form of the report; free the result with `nk_string_free`.
///
/// # Safety
/// `report` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nk_report_json(report: *const NkReport, out: *mut *mut c_char) -> NkStatus {
    guard(|| {
        null_check(report, "report")?;
        null_check(out, "output pointer")?;
        *out = to_c_string((*report).0.to_json())?;
        Ok(NkStatus::Ok)
    })
}

/// Plain-text summary; free the result with `nk_string_free`.
///
/// # Safety
/// `report` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nk_report_text(report: *const NkReport, out: *mut *mut c_char) -> NkStatus {
    guard(|| {
        null_check(report, "report")?;
        null_check(out, "output pointer")?;
        *out = to_c_string((*report).0.render())?;
        Ok(NkStatus::Ok)
    })
}

/// # Safety
/// `report` must come from this library (or be NULL) and not be used after.
#[no_mangle]
pub unsafe extern "C" fn nk_report_free(report: *mut NkReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be a string returned by this library (or NULL).
#[no_mangle]
pub unsafe extern "C" fn nk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

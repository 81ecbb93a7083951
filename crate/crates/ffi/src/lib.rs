//! C ABI over the core toolkit.
//!
//! Objects cross the boundary as opaque handles that the caller frees with the
//! matching `*_free` function. Every fallible call returns an [`LsStatus`]; on
//! failure the message is available from [`ls_last_error`] until the next call
//! on the same thread. Strings returned through `out` parameters are owned by
//! the caller and released with [`ls_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use linsofic::abelian::SpectralMeasure;
use linsofic::exact;
use linsofic::genfunc;
use linsofic::groups::{self, CharacterTable, MultTable};
use linsofic::jordan::JordanSpectrum;
use linsofic::planner::{self, PlanParams};
use linsofic::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LsStatus {
    Ok = 0,
    /// Null pointer, bad UTF-8, or an out-of-range parameter.
    InvalidArgument = 1,
    Parse = 2,
    /// Input is well-formed but outside what the operation supports.
    Domain = 3,
    /// A configured size cap was exceeded.
    Cap = 4,
    /// A checked inequality failed.
    BoundViolation = 5,
    Numerical = 6,
    /// A panic was caught at the boundary.
    Internal = 7,
}

/// Jordan spectrum handle.
pub struct LsSpectrum(JordanSpectrum);
/// Spectral (probability) measure handle.
pub struct LsMeasure(SpectralMeasure);
/// Character table handle.
pub struct LsTable(CharacterTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LsStatus {
    match e {
        Error::InvalidParameter(_) | Error::RankMismatch { .. } => LsStatus::InvalidArgument,
        Error::Parse(_) => LsStatus::Parse,
        Error::InvalidMeasure(_)
        | Error::InvalidSpectrum(_)
        | Error::UnsupportedDomain(_)
        | Error::TableInconsistency(_)
        | Error::InvalidGroup(_)
        | Error::NonInvertible(_) => LsStatus::Domain,
        Error::BlowupCap { .. } | Error::DenseCap { .. } | Error::Overflow(_) => LsStatus::Cap,
        Error::BoundViolation(_) => LsStatus::BoundViolation,
        Error::NumericalInstability(_) | Error::IllConditioned(_) => LsStatus::Numerical,
    }
}

struct Fail(LsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn invalid(msg: &str) -> Fail {
    Fail(LsStatus::InvalidArgument, msg.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LsStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            LsStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(invalid("null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid("string is not UTF-8"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(invalid("null output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(invalid("null output pointer"));
    }
    *out = CString::new(s).map_err(|_| invalid("interior NUL"))?.into_raw();
    Ok(())
}

fn to_json(v: impl serde::Serialize) -> Result<String, Fail> {
    serde_json::to_string(&v).map_err(|e| Fail(LsStatus::Internal, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| invalid("null handle"))
}

/// Message for the most recent failure on this thread, or NULL. Do not free.
#[no_mangle]
pub extern "C" fn ls_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ls_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ls_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a spectrum from JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ls_spectrum_from_json(json: *const c_char, out: *mut *mut LsSpectrum) -> LsStatus {
    guard(|| {
        let s = JordanSpectrum::from_json_str(read_str(json)?)?;
        put(out, LsSpectrum(s))
    })
}

/// # Safety
/// `s` must be NULL or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn ls_spectrum_free(s: *mut LsSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Spectrum of the Kronecker product, stopping with `LS_STATUS_CAP` beyond `cap` distinct blocks.
///
/// # Safety
/// `a` and `b` must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ls_spectrum_tensor(
    a: *const LsSpectrum,
    b: *const LsSpectrum,
    cap: usize,
    out: *mut *mut LsSpectrum,
) -> LsStatus {
    guard(|| {
        let t = handle(a)?.0.tensor_capped(&handle(b)?.0, cap)?;
        put(out, LsSpectrum(t))
    })
}

/// Serializes the spectrum to JSON.
///
/// # Safety
/// `s` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ls_spectrum_to_json(s: *const LsSpectrum, out: *mut *mut c_char) -> LsStatus {
    guard(|| put_string(out, to_json(handle(s)?.0.to_json())?))
}

/// Dimension, eigenvalue-1 fraction, block fractions and distance to the identity, as JSON.
///
/// # Safety
/// `s` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ls_spectrum_stats(s: *const LsSpectrum, out: *mut *mut c_char) -> LsStatus {
    guard(|| put_string(out, to_json(handle(s)?.0.stats().to_json())?))
}

/// Parses a measure from JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ls_measure_from_json(json: *const c_char, out: *mut *mut LsMeasure) -> LsStatus {
    guard(|| {
        let m = SpectralMeasure::from_json_str(read_str(json)?)?;
        put(out, LsMeasure(m))
    })
}

/// # Safety
/// `m` must be NULL or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn ls_measure_free(m: *mut LsMeasure) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Exact mass of the `n`-fold convolution at the identity, as `"p/q"`.
///
/// # Safety
/// `m` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ls_measure_return_probability(
    m: *const LsMeasure,
    n: u64,
    out: *mut *mut c_char,
) -> LsStatus {
    guard(|| {
        let v = handle(m)?.0.convolution_power(n)?.mass_at_identity();
        put_string(out, exact::fmt_rational(&v))
    })
}

/// Parses and validates a character table from JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ls_table_from_json(json: *const c_char, out: *mut *mut LsTable) -> LsStatus {
    guard(|| {
        let t = CharacterTable::from_json_str(read_str(json)?)?;
        put(out, LsTable(t))
    })
}

/// Built-in table by name (`S3`, `Q8`, `D4`, `A4`, `S4`, `Z<n>`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ls_table_builtin(name: *const c_char, out: *mut *mut LsTable) -> LsStatus {
    guard(|| put(out, LsTable(groups::builtin(read_str(name)?)?)))
}

/// Table of the abelian group with the given cyclic factors.
///
/// # Safety
/// `factors` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ls_table_abelian(factors: *const u64, len: usize, out: *mut *mut LsTable) -> LsStatus {
    guard(|| {
        if factors.is_null() && len > 0 {
            return Err(invalid("null factor array"));
        }
        let f = if len == 0 { &[][..] } else { std::slice::from_raw_parts(factors, len) };
        put(out, LsTable(groups::table_for_abelian(f)?))
    })
}

/// # Safety
/// `t` must be NULL or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn ls_table_free(t: *mut LsTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Optimal separation constant over the complex numbers with its witness, as JSON.
///
/// # Safety
/// `t` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ls_kappa_complex(t: *const LsTable, out: *mut *mut c_char) -> LsStatus {
    guard(|| {
        let r = groups::kappa_complex(&handle(t)?.0)?;
        put_string(out, to_json(r.to_json())?)
    })
}

/// Regular-representation constant over `F_p` for a multiplication table given as JSON.
///
/// # Safety
/// `mult_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ls_kappa_modp(mult_json: *const c_char, p: u64, out: *mut *mut c_char) -> LsStatus {
    guard(|| {
        let g = MultTable::from_json_str(read_str(mult_json)?)?;
        let r = groups::kappa_modp_regular(&g, p)?;
        put_string(out, to_json(r.to_json())?)
    })
}

/// Planned iteration counts for targets given as `"p/q"` strings, as JSON.
///
/// # Safety
/// Both strings must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ls_plan(
    epsilon: *const c_char,
    delta: *const c_char,
    c2: f64,
    out: *mut *mut c_char,
) -> LsStatus {
    guard(|| {
        let mut params = PlanParams::new(
            exact::parse_rational(read_str(epsilon)?)?,
            exact::parse_rational(read_str(delta)?)?,
        );
        params.c2 = c2;
        put_string(out, to_json(planner::plan(&params)?.to_json())?)
    })
}

/// `int_a^b sin(nt)/sin(t) dt` by the exact recursion.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ls_integral(n: i64, a: f64, b: f64, out: *mut f64) -> LsStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(invalid("limits must be finite"));
        }
        *out = genfunc::integral_in(n, a, b);
        Ok(())
    })
}

//! C ABI over `trisqrt`.
//!
//! Handles are opaque pointers owned by the caller and released with the matching `_free`.
//! Every entry point returns a [`TrisqrtStatus`]; on failure the message is available from
//! [`trisqrt_last_error`] on the same thread. Strings returned by the library are NUL-terminated
//! and owned by the handle they came from unless documented otherwise.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;
use trisqrt::arith::{hensel_unit_root, IntRing};
use trisqrt::measures::{verify, EpSign, VerifyConfig, VerifyReport};
use trisqrt::modforms::delta;
use trisqrt::qexp::QExp;
use trisqrt::Error;

/// Result codes. Values are stable.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrisqrtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    BufferTooSmall = 3,
    InvalidInput = 10,
    NotOrdinary = 11,
    NonSplitField = 12,
    RingMismatch = 13,
    InsufficientPrecision = 14,
    SingularSystem = 15,
    PrecisionExhausted = 16,
    WeightTooSmall = 17,
    IrreducibleDegreeTooHigh = 18,
    UncertifiedFactorization = 19,
    NotAField = 20,
    DivisionByNonUnit = 21,
    ClosureViolation = 22,
    Panic = 99,
}

impl From<&Error> for TrisqrtStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidInput(_) => TrisqrtStatus::InvalidInput,
            Error::NotOrdinary(_) => TrisqrtStatus::NotOrdinary,
            Error::NonSplitField(_) => TrisqrtStatus::NonSplitField,
            Error::RingMismatch(_) => TrisqrtStatus::RingMismatch,
            Error::InsufficientPrecision { .. } => TrisqrtStatus::InsufficientPrecision,
            Error::SingularSystem(_) => TrisqrtStatus::SingularSystem,
            Error::PrecisionExhausted(_) => TrisqrtStatus::PrecisionExhausted,
            Error::WeightTooSmall(_) => TrisqrtStatus::WeightTooSmall,
            Error::IrreducibleDegreeTooHigh(_) => TrisqrtStatus::IrreducibleDegreeTooHigh,
            Error::UncertifiedFactorization(_) => TrisqrtStatus::UncertifiedFactorization,
            Error::NotAField(_) => TrisqrtStatus::NotAField,
            Error::DivisionByNonUnit(_) => TrisqrtStatus::DivisionByNonUnit,
            Error::ClosureViolation(_) => TrisqrtStatus::ClosureViolation,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn fail(status: TrisqrtStatus, msg: impl Into<String>) -> TrisqrtStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> TrisqrtStatus) -> TrisqrtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(TrisqrtStatus::Panic, "internal panic"),
    }
}

fn from_error(e: &Error) -> TrisqrtStatus {
    fail(e.into(), e.to_string())
}

/// Copy `s` with a NUL into `buf[..len]`; `*needed` receives the required size.
unsafe fn write_str(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> TrisqrtStatus {
    if !needed.is_null() {
        *needed = s.len() + 1;
    }
    if buf.is_null() || len < s.len() + 1 {
        return fail(TrisqrtStatus::BufferTooSmall, format!("need {} bytes", s.len() + 1));
    }
    ptr::copy_nonoverlapping(s.as_ptr() as *const c_char, buf, s.len());
    *buf.add(s.len()) = 0;
    TrisqrtStatus::Ok
}

/// Message of the last failure on this thread; valid until the next failing call.
#[no_mangle]
pub extern "C" fn trisqrt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version string (static).
#[no_mangle]
pub extern "C" fn trisqrt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

// --- configuration ---------------------------------------------------------------------------

/// Opaque evaluation point (p, M, k, l, m, form, E_p sign).
pub struct TrisqrtConfig(VerifyConfig);

/// New configuration; the form index defaults to 0 and the E_p sign to minus.
#[no_mangle]
pub extern "C" fn trisqrt_config_new(p: u64, precision: u32, k: u32, l: u32, m: u32, out: *mut *mut TrisqrtConfig) -> TrisqrtStatus {
    guard(|| {
        if out.is_null() {
            return fail(TrisqrtStatus::NullPointer, "out is null");
        }
        let cfg = VerifyConfig { p, precision, k, l, m, ..VerifyConfig::default() };
        if let Err(e) = cfg.validate() {
            return from_error(&e);
        }
        unsafe { *out = Box::into_raw(Box::new(TrisqrtConfig(cfg))) };
        TrisqrtStatus::Ok
    })
}

#[no_mangle]
pub extern "C" fn trisqrt_config_set_form(cfg: *mut TrisqrtConfig, index: usize) -> TrisqrtStatus {
    guard(|| match unsafe { cfg.as_mut() } {
        Some(c) => {
            c.0.form = index;
            TrisqrtStatus::Ok
        }
        None => fail(TrisqrtStatus::NullPointer, "config is null"),
    })
}

/// `plus` nonzero selects the flipped sign of the α_2 a_p p^{−k} term.
#[no_mangle]
pub extern "C" fn trisqrt_config_set_ep_sign(cfg: *mut TrisqrtConfig, plus: i32) -> TrisqrtStatus {
    guard(|| match unsafe { cfg.as_mut() } {
        Some(c) => {
            c.0.ep_sign = if plus != 0 { EpSign::Plus } else { EpSign::Minus };
            TrisqrtStatus::Ok
        }
        None => fail(TrisqrtStatus::NullPointer, "config is null"),
    })
}

#[no_mangle]
pub extern "C" fn trisqrt_config_free(cfg: *mut TrisqrtConfig) {
    if !cfg.is_null() {
        drop(unsafe { Box::from_raw(cfg) });
    }
}

// --- verification ----------------------------------------------------------------------------

/// Opaque verification report.
pub struct TrisqrtReport {
    report: VerifyReport,
    json: CString,
}

/// Run both sides at `cfg`. On failure `*out` is left null and the message names the stage.
#[no_mangle]
pub extern "C" fn trisqrt_verify(cfg: *const TrisqrtConfig, out: *mut *mut TrisqrtReport) -> TrisqrtStatus {
    guard(|| {
        let Some(c) = (unsafe { cfg.as_ref() }) else { return fail(TrisqrtStatus::NullPointer, "config is null") };
        if out.is_null() {
            return fail(TrisqrtStatus::NullPointer, "out is null");
        }
        unsafe { *out = ptr::null_mut() };
        match verify(&c.0) {
            Ok(report) => {
                let json = CString::new(serde_json::to_string(&report).unwrap()).unwrap();
                unsafe { *out = Box::into_raw(Box::new(TrisqrtReport { report, json })) };
                TrisqrtStatus::Ok
            }
            Err(e) => fail((&e.error).into(), format!("{}: {}", e.stage, e.error)),
        }
    })
}

/// 1 if D ≡ H(P)·K(P)·ρ at the stated precision, 0 if not, −1 on a null handle.
#[no_mangle]
pub extern "C" fn trisqrt_report_verdict(r: *const TrisqrtReport) -> i32 {
    match unsafe { r.as_ref() } {
        Some(r) => r.report.verdict as i32,
        None => -1,
    }
}

/// The full report as JSON (schema 1); owned by the report.
#[no_mangle]
pub extern "C" fn trisqrt_report_json(r: *const TrisqrtReport) -> *const c_char {
    match unsafe { r.as_ref() } {
        Some(r) => r.json.as_ptr(),
        None => ptr::null(),
    }
}

#[no_mangle]
pub extern "C" fn trisqrt_report_free(r: *mut TrisqrtReport) {
    if !r.is_null() {
        drop(unsafe { Box::from_raw(r) });
    }
}

// --- q-expansions ----------------------------------------------------------------------------

/// Opaque integer q-expansion.
pub struct TrisqrtQExp(QExp<IntRing>);

/// Δ to `n_max` terms.
#[no_mangle]
pub extern "C" fn trisqrt_qexp_delta(n_max: usize, out: *mut *mut TrisqrtQExp) -> TrisqrtStatus {
    guard(|| {
        if out.is_null() {
            return fail(TrisqrtStatus::NullPointer, "out is null");
        }
        unsafe { *out = Box::into_raw(Box::new(TrisqrtQExp(delta(&IntRing, n_max).with_weight(Some(12))))) };
        TrisqrtStatus::Ok
    })
}

#[no_mangle]
pub extern "C" fn trisqrt_qexp_len(f: *const TrisqrtQExp) -> usize {
    unsafe { f.as_ref() }.map_or(0, |f| f.0.n_max() + 1)
}

/// Decimal string of a(n) into a caller buffer.
#[no_mangle]
pub extern "C" fn trisqrt_qexp_coeff(f: *const TrisqrtQExp, n: usize, buf: *mut c_char, len: usize, needed: *mut usize) -> TrisqrtStatus {
    guard(|| {
        let Some(f) = (unsafe { f.as_ref() }) else { return fail(TrisqrtStatus::NullPointer, "series is null") };
        if n > f.0.n_max() {
            return from_error(&Error::InsufficientPrecision { needed: n, have: f.0.n_max() });
        }
        unsafe { write_str(&f.0.coeff(n).to_string(), buf, len, needed) }
    })
}

#[no_mangle]
pub extern "C" fn trisqrt_qexp_free(f: *mut TrisqrtQExp) {
    if !f.is_null() {
        drop(unsafe { Box::from_raw(f) });
    }
}

// --- p-adic ----------------------------------------------------------------------------------

/// Unit root α_1 of X² − a_p X + p^{k−1} mod p^M, with a_p given in decimal.
#[no_mangle]
pub extern "C" fn trisqrt_hensel_unit_root(
    a_p: *const c_char,
    p: u64,
    k: u32,
    precision: u32,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> TrisqrtStatus {
    guard(|| {
        if a_p.is_null() {
            return fail(TrisqrtStatus::NullPointer, "a_p is null");
        }
        let Ok(s) = unsafe { CStr::from_ptr(a_p) }.to_str() else { return fail(TrisqrtStatus::InvalidUtf8, "a_p is not UTF-8") };
        let Ok(a) = s.trim().parse::<BigInt>() else { return from_error(&Error::InvalidInput(format!("a_p = {s:?}"))) };
        match hensel_unit_root(&a, p, k, precision) {
            Ok(u) => unsafe { write_str(&u.alpha1.to_string(), buf, len, needed) },
            Err(e) => from_error(&e),
        }
    })
}

//! C ABI for the nullcone library.
//!
//! Objects cross the boundary as opaque handles created by a `*_new` or
//! producer function and released with the matching `*_free`. Every
//! fallible function returns an [`NcStatus`]; on failure a description is
//! available from [`nc_last_error`] on the same thread. Strings handed out
//! by the library are NUL-terminated and belong to the caller, who releases
//! them with [`nc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nullcone::certificates::{certify, AraCertificate, CertifyOptions};
use nullcone::nullcones::{FamilyParams, Nullcone};
use nullcone::pointcount::{closed_count, enumerate, Space, StratumParams, StratumSpec};
use nullcone::polycore::{FieldSpec, PrimeField, Rationals};
use nullcone::Error;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BudgetExceeded = 3,
    ComputationFailed = 4,
    Panic = 5,
}

/// Matrix family of a nullcone ideal.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcFamily {
    Pfaffian = 0,
    Generic = 1,
    Symmetric = 2,
}

/// Closed-form numerics for one parameter point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NcFormulas {
    pub height: i64,
    pub ara: i64,
    pub invariant_ring_dim: i64,
    pub stci: bool,
}

enum AnyNullcone {
    Rational(Nullcone<Rationals>),
    Prime(Nullcone<PrimeField>),
}

/// Opaque nullcone ideal over a fixed coefficient field.
pub struct NcNullcone {
    inner: AnyNullcone,
    generators: Vec<String>,
}

/// Opaque arithmetic-rank certificate.
pub struct NcCertificate {
    inner: AraCertificate,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean = msg.replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(clean).unwrap_or_default());
}

fn status_of(e: &Error) -> NcStatus {
    match e {
        Error::ResourceLimit(_) | Error::BudgetExceeded { .. } => NcStatus::BudgetExceeded,
        Error::InvalidParams(_) | Error::Parse(_) => NcStatus::InvalidArgument,
        _ => NcStatus::ComputationFailed,
    }
}

fn guard(f: impl FnOnce() -> Result<(), NcStatus>) -> NcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NcStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            NcStatus::Panic
        }
    }
}

fn fail(e: Error) -> NcStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null(what: &str) -> NcStatus {
    set_error(&format!("{what} is null"));
    NcStatus::NullPointer
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, NcStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(&format!("{what} is not valid UTF-8"));
        NcStatus::InvalidArgument
    })
}

fn to_c_string(s: &str) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

fn family_params(family: NcFamily, m: usize, t: usize, n: usize) -> Result<FamilyParams, NcStatus> {
    let p = match family {
        NcFamily::Pfaffian => FamilyParams::pfaffian(t, n),
        NcFamily::Generic => FamilyParams::generic(m, t, n),
        NcFamily::Symmetric => FamilyParams::symmetric(t, n),
    };
    p.validate().map_err(fail)?;
    Ok(p)
}

fn exact_field(spec: &str) -> Result<FieldSpec, NcStatus> {
    match spec.parse::<FieldSpec>().map_err(fail)? {
        FieldSpec::ComplexFloat => {
            set_error("an exact field is required");
            Err(NcStatus::InvalidArgument)
        }
        f => Ok(f),
    }
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn nc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Height, arithmetic rank, invariant-ring dimension and the STCI flag.
///
/// # Safety
/// `out` must be null or point to writable memory for one `NcFormulas`.
#[no_mangle]
pub unsafe extern "C" fn nc_formulas(
    family: NcFamily,
    m: usize,
    t: usize,
    n: usize,
    out: *mut NcFormulas,
) -> NcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let f = family_params(family, m, t, n)?.formulas();
        *out = NcFormulas {
            height: f.height,
            ara: f.ara,
            invariant_ring_dim: f.invariant_ring_dim,
            stci: f.stci,
        };
        Ok(())
    })
}

/// Builds the nullcone ideal. `field` is `"rational"` or `"p=<prime>"`.
/// `m` is ignored outside the generic family.
///
/// # Safety
/// `field` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nc_nullcone_new(
    family: NcFamily,
    m: usize,
    t: usize,
    n: usize,
    field: *const c_char,
    out: *mut *mut NcNullcone,
) -> NcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = exact_field(read_str(field, "field")?)?;
        let params = family_params(family, m, t, n)?;
        let inner = match spec {
            FieldSpec::Rational => {
                AnyNullcone::Rational(Nullcone::build(Rationals, params).map_err(fail)?)
            }
            FieldSpec::Prime(p) => AnyNullcone::Prime(
                Nullcone::build(PrimeField::new(p).map_err(fail)?, params).map_err(fail)?,
            ),
            FieldSpec::ComplexFloat => unreachable!("rejected above"),
        };
        let generators = match &inner {
            AnyNullcone::Rational(nc) => nc
                .ideal
                .generators()
                .iter()
                .map(|g| g.to_string())
                .collect(),
            AnyNullcone::Prime(nc) => nc
                .ideal
                .generators()
                .iter()
                .map(|g| g.to_string())
                .collect(),
        };
        *out = Box::into_raw(Box::new(NcNullcone { inner, generators }));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from [`nc_nullcone_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nc_nullcone_free(h: *mut NcNullcone) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_nullcone_num_generators(
    h: *const NcNullcone,
    out: *mut usize,
) -> NcStatus {
    guard(|| {
        let (Some(h), false) = (h.as_ref(), out.is_null()) else {
            return Err(null("handle or out"));
        };
        *out = h.generators.len();
        Ok(())
    })
}

/// Generator `index` in the library's text format, as a new string.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_nullcone_generator(
    h: *const NcNullcone,
    index: usize,
    out: *mut *mut c_char,
) -> NcStatus {
    guard(|| {
        let (Some(h), false) = (h.as_ref(), out.is_null()) else {
            return Err(null("handle or out"));
        };
        let g = h.generators.get(index).ok_or_else(|| {
            set_error(&format!("generator index {index} out of range"));
            NcStatus::InvalidArgument
        })?;
        *out = to_c_string(g);
        Ok(())
    })
}

/// Height of the ideal from a Gröbner basis.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_nullcone_height(h: *const NcNullcone, out: *mut i64) -> NcStatus {
    guard(|| {
        let (Some(h), false) = (h.as_ref(), out.is_null()) else {
            return Err(null("handle or out"));
        };
        *out = match &h.inner {
            AnyNullcone::Rational(nc) => nc.ideal.height(),
            AnyNullcone::Prime(nc) => nc.ideal.height(),
        }
        .map_err(fail)?;
        Ok(())
    })
}

/// Samples and verifies an arithmetic-rank certificate with the formula's
/// number of generators.
///
/// # Safety
/// `field` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nc_certify(
    family: NcFamily,
    m: usize,
    t: usize,
    n: usize,
    field: *const c_char,
    seed: u64,
    out: *mut *mut NcCertificate,
) -> NcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = exact_field(read_str(field, "field")?)?;
        let params = family_params(family, m, t, n)?;
        let opts = CertifyOptions::default();
        let cert = match spec {
            FieldSpec::Prime(p) => certify(PrimeField::new(p).map_err(fail)?, params, seed, &opts),
            _ => certify(Rationals, params, seed, &opts),
        }
        .map_err(fail)?;
        *out = Box::into_raw(Box::new(NcCertificate {
            inner: cert.without_timing(),
        }));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from [`nc_certify`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nc_certificate_free(h: *mut NcCertificate) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_certificate_verified(
    h: *const NcCertificate,
    out: *mut bool,
) -> NcStatus {
    guard(|| {
        let (Some(h), false) = (h.as_ref(), out.is_null()) else {
            return Err(null("handle or out"));
        };
        *out = h.inner.verified;
        Ok(())
    })
}

/// The full certificate, with its transcript, as a JSON string.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_certificate_to_json(
    h: *const NcCertificate,
    out: *mut *mut c_char,
) -> NcStatus {
    guard(|| {
        let (Some(h), false) = (h.as_ref(), out.is_null()) else {
            return Err(null("handle or out"));
        };
        let text = serde_json::to_string(&h.inner).map_err(|e| {
            set_error(&e.to_string());
            NcStatus::ComputationFailed
        })?;
        *out = to_c_string(&text);
        Ok(())
    })
}

fn stratum(
    space: &str,
    m: usize,
    t: usize,
    n: usize,
    k: usize,
) -> Result<(Space, StratumParams), NcStatus> {
    Ok((
        space.parse::<Space>().map_err(fail)?,
        StratumParams::new(m, t, n, k),
    ))
}

/// Exhaustive point count of a stratum over 𝔽_q, e.g. `space = "Sp"`.
///
/// # Safety
/// `space` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nc_count_enumerate(
    space: *const c_char,
    m: usize,
    t: usize,
    n: usize,
    k: usize,
    q: u64,
    out: *mut u64,
) -> NcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let (space, params) = stratum(read_str(space, "space")?, m, t, n, k)?;
        let report = enumerate(&StratumSpec::new(space, params, q)).map_err(fail)?;
        *out = u64::try_from(&report.count).expect("enumerated counts fit the budget");
        Ok(())
    })
}

/// Closed-form count as a decimal string (the value may exceed 64 bits).
///
/// # Safety
/// `space` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nc_count_closed(
    space: *const c_char,
    m: usize,
    t: usize,
    n: usize,
    k: usize,
    q: u64,
    out: *mut *mut c_char,
) -> NcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let (space, params) = stratum(read_str(space, "space")?, m, t, n, k)?;
        let c = closed_count(space, params, q).map_err(fail)?;
        *out = to_c_string(&c.to_string());
        Ok(())
    })
}

/// Runs the command-line front end in-process. `argv` excludes the program
/// name. The record is written to `out` and the exit code to `exit_code`.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; `out` and
/// `exit_code` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nc_cli_run(
    argc: usize,
    argv: *const *const c_char,
    out: *mut *mut c_char,
    exit_code: *mut i32,
) -> NcStatus {
    guard(|| {
        if out.is_null() || exit_code.is_null() || (argc > 0 && argv.is_null()) {
            return Err(null("argv, out or exit_code"));
        }
        let mut args = vec!["nullcone".to_string()];
        for i in 0..argc {
            args.push(read_str(*argv.add(i), "argument")?.to_string());
        }
        let inv = nullcone::cli::run(args);
        let text = if inv.stdout.is_empty() {
            inv.stderr
        } else {
            inv.stdout
        };
        *out = to_c_string(&text);
        *exit_code = inv.code;
        Ok(())
    })
}

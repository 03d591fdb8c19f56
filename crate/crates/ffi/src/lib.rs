//! C ABI for `charcalc`.
//!
//! Pairs and diamonds are opaque handles released with their `_free`
//! function. Every call returns a [`CharcalcStatus`]; on failure
//! [`charcalc_last_error`] describes the problem. Strings handed out by the
//! library are released with [`charcalc_string_free`]. Exact rationals are
//! returned as `"p"` or `"p/q"` strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use charcalc::hodge::{self, HodgeDiamond};
use charcalc::rational::render;
use charcalc::sncpair::{self, SncPair};
use charcalc::{chow, symcalc, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharcalcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidTable = 4,
    ForbiddenMultiplicity = 5,
    Precondition = 6,
    Domain = 7,
    InvalidDiamond = 8,
    Internal = 9,
}

/// Opaque pair handle.
pub struct CharcalcPair(SncPair);

/// Opaque Hodge diamond handle.
pub struct CharcalcDiamond(HodgeDiamond);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CharcalcStatus {
    match e {
        Error::Parse(_) => CharcalcStatus::Parse,
        Error::InvalidTable(_) | Error::ModelInconsistency(_) | Error::InvalidModel(_) => {
            CharcalcStatus::InvalidTable
        }
        Error::ForbiddenMultiplicity { .. } => CharcalcStatus::ForbiddenMultiplicity,
        Error::Precondition(_) => CharcalcStatus::Precondition,
        Error::InvalidDiamond(_) => CharcalcStatus::InvalidDiamond,
        Error::Domain(_) | Error::SymmetryViolation { .. } => CharcalcStatus::Domain,
    }
}

struct Failure(CharcalcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CharcalcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CharcalcStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            CharcalcStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(CharcalcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(CharcalcStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| Failure(CharcalcStatus::Internal, "embedded NUL".into()))?;
    out.write(c.into_raw());
    Ok(())
}

unsafe fn pair_ref<'a>(p: *const CharcalcPair) -> Result<&'a SncPair, Failure> {
    p.as_ref().map(|p| &p.0).ok_or_else(|| null("pair"))
}

unsafe fn diamond_ref<'a>(d: *const CharcalcDiamond) -> Result<&'a HodgeDiamond, Failure> {
    d.as_ref().map(|d| &d.0).ok_or_else(|| null("diamond"))
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn charcalc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn charcalc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a stratum-table JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn charcalc_pair_from_json(
    json: *const c_char,
    out: *mut *mut CharcalcPair,
) -> CharcalcStatus {
    guard(|| {
        let pair = sncpair::parse_pair(read_str(json, "json")?)?;
        write_out(out, Box::into_raw(Box::new(CharcalcPair(pair))))
    })
}

/// The pair `(CP^r, sum m_j H_j + m_inf H_inf)`.
///
/// # Safety
/// `mults` must point to `s` values (may be null when `s == 0`); `out` writable.
#[no_mangle]
pub unsafe extern "C" fn charcalc_pair_cp(
    r: u32,
    s: u32,
    d: i64,
    mults: *const i64,
    out: *mut *mut CharcalcPair,
) -> CharcalcStatus {
    guard(|| {
        let mults: &[i64] = if s == 0 {
            &[]
        } else if mults.is_null() {
            return Err(null("mults"));
        } else {
            std::slice::from_raw_parts(mults, s as usize)
        };
        let (_, pair) = sncpair::cp_pair(r, s, d, mults)?;
        write_out(out, Box::into_raw(Box::new(CharcalcPair(pair))))
    })
}

/// # Safety
/// `pair` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn charcalc_pair_free(pair: *mut CharcalcPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Number of divisor components.
///
/// # Safety
/// `pair` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn charcalc_pair_num_components(
    pair: *const CharcalcPair,
    out: *mut usize,
) -> CharcalcStatus {
    guard(|| write_out(out, pair_ref(pair)?.components().len()))
}

/// Weighted Euler characteristic as a rational string.
///
/// # Safety
/// `pair` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn charcalc_pair_chi_d(
    pair: *const CharcalcPair,
    out: *mut *mut c_char,
) -> CharcalcStatus {
    guard(|| write_string(out, render(&sncpair::chi_d(pair_ref(pair)?)?)))
}

/// Blows up the center. `out_equal` receives whether the weighted Euler
/// characteristic is unchanged and `out_m0` the exceptional multiplicity.
///
/// # Safety
/// `pair` must be a live handle; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn charcalc_pair_blowup_check(
    pair: *const CharcalcPair,
    out_equal: *mut bool,
    out_m0: *mut i64,
) -> CharcalcStatus {
    guard(|| {
        let report = sncpair::check_blowup_invariance(pair_ref(pair)?)?;
        write_out(out_equal, report.equal)?;
        write_out(out_m0, report.m0)
    })
}

/// Blown-up pair as a new handle.
///
/// # Safety
/// `pair` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn charcalc_pair_blowup(
    pair: *const CharcalcPair,
    out: *mut *mut CharcalcPair,
) -> CharcalcStatus {
    guard(|| {
        let blown = sncpair::blowup_transform(pair_ref(pair)?)?;
        write_out(out, Box::into_raw(Box::new(CharcalcPair(blown.pair))))
    })
}

/// Checks the total-class identities for `1..=max_m` roots.
///
/// # Safety
/// `out_all_zero` must be writable.
#[no_mangle]
pub unsafe extern "C" fn charcalc_identities_check(
    max_m: usize,
    out_all_zero: *mut bool,
) -> CharcalcStatus {
    guard(|| {
        if max_m == 0 {
            return Err(Error::Domain("max_m must be at least 1".into()).into());
        }
        let mut ok = true;
        for m in 1..=max_m {
            ok &= symcalc::verify_prop_total_class(m)?.all_zero();
            ok &= symcalc::verify_prop2_total_class(m)?.all_zero();
        }
        write_out(out_all_zero, ok)
    })
}

/// `chi(CP^n, Omega^p(twist))` as a rational string.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn charcalc_hrr_chi_cp(
    n: usize,
    p: usize,
    twist: i64,
    out: *mut *mut c_char,
) -> CharcalcStatus {
    guard(|| {
        if n > 10 {
            return Err(Error::Domain(format!("n must be at most 10, got {n}")).into());
        }
        write_string(out, render(&chow::chi_twisted_hodge(n, p, twist)?))
    })
}

fn boxed(d: HodgeDiamond) -> *mut CharcalcDiamond {
    Box::into_raw(Box::new(CharcalcDiamond(d)))
}

/// Parses `{"n": .., "h": [[..], ..]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn charcalc_diamond_from_json(
    json: *const c_char,
    out: *mut *mut CharcalcDiamond,
) -> CharcalcStatus {
    guard(|| write_out(out, boxed(HodgeDiamond::from_json(read_str(json, "json")?)?)))
}

/// `point`, `cpN`, `elliptic`, `k3` or `quintic`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn charcalc_diamond_builtin(
    name: *const c_char,
    out: *mut *mut CharcalcDiamond,
) -> CharcalcStatus {
    guard(|| write_out(out, boxed(HodgeDiamond::builtin(read_str(name, "name")?)?)))
}

/// # Safety
/// `d` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn charcalc_diamond_free(d: *mut CharcalcDiamond) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// `b_k`, zero outside `0..=2n`.
///
/// # Safety
/// `d` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn charcalc_diamond_betti(
    d: *const CharcalcDiamond,
    k: i64,
    out: *mut u64,
) -> CharcalcStatus {
    guard(|| write_out(out, diamond_ref(d)?.betti(k)))
}

/// # Safety
/// `d` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn charcalc_diamond_euler(
    d: *const CharcalcDiamond,
    out: *mut i64,
) -> CharcalcStatus {
    guard(|| write_out(out, diamond_ref(d)?.euler_characteristic()))
}

/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn charcalc_diamond_blowup(
    x: *const CharcalcDiamond,
    y: *const CharcalcDiamond,
    codim: usize,
    out: *mut *mut CharcalcDiamond,
) -> CharcalcStatus {
    guard(|| {
        let d = hodge::blowup_diamond(diamond_ref(x)?, diamond_ref(y)?, codim)?;
        write_out(out, boxed(d))
    })
}

/// # Safety
/// `base` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn charcalc_diamond_bundle(
    base: *const CharcalcDiamond,
    fiber_dim: usize,
    out: *mut *mut CharcalcDiamond,
) -> CharcalcStatus {
    guard(|| {
        let d = hodge::projective_bundle_diamond(diamond_ref(base)?, fiber_dim)?;
        write_out(out, boxed(d))
    })
}

/// `sum_k (-1)^k k(n-k) b_k` as a rational string.
///
/// # Safety
/// `d` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn charcalc_diamond_correction(
    d: *const CharcalcDiamond,
    out: *mut *mut c_char,
) -> CharcalcStatus {
    guard(|| write_string(out, render(&hodge::correction_term(diamond_ref(d)?))))
}

/// # Safety
/// `d` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn charcalc_diamond_lambda_check(
    d: *const CharcalcDiamond,
    out: *mut bool,
) -> CharcalcStatus {
    guard(|| write_out(out, hodge::lambda_exponent_check(diamond_ref(d)?)))
}

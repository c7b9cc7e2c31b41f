//! C interface to `kruglov`.
//!
//! Distributions cross the boundary as opaque `KrDist` handles. Every
//! fallible call returns a `KrStatus`; on failure the message is available
//! from `kr_last_error` until the next call on the same thread. Strings
//! returned through `char **` out-parameters are owned by the caller and
//! must be released with `kr_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use kruglov::exactnum::Scalar;
use kruglov::operators::{h_m_dist, kruglov_dist, t_n_dist};
use kruglov::spaces::NormSpec;
use kruglov::verify::{self, Params, Verdict};
use kruglov::{DiscreteDistribution, Error};

/// Opaque handle to a discrete distribution.
pub struct KrDist(DiscreteDistribution);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KrStatus {
    Ok = 0,
    InvalidArgument = 1,
    NegativeEntry = 2,
    Inexact = 3,
    Budget = 4,
    TailMass = 5,
    Parse = 6,
    Io = 7,
    NullPointer = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KrVerdict {
    Pass = 0,
    Fail = 1,
    Inconclusive = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> KrStatus {
    match e {
        Error::InvalidArgument(_) => KrStatus::InvalidArgument,
        Error::NegativeEntry { .. } => KrStatus::NegativeEntry,
        Error::Inexact(_) => KrStatus::Inexact,
        Error::Budget(_) => KrStatus::Budget,
        Error::TailMass(_) => KrStatus::TailMass,
        Error::Parse(_) => KrStatus::Parse,
        Error::Io(_) => KrStatus::Io,
    }
}

struct Fail(KrStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(KrStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any error or panic, and maps it to a status.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> KrStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KrStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            KrStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(KrStatus::Parse, format!("{what} is not valid UTF-8")))
}

unsafe fn dist<'a>(p: *const KrDist) -> Result<&'a DiscreteDistribution, Fail> {
    p.as_ref().map(|d| &d.0).ok_or_else(|| null("distribution"))
}

unsafe fn put_dist(out: *mut *mut KrDist, d: DiscreteDistribution) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(KrDist(d)));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = CString::new(s)
        .map_err(|_| Fail(KrStatus::InvalidArgument, "string contains NUL".into()))?
        .into_raw();
    Ok(())
}

unsafe fn vector(p: *const c_char) -> Result<Vec<Scalar>, Fail> {
    let v = verify::parse_vectors(text(p, "vector")?)?;
    match <[_; 1]>::try_from(v) {
        Ok([a]) => Ok(a),
        Err(_) => Err(Fail(KrStatus::Parse, "expected exactly one vector".into())),
    }
}

/// Message of the last failed call on this thread; empty after success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn kr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn kr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Law of `T_n a` for `a` written as comma-separated rationals, e.g. `"1,2,1/3"`.
///
/// # Safety
/// `a` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kr_dist_t_n(a: *const c_char, out: *mut *mut KrDist) -> KrStatus {
    guard(|| put_dist(out, t_n_dist(&vector(a)?)?))
}

/// Law of `H_m a`.
///
/// # Safety
/// As for [`kr_dist_t_n`].
#[no_mangle]
pub unsafe extern "C" fn kr_dist_h_m(a: *const c_char, m: usize, out: *mut *mut KrDist) -> KrStatus {
    guard(|| put_dist(out, h_m_dist(&vector(a)?, m)?))
}

/// Law of `K` applied to a variable with law `mu`; truncated mass up to
/// `tail_tol` is carried in the result's tail.
///
/// # Safety
/// `mu` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kr_dist_kruglov(mu: *const KrDist, tail_tol: f64, out: *mut *mut KrDist) -> KrStatus {
    guard(|| put_dist(out, kruglov_dist(dist(mu)?, tail_tol)?))
}

/// Parses `{"atoms":[{"v":"1/2","m":"1/3"},...],"tail":0}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kr_dist_from_json(json: *const c_char, out: *mut *mut KrDist) -> KrStatus {
    guard(|| {
        let d: DiscreteDistribution =
            serde_json::from_str(text(json, "json")?).map_err(|e| Fail(KrStatus::Parse, e.to_string()))?;
        put_dist(out, d)
    })
}

/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kr_dist_to_json(d: *const KrDist, out: *mut *mut c_char) -> KrStatus {
    guard(|| {
        let s = serde_json::to_string(dist(d)?).map_err(|e| Fail(KrStatus::Io, e.to_string()))?;
        put_string(out, s)
    })
}

/// Number of atoms, or 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kr_dist_len(d: *const KrDist) -> usize {
    d.as_ref().map_or(0, |d| d.0.atoms().len())
}

/// Value and mass of atom `i` (ascending by value) as doubles.
///
/// # Safety
/// `d` must be a live handle; `value` and `mass` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn kr_dist_atom(d: *const KrDist, i: usize, value: *mut f64, mass: *mut f64) -> KrStatus {
    guard(|| {
        let a = dist(d)?
            .atoms()
            .get(i)
            .ok_or_else(|| Fail(KrStatus::InvalidArgument, format!("atom index {i} out of range")))?;
        if value.is_null() || mass.is_null() {
            return Err(null("output pointer"));
        }
        *value = a.value.to_f64();
        *mass = a.mass.to_f64();
        Ok(())
    })
}

/// Atom `i` as strings: exact rationals as `p/q`, inexact values as decimals.
///
/// # Safety
/// As for [`kr_dist_atom`].
#[no_mangle]
pub unsafe extern "C" fn kr_dist_atom_text(
    d: *const KrDist,
    i: usize,
    value: *mut *mut c_char,
    mass: *mut *mut c_char,
) -> KrStatus {
    guard(|| {
        let a = dist(d)?
            .atoms()
            .get(i)
            .ok_or_else(|| Fail(KrStatus::InvalidArgument, format!("atom index {i} out of range")))?;
        if value.is_null() || mass.is_null() {
            return Err(null("output pointer"));
        }
        put_string(value, a.value.to_string())?;
        put_string(mass, a.mass.to_string())
    })
}

/// Unrepresented mass, or NaN for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kr_dist_tail(d: *const KrDist) -> f64 {
    d.as_ref().map_or(f64::NAN, |d| d.0.tail())
}

/// Bracket `lower <= P(X > tau) <= upper`; `tau` is a rational string.
///
/// # Safety
/// `d` must be a live handle, `tau` a NUL-terminated string, `lower` and
/// `upper` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn kr_dist_ccdf(
    d: *const KrDist,
    tau: *const c_char,
    lower: *mut f64,
    upper: *mut f64,
) -> KrStatus {
    guard(|| {
        let t = Scalar::parse(text(tau, "tau")?)?;
        if lower.is_null() || upper.is_null() {
            return Err(null("output pointer"));
        }
        let (lo, hi) = dist(d)?.ccdf(&t);
        *lower = lo.to_f64();
        *upper = hi.to_f64();
        Ok(())
    })
}

/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kr_dist_mean(d: *const KrDist, out: *mut f64) -> KrStatus {
    guard(|| {
        let m = dist(d)?.mean().to_f64();
        out.as_mut().map(|o| *o = m).ok_or_else(|| null("output pointer"))
    })
}

/// Norm of the decreasing rearrangement of `d` in the space named by
/// `spec` (`l1`, `linf`, `explog`, `orlicz:p`, `lorentz:<gauge>`,
/// `marcinkiewicz:<gauge>`). Unrepresented mass is placed at zero, so the
/// result is a lower bound when the tail is positive.
///
/// # Safety
/// `d` must be a live handle, `spec` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn kr_norm(d: *const KrDist, spec: *const c_char, tol: f64, out: *mut f64) -> KrStatus {
    guard(|| {
        let s: NormSpec = text(spec, "spec")?.parse()?;
        let q = dist(d)?.quantile_tail_at_zero()?;
        let v = s.eval(&q, tol)?;
        out.as_mut().map(|o| *o = v).ok_or_else(|| null("output pointer"))
    })
}

/// Runs a verification claim (or `all`). `config` holds `key = value` lines
/// as accepted by the CLI's `--config`, or is null. On success `json`
/// receives the report (an array for `all`) and `verdict` the combined
/// verdict.
///
/// # Safety
/// `claim` must be a NUL-terminated string, `config` null or one, `json`
/// and `verdict` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn kr_run_claim(
    claim: *const c_char,
    config: *const c_char,
    json: *mut *mut c_char,
    verdict: *mut c_int,
) -> KrStatus {
    guard(|| {
        let id = text(claim, "claim")?;
        let params = if config.is_null() {
            Params::new()
        } else {
            Params::from_config_str(text(config, "config")?)?
        };
        let reports = verify::run(id, &params)?;
        let s = if id == "all" {
            serde_json::to_string(&reports)
        } else {
            serde_json::to_string(&reports[0])
        }
        .map_err(|e| Fail(KrStatus::Io, e.to_string()))?;
        if verdict.is_null() {
            return Err(null("verdict pointer"));
        }
        put_string(json, s)?;
        *verdict = match Verdict::exit_code(reports.iter().map(|r| &r.verdict)) {
            0 => KrVerdict::Pass,
            1 => KrVerdict::Fail,
            _ => KrVerdict::Inconclusive,
        } as c_int;
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn kr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `d` must be null or a handle returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn kr_dist_free(d: *mut KrDist) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

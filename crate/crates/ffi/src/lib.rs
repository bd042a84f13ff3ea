//! C ABI over the `roumieu` library.
//!
//! Objects cross the boundary as opaque handles created by `rm_*_new`,
//! `rm_*_parse` or `rm_*_from_spec` and released by the matching `rm_*_free`.
//! Every fallible call returns an [`RmStatus`]; on failure the message is
//! available from [`rm_last_error`] on the same thread until the next call.
//! Strings returned by the library are released with [`rm_string_free`].
//! Panics never cross the boundary; they surface as `RM_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use roumieu::calculus::{self, jet_eval, Expr};
use roumieu::cli::{to_report_json, CliError, ExperimentConfig};
use roumieu::integrability::{classify, parse_distribution, HarnessConfig, Ultradistribution};
use roumieu::rseq::{check_superadditivity, RSequence};
use roumieu::seminorms::r_norm_global;
use roumieu::weights::{check_m1, check_m2, check_m3, check_product_growth, gevrey, WeightSequence};
use roumieu::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Precondition = 3,
    Parse = 4,
    Evaluation = 5,
    /// Quadrature or another numerical method failed to converge.
    Numeric = 6,
    Utf8 = 7,
    Config = 8,
    Panic = 9,
}

/// Weight-sequence conditions understood by [`rm_weights_check`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RmCondition {
    /// Logarithmic convexity; the parameter is ignored.
    M1 = 0,
    /// Stability under differentiation; the parameter is the largest `H` tried.
    M2 = 1,
    /// Strong non-quasianalyticity; the parameter is `A`.
    M3 = 2,
    /// `M_p M_q ≤ M_{p+q}`; the parameter is ignored.
    ProductGrowth = 3,
}

/// Parsed test function.
pub struct RmExpr(Expr);
/// Weight sequence `(M_p)`.
pub struct RmWeights(WeightSequence);
/// Sequence `(r_p)` increasing to infinity.
pub struct RmRSeq(RSequence);
/// Finite sum of densities and derivatives of point masses.
pub struct RmDistribution(Ultradistribution);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RmStatus {
    match e {
        Error::InvalidArgument(_) => RmStatus::InvalidArgument,
        Error::Precondition(_) => RmStatus::Precondition,
        Error::Parse { .. } => RmStatus::Parse,
        Error::Evaluation { .. } => RmStatus::Evaluation,
        Error::Quadrature { .. } => RmStatus::Numeric,
    }
}

struct Failure(RmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        match e {
            CliError::Library(inner) => inner.into(),
            other => Failure(RmStatus::Config, other.to_string()),
        }
    }
}

/// Runs `f`, records any failure and converts panics into `RM_STATUS_PANIC`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RmStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {message}"));
            RmStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(RmStatus::NullPointer, format!("{what} is NULL"))
}

/// # Safety
/// `p` is NULL or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(RmStatus::Utf8, format!("{what} is not valid UTF-8")))
}

/// # Safety
/// `p` is NULL or points to a live handle.
unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `out` is NULL or writable.
unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(RmStatus::InvalidArgument, "string contains NUL".into()))?;
    put(out, c.into_raw(), "out")
}

/// Message of the last failed call on this thread, or NULL. Owned by the
/// library and valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn rm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is NULL or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an expression such as `mul(cutoff(1,2), sin(x))`.
///
/// # Safety
/// `text` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rm_expr_parse(text: *const c_char, out: *mut *mut RmExpr) -> RmStatus {
    guard(|| {
        let e = calculus::parse(read_str(text, "text")?)?;
        put(out, Box::into_raw(Box::new(RmExpr(e))), "out")
    })
}

/// # Safety
/// `e` is NULL or a live handle from [`rm_expr_parse`].
#[no_mangle]
pub unsafe extern "C" fn rm_expr_free(e: *mut RmExpr) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// `f(x)`.
///
/// # Safety
/// `e` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rm_expr_eval(e: *const RmExpr, x: f64, out: *mut f64) -> RmStatus {
    guard(|| {
        let v = handle(e, "expr")?.0.eval(x)?;
        put(out, v, "out")
    })
}

/// Writes `f^{(0)}(x), …, f^{(k)}(x)` into `out[0..=k]`; `len` must be at least `k + 1`.
///
/// # Safety
/// `e` is a live handle; `out` points to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn rm_expr_derivatives(e: *const RmExpr, x: f64, k: usize, out: *mut f64, len: usize) -> RmStatus {
    guard(|| {
        let f = handle(e, "expr")?;
        if out.is_null() {
            return Err(null("out"));
        }
        if len < k.saturating_add(1) {
            return Err(Failure(RmStatus::InvalidArgument, format!("buffer of {len} holds fewer than {} values", k + 1)));
        }
        let d = jet_eval(&f.0, x, k)?.derivatives();
        ptr::copy_nonoverlapping(d.as_ptr(), out, d.len());
        Ok(())
    })
}

/// Canonical text of the expression; free with [`rm_string_free`].
///
/// # Safety
/// `e` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rm_expr_to_string(e: *const RmExpr, out: *mut *mut c_char) -> RmStatus {
    guard(|| put_string(out, handle(e, "expr")?.0.to_string()))
}

/// `M_p = (p!)^s` for `p ≤ horizon`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rm_weights_gevrey(s: f64, horizon: usize, out: *mut *mut RmWeights) -> RmStatus {
    guard(|| {
        let w = gevrey(s, horizon)?;
        put(out, Box::into_raw(Box::new(RmWeights(w))), "out")
    })
}

/// # Safety
/// `w` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rm_weights_free(w: *mut RmWeights) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Checks one condition at the horizon.
///
/// # Safety
/// `w` is a live handle; `holds` is writable.
#[no_mangle]
pub unsafe extern "C" fn rm_weights_check(w: *const RmWeights, condition: RmCondition, param: f64, holds: *mut bool) -> RmStatus {
    guard(|| {
        let w = &handle(w, "weights")?.0;
        let witness = match condition {
            RmCondition::M1 => check_m1(w),
            RmCondition::ProductGrowth => check_product_growth(w),
            RmCondition::M3 => check_m3(w, param)?,
            RmCondition::M2 => {
                if !(param.is_finite() && param >= 1.0) {
                    return Err(Failure(RmStatus::InvalidArgument, format!("largest H must be at least 1, got {param}")));
                }
                let grid: Vec<f64> = std::iter::successors(Some(1.0), |h| Some(h * 2.0))
                    .take_while(|h| *h < param)
                    .chain(std::iter::once(param))
                    .collect();
                check_m2(w, &grid)?
            }
        };
        put(holds, witness.holds, "holds")
    })
}

/// Parses `linear:c`, `affine:c,d`, `power:e` or `list:…`.
///
/// # Safety
/// `spec` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rm_rseq_from_spec(spec: *const c_char, horizon: usize, out: *mut *mut RmRSeq) -> RmStatus {
    guard(|| {
        let r = RSequence::from_spec(read_str(spec, "spec")?, horizon)?;
        put(out, Box::into_raw(Box::new(RmRSeq(r))), "out")
    })
}

/// # Safety
/// `r` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rm_rseq_free(r: *mut RmRSeq) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// `R_p R_q ≤ R_{p+q}` for all `p + q ≤ P`.
///
/// # Safety
/// `r` is a live handle; `holds` is writable.
#[no_mangle]
pub unsafe extern "C" fn rm_rseq_superadditive(r: *const RmRSeq, holds: *mut bool) -> RmStatus {
    guard(|| put(holds, check_superadditivity(&handle(r, "rseq")?.0).holds, "holds"))
}

/// `‖f‖_{(r_p)}` over a grid covering the support of `f`.
///
/// # Safety
/// All handles are live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rm_r_norm(
    e: *const RmExpr,
    r: *const RmRSeq,
    w: *const RmWeights,
    k_max: usize,
    out: *mut f64,
) -> RmStatus {
    guard(|| {
        let rep = r_norm_global(&handle(e, "expr")?.0, None, &handle(r, "rseq")?.0, &handle(w, "weights")?.0, k_max)?;
        put(out, rep.value, "out")
    })
}

/// Parses a distribution such as `gaussian + atom(0, 1, complex(1, 2))`.
///
/// # Safety
/// `text` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rm_dist_parse(text: *const c_char, out: *mut *mut RmDistribution) -> RmStatus {
    guard(|| {
        let t = parse_distribution(read_str(text, "text")?)?;
        put(out, Box::into_raw(Box::new(RmDistribution(t))), "out")
    })
}

/// # Safety
/// `t` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rm_dist_free(t: *mut RmDistribution) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// `⟨T, φ⟩` as real and imaginary parts.
///
/// # Safety
/// Handles are live; `re` and `im` are writable.
#[no_mangle]
pub unsafe extern "C" fn rm_dist_pair(t: *const RmDistribution, phi: *const RmExpr, re: *mut f64, im: *mut f64) -> RmStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let z = handle(t, "distribution")?.0.pair(&handle(phi, "phi")?.0)?;
        put(re, z.re, "re")?;
        put(im, z.im, "im")
    })
}

/// Runs the five-condition harness and returns the JSON report.
///
/// `config` is NULL for the standard settings or the text of an experiment
/// file (its distribution, if any, is ignored). Free the result with
/// [`rm_string_free`].
///
/// # Safety
/// `t` is a live handle; `config` is NULL or NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rm_classify_json(t: *const RmDistribution, config: *const c_char, out: *mut *mut c_char) -> RmStatus {
    guard(|| {
        let t = handle(t, "distribution")?;
        let harness = if config.is_null() {
            HarnessConfig::standard()?
        } else {
            ExperimentConfig::parse(read_str(config, "config")?, "<config>", Path::new("."), "ffi")?.harness
        };
        let report = classify(&t.0, &harness)?;
        put_string(out, to_report_json(&report))
    })
}

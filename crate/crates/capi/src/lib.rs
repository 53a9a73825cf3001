//! C ABI for the certification toolkit.
//!
//! Conventions: every function returns an [`FcStatus`]; outputs go through
//! pointers. Claim runs hand back an opaque `FcReport` handle that must be
//! released with [`fc_report_free`]; JSON strings from
//! [`fc_report_json`] must be released with [`fc_string_free`]. All entry
//! points catch panics and map them to `FC_STATUS_NUMERIC_ERROR`.

use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fc_core::certify;
use fc_core::functional;
use fc_core::gaussfn::{self, EvalMode};
use fc_core::manifest;
use fc_core::report::{self, ClaimReport, Verdict};
use fc_core::rint::Interval;

/// Status and verdict codes shared by every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcStatus {
    /// Success; for claim verdicts: certified.
    FcStatusOk = 0,
    /// Claim verdict: failed.
    FcStatusFailed = 1,
    /// Claim verdict: not reached (caps hit or fast mode).
    FcStatusNotReached = 2,
    /// Bad pointer, unknown name, or invalid numeric input.
    FcStatusInvalidArgument = 3,
    /// Evaluation error (domain violation, singular correlation, ...).
    FcStatusNumericError = 4,
}

/// Closed interval with finite endpoints.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FcInterval {
    pub lo: f64,
    pub hi: f64,
}

impl From<Interval> for FcInterval {
    fn from(iv: Interval) -> FcInterval {
        FcInterval { lo: iv.lo(), hi: iv.hi() }
    }
}

/// Opaque claim report handle.
pub struct FcReport {
    inner: ClaimReport,
}

fn mode_of(certified: c_int) -> EvalMode {
    if certified == 0 {
        EvalMode::Fast
    } else {
        EvalMode::Certified
    }
}

fn guard<T>(out: *mut T, f: impl FnOnce() -> Result<T, FcStatus>) -> FcStatus {
    if out.is_null() {
        return FcStatus::FcStatusInvalidArgument;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            unsafe { out.write(v) };
            FcStatus::FcStatusOk
        }
        Ok(Err(status)) => status,
        Err(_) => FcStatus::FcStatusNumericError,
    }
}

/// Enclosure of the standard normal upper tail over `[lo, hi]`.
///
/// # Safety
/// `out` must be a valid pointer to an `FcInterval`.
#[no_mangle]
pub unsafe extern "C" fn fc_normal_tail(lo: f64, hi: f64, out: *mut FcInterval) -> FcStatus {
    guard(out, || {
        let x = Interval::new(lo, hi).map_err(|_| FcStatus::FcStatusInvalidArgument)?;
        let t = x.normal_tail().map_err(|_| FcStatus::FcStatusNumericError)?;
        Ok(t.into())
    })
}

/// Orthant probability `f(beta, alpha)` at the given gamma.
///
/// # Safety
/// `out` must be a valid pointer to an `FcInterval`.
#[no_mangle]
pub unsafe extern "C" fn fc_f_eval(
    gamma: f64,
    beta: f64,
    alpha: f64,
    certified: c_int,
    out: *mut FcInterval,
) -> FcStatus {
    guard(out, || {
        let p = gaussfn::OrthantParams { gamma, beta, alpha };
        gaussfn::f_eval(&p, mode_of(certified))
            .map(Into::into)
            .map_err(|_| FcStatus::FcStatusNumericError)
    })
}

/// First-moment functional `F1(alpha)`.
///
/// # Safety
/// `out` must be a valid pointer to an `FcInterval`.
#[no_mangle]
pub unsafe extern "C" fn fc_f1_eval(
    gamma: f64,
    alpha: f64,
    certified: c_int,
    out: *mut FcInterval,
) -> FcStatus {
    guard(out, || {
        functional::f1_eval(gamma, alpha, mode_of(certified))
            .map(Into::into)
            .map_err(|_| FcStatus::FcStatusNumericError)
    })
}

/// Second-moment functional `F2(beta, alpha1, alpha2)`.
///
/// # Safety
/// `out` must be a valid pointer to an `FcInterval`.
#[no_mangle]
pub unsafe extern "C" fn fc_f2_eval(
    gamma: f64,
    beta: f64,
    alpha1: f64,
    alpha2: f64,
    certified: c_int,
    out: *mut FcInterval,
) -> FcStatus {
    guard(out, || {
        let p = functional::F2Point { beta, alpha1, alpha2, gamma };
        functional::f2_eval(&p, mode_of(certified))
            .map(Into::into)
            .map_err(|_| FcStatus::FcStatusNumericError)
    })
}

/// Fixed-point iteration to the critical point of `F1`; writes the
/// near-maximizer and the independently evaluated derivative residual.
///
/// # Safety
/// `alpha_star` and `residual` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn fc_fixed_point_alpha(
    gamma: f64,
    alpha0: f64,
    tol: f64,
    max_iter: usize,
    alpha_star: *mut f64,
    residual: *mut f64,
) -> FcStatus {
    if alpha_star.is_null() || residual.is_null() || tol <= 0.0 || tol.is_nan() {
        return FcStatus::FcStatusInvalidArgument;
    }
    match catch_unwind(|| functional::fixed_point_alpha(gamma, alpha0, tol, max_iter)) {
        Ok(Ok(fp)) => {
            unsafe {
                alpha_star.write(fp.alpha_star);
                residual.write(fp.residual);
            }
            FcStatus::FcStatusOk
        }
        Ok(Err(_)) => FcStatus::FcStatusNumericError,
        Err(_) => FcStatus::FcStatusNumericError,
    }
}

fn verdict_status(v: Verdict) -> FcStatus {
    match v {
        Verdict::Certified => FcStatus::FcStatusOk,
        Verdict::Failed => FcStatus::FcStatusFailed,
        Verdict::NotReached => FcStatus::FcStatusNotReached,
    }
}

fn boxed(report: ClaimReport) -> *mut FcReport {
    Box::into_raw(Box::new(FcReport { inner: report }))
}

/// Certify the bracket on the critical constant. Returns a handle or null.
#[no_mangle]
pub extern "C" fn fc_run_gamma_bounds(certified: c_int) -> *mut FcReport {
    catch_unwind(|| certify::certify_gamma_bounds(mode_of(certified)).ok().map(boxed))
        .ok()
        .flatten()
        .unwrap_or(std::ptr::null_mut())
}

/// Run one claim by name: "claim-b1", "claim-b2", "claim-b3" or "claim-b4".
/// `smoke != 0` uses the 50-segment subset for the sweep claims.
///
/// # Safety
/// `claim` must be a valid nul-terminated string or null.
#[no_mangle]
pub unsafe extern "C" fn fc_run_claim(
    claim: *const c_char,
    certified: c_int,
    parallelism: usize,
    smoke: c_int,
) -> *mut FcReport {
    if claim.is_null() {
        return std::ptr::null_mut();
    }
    let Ok(name) = unsafe { CStr::from_ptr(claim) }.to_str() else {
        return std::ptr::null_mut();
    };
    let name = name.to_string();
    let mode = mode_of(certified);
    catch_unwind(move || {
        let gamma = certify::default_gamma_window();
        let result = match name.as_str() {
            "claim-b1" => certify::certify_initial_interval(gamma, mode).ok(),
            "claim-b4" => certify::certify_hessian(gamma, mode).ok(),
            "claim-b2" | "claim-b3" => {
                let plans = if smoke != 0 {
                    manifest::bundled_smoke()
                } else if name == "claim-b2" {
                    manifest::bundled_b2()
                } else {
                    manifest::bundled_b3()
                };
                certify::certify_sweep(&plans, gamma, parallelism, false, &name, mode).ok()
            }
            _ => None,
        };
        result.map(boxed)
    })
    .ok()
    .flatten()
    .unwrap_or(std::ptr::null_mut())
}

/// Verdict of a finished claim run.
///
/// # Safety
/// `report` must be a live handle from a run function, or null.
#[no_mangle]
pub unsafe extern "C" fn fc_report_verdict(report: *const FcReport) -> FcStatus {
    if report.is_null() {
        return FcStatus::FcStatusInvalidArgument;
    }
    verdict_status(unsafe { &*report }.inner.verdict)
}

/// Number of segments checked by the run.
///
/// # Safety
/// `report` must be a live handle from a run function, or null.
#[no_mangle]
pub unsafe extern "C" fn fc_report_segments(report: *const FcReport) -> usize {
    if report.is_null() {
        return 0;
    }
    unsafe { &*report }.inner.segments_checked
}

/// Full report as a JSON document (schema fc-report/1); release with
/// `fc_string_free`.
///
/// # Safety
/// `report` must be a live handle from a run function, or null.
#[no_mangle]
pub unsafe extern "C" fn fc_report_json(report: *const FcReport) -> *mut c_char {
    if report.is_null() {
        return std::ptr::null_mut();
    }
    let json = report::to_json(&unsafe { &*report }.inner);
    CString::new(json).map(CString::into_raw).unwrap_or(std::ptr::null_mut())
}

/// Release a report handle.
///
/// # Safety
/// `report` must be a handle from a run function (released once) or null.
#[no_mangle]
pub unsafe extern "C" fn fc_report_free(report: *mut FcReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be a string returned by this library (released once) or null.
#[no_mangle]
pub unsafe extern "C" fn fc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Static version string; do not free.
#[no_mangle]
pub extern "C" fn fc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

#[cfg(test)]
#[allow(clippy::manual_c_str_literals)]
mod tests {
    use super::*;

    // every call below upholds the documented pointer contracts

    #[test]
    fn tail_through_the_abi() {
        let mut out = FcInterval { lo: 0.0, hi: 0.0 };
        let st = unsafe { fc_normal_tail(0.0, 0.0, &mut out) };
        assert_eq!(st, FcStatus::FcStatusOk);
        assert!(out.lo <= 0.5 && 0.5 <= out.hi);
        assert_eq!(
            unsafe { fc_normal_tail(2.0, 1.0, &mut out) },
            FcStatus::FcStatusInvalidArgument
        );
        assert_eq!(
            unsafe { fc_normal_tail(0.0, 0.0, std::ptr::null_mut()) },
            FcStatus::FcStatusInvalidArgument
        );
    }

    #[test]
    fn f_eval_and_errors() {
        let mut out = FcInterval { lo: 0.0, hi: 0.0 };
        let st = unsafe { fc_f_eval(0.2484195, 0.5, -0.445, 1, &mut out) };
        assert_eq!(st, FcStatus::FcStatusOk);
        assert!(out.lo > 0.37 && out.hi < 0.372);
        // singular correlation surfaces as a numeric error
        let st = unsafe { fc_f_eval(0.2484195, 1.0 - 1e-14, -0.445, 1, &mut out) };
        assert_eq!(st, FcStatus::FcStatusNumericError);
    }

    #[test]
    fn fixed_point_through_the_abi() {
        let mut a = 0.0;
        let mut r = 0.0;
        let st = unsafe { fc_fixed_point_alpha(0.2484195, -0.4, 1e-13, 300, &mut a, &mut r) };
        assert_eq!(st, FcStatus::FcStatusOk);
        assert!((a + 0.4451833).abs() < 1e-6);
        assert!(r < 1e-10);
    }

    #[test]
    fn report_lifecycle() {
        let report = fc_run_gamma_bounds(1);
        assert!(!report.is_null());
        unsafe {
            assert_eq!(fc_report_verdict(report), FcStatus::FcStatusOk);
            let json = fc_report_json(report);
            assert!(!json.is_null());
            let text = CStr::from_ptr(json).to_str().unwrap().to_string();
            assert!(text.contains("fc-report/1"));
            assert!(text.contains("certified"));
            fc_string_free(json);
            fc_report_free(report);
            // unknown claim name yields null
            let bad = fc_run_claim(b"claim-b9\0".as_ptr() as *const c_char, 1, 1, 1);
            assert!(bad.is_null());
        }
    }

    #[test]
    fn smoke_claim_through_the_abi() {
        unsafe {
            let report = fc_run_claim(b"claim-b3\0".as_ptr() as *const c_char, 1, 2, 1);
            assert!(!report.is_null());
            assert_eq!(fc_report_verdict(report), FcStatus::FcStatusOk);
            assert_eq!(fc_report_segments(report), 50);
            fc_report_free(report);
        }
    }

    #[test]
    fn header_was_generated() {
        let header = include_str!("../include/fc.h");
        for symbol in [
            "fc_normal_tail",
            "fc_run_gamma_bounds",
            "fc_report_json",
            "FcInterval",
            "FcStatus",
        ] {
            assert!(header.contains(symbol), "missing {symbol} in fc.h");
        }
    }
}

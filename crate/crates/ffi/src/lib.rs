//! C ABI for the beamnet library.
//!
//! Handles are opaque pointers created by `bn_*`-style constructors and
//! released with the matching `bn_*_free`; every fallible call returns a
//! [`BnStatus`] and writes its result through out-pointers. Angles are
//! radians and gains are linear, as in the Rust API. A human-readable
//! message for the most recent failure on the calling thread is available
//! via [`bn_last_error_message`].
//!
//! The generated header lands in `include/beamnet.h` at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use beamnet::capacity::{self, OutageConstraint, ThroughputResult};
use beamnet::error_models::OrientationErrorModel;
use beamnet::link::{self, NetworkParams};
use beamnet::patterns::RadiationPattern;
use beamnet::simulate::{simulate_success, SimConfig};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BnStatus {
    BnOk = 0,
    /// A required pointer argument was null.
    BnNullArgument = 1,
    /// A parameter violated its documented constraint.
    BnInvalidArgument = 2,
    /// Quadrature, root finding, or bracketing failed.
    BnNumericFailure = 3,
}

/// Opaque radiation pattern handle.
pub struct BnPattern(RadiationPattern);

/// Opaque orientation-error model handle.
pub struct BnErrorModel(OrientationErrorModel);

/// Opaque network-parameter handle.
pub struct BnParams(NetworkParams);

/// Throughput-style result (spatial throughput or transmission capacity).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BnThroughput {
    /// Successful transmissions per m^2.
    pub value: f64,
    /// Intensity achieving it, per m^2.
    pub lambda_star: f64,
    /// Success probability at `lambda_star`.
    pub p_s_at_star: f64,
    /// Beamwidth used, radians.
    pub omega: f64,
    /// 0 when the outage constraint is unattainable (value reported as 0).
    pub feasible: i32,
}

/// TC-maximizing beamwidth result.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BnMaximizer {
    /// Maximizing beamwidth, radians.
    pub omega_star: f64,
    /// 1 when the boundary condition promoted `omega* = 2 eps_max`.
    pub boundary: i32,
    /// 1 when the error cdf failed the concavity diagnostic.
    pub non_concave_warning: i32,
}

/// Monte Carlo estimate with its 95% Wilson interval.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BnSimEstimate {
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub replications: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid message").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn fail<E: std::fmt::Display>(status: BnStatus) -> impl FnOnce(E) -> BnStatus {
    move |e| {
        set_error(e.to_string());
        status
    }
}

/// Message for the most recent failure on this thread, or null when the
/// last call succeeded. Valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn bn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |c| c.as_ptr())
    })
}

fn guarded(body: impl FnOnce() -> BnStatus) -> BnStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => {
            if status == BnStatus::BnOk {
                LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            }
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            BnStatus::BnNumericFailure
        }
    }
}

/// Checks an out-pointer and writes through it.
unsafe fn write_out<T>(out: *mut T, value: T) -> BnStatus {
    if out.is_null() {
        set_error("null out pointer".to_string());
        return BnStatus::BnNullArgument;
    }
    unsafe { out.write(value) };
    BnStatus::BnOk
}

macro_rules! deref {
    ($ptr:expr) => {{
        let Some(r) = (unsafe { $ptr.as_ref() }) else {
            set_error(format!("null handle argument `{}`", stringify!($ptr)));
            return BnStatus::BnNullArgument;
        };
        &r.0
    }};
}

fn boxed_pattern(
    out: *mut *mut BnPattern,
    built: Result<RadiationPattern, beamnet::patterns::PatternError>,
) -> BnStatus {
    match built {
        Ok(p) => unsafe { write_out(out, Box::into_raw(Box::new(BnPattern(p)))) },
        Err(e) => fail(BnStatus::BnInvalidArgument)(e),
    }
}

/// Omni-directional pattern (unit gain everywhere).
///
/// # Safety
/// `out` must be a valid pointer; the returned handle must be released with
/// [`bn_pattern_free`].
#[no_mangle]
pub unsafe extern "C" fn bn_pattern_omni(out: *mut *mut BnPattern) -> BnStatus {
    guarded(|| boxed_pattern(out, Ok(RadiationPattern::omni())))
}

/// Ideal sector of beamwidth `omega` (radians) and sidelobe gain `g2`.
///
/// # Safety
/// See [`bn_pattern_omni`].
#[no_mangle]
pub unsafe extern "C" fn bn_pattern_ideal_sector(
    omega: f64,
    g2: f64,
    out: *mut *mut BnPattern,
) -> BnStatus {
    guarded(|| boxed_pattern(out, RadiationPattern::ideal_sector(omega, g2)))
}

/// Sector with a linear transition of width `gamma` (radians).
///
/// # Safety
/// See [`bn_pattern_omni`].
#[no_mangle]
pub unsafe extern "C" fn bn_pattern_transition_sector(
    omega: f64,
    gamma: f64,
    g2: f64,
    out: *mut *mut BnPattern,
) -> BnStatus {
    guarded(|| boxed_pattern(out, RadiationPattern::transition_sector(omega, gamma, g2)))
}

/// 3GPP-style sector; the mainlobe gain is solved for unit TRP.
///
/// # Safety
/// See [`bn_pattern_omni`].
#[no_mangle]
pub unsafe extern "C" fn bn_pattern_three_gpp_sector(
    omega: f64,
    g2: f64,
    out: *mut *mut BnPattern,
) -> BnStatus {
    guarded(|| boxed_pattern(out, RadiationPattern::three_gpp_sector(omega, g2)))
}

/// Linear power gain at angle `theta` (radians, any value; wrapped).
///
/// # Safety
/// `pattern` must be a live handle from a `bn_pattern_*` constructor.
#[no_mangle]
pub unsafe extern "C" fn bn_pattern_gain(
    pattern: *const BnPattern,
    theta: f64,
    out: *mut f64,
) -> BnStatus {
    guarded(|| {
        let p = deref!(pattern);
        unsafe { write_out(out, p.gain(theta)) }
    })
}

/// Numeric total-radiated-power integral (1 for every valid pattern).
///
/// # Safety
/// `pattern` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bn_pattern_trp(pattern: *const BnPattern, out: *mut f64) -> BnStatus {
    guarded(|| {
        let p = deref!(pattern);
        unsafe { write_out(out, p.trp()) }
    })
}

/// # Safety
/// `pattern` must come from a `bn_pattern_*` constructor and not already be
/// freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bn_pattern_free(pattern: *mut BnPattern) {
    if !pattern.is_null() {
        drop(unsafe { Box::from_raw(pattern) });
    }
}

fn boxed_error_model(
    out: *mut *mut BnErrorModel,
    built: Result<OrientationErrorModel, beamnet::error_models::ErrorModelError>,
) -> BnStatus {
    match built {
        Ok(m) => unsafe { write_out(out, Box::into_raw(Box::new(BnErrorModel(m)))) },
        Err(e) => fail(BnStatus::BnInvalidArgument)(e),
    }
}

/// Perfect orientation (no error).
///
/// # Safety
/// `out` must be valid; release the handle with [`bn_error_model_free`].
#[no_mangle]
pub unsafe extern "C" fn bn_error_zero(out: *mut *mut BnErrorModel) -> BnStatus {
    guarded(|| boxed_error_model(out, Ok(OrientationErrorModel::zero())))
}

/// Uniform absolute error on `[0, eps_max]`, `eps_max` in `(0, pi]`.
///
/// # Safety
/// See [`bn_error_zero`].
#[no_mangle]
pub unsafe extern "C" fn bn_error_uniform(eps_max: f64, out: *mut *mut BnErrorModel) -> BnStatus {
    guarded(|| boxed_error_model(out, OrientationErrorModel::uniform(eps_max)))
}

/// Exponential error with pre-truncation `mean`, truncated to `[0, pi]`.
///
/// # Safety
/// See [`bn_error_zero`].
#[no_mangle]
pub unsafe extern "C" fn bn_error_truncated_exponential(
    mean: f64,
    out: *mut *mut BnErrorModel,
) -> BnStatus {
    guarded(|| boxed_error_model(out, OrientationErrorModel::truncated_exponential(mean)))
}

/// Half-normal error with pre-truncation `mean`, truncated to `[0, pi]`.
///
/// # Safety
/// See [`bn_error_zero`].
#[no_mangle]
pub unsafe extern "C" fn bn_error_truncated_half_normal(
    mean: f64,
    out: *mut *mut BnErrorModel,
) -> BnStatus {
    guarded(|| boxed_error_model(out, OrientationErrorModel::truncated_half_normal(mean)))
}

/// Piecewise-exponential cdf with a dimple at `(a, b)` on `[0, pi]`.
///
/// # Safety
/// See [`bn_error_zero`].
#[no_mangle]
pub unsafe extern "C" fn bn_error_dimple(
    a: f64,
    b: f64,
    c1: f64,
    c2: f64,
    out: *mut *mut BnErrorModel,
) -> BnStatus {
    guarded(|| boxed_error_model(out, OrientationErrorModel::dimple(a, b, c1, c2)))
}

/// Cdf of the absolute error at `x` in `[0, pi]`.
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bn_error_cdf(
    model: *const BnErrorModel,
    x: f64,
    out: *mut f64,
) -> BnStatus {
    guarded(|| {
        let m = deref!(model);
        match m.cdf(x) {
            Ok(v) => unsafe { write_out(out, v) },
            Err(e) => fail(BnStatus::BnInvalidArgument)(e),
        }
    })
}

/// Density of the absolute error at `x` in `[0, pi]`.
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bn_error_pdf(
    model: *const BnErrorModel,
    x: f64,
    out: *mut f64,
) -> BnStatus {
    guarded(|| {
        let m = deref!(model);
        match m.pdf(x) {
            Ok(v) => unsafe { write_out(out, v) },
            Err(e) => fail(BnStatus::BnInvalidArgument)(e),
        }
    })
}

/// Least `x` with `F(x) >= q`, for `q` in `[0, 1]`.
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bn_error_quantile(
    model: *const BnErrorModel,
    q: f64,
    out: *mut f64,
) -> BnStatus {
    guarded(|| {
        let m = deref!(model);
        match m.quantile(q) {
            Ok(v) => unsafe { write_out(out, v) },
            Err(e) => fail(BnStatus::BnInvalidArgument)(e),
        }
    })
}

/// Concavity diagnostic: `is_concave` gets 1/0, `worst_slope` the largest
/// positive density slope found on the grid.
///
/// # Safety
/// `model` must be a live handle; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bn_error_is_concave_cdf(
    model: *const BnErrorModel,
    is_concave: *mut i32,
    worst_slope: *mut f64,
) -> BnStatus {
    guarded(|| {
        let m = deref!(model);
        let (ok, worst) = m.is_concave_cdf();
        let status = unsafe { write_out(is_concave, i32::from(ok)) };
        if status != BnStatus::BnOk {
            return status;
        }
        unsafe { write_out(worst_slope, worst) }
    })
}

/// # Safety
/// `model` must come from a `bn_error_*` constructor and not already be
/// freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bn_error_model_free(model: *mut BnErrorModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Network parameters: intensity `lambda` (per m^2), pair distance `d` (m),
/// pathloss exponent `alpha` (> 2), SINR threshold `beta` (linear), noise
/// power `eta` (W), transmit power `p_t` (W).
///
/// # Safety
/// `out` must be valid; release the handle with [`bn_params_free`].
#[no_mangle]
pub unsafe extern "C" fn bn_params_new(
    lambda: f64,
    d: f64,
    alpha: f64,
    beta: f64,
    eta: f64,
    p_t: f64,
    out: *mut *mut BnParams,
) -> BnStatus {
    guarded(
        || match NetworkParams::new(lambda, d, alpha, beta, eta, p_t) {
            Ok(p) => unsafe { write_out(out, Box::into_raw(Box::new(BnParams(p)))) },
            Err(e) => fail(BnStatus::BnInvalidArgument)(e),
        },
    )
}

/// # Safety
/// `params` must come from [`bn_params_new`] and not already be freed; null
/// is ignored.
#[no_mangle]
pub unsafe extern "C" fn bn_params_free(params: *mut BnParams) {
    if !params.is_null() {
        drop(unsafe { Box::from_raw(params) });
    }
}

/// Success probability of the typical transmission for any pattern/error
/// combination (closed form where available, quadrature otherwise).
///
/// # Safety
/// All handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bn_success_probability(
    params: *const BnParams,
    pattern: *const BnPattern,
    error: *const BnErrorModel,
    out: *mut f64,
) -> BnStatus {
    guarded(|| {
        let p = deref!(params);
        let pat = deref!(pattern);
        let err = deref!(error);
        match link::success_general(p, pat, err) {
            Ok(v) => unsafe { write_out(out, v) },
            Err(e) => fail(BnStatus::BnNumericFailure)(e),
        }
    })
}

/// Closed-form success probability with omni antennas.
///
/// # Safety
/// `params` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bn_success_omni(params: *const BnParams, out: *mut f64) -> BnStatus {
    guarded(|| {
        let p = deref!(params);
        unsafe { write_out(out, link::success_omni(p)) }
    })
}

fn throughput_out(r: ThroughputResult) -> BnThroughput {
    BnThroughput {
        value: r.value,
        lambda_star: r.lambda_star,
        p_s_at_star: r.p_s_at_star,
        omega: r.omega,
        feasible: i32::from(r.feasible),
    }
}

/// Closed-form spatial throughput with omni antennas.
///
/// # Safety
/// `params` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bn_tp_omni(params: *const BnParams, out: *mut BnThroughput) -> BnStatus {
    guarded(|| {
        let p = deref!(params);
        unsafe { write_out(out, throughput_out(capacity::tp_omni(p))) }
    })
}

/// Closed-form spatial throughput for an ideal sector without sidelobes.
///
/// # Safety
/// Handles must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bn_tp_sector_noside(
    params: *const BnParams,
    omega: f64,
    error: *const BnErrorModel,
    out: *mut BnThroughput,
) -> BnStatus {
    guarded(|| {
        let p = deref!(params);
        let err = deref!(error);
        match capacity::tp_sector_noside(p, omega, err) {
            Ok(r) => unsafe { write_out(out, throughput_out(r)) },
            Err(e) => fail(BnStatus::BnInvalidArgument)(e),
        }
    })
}

/// Numeric spatial throughput for any pattern (maximizes `lambda p_s`).
///
/// # Safety
/// Handles must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bn_tp_numeric(
    params: *const BnParams,
    pattern: *const BnPattern,
    error: *const BnErrorModel,
    out: *mut BnThroughput,
) -> BnStatus {
    guarded(|| {
        let p = deref!(params);
        let pat = deref!(pattern);
        let err = deref!(error);
        match capacity::tp_numeric(p, pat, err) {
            Ok(r) => unsafe { write_out(out, throughput_out(r)) },
            Err(e) => fail(BnStatus::BnNumericFailure)(e),
        }
    })
}

/// Closed-form transmission capacity with omni antennas at outage `p_e`.
///
/// # Safety
/// `params` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bn_tc_omni(
    params: *const BnParams,
    p_e: f64,
    out: *mut BnThroughput,
) -> BnStatus {
    guarded(|| {
        let p = deref!(params);
        match OutageConstraint::new(p_e) {
            Ok(outage) => unsafe { write_out(out, throughput_out(capacity::tc_omni(p, &outage))) },
            Err(e) => fail(BnStatus::BnInvalidArgument)(e),
        }
    })
}

/// Closed-form transmission capacity for an ideal sector without sidelobes.
/// Infeasible configurations return `feasible = 0` with zero value.
///
/// # Safety
/// Handles must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bn_tc_sector_noside(
    params: *const BnParams,
    omega: f64,
    error: *const BnErrorModel,
    p_e: f64,
    out: *mut BnThroughput,
) -> BnStatus {
    guarded(|| {
        let p = deref!(params);
        let err = deref!(error);
        let outage = match OutageConstraint::new(p_e) {
            Ok(o) => o,
            Err(e) => return fail(BnStatus::BnInvalidArgument)(e),
        };
        match capacity::tc_sector_noside(p, omega, err, &outage) {
            Ok(r) => unsafe { write_out(out, throughput_out(r)) },
            Err(e) => fail(BnStatus::BnInvalidArgument)(e),
        }
    })
}

/// Numeric transmission capacity for any pattern (inverts the success curve).
///
/// # Safety
/// Handles must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bn_tc_numeric(
    params: *const BnParams,
    pattern: *const BnPattern,
    error: *const BnErrorModel,
    p_e: f64,
    out: *mut BnThroughput,
) -> BnStatus {
    guarded(|| {
        let p = deref!(params);
        let pat = deref!(pattern);
        let err = deref!(error);
        let outage = match OutageConstraint::new(p_e) {
            Ok(o) => o,
            Err(e) => return fail(BnStatus::BnInvalidArgument)(e),
        };
        match capacity::tc_numeric(p, pat, err, &outage) {
            Ok(r) => unsafe { write_out(out, throughput_out(r)) },
            Err(e) => fail(BnStatus::BnNumericFailure)(e),
        }
    })
}

/// TC-maximizing beamwidth for an ideal sector without sidelobes; depends
/// only on the error model and the outage constraint.
///
/// # Safety
/// `error` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bn_tc_beamwidth_maximizer(
    error: *const BnErrorModel,
    p_e: f64,
    out: *mut BnMaximizer,
) -> BnStatus {
    guarded(|| {
        let err = deref!(error);
        let outage = match OutageConstraint::new(p_e) {
            Ok(o) => o,
            Err(e) => return fail(BnStatus::BnInvalidArgument)(e),
        };
        match capacity::tc_beamwidth_maximizer(err, &outage) {
            Ok(m) => unsafe {
                write_out(
                    out,
                    BnMaximizer {
                        omega_star: m.omega_star,
                        boundary: i32::from(m.boundary),
                        non_concave_warning: i32::from(m.non_concave_warning),
                    },
                )
            },
            Err(e) => fail(BnStatus::BnNumericFailure)(e),
        }
    })
}

/// Seeded Monte Carlo estimate of the typical-pair success probability on a
/// torus window of side `window` meters with `replications` samples.
/// Deterministic for a fixed seed.
///
/// # Safety
/// Handles must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bn_simulate_success(
    params: *const BnParams,
    pattern: *const BnPattern,
    error: *const BnErrorModel,
    window: f64,
    replications: u64,
    seed: u64,
    out: *mut BnSimEstimate,
) -> BnStatus {
    guarded(|| {
        let p = deref!(params);
        let pat = deref!(pattern);
        let err = deref!(error);
        let cfg = SimConfig::new(window, replications, seed);
        match simulate_success(p, pat, err, &cfg) {
            Ok(est) => unsafe {
                write_out(
                    out,
                    BnSimEstimate {
                        p_hat: est.p_hat,
                        ci_low: est.ci_low,
                        ci_high: est.ci_high,
                        replications: est.n,
                    },
                )
            },
            Err(e) => fail(BnStatus::BnInvalidArgument)(e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;
    use std::ptr;

    #[test]
    fn pattern_lifecycle_and_gain() {
        unsafe {
            let mut p: *mut BnPattern = ptr::null_mut();
            assert_eq!(
                bn_pattern_ideal_sector(std::f64::consts::PI, 0.0, &mut p),
                BnStatus::BnOk
            );
            let mut g = 0.0;
            assert_eq!(bn_pattern_gain(p, 0.0, &mut g), BnStatus::BnOk);
            assert_eq!(g, 2.0);
            assert_eq!(bn_pattern_gain(p, 3.0, &mut g), BnStatus::BnOk);
            assert_eq!(g, 0.0);
            let mut trp = 0.0;
            assert_eq!(bn_pattern_trp(p, &mut trp), BnStatus::BnOk);
            assert!((trp - 1.0).abs() < 1e-9);
            bn_pattern_free(p);
        }
    }

    #[test]
    fn invalid_parameters_set_message() {
        unsafe {
            let mut p: *mut BnPattern = ptr::null_mut();
            let status = bn_pattern_ideal_sector(-1.0, 0.0, &mut p);
            assert_eq!(status, BnStatus::BnInvalidArgument);
            let msg = bn_last_error_message();
            assert!(!msg.is_null());
            let text = CStr::from_ptr(msg).to_str().unwrap();
            assert!(text.contains("omega"), "{text}");
            // a successful call clears the message
            assert_eq!(bn_pattern_omni(&mut p), BnStatus::BnOk);
            assert!(bn_last_error_message().is_null());
            bn_pattern_free(p);
        }
    }

    #[test]
    fn null_arguments_rejected() {
        unsafe {
            let mut g = 0.0;
            assert_eq!(
                bn_pattern_gain(ptr::null(), 0.0, &mut g),
                BnStatus::BnNullArgument
            );
            let mut p: *mut BnPattern = ptr::null_mut();
            assert_eq!(bn_pattern_omni(&mut p), BnStatus::BnOk);
            assert_eq!(
                bn_pattern_gain(p, 0.0, ptr::null_mut()),
                BnStatus::BnNullArgument
            );
            bn_pattern_free(p);
            bn_pattern_free(ptr::null_mut());
        }
    }

    #[test]
    fn success_and_throughput_match_library() {
        unsafe {
            let mut params: *mut BnParams = ptr::null_mut();
            assert_eq!(
                bn_params_new(1e-5, 100.0, 3.0, 4.0, 1e-12, 1.0, &mut params),
                BnStatus::BnOk
            );
            let mut pattern: *mut BnPattern = ptr::null_mut();
            assert_eq!(bn_pattern_omni(&mut pattern), BnStatus::BnOk);
            let mut error: *mut BnErrorModel = ptr::null_mut();
            assert_eq!(bn_error_zero(&mut error), BnStatus::BnOk);

            let mut ps = 0.0;
            assert_eq!(
                bn_success_probability(params, pattern, error, &mut ps),
                BnStatus::BnOk
            );
            assert!((ps - 0.147417654164145).abs() < 1e-12);
            let mut ps2 = 0.0;
            assert_eq!(bn_success_omni(params, &mut ps2), BnStatus::BnOk);
            assert!((ps - ps2).abs() < 1e-14);

            let mut tp = BnThroughput {
                value: 0.0,
                lambda_star: 0.0,
                p_s_at_star: 0.0,
                omega: 0.0,
                feasible: 0,
            };
            assert_eq!(bn_tp_omni(params, &mut tp), BnStatus::BnOk);
            assert!((tp.lambda_star - 5.22334627533374e-6).abs() < 1e-16);

            let mut tc = tp;
            assert_eq!(bn_tc_omni(params, 0.15, &mut tc), BnStatus::BnOk);
            assert!(tc.feasible == 1 && tc.value > 0.0);
            assert_eq!(
                bn_tc_omni(params, 1.5, &mut tc),
                BnStatus::BnInvalidArgument
            );

            bn_error_model_free(error);
            bn_pattern_free(pattern);
            bn_params_free(params);
        }
    }

    #[test]
    fn maximizer_and_quantile_roundtrip() {
        unsafe {
            let mut error: *mut BnErrorModel = ptr::null_mut();
            assert_eq!(
                bn_error_truncated_half_normal(3f64.to_radians(), &mut error),
                BnStatus::BnOk
            );
            let mut m = BnMaximizer {
                omega_star: 0.0,
                boundary: 0,
                non_concave_warning: 0,
            };
            assert_eq!(
                bn_tc_beamwidth_maximizer(error, 0.15, &mut m),
                BnStatus::BnOk
            );
            assert!((m.omega_star - 0.306974930754199).abs() < 1e-9);
            assert_eq!(m.boundary, 0);
            let mut q = 0.0;
            assert_eq!(bn_error_quantile(error, 0.5, &mut q), BnStatus::BnOk);
            let mut back = 0.0;
            assert_eq!(bn_error_cdf(error, q, &mut back), BnStatus::BnOk);
            assert!((back - 0.5).abs() < 1e-10);
            let mut concave = 0;
            let mut worst = 0.0;
            assert_eq!(
                bn_error_is_concave_cdf(error, &mut concave, &mut worst),
                BnStatus::BnOk
            );
            assert_eq!(concave, 1);
            bn_error_model_free(error);
        }
    }

    #[test]
    fn simulation_is_deterministic_across_calls() {
        unsafe {
            let mut params: *mut BnParams = ptr::null_mut();
            bn_params_new(1e-5, 100.0, 3.0, 4.0, 1e-12, 1.0, &mut params);
            let mut pattern: *mut BnPattern = ptr::null_mut();
            bn_pattern_ideal_sector(20f64.to_radians(), 0.1, &mut pattern);
            let mut error: *mut BnErrorModel = ptr::null_mut();
            bn_error_truncated_half_normal(3f64.to_radians(), &mut error);
            let mut a = BnSimEstimate {
                p_hat: 0.0,
                ci_low: 0.0,
                ci_high: 0.0,
                replications: 0,
            };
            let mut b = a;
            assert_eq!(
                bn_simulate_success(params, pattern, error, 3000.0, 2000, 7, &mut a),
                BnStatus::BnOk
            );
            assert_eq!(
                bn_simulate_success(params, pattern, error, 3000.0, 2000, 7, &mut b),
                BnStatus::BnOk
            );
            assert_eq!(a.p_hat, b.p_hat);
            assert!(a.ci_low <= a.p_hat && a.p_hat <= a.ci_high);
            // window below the hard floor is rejected
            assert_eq!(
                bn_simulate_success(params, pattern, error, 150.0, 100, 7, &mut a),
                BnStatus::BnInvalidArgument
            );
            bn_error_model_free(error);
            bn_pattern_free(pattern);
            bn_params_free(params);
        }
    }
}

//! Spatial throughput and transmission capacity.
//!
//! Spatial throughput is the unconstrained density of successful
//! transmissions `TP = max_lambda lambda p_s(lambda)`; transmission capacity
//! adds an outage ceiling, `TC = lambda(p_e) (1 - p_e)` where `lambda(p_e)`
//! inverts `p_s(lambda) = 1 - p_e`. For ideal sectors without sidelobes both
//! have closed forms; for everything else this module maximizes or inverts
//! the success profile numerically.

use crate::error_models::{ErrorModelError, OrientationErrorModel};
use crate::link::{LinkError, NetworkParams, SuccessProfile};
use crate::numeric::{brent_root, golden_min, RootError};
use crate::patterns::{PatternError, RadiationPattern};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, thiserror::Error)]
pub enum CapacityError {
    #[error("invalid outage constraint p_e = {0}: must lie in (0, 1)")]
    InvalidOutage(f64),
    #[error("transmission-capacity optimization requires an outage constraint")]
    MissingOutage,
    #[error("maximizer stuck at the {edge} edge of the widened intensity bracket [{lo}, {hi}]")]
    Bracket {
        edge: &'static str,
        lo: f64,
        hi: f64,
    },
    #[error("{op} is undefined for the zero-error model: {why}")]
    DegenerateErrorModel { op: &'static str, why: &'static str },
    #[error("pattern family yields no valid pattern on the beamwidth grid")]
    EmptyFamily,
    #[error("root finding failed: {0}")]
    Root(#[from] RootError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    ErrorModel(#[from] ErrorModelError),
}

/// Maximum tolerated outage probability `p_e in (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageConstraint {
    pub p_e: f64,
}

impl OutageConstraint {
    pub fn new(p_e: f64) -> Result<Self, CapacityError> {
        if !(p_e > 0.0 && p_e < 1.0) {
            return Err(CapacityError::InvalidOutage(p_e));
        }
        Ok(OutageConstraint { p_e })
    }
}

/// A throughput-style optimum: the achieved density of successful
/// transmissions together with the intensity and success rate realizing it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputResult {
    /// Successful transmissions per m^2 (`lambda_star * p_s_at_star`).
    pub value: f64,
    /// Optimal (TP) or outage-saturating (TC) intensity, per m^2.
    pub lambda_star: f64,
    /// Success probability at `lambda_star`.
    pub p_s_at_star: f64,
    /// Beamwidth of the pattern used, radians (2 pi for omni).
    pub omega: f64,
    /// False when the outage constraint cannot be met at any intensity;
    /// the capacity is then reported as zero.
    pub feasible: bool,
}

/// Closed-form spatial throughput for an ideal sector without sidelobes:
/// `lambda* = 1/(p^2 pi kappa d^2 beta^{2/alpha})`, `p_s(lambda*) = u^2 e^{-1-B}`.
pub fn tp_sector_noside(
    params: &NetworkParams,
    omega: f64,
    error: &OrientationErrorModel,
) -> Result<ThroughputResult, CapacityError> {
    let pattern = RadiationPattern::ideal_sector(omega, 0.0)?;
    let u = error.cdf(omega / 2.0)?;
    let p = omega / TWO_PI;
    let lambda_star = 1.0 / (p * p * params.interference_coeff());
    let g1 = pattern.g1();
    let ps = u * u * (-1.0 - params.noise_exponent(g1 * g1)).exp();
    Ok(ThroughputResult {
        value: lambda_star * ps,
        lambda_star,
        p_s_at_star: ps,
        omega,
        feasible: true,
    })
}

/// Closed-form spatial throughput with omni antennas.
pub fn tp_omni(params: &NetworkParams) -> ThroughputResult {
    let lambda_star = 1.0 / params.interference_coeff();
    let ps = (-1.0 - params.noise_exponent(1.0)).exp();
    ThroughputResult {
        value: lambda_star * ps,
        lambda_star,
        p_s_at_star: ps,
        omega: TWO_PI,
        feasible: true,
    }
}

/// TP gain of sectors without sidelobes over omni at negligible noise:
/// `u^2 / p^2` (exact; eta cancels between numerator and denominator).
pub fn tp_gain(omega: f64, error: &OrientationErrorModel) -> Result<f64, CapacityError> {
    let u = error.cdf(omega / 2.0)?;
    let p = omega / TWO_PI;
    Ok(u * u / (p * p))
}

/// Numeric spatial throughput: maximizes `lambda p_s(lambda)` by
/// golden-section search on `log lambda` over `[1e-9, 1e-1]` per m^2
/// (relative tolerance 1e-8), widening the bracket once to
/// `[1e-12, 1e2]` if the maximum lands on an edge.
pub fn tp_numeric(
    params: &NetworkParams,
    pattern: &RadiationPattern,
    error: &OrientationErrorModel,
) -> Result<ThroughputResult, CapacityError> {
    let profile = SuccessProfile::new(params, pattern, error)?;
    let mut quad_error: Option<LinkError> = None;
    let mut search = |lo: f64, hi: f64| -> (f64, f64) {
        let (t_lo, t_hi) = (lo.ln(), hi.ln());
        let objective = |t: f64| {
            let lam = t.exp();
            match profile.eval(lam) {
                Ok(ps) => -lam * ps,
                Err(e) => {
                    quad_error = Some(e.into());
                    f64::INFINITY
                }
            }
        };
        let (t_star, neg) = golden_min(objective, t_lo, t_hi, 1e-8);
        (t_star, -neg)
    };
    let (lo, hi) = (1e-9, 1e-1);
    let (mut t_star, mut best) = search(lo, hi);
    let edge_margin = 1e-3;
    let near_edge = |t: f64, a: f64, b: f64| t - a.ln() < edge_margin || b.ln() - t < edge_margin;
    if near_edge(t_star, lo, hi) {
        let (wlo, whi) = (1e-12, 1e2);
        let (t2, b2) = search(wlo, whi);
        if near_edge(t2, wlo, whi) {
            return Err(CapacityError::Bracket {
                edge: if t2 - wlo.ln() < edge_margin {
                    "lower"
                } else {
                    "upper"
                },
                lo: wlo,
                hi: whi,
            });
        }
        t_star = t2;
        best = b2;
    }
    if let Some(e) = quad_error {
        return Err(e.into());
    }
    let lambda_star = t_star.exp();
    let ps = profile.eval(lambda_star).map_err(LinkError::from)?;
    debug_assert!((lambda_star * ps - best).abs() <= 1e-6 * best.abs().max(1e-300));
    Ok(ThroughputResult {
        value: lambda_star * ps,
        lambda_star,
        p_s_at_star: ps,
        omega: pattern.omega(),
        feasible: true,
    })
}

fn infeasible(omega: f64, target: f64) -> ThroughputResult {
    ThroughputResult {
        value: 0.0,
        lambda_star: 0.0,
        p_s_at_star: target,
        omega,
        feasible: false,
    }
}

/// Closed-form transmission capacity for an ideal sector without sidelobes:
/// `lambda* = log(u^2 (1 - p_{eta,s}) / (1 - p_e)) / (p^2 pi kappa d^2 beta^{2/alpha})`,
/// `TC = lambda* (1 - p_e)`.
///
/// When `u^2 (1 - p_{eta,s}) <= 1 - p_e` the outage constraint cannot be met
/// by any intensity (the typical pair misses too often) and the capacity is
/// reported as zero with `feasible = false`.
pub fn tc_sector_noside(
    params: &NetworkParams,
    omega: f64,
    error: &OrientationErrorModel,
    outage: &OutageConstraint,
) -> Result<ThroughputResult, CapacityError> {
    let pattern = RadiationPattern::ideal_sector(omega, 0.0)?;
    let u = error.cdf(omega / 2.0)?;
    let p = omega / TWO_PI;
    let g1 = pattern.g1();
    let noise_pass = (-params.noise_exponent(g1 * g1)).exp();
    let target = 1.0 - outage.p_e;
    let log_arg = u * u * noise_pass / target;
    if log_arg <= 1.0 {
        return Ok(infeasible(omega, target));
    }
    let lambda_star = log_arg.ln() / (p * p * params.interference_coeff());
    Ok(ThroughputResult {
        value: lambda_star * target,
        lambda_star,
        p_s_at_star: target,
        omega,
        feasible: true,
    })
}

/// Closed-form transmission capacity with omni antennas.
pub fn tc_omni(params: &NetworkParams, outage: &OutageConstraint) -> ThroughputResult {
    let noise_pass = (-params.noise_exponent(1.0)).exp();
    let target = 1.0 - outage.p_e;
    let log_arg = noise_pass / target;
    if log_arg <= 1.0 {
        return infeasible(TWO_PI, target);
    }
    let lambda_star = log_arg.ln() / params.interference_coeff();
    ThroughputResult {
        value: lambda_star * target,
        lambda_star,
        p_s_at_star: target,
        omega: TWO_PI,
        feasible: true,
    }
}

/// TC gain of sectors without sidelobes over omni at negligible noise:
/// `(1/p^2) log(u^2/(1-p_e)) / log(1/(1-p_e))`; zero when infeasible.
pub fn tc_gain(
    omega: f64,
    error: &OrientationErrorModel,
    outage: &OutageConstraint,
) -> Result<f64, CapacityError> {
    let u = error.cdf(omega / 2.0)?;
    let p = omega / TWO_PI;
    let target = 1.0 - outage.p_e;
    if u * u <= target {
        return Ok(0.0);
    }
    Ok((u * u / target).ln() / ((1.0 / target).ln() * p * p))
}

/// Numeric transmission capacity: inverts `p_s(lambda) = 1 - p_e` by
/// bisection on `log lambda` (success is strictly decreasing in intensity)
/// to within 1e-10 on the probability.
pub fn tc_numeric(
    params: &NetworkParams,
    pattern: &RadiationPattern,
    error: &OrientationErrorModel,
    outage: &OutageConstraint,
) -> Result<ThroughputResult, CapacityError> {
    let profile = SuccessProfile::new(params, pattern, error)?;
    let target = 1.0 - outage.p_e;
    if profile.limit_at_zero_density() <= target {
        return Ok(infeasible(pattern.omega(), target));
    }
    let mut lo = 1e-16;
    if profile.eval(lo).map_err(LinkError::from)? <= target {
        return Ok(infeasible(pattern.omega(), target));
    }
    let mut hi = 1e-2;
    let mut guard = 0;
    while profile.eval(hi).map_err(LinkError::from)? > target {
        hi *= 10.0;
        guard += 1;
        if guard > 30 {
            return Err(CapacityError::Bracket {
                edge: "upper",
                lo,
                hi,
            });
        }
    }
    let mut lambda;
    let mut iters = 0;
    loop {
        lambda = (0.5 * (lo.ln() + hi.ln())).exp();
        let ps = profile.eval(lambda).map_err(LinkError::from)?;
        if (ps - target).abs() <= 1e-10 || iters >= 300 {
            break;
        }
        if ps > target {
            lo = lambda;
        } else {
            hi = lambda;
        }
        iters += 1;
    }
    Ok(ThroughputResult {
        value: lambda * target,
        lambda_star: lambda,
        p_s_at_star: target,
        omega: pattern.omega(),
        feasible: true,
    })
}

/// Output of [`tc_beamwidth_maximizer`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamwidthMaximizer {
    /// TC-maximizing beamwidth, radians.
    pub omega_star: f64,
    /// True when the boundary condition held and the maximizer is `2 eps_max`.
    pub boundary: bool,
    /// Set when the error cdf failed the concavity diagnostic; the result is
    /// then a numerical grid maximum rather than a guaranteed unique root.
    pub non_concave_warning: bool,
}

/// The TC-maximizing beamwidth over `(2 F^{-1}(sqrt(1-p_e)), 2 eps_max]`.
///
/// Depends only on the error distribution and the outage constraint. With a
/// concave error cdf the maximizer is unique: either the boundary test
/// `f(eps_max) >= log(1/(1-p_e))/eps_max` promotes `omega* = 2 eps_max`, or
/// the stationarity condition
/// `f(x)/F(x) = log(F(x)^2/(1-p_e))/x` (with `x = omega/2`) has a single
/// root located by Brent's method to 1e-10 rad.
pub fn tc_beamwidth_maximizer(
    error: &OrientationErrorModel,
    outage: &OutageConstraint,
) -> Result<BeamwidthMaximizer, CapacityError> {
    let eps_max = error.eps_max();
    if eps_max == 0.0 {
        return Err(CapacityError::DegenerateErrorModel {
            op: "tc_beamwidth_maximizer",
            why: "with no orientation error TC grows without bound as the beam narrows",
        });
    }
    let target = 1.0 - outage.p_e;
    let b = (1.0 / target).ln();
    let (concave, _) = error.is_concave_cdf();
    if !concave {
        // no uniqueness guarantee: maximize (2 log F + B)/x^2 on a dense grid
        let x_lo = error.quantile(target.sqrt())?;
        let score = |x: f64| {
            let f = error.cdf(x).unwrap_or(0.0);
            if f <= 0.0 {
                f64::NEG_INFINITY
            } else {
                (2.0 * f.ln() + b) / (x * x)
            }
        };
        let n = 8192;
        let mut best = (eps_max, score(eps_max));
        for i in 1..n {
            let x = x_lo + (eps_max - x_lo) * i as f64 / n as f64;
            let s = score(x);
            if s > best.1 {
                best = (x, s);
            }
        }
        let span = (eps_max - x_lo) / n as f64;
        let (x_star, _) = golden_min(
            |x| -score(x),
            (best.0 - span).max(x_lo * (1.0 + 1e-12)),
            (best.0 + span).min(eps_max),
            1e-11,
        );
        return Ok(BeamwidthMaximizer {
            omega_star: 2.0 * x_star,
            boundary: false,
            non_concave_warning: true,
        });
    }
    if error.pdf(eps_max)? >= b / eps_max {
        return Ok(BeamwidthMaximizer {
            omega_star: 2.0 * eps_max,
            boundary: true,
            non_concave_warning: false,
        });
    }
    let x_lo = error.quantile(target.sqrt())?;
    let h = |x: f64| {
        let f = error.cdf(x).unwrap();
        error.pdf(x).unwrap() / f - (f * f / target).ln() / x
    };
    let x_star = brent_root(h, x_lo * (1.0 + 1e-12), eps_max * (1.0 - 1e-12), 5e-11, 300)?;
    Ok(BeamwidthMaximizer {
        omega_star: 2.0 * x_star,
        boundary: false,
        non_concave_warning: false,
    })
}

/// A radiation-pattern family with the beamwidth left free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PatternFamily {
    IdealSector { g2: f64 },
    TransitionSector { g2: f64, gamma: f64 },
    ThreeGppSector { g2: f64 },
}

impl PatternFamily {
    /// Instantiate the family at beamwidth `omega`.
    pub fn build(&self, omega: f64) -> Result<RadiationPattern, PatternError> {
        match *self {
            PatternFamily::IdealSector { g2 } => RadiationPattern::ideal_sector(omega, g2),
            PatternFamily::TransitionSector { g2, gamma } => {
                RadiationPattern::transition_sector(omega, gamma, g2)
            }
            PatternFamily::ThreeGppSector { g2 } => RadiationPattern::three_gpp_sector(omega, g2),
        }
    }
}

/// Which metric a beamwidth optimization targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Throughput,
    TransmissionCapacity,
}

/// Maximize TP or TC over beamwidth for a pattern family: a 256-point linear
/// scan of the valid beamwidth range followed by golden-section refinement
/// around the best cell. No unimodality is assumed; beamwidths where the
/// family has no valid pattern are skipped.
pub fn optimize_beamwidth(
    params: &NetworkParams,
    family: &PatternFamily,
    error: &OrientationErrorModel,
    metric: Metric,
    outage: Option<&OutageConstraint>,
) -> Result<(f64, f64), CapacityError> {
    const GRID: usize = 256;
    let constraint = match metric {
        Metric::Throughput => None,
        Metric::TransmissionCapacity => Some(outage.ok_or(CapacityError::MissingOutage)?),
    };
    let evaluate = |omega: f64| -> Option<f64> {
        let pattern = family.build(omega).ok()?;
        let v = match metric {
            Metric::Throughput => match (&pattern, family) {
                (_, PatternFamily::IdealSector { g2 }) if *g2 == 0.0 => {
                    tp_sector_noside(params, omega, error).ok()?.value
                }
                _ => tp_numeric(params, &pattern, error).ok()?.value,
            },
            Metric::TransmissionCapacity => {
                let outage = constraint.expect("checked above");
                match family {
                    PatternFamily::IdealSector { g2 } if *g2 == 0.0 => {
                        tc_sector_noside(params, omega, error, outage).ok()?.value
                    }
                    _ => tc_numeric(params, &pattern, error, outage).ok()?.value,
                }
            }
        };
        v.is_finite().then_some(v)
    };
    let omega_lo = 1e-3;
    let omega_hi = TWO_PI - 1e-6;
    let step = (omega_hi - omega_lo) / (GRID - 1) as f64;
    let mut best: Option<(f64, f64)> = None;
    for i in 0..GRID {
        let omega = omega_lo + step * i as f64;
        if let Some(v) = evaluate(omega) {
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((omega, v));
            }
        }
    }
    let Some((omega_best, value_best)) = best else {
        return Err(CapacityError::EmptyFamily);
    };
    let lo = (omega_best - step).max(omega_lo);
    let hi = (omega_best + step).min(omega_hi);
    let (omega_star, neg) = golden_min(
        |omega| evaluate(omega).map_or(f64::INFINITY, |v| -v),
        lo,
        hi,
        1e-9,
    );
    if !neg.is_finite() || -neg < value_best {
        return Ok((omega_best, value_best));
    }
    Ok((omega_star, -neg))
}

//! Success probability of the typical transmission.
//!
//! The typical receiver sits at the origin (Slivnyak conditioning); under
//! Rayleigh fading the interference Laplace transform gives the success
//! probability as an expectation over the typical pair's random gains of
//!
//! `exp(-lambda pi kappa (beta/(gT gR))^{2/alpha} m_T m_R d^2) *
//!  exp(-beta d^alpha eta / (P_t gT gR))`
//!
//! with `kappa = Gamma(1 + 2/alpha) Gamma(1 - 2/alpha)` and `m_T`, `m_R` the
//! 2/alpha-moments of the interferer gains. Omni and ideal-sector patterns
//! reduce to closed forms; the continuous patterns are integrated by the
//! quadrature in [`crate::gains`].

use statrs::function::gamma::gamma;

use crate::error_models::OrientationErrorModel;
use crate::gains::{self, gain_pair_nodes, GainError, GainNodes};
use crate::patterns::RadiationPattern;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, thiserror::Error)]
pub enum LinkError {
    #[error("invalid network parameter {name} = {value}: must satisfy {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("{op} requires an ideal sector with {requirement}")]
    PatternMismatch {
        op: &'static str,
        requirement: &'static str,
    },
    #[error(transparent)]
    Gain(#[from] GainError),
}

/// Rayleigh-fading interference constant `Gamma(1+2/alpha) Gamma(1-2/alpha)`.
///
/// Diverges as `alpha -> 2`; callers must keep `alpha > 2`.
pub fn kappa(alpha: f64) -> f64 {
    gamma(1.0 + 2.0 / alpha) * gamma(1.0 - 2.0 / alpha)
}

/// Network-wide parameters of the bipolar Poisson model.
///
/// Immutable after construction; `kappa` is derived from `alpha` and cached.
/// Use the `with_*` builders to vary a field (they re-derive `kappa`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkParams {
    /// Intensity of active transmitters, per m^2.
    pub lambda: f64,
    /// TX-RX pair separation, meters.
    pub d: f64,
    /// Pathloss exponent, > 2.
    pub alpha: f64,
    /// SINR threshold, linear.
    pub beta: f64,
    /// Background noise power, Watts.
    pub eta: f64,
    /// Transmit power, Watts.
    pub p_t: f64,
    /// Derived interference constant for this `alpha`.
    pub kappa: f64,
}

impl NetworkParams {
    pub fn new(
        lambda: f64,
        d: f64,
        alpha: f64,
        beta: f64,
        eta: f64,
        p_t: f64,
    ) -> Result<Self, LinkError> {
        fn check(
            name: &'static str,
            value: f64,
            ok: bool,
            constraint: &'static str,
        ) -> Result<(), LinkError> {
            if ok && value.is_finite() {
                Ok(())
            } else {
                Err(LinkError::InvalidParameter {
                    name,
                    value,
                    constraint,
                })
            }
        }
        check("lambda", lambda, lambda >= 0.0, "lambda >= 0")?;
        check("d", d, d > 0.0, "d > 0")?;
        check("alpha", alpha, alpha > 2.0, "alpha > 2")?;
        check("beta", beta, beta > 0.0, "beta > 0")?;
        check("eta", eta, eta >= 0.0, "eta >= 0")?;
        check("p_t", p_t, p_t > 0.0, "p_t > 0")?;
        Ok(NetworkParams {
            lambda,
            d,
            alpha,
            beta,
            eta,
            p_t,
            kappa: kappa(alpha),
        })
    }

    /// Common literature defaults: `alpha = 3`, `beta = 4`, `d = 100` m, `eta = 1e-12` W,
    /// `P_t = 1` W, at intensity `lambda`.
    pub fn defaults_with_lambda(lambda: f64) -> Self {
        NetworkParams::new(lambda, 100.0, 3.0, 4.0, 1e-12, 1.0).expect("defaults are valid")
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self, LinkError> {
        NetworkParams::new(self.lambda, self.d, alpha, self.beta, self.eta, self.p_t)
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    /// `pi kappa beta^{2/alpha} d^2`: the omni interference exponent per unit
    /// intensity.
    pub fn interference_coeff(&self) -> f64 {
        std::f64::consts::PI * self.kappa * self.beta.powf(2.0 / self.alpha) * self.d * self.d
    }

    /// `beta d^alpha eta / (P_t g)`: noise failure exponent at combined
    /// typical-pair gain `g`.
    pub fn noise_exponent(&self, gain_product: f64) -> f64 {
        self.beta * self.d.powf(self.alpha) * self.eta / (self.p_t * gain_product)
    }
}

fn clamp_prob(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// Success probability with omni antennas:
/// `exp(-lambda pi kappa beta^{2/alpha} d^2) exp(-beta d^alpha eta / P_t)`.
pub fn success_omni(params: &NetworkParams) -> f64 {
    clamp_prob(
        (-params.lambda * params.interference_coeff()).exp() * (-params.noise_exponent(1.0)).exp(),
    )
}

/// Success probability with ideal sectors with sidelobes (`g2 > 0`): the
/// hit/hit, hit/miss, miss/miss mixture.
pub fn success_sector(
    params: &NetworkParams,
    pattern: &RadiationPattern,
    error: &OrientationErrorModel,
) -> Result<f64, LinkError> {
    let RadiationPattern::IdealSector { omega, g2, g1 } = *pattern else {
        return Err(LinkError::PatternMismatch {
            op: "success_sector",
            requirement: "g2 > 0",
        });
    };
    if g2 <= 0.0 {
        return Err(LinkError::PatternMismatch {
            op: "success_sector",
            requirement: "g2 > 0 (use success_sector_noside when g2 = 0)",
        });
    }
    let u = error.cdf(omega / 2.0).map_err(GainError::from)?;
    let ub = 1.0 - u;
    let p = omega / TWO_PI;
    let pb = 1.0 - p;
    let q = 2.0 / params.alpha;
    let a = params.lambda * params.interference_coeff();
    let hit_hit = (p + pb * (g2 / g1).powf(q)).powi(2);
    let mixed = (p * (g1 / g2).powf(q / 2.0) + pb * (g2 / g1).powf(q / 2.0)).powi(2);
    let miss_miss = (p * (g1 / g2).powf(q) + pb).powi(2);
    let ps = u * u * (-a * hit_hit).exp() * (-params.noise_exponent(g1 * g1)).exp()
        + 2.0 * u * ub * (-a * mixed).exp() * (-params.noise_exponent(g1 * g2)).exp()
        + ub * ub * (-a * miss_miss).exp() * (-params.noise_exponent(g2 * g2)).exp();
    Ok(clamp_prob(ps))
}

/// Success probability with ideal sectors without sidelobes (`g2 = 0`):
/// `u^2 exp(-lambda pi kappa beta^{2/alpha} d^2 p^2) exp(-beta d^alpha eta/(P_t g1^2))`.
pub fn success_sector_noside(
    params: &NetworkParams,
    pattern: &RadiationPattern,
    error: &OrientationErrorModel,
) -> Result<f64, LinkError> {
    let RadiationPattern::IdealSector { omega, g2, g1 } = *pattern else {
        return Err(LinkError::PatternMismatch {
            op: "success_sector_noside",
            requirement: "g2 = 0",
        });
    };
    if g2 != 0.0 {
        return Err(LinkError::PatternMismatch {
            op: "success_sector_noside",
            requirement: "g2 = 0 (use success_sector when g2 > 0)",
        });
    }
    let u = error.cdf(omega / 2.0).map_err(GainError::from)?;
    let p = omega / TWO_PI;
    let ps = u
        * u
        * (-params.lambda * params.interference_coeff() * p * p).exp()
        * (-params.noise_exponent(g1 * g1)).exp();
    Ok(clamp_prob(ps))
}

/// General success probability for any validated pattern and error model.
///
/// Exact (discrete expectation) for omni and ideal sectors; quadrature over
/// the orientation-error law otherwise. Zero-gain atoms contribute zero.
pub fn success_general(
    params: &NetworkParams,
    pattern: &RadiationPattern,
    error: &OrientationErrorModel,
) -> Result<f64, LinkError> {
    Ok(SuccessProfile::new(params, pattern, error)?.eval(params.lambda)?)
}

/// Success probability as a function of intensity, with everything that does
/// not depend on `lambda` precomputed.
///
/// `eval(lambda) = sum_i w_i exp(-lambda a_i - n_i)` over the typical-pair
/// gain nodes; strictly decreasing in `lambda`. Built once per
/// (params, pattern, error) and reused across intensity sweeps, throughput
/// maximization, and capacity inversion.
pub struct SuccessProfile {
    base: Vec<ProfileNode>,
    refined: Option<Vec<ProfileNode>>,
}

#[derive(Clone, Copy)]
struct ProfileNode {
    weight: f64,
    interference: f64,
    noise: f64,
}

impl SuccessProfile {
    pub fn new(
        params: &NetworkParams,
        pattern: &RadiationPattern,
        error: &OrientationErrorModel,
    ) -> Result<Self, LinkError> {
        let moment = gains::interferer_moment(pattern, params.alpha)?;
        let q = 2.0 / params.alpha;
        let coeff = params.interference_coeff() * moment * moment;
        let make = |axis: &[(f64, f64)]| -> Vec<ProfileNode> {
            let mut nodes = Vec::new();
            for &(gt, wt) in axis {
                for &(gr, wr) in axis {
                    let w = wt * wr;
                    let product = gt * gr;
                    if w == 0.0 || product <= 0.0 {
                        continue;
                    }
                    nodes.push(ProfileNode {
                        weight: w,
                        interference: coeff * product.powf(-q),
                        noise: params.noise_exponent(product),
                    });
                }
            }
            nodes
        };
        match gain_pair_nodes(pattern, error)? {
            GainNodes::Discrete(atoms) => Ok(SuccessProfile {
                base: make(&atoms),
                refined: None,
            }),
            GainNodes::Quadrature { base, refined } => Ok(SuccessProfile {
                base: make(&base),
                refined: Some(make(&refined)),
            }),
        }
    }

    fn sum(nodes: &[ProfileNode], lambda: f64) -> f64 {
        nodes
            .iter()
            .map(|n| n.weight * (-lambda * n.interference - n.noise).exp())
            .sum()
    }

    /// `p_s(lambda)`, with the quadrature convergence check applied per call.
    pub fn eval(&self, lambda: f64) -> Result<f64, GainError> {
        let coarse = Self::sum(&self.base, lambda);
        match &self.refined {
            None => Ok(clamp_prob(coarse)),
            Some(refined) => {
                let fine = Self::sum(refined, lambda);
                gains::check_converged(coarse, fine)?;
                Ok(clamp_prob(fine))
            }
        }
    }

    /// `lim_{lambda -> 0+} p_s(lambda)`: the noise-and-alignment-only success
    /// rate that bounds what any intensity can achieve.
    pub fn limit_at_zero_density(&self) -> f64 {
        let nodes = self.refined.as_deref().unwrap_or(&self.base);
        clamp_prob(nodes.iter().map(|n| n.weight * (-n.noise).exp()).sum())
    }
}

//! Antenna radiation patterns with constant total radiated power (TRP).
//!
//! All patterns are symmetric about boresight, defined on `[-pi, pi)`, and
//! normalized so the average gain over the circle is 1:
//! `(1/2pi) int_{-pi}^{pi} G(theta) dtheta = 1`. Narrowing the main beam
//! therefore raises its gain.

use std::f64::consts::PI;

use crate::numeric::{integrate_adaptive, panel_edges, wrap_angle};

const TWO_PI: f64 = 2.0 * PI;

/// TRP residual tolerance used when solving for the 3GPP mainlobe gain.
const G1_SOLVE_TOL: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum PatternError {
    #[error("invalid pattern parameter {name} = {value}: must satisfy {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("no admissible mainlobe gain: {0}")]
    NoRoot(String),
}

/// A validated, TRP-normalized radiation pattern.
///
/// Construct through [`RadiationPattern::omni`], [`RadiationPattern::ideal_sector`],
/// [`RadiationPattern::transition_sector`], or [`RadiationPattern::three_gpp_sector`];
/// the mainlobe gain `g1` is derived during construction and cached. Patterns
/// are immutable values and safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub enum RadiationPattern {
    /// Unit gain in every direction.
    Omni,
    /// Flat mainlobe of width `omega` at gain `g1`, flat sidelobe at `g2`.
    IdealSector { omega: f64, g2: f64, g1: f64 },
    /// Ideal sector with a linear ramp of width `gamma` between mainlobe and
    /// sidelobe; `omega` is the 3-dB beamwidth.
    TransitionSector {
        omega: f64,
        gamma: f64,
        g2: f64,
        g1: f64,
    },
    /// Gaussian-shaped mainlobe (quadratic rolloff in dB) with 3-dB beamwidth
    /// `omega`, clipped to the sidelobe floor `g2` at `theta1`.
    ThreeGppSector {
        omega: f64,
        g2: f64,
        g1: f64,
        theta1: f64,
    },
}

impl RadiationPattern {
    pub fn omni() -> Self {
        RadiationPattern::Omni
    }

    /// Ideal sector: `omega` in `(0, 2pi]`, `0 <= g2 < 1`. The mainlobe gain
    /// `g1 = (2pi - (2pi - omega) g2) / omega` restores unit TRP.
    ///
    /// `omega = 2pi` with `g2 = 0` is accepted and degenerates to `g1 = 1`
    /// (an omni pattern), which keeps beamwidth sweeps closed at the top end.
    pub fn ideal_sector(omega: f64, g2: f64) -> Result<Self, PatternError> {
        if !(omega > 0.0 && omega <= TWO_PI) {
            return Err(PatternError::InvalidParameter {
                name: "omega",
                value: omega,
                constraint: "0 < omega <= 2*pi",
            });
        }
        if !(0.0..1.0).contains(&g2) {
            return Err(PatternError::InvalidParameter {
                name: "g2",
                value: g2,
                constraint: "0 <= g2 < 1",
            });
        }
        if omega == TWO_PI && g2 > 0.0 {
            return Err(PatternError::InvalidParameter {
                name: "g2",
                value: g2,
                constraint: "g2 = 0 when omega = 2*pi (the sidelobe region is empty)",
            });
        }
        let g1 = (TWO_PI - (TWO_PI - omega) * g2) / omega;
        if g1 <= g2 {
            return Err(PatternError::InvalidParameter {
                name: "g2",
                value: g2,
                constraint: "g2 < g1 (beamwidth too close to 2*pi for this sidelobe)",
            });
        }
        Ok(RadiationPattern::IdealSector { omega, g2, g1 })
    }

    /// Sector with a linear transition of width `gamma`:
    /// `omega in (0, 2pi - 2 gamma)`, `gamma in (0, min(omega, pi - omega/2))`,
    /// `g2 in [0, 1/(1 - 3 gamma / 4 pi))`.
    pub fn transition_sector(omega: f64, gamma: f64, g2: f64) -> Result<Self, PatternError> {
        if !(gamma > 0.0 && gamma < omega.min(PI - omega / 2.0)) {
            return Err(PatternError::InvalidParameter {
                name: "gamma",
                value: gamma,
                constraint: "0 < gamma < min(omega, pi - omega/2)",
            });
        }
        if !(omega > 0.0 && omega < TWO_PI - 2.0 * gamma) {
            return Err(PatternError::InvalidParameter {
                name: "omega",
                value: omega,
                constraint: "0 < omega < 2*pi - 2*gamma",
            });
        }
        let g2_cap = 1.0 / (1.0 - 3.0 * gamma / (4.0 * PI));
        if !(g2 >= 0.0 && g2 < g2_cap) {
            return Err(PatternError::InvalidParameter {
                name: "g2",
                value: g2,
                constraint: "0 <= g2 < 1/(1 - 3*gamma/(4*pi))",
            });
        }
        let g1 = (TWO_PI - (TWO_PI - 1.5 * gamma - omega) * g2) / omega;
        Ok(RadiationPattern::TransitionSector {
            omega,
            gamma,
            g2,
            g1,
        })
    }

    /// 3GPP-style sector; `g1` is solved numerically so the TRP integral is 1.
    ///
    /// Fails with [`PatternError::NoRoot`] when no admissible `g1` exists,
    /// i.e. when the mainlobe/sidelobe crossover angle `theta1` would leave
    /// `[0, pi]` at the normalizing gain.
    pub fn three_gpp_sector(omega: f64, g2: f64) -> Result<Self, PatternError> {
        if !(omega > 0.0 && omega <= TWO_PI) {
            return Err(PatternError::InvalidParameter {
                name: "omega",
                value: omega,
                constraint: "0 < omega <= 2*pi",
            });
        }
        if !(0.0..1.0).contains(&g2) {
            return Err(PatternError::InvalidParameter {
                name: "g2",
                value: g2,
                constraint: "0 <= g2 < 1",
            });
        }
        let g1 = solve_g1_3gpp(omega, g2)?;
        let theta1 = three_gpp_theta1(omega, g2, g1);
        Ok(RadiationPattern::ThreeGppSector {
            omega,
            g2,
            g1,
            theta1,
        })
    }

    /// Linear power gain at angle `theta` (wrapped into `[-pi, pi)` first).
    ///
    /// At an exact breakpoint the earlier branch of the piecewise definition
    /// wins, so e.g. `gain(omega/2) = g1` for an ideal sector.
    pub fn gain(&self, theta: f64) -> f64 {
        let t = wrap_angle(theta).abs();
        match *self {
            RadiationPattern::Omni => 1.0,
            RadiationPattern::IdealSector { omega, g2, g1 } => {
                if t <= omega / 2.0 {
                    g1
                } else {
                    g2
                }
            }
            RadiationPattern::TransitionSector {
                omega,
                gamma,
                g2,
                g1,
            } => {
                let t1 = omega / 2.0 - gamma / 2.0;
                let t2 = omega / 2.0 + gamma / 2.0;
                let t3 = omega / 2.0 + gamma;
                if t <= t1 {
                    g1
                } else if t <= t2 {
                    // clamp: rounding in t - t1 near the ramp foot can dip
                    // a hair below zero
                    (g1 - g1 / gamma * (t - t1)).max(0.0)
                } else if t <= t3 {
                    (2.0 * g2 / gamma * (t - t2)).min(g2)
                } else {
                    g2
                }
            }
            RadiationPattern::ThreeGppSector {
                omega,
                g2,
                g1,
                theta1,
            } => {
                if t <= theta1 {
                    let r = t / (omega / 2.0);
                    g1 * 10f64.powf(-0.3 * r * r)
                } else {
                    g2
                }
            }
        }
    }

    /// Mainlobe (boresight) gain.
    pub fn g1(&self) -> f64 {
        match *self {
            RadiationPattern::Omni => 1.0,
            RadiationPattern::IdealSector { g1, .. }
            | RadiationPattern::TransitionSector { g1, .. }
            | RadiationPattern::ThreeGppSector { g1, .. } => g1,
        }
    }

    /// Sidelobe gain (1 for omni).
    pub fn g2(&self) -> f64 {
        match *self {
            RadiationPattern::Omni => 1.0,
            RadiationPattern::IdealSector { g2, .. }
            | RadiationPattern::TransitionSector { g2, .. }
            | RadiationPattern::ThreeGppSector { g2, .. } => g2,
        }
    }

    /// Beamwidth parameter (2*pi for omni).
    pub fn omega(&self) -> f64 {
        match *self {
            RadiationPattern::Omni => TWO_PI,
            RadiationPattern::IdealSector { omega, .. }
            | RadiationPattern::TransitionSector { omega, .. }
            | RadiationPattern::ThreeGppSector { omega, .. } => omega,
        }
    }

    /// Angles in `(0, pi)` at which the pattern switches branch. Quadrature
    /// over the pattern (or over orientation error driven through it) splits
    /// its domain here.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            RadiationPattern::Omni => vec![],
            RadiationPattern::IdealSector { omega, .. } => vec![omega / 2.0],
            RadiationPattern::TransitionSector { omega, gamma, .. } => vec![
                omega / 2.0 - gamma / 2.0,
                omega / 2.0 + gamma / 2.0,
                omega / 2.0 + gamma,
            ],
            RadiationPattern::ThreeGppSector { theta1, .. } => vec![theta1],
        }
    }

    /// Numeric TRP integral `(1/2pi) int_{-pi}^{pi} gain(theta) dtheta`,
    /// evaluated by adaptive quadrature split at the pattern breakpoints.
    /// Diagnostic: equals 1 (to ~1e-12) for every validated pattern.
    pub fn trp(&self) -> f64 {
        let f = |t: f64| self.gain(t);
        integrate_adaptive_over_pattern(&f, &self.breakpoints()) / TWO_PI
    }
}

fn integrate_adaptive_over_pattern<F: Fn(f64) -> f64>(f: &F, breaks: &[f64]) -> f64 {
    // Symmetric pattern: integrate [0, pi] and double.
    let edges = panel_edges(0.0, PI, breaks);
    let per_tol = 1e-13 / (edges.len() - 1) as f64;
    2.0 * edges
        .windows(2)
        .map(|w| integrate_adaptive(f, w[0], w[1], per_tol))
        .sum::<f64>()
}

fn three_gpp_theta1(omega: f64, g2: f64, g1: f64) -> f64 {
    (omega / 2.0) * (10.0 / 3.0 * (g1 / g2).log10()).sqrt()
}

/// TRP of the 3GPP pattern for a candidate `g1`, with the crossover clamped
/// to `pi`. The Gaussian mainlobe integrates in closed form through erf.
fn three_gpp_trp(omega: f64, g2: f64, g1: f64) -> f64 {
    let c = 0.3 * std::f64::consts::LN_10 * 4.0 / (omega * omega);
    let theta1 = three_gpp_theta1(omega, g2, g1).min(PI);
    let main = g1 * 0.5 * (PI / c).sqrt() * statrs::function::erf::erf(c.sqrt() * theta1);
    (main + g2 * (PI - theta1)) / PI
}

/// Solve for the 3GPP mainlobe gain `g1` that normalizes TRP to 1.
///
/// The residual is strictly increasing in `g1`, so Brent's method on the
/// bracket `[1, (2pi/omega)(1 + g2 * 2pi/omega)]` converges unconditionally
/// whenever a root exists; the root is then checked for admissibility
/// (`theta1 <= pi`).
pub fn solve_g1_3gpp(omega: f64, g2: f64) -> Result<f64, PatternError> {
    if g2 == 0.0 {
        return Err(PatternError::NoRoot(
            "g2 = 0: the mainlobe/sidelobe crossover angle theta1 is undefined".into(),
        ));
    }
    let lo = g2.max(1e-12) * 1.000000001;
    let hi = TWO_PI / omega * (1.0 + g2 * TWO_PI / omega) + 1.0;
    let resid = |g1: f64| three_gpp_trp(omega, g2, g1) - 1.0;
    if resid(hi) < 0.0 {
        return Err(PatternError::NoRoot(format!(
            "TRP residual still negative at bracket top g1 = {hi}"
        )));
    }
    let g1 = crate::numeric::brent_root(resid, lo, hi, G1_SOLVE_TOL, 300)
        .map_err(|e| PatternError::NoRoot(e.to_string()))?;
    let theta1 = three_gpp_theta1(omega, g2, g1);
    if theta1 > PI {
        return Err(PatternError::NoRoot(format!(
            "admissibility violated at the normalizing gain: theta1 = {theta1} > pi \
             (omega = {omega}, g2 = {g2}); widen g2 or narrow omega"
        )));
    }
    if g1 <= g2 {
        return Err(PatternError::NoRoot(format!(
            "admissibility violated: g1 = {g1} <= g2 = {g2}"
        )));
    }
    Ok(g1)
}

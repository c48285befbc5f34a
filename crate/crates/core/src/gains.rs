//! Induced gain distributions and their 2/alpha moments.
//!
//! Randomness in positions and orientations turns the antenna gains between
//! devices into random variables. Between an interferer and the typical
//! receiver both gain input angles are uniform on the circle; between the
//! typical TX and RX each input angle is the device's own orientation error.
//! For ideal sectors both laws are two-point discrete; for the continuous
//! patterns the typical-pair expectation is evaluated by tensor quadrature
//! in quantile space of the error distribution.

use std::f64::consts::PI;

use crate::error_models::OrientationErrorModel;
use crate::numeric::{gauss_legendre, panel_edges};
use crate::patterns::RadiationPattern;

const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, thiserror::Error)]
pub enum GainError {
    #[error("operation requires an ideal sector pattern, got {0}")]
    WrongPattern(&'static str),
    #[error("pathloss exponent alpha = {0} outside (2, inf): the interference constant diverges")]
    AlphaOutOfRange(f64),
    #[error(
        "quadrature did not converge: 64- and 128-node estimates {coarse} and {fine} \
         differ by more than 1e-6 relative"
    )]
    QuadratureNotConverged { coarse: f64, fine: f64 },
    #[error(transparent)]
    ErrorModel(#[from] crate::error_models::ErrorModelError),
}

/// Which pair of devices a discrete gain law describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainLawKind {
    /// Gain between the typical TX (or RX) and its partner; hit rate `u = F(omega/2)`.
    TypicalSector,
    /// Gain between an interferer and the typical RX; hit rate `p = omega/2pi`.
    InterfererSector,
}

/// Atoms and probabilities of an induced sector gain law.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteGainLaw {
    pub atoms: Vec<(f64, f64)>,
    pub kind: GainLawKind,
}

impl DiscreteGainLaw {
    fn new(atoms: Vec<(f64, f64)>, kind: GainLawKind) -> Self {
        let total: f64 = atoms.iter().map(|&(_, p)| p).sum();
        debug_assert!((total - 1.0).abs() < 1e-12, "probabilities sum to {total}");
        debug_assert!(atoms.iter().all(|&(g, p)| g >= 0.0 && p >= 0.0));
        DiscreteGainLaw { atoms, kind }
    }

    /// Main-beam hit probability (the `g1` atom's mass).
    pub fn hit_rate(&self) -> f64 {
        self.atoms.last().map(|&(_, p)| p).unwrap_or(0.0)
    }

    /// `E[G^{2/alpha}]` of this law.
    pub fn moment(&self, alpha: f64) -> f64 {
        let q = 2.0 / alpha;
        self.atoms
            .iter()
            .map(|&(g, p)| if g == 0.0 { 0.0 } else { p * g.powf(q) })
            .sum()
    }
}

/// The 2/alpha moments of the interferer-side gains that enter the
/// interference Laplace exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainMoments {
    pub m_t: f64,
    pub m_r: f64,
}

impl GainMoments {
    /// Both moments for a network where every device uses `pattern`.
    pub fn for_pattern(pattern: &RadiationPattern, alpha: f64) -> Result<Self, GainError> {
        let m = interferer_moment(pattern, alpha)?;
        Ok(GainMoments { m_t: m, m_r: m })
    }
}

/// Induced gain laws for an ideal sector: the typical pair hits with
/// probability `u = F(omega/2)` while an interferer hits the typical RX with
/// probability `p = omega/2pi`. Atoms are ordered `[(g2, miss), (g1, hit)]`.
pub fn sector_gain_laws(
    pattern: &RadiationPattern,
    error: &OrientationErrorModel,
) -> Result<(DiscreteGainLaw, DiscreteGainLaw), GainError> {
    let RadiationPattern::IdealSector { omega, g2, g1 } = *pattern else {
        return Err(GainError::WrongPattern(pattern_name(pattern)));
    };
    let u = error.cdf(omega / 2.0)?;
    let p = omega / TWO_PI;
    let typical = DiscreteGainLaw::new(vec![(g2, 1.0 - u), (g1, u)], GainLawKind::TypicalSector);
    let interferer =
        DiscreteGainLaw::new(vec![(g2, 1.0 - p), (g1, p)], GainLawKind::InterfererSector);
    Ok((typical, interferer))
}

fn pattern_name(pattern: &RadiationPattern) -> &'static str {
    match pattern {
        RadiationPattern::Omni => "Omni",
        RadiationPattern::IdealSector { .. } => "IdealSector",
        RadiationPattern::TransitionSector { .. } => "TransitionSector",
        RadiationPattern::ThreeGppSector { .. } => "ThreeGppSector",
    }
}

/// `E[G_I^{2/alpha}]` for a gain observed at a uniform input angle:
/// `(1/2pi) int_{-pi}^{pi} G(theta)^{2/alpha} dtheta`.
///
/// Closed form for every pattern: plateaus contribute exactly, the linear
/// ramps of the transition sector integrate as powers, and the Gaussian
/// mainlobe of the 3GPP sector reduces to an erf.
pub fn interferer_moment(pattern: &RadiationPattern, alpha: f64) -> Result<f64, GainError> {
    if alpha <= 2.0 {
        return Err(GainError::AlphaOutOfRange(alpha));
    }
    let q = 2.0 / alpha;
    Ok(match *pattern {
        RadiationPattern::Omni => 1.0,
        RadiationPattern::IdealSector { omega, g2, g1 } => {
            let p = omega / TWO_PI;
            (1.0 - p) * pow_or_zero(g2, q) + p * g1.powf(q)
        }
        RadiationPattern::TransitionSector {
            omega,
            gamma,
            g2,
            g1,
        } => {
            let t1 = omega / 2.0 - gamma / 2.0;
            let t3 = omega / 2.0 + gamma;
            let main = g1.powf(q) * (t1 + gamma / (q + 1.0));
            let side = pow_or_zero(g2, q) * (gamma / (2.0 * (q + 1.0)) + PI - t3);
            (main + side) / PI
        }
        RadiationPattern::ThreeGppSector {
            omega,
            g2,
            g1,
            theta1,
        } => {
            let c = q * 0.3 * std::f64::consts::LN_10 * 4.0 / (omega * omega);
            let main =
                g1.powf(q) * 0.5 * (PI / c).sqrt() * statrs::function::erf::erf(c.sqrt() * theta1);
            (main + pow_or_zero(g2, q) * (PI - theta1)) / PI
        }
    })
}

fn pow_or_zero(g: f64, q: f64) -> f64 {
    if g == 0.0 {
        0.0
    } else {
        g.powf(q)
    }
}

/// `E[fn(G_T, G_R)]` over the independent orientation errors of the typical
/// TX and RX.
///
/// Discrete for omni/ideal sectors. For the continuous patterns the
/// expectation is a tensor-product Gauss-Legendre quadrature over the error
/// law (64 nodes per axis per panel, checked against 128). The error domain
/// is split at the pattern breakpoints: constant-gain stretches collapse to
/// exact point masses, and ramp panels that reach gain zero are integrated
/// under a cubic substitution clustering nodes at the zero, which keeps the
/// essentially singular success integrand (`exp(-c g^{-2/alpha})` as
/// `g -> 0`) resolved.
pub fn typical_gain_expectation<F: Fn(f64, f64) -> f64>(
    f: F,
    pattern: &RadiationPattern,
    error: &OrientationErrorModel,
) -> Result<f64, GainError> {
    match gain_pair_nodes(pattern, error)? {
        GainNodes::Discrete(atoms) => Ok(tensor_sum(&atoms, &f)),
        GainNodes::Quadrature { base, refined } => {
            let coarse = tensor_sum(&base, &f);
            let fine = tensor_sum(&refined, &f);
            check_converged(coarse, fine)?;
            Ok(fine)
        }
    }
}

fn tensor_sum<F: Fn(f64, f64) -> f64>(axis: &[(f64, f64)], f: &F) -> f64 {
    let mut total = 0.0;
    for &(gt, wt) in axis {
        let mut inner = 0.0;
        for &(gr, wr) in axis {
            inner += wr * f(gt, gr);
        }
        total += wt * inner;
    }
    total
}

pub(crate) fn check_converged(coarse: f64, fine: f64) -> Result<(), GainError> {
    let scale = coarse.abs().max(fine.abs());
    if scale > 1e-12 && (coarse - fine).abs() > 1e-6 * scale {
        return Err(GainError::QuadratureNotConverged { coarse, fine });
    }
    Ok(())
}

/// One axis of the typical-pair gain expectation: `(gain, weight)` nodes with
/// weights summing to 1.
pub(crate) enum GainNodes {
    /// Exact atoms (omni, ideal sector, or zero orientation error).
    Discrete(Vec<(f64, f64)>),
    /// Quadrature nodes at two resolutions for the convergence check.
    Quadrature {
        base: Vec<(f64, f64)>,
        refined: Vec<(f64, f64)>,
    },
}

pub(crate) fn gain_pair_nodes(
    pattern: &RadiationPattern,
    error: &OrientationErrorModel,
) -> Result<GainNodes, GainError> {
    match pattern {
        RadiationPattern::Omni => Ok(GainNodes::Discrete(vec![(1.0, 1.0)])),
        RadiationPattern::IdealSector { omega, g2, g1 } => {
            let u = error.cdf(omega / 2.0)?;
            Ok(GainNodes::Discrete(vec![(*g2, 1.0 - u), (*g1, u)]))
        }
        _ => {
            if matches!(error, OrientationErrorModel::Zero) {
                return Ok(GainNodes::Discrete(vec![(pattern.gain(0.0), 1.0)]));
            }
            let base = pattern_axis(pattern, error, 64)?;
            let refined = pattern_axis(pattern, error, 128)?;
            Ok(GainNodes::Quadrature { base, refined })
        }
    }
}

/// One marginal of the typical-pair gain law for a continuous pattern:
/// `(gain, probability-weight)` nodes whose weights sum to 1.
fn pattern_axis(
    pattern: &RadiationPattern,
    error: &OrientationErrorModel,
    order: usize,
) -> Result<Vec<(f64, f64)>, GainError> {
    let rule = gauss_legendre(order);
    let kinks = error_density_kinks(error);
    let mut axis = AxisBuilder {
        pattern,
        error,
        rule: &rule,
        kinks: &kinks,
        eps_max: error.eps_max(),
        nodes: Vec::new(),
    };
    match *pattern {
        RadiationPattern::TransitionSector {
            omega,
            gamma,
            g2,
            g1,
        } => {
            let t1 = omega / 2.0 - gamma / 2.0;
            let t2 = omega / 2.0 + gamma / 2.0;
            let t3 = omega / 2.0 + gamma;
            axis.plateau(0.0, t1, g1)?;
            axis.ramp(t1, t2, RampZero::Right)?;
            axis.ramp(t2, t3, RampZero::Left)?;
            axis.plateau(t3, PI, g2)?;
        }
        RadiationPattern::ThreeGppSector { g2, theta1, .. } => {
            axis.smooth(0.0, theta1)?;
            axis.plateau(theta1, PI, g2)?;
        }
        _ => unreachable!("discrete patterns handled by gain_pair_nodes"),
    }
    Ok(axis.nodes)
}

/// Points in `(0, eps_max)` where the error density is not smooth.
fn error_density_kinks(error: &OrientationErrorModel) -> Vec<f64> {
    match *error {
        OrientationErrorModel::Dimple { a, .. } => vec![a],
        _ => vec![],
    }
}

/// Which end of a linear gain ramp reaches zero.
enum RampZero {
    Left,
    Right,
}

struct AxisBuilder<'a> {
    pattern: &'a RadiationPattern,
    error: &'a OrientationErrorModel,
    rule: &'a [(f64, f64)],
    kinks: &'a [f64],
    eps_max: f64,
    nodes: Vec<(f64, f64)>,
}

impl AxisBuilder<'_> {
    /// Constant-gain stretch: one exact point mass.
    fn plateau(&mut self, lo: f64, hi: f64, gain: f64) -> Result<(), GainError> {
        if lo >= self.eps_max {
            return Ok(());
        }
        let hi = hi.min(self.eps_max);
        let mass = self.error.cdf(hi)? - self.error.cdf(lo)?;
        if mass > 0.0 {
            self.nodes.push((gain, mass));
        }
        Ok(())
    }

    /// Smoothly varying positive gain: plain Gauss-Legendre per panel, with
    /// panels split at density kinks and at a few error quantiles so tight
    /// error distributions stay resolved inside a wide mainlobe.
    fn smooth(&mut self, lo: f64, hi: f64) -> Result<(), GainError> {
        if lo >= self.eps_max {
            return Ok(());
        }
        let hi = hi.min(self.eps_max);
        if hi <= lo {
            return Ok(());
        }
        let mut splits = self.kinks.to_vec();
        for q in [0.6, 0.95, 0.9975] {
            splits.push(self.error.quantile(q)?);
        }
        for w in panel_edges(lo, hi, &splits).windows(2) {
            self.plain_panel(w[0], w[1])?;
        }
        Ok(())
    }

    /// Linear gain ramp on `[lo, hi]` hitting zero at the given end; the
    /// panel adjacent to the zero is integrated under the cubic substitution.
    fn ramp(&mut self, lo: f64, hi: f64, zero: RampZero) -> Result<(), GainError> {
        if lo >= self.eps_max {
            return Ok(());
        }
        let hi_c = hi.min(self.eps_max);
        if hi_c <= lo {
            return Ok(());
        }
        let edges = panel_edges(lo, hi_c, self.kinks);
        for (i, w) in edges.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            match zero {
                RampZero::Left if i == 0 => self.cubic_panel(a, b, true)?,
                // the zero at `hi` is inside the clipped domain only when
                // nothing was clipped away
                RampZero::Right if i == edges.len() - 2 && hi_c == hi => {
                    self.cubic_panel(a, b, false)?
                }
                _ => self.plain_panel(a, b)?,
            }
        }
        Ok(())
    }

    fn plain_panel(&mut self, a: f64, b: f64) -> Result<(), GainError> {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        for &(x, wt) in self.rule {
            let e = c + h * x;
            self.nodes
                .push((self.pattern.gain(e), wt * h * self.error.pdf(e)?));
        }
        Ok(())
    }

    /// Gauss nodes under `eps = anchor -+ L s^3`, clustering toward the gain
    /// zero at the anchored end.
    fn cubic_panel(&mut self, a: f64, b: f64, zero_at_left: bool) -> Result<(), GainError> {
        let len = b - a;
        for &(x, wt) in self.rule {
            let s = 0.5 * (x + 1.0);
            let e = if zero_at_left {
                a + len * s * s * s
            } else {
                b - len * s * s * s
            };
            let jac = 1.5 * len * s * s;
            self.nodes
                .push((self.pattern.gain(e), wt * jac * self.error.pdf(e)?));
        }
        Ok(())
    }
}

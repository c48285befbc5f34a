//! Coverage and throughput analysis for directional wireless Poisson networks.
//!
//! Models an ad hoc network as a marked bipolar Poisson point process in which
//! every transmitter aims a directional antenna at its dedicated receiver and
//! both ends are subject to random orientation error. The library provides
//!
//! - TRP-normalized radiation patterns (omni, ideal sector, sector with a
//!   linear transition region, and a 3GPP-style Gaussian mainlobe),
//! - orientation-error distributions with cdf/pdf/quantile/sampling and a
//!   concavity diagnostic,
//! - the induced gain laws between the typical pair and between interferers
//!   and the typical receiver,
//! - success probability of the typical transmission (closed forms for omni
//!   and ideal sectors, quadrature for the continuous patterns),
//! - spatial throughput and outage-constrained transmission capacity,
//!   including the beamwidth maximizer of the latter,
//! - a seeded Monte Carlo simulator used to cross-validate every analytic
//!   result, and
//! - a CLI (`beamnet`) that sweeps these quantities and emits CSV.
//!
//! Angles are radians and gains are linear power ratios throughout the
//! library; the CLI converts from degrees (and optionally dB) at the edge.

pub mod capacity;
pub mod cli;
pub mod error_models;
pub mod gains;
pub mod link;
pub mod numeric;
pub mod patterns;
pub mod simulate;

pub use capacity::{OutageConstraint, ThroughputResult};
pub use error_models::OrientationErrorModel;
pub use gains::DiscreteGainLaw;
pub use link::NetworkParams;
pub use patterns::RadiationPattern;
pub use simulate::{SimConfig, SimEstimate};

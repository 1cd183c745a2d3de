//! Central spin coupled isotropically to N bath spins (spin-star model).
//!
//! Exact reduced dynamics over the Dicke sector, trace distances between
//! evolved state pairs, large-N collapse-revival envelopes and time scales,
//! and the rates of the exact time-local master equation.

pub mod asymptotics;
pub mod distances;
pub mod dynamics;
pub mod error;
pub mod master_eq;
pub mod model;
pub mod sum;
pub mod timescales;

pub use distances::{DistanceSeries, PairCoefficients};
pub use dynamics::{BlochVector, Propagator, PropagatorSample};
pub use error::{Error, Result};
pub use model::{compute_spectrum, thermal_weights, ModelParams, SubspaceSpectrum, ThermalWeights};
pub use master_eq::{rates, RateSample};
pub use timescales::{fwhm_analytic, fwhm_numeric, period, CollapseRevivalReport, PeriodReport};

//! Normalised local hazard (NLH) diagnostics for parametric survival models.
//!
//! The crate fits parametric hazard-rate models to right-censored and
//! left-truncated survival data and draws locally standardized comparisons of
//! the Nelson–Aalen estimate against the fitted model: curves that are
//! approximately standard normal at each time point when the model holds, so
//! that departures are read directly against a ±1.96 band.
//!
//! Everything numeric is generic over the scalar type via [`real::Real`]
//! (`f32` or `f64`); concrete `f64` aliases are exported at the crate root.

pub mod band;
pub mod cox;
pub mod curve;
pub mod data;
pub mod discrete;
pub mod error;
pub mod fit;
pub mod io;
pub mod linalg;
pub mod models;
pub mod power;
pub mod quad;
pub mod real;
pub mod special;

pub use error::{NlhError, Result};
pub use real::Real;

/// `f64` aliases for the main vocabulary types.
pub type Subject64 = data::Subject<f64>;
pub type Sample64 = data::SurvivalSample<f64>;
pub type RiskPath64 = data::RiskPath<f64>;
pub type StepCurve64 = data::StepCurve<f64>;
pub type DiscreteTable64 = data::DiscreteTable<f64>;
pub type FitResult64 = fit::FitResult<f64>;
pub type NlhCurve64 = curve::NlhCurve<f64>;

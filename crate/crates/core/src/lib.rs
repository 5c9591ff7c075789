//! Planning, simulation, and analysis toolkit for verifying antenna
//! cross-polarization discrimination (XPD) and material penetration loss
//! measurements made with directional wideband channel sounders.
//!
//! The toolkit covers the full verification loop:
//!
//! * [`geometry`]: far-field, clearance, and material-extent rules a
//!   trustworthy setup must obey, plus validators that flag violations;
//! * [`channel_model`]: an image-method ray model with polarization
//!   leakage that synthesizes band-limited power delay profiles, standing
//!   in for the hardware so the pipeline can be exercised end to end;
//! * [`analysis`]: path loss, XPD, and penetration-loss computation with
//!   distance-consistency statistics;
//! * [`io`]: the delimited text formats records and PDPs travel in.
//!
//! Everything numeric is generic over the scalar type through
//! [`num::Real`] (`f32` or `f64`); the aliases below pin the common `f64`
//! instantiations.

// Validation uses the negated form `!(x > 0)` on purpose: it rejects NaN,
// which `x <= 0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod channel_model;
pub mod geometry;
pub mod io;
pub mod num;

pub use num::Real;

/// Speed of light in vacuum, m/s. Wavelengths are always derived from
/// frequency with this constant.
pub const SPEED_OF_LIGHT_M_PER_S: f64 = 299_792_458.0;

// Concrete f64 instantiations (the CLI's working precision).
pub type Antenna64 = geometry::Antenna<f64>;
pub type MaterialSpec64 = geometry::MaterialSpec<f64>;
pub type SetupGeometry64 = geometry::SetupGeometry<f64>;
pub type RuleViolation64 = geometry::RuleViolation<f64>;
pub type Ray64 = channel_model::Ray<f64>;
pub type PowerDelayProfile64 = channel_model::PowerDelayProfile<f64>;
pub type Environment64 = channel_model::Environment<f64>;
pub type MeasurementRecord64 = analysis::MeasurementRecord<f64>;
pub type BaselinePathLoss64 = analysis::BaselinePathLoss<f64>;
pub type ConsistencyReport64 = analysis::ConsistencyReport<f64>;
pub type PenetrationResult64 = analysis::PenetrationResult<f64>;

// f32 instantiations for callers trading precision for footprint.
pub type Antenna32 = geometry::Antenna<f32>;
pub type MaterialSpec32 = geometry::MaterialSpec<f32>;
pub type SetupGeometry32 = geometry::SetupGeometry<f32>;
pub type Ray32 = channel_model::Ray<f32>;
pub type PowerDelayProfile32 = channel_model::PowerDelayProfile<f32>;
pub type Environment32 = channel_model::Environment<f32>;
pub type MeasurementRecord32 = analysis::MeasurementRecord<f32>;

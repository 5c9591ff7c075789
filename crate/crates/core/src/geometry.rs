//! Geometric planning rules for XPD and penetration-loss measurement setups.
//!
//! A free-space antenna verification only produces trustworthy numbers when
//! the setup keeps every reflection source far outside the antenna main
//! lobes and every antenna well inside the far field. This module computes
//! the corresponding minimum distances, heights, and material extents, and
//! validates complete setups against them:
//!
//! * far-field boundary `2 D^2 / lambda` and the 5x (XPD) / 10x
//!   (penetration) separation rules derived from it,
//! * ground/ceiling/side clearance from the half-power beamwidths of the
//!   antenna pair (with a doubled safety margin),
//! * minimum illuminated extent of a material under test placed midway
//!   between the antennas,
//! * first-Fresnel-zone radius for obstruction checks,
//! * a verification distance schedule (repeat measurements 20-100% beyond
//!   the initial far-field distance).
//!
//! All angles cross these interfaces in degrees and are converted to
//! radians internally.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::Real;
use crate::SPEED_OF_LIGHT_M_PER_S;

/// Minimum T-R separation for XPD verification, in Fraunhofer distances.
pub const XPD_FAR_FIELD_FACTOR: f64 = 5.0;
/// Minimum T-R separation for penetration measurements, in Fraunhofer
/// distances (five on the TX side of the material, five more on the RX side).
pub const PENETRATION_FAR_FIELD_FACTOR: f64 = 10.0;
/// Default margin applied on top of the illuminated cross-section when
/// sizing a material under test.
pub const DEFAULT_MUT_MARGIN_FACTOR: f64 = 2.0;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors for geometric computations and setup validation.
#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("frequency must be positive, got {0} Hz")]
    NonPositiveFrequency(f64),
    #[error("aperture must be non-negative, got {0} m")]
    NegativeAperture(f64),
    #[error("half-power beamwidth must lie in (0, 180) degrees, got {0}")]
    HpbwOutOfRange(f64),
    #[error("T-R separation must be positive, got {0} m")]
    NonPositiveSeparation(f64),
    #[error("verification schedule needs at least two distances, got {0}")]
    ScheduleTooShort(usize),
    #[error("penetration validation requires a material under test")]
    MissingMaterial,
    #[error("malformed setup: {0}")]
    MalformedSetup(String),
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Linear polarization of an antenna port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    /// Vertical.
    V,
    /// Horizontal.
    H,
}

impl Polarization {
    /// The orthogonal polarization.
    pub fn orthogonal(self) -> Self {
        match self {
            Polarization::V => Polarization::H,
            Polarization::H => Polarization::V,
        }
    }
}

impl std::fmt::Display for Polarization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Polarization::V => write!(f, "V"),
            Polarization::H => write!(f, "H"),
        }
    }
}

impl std::str::FromStr for Polarization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "V" | "v" => Ok(Polarization::V),
            "H" | "h" => Ok(Polarization::H),
            other => Err(format!("polarization must be V or H, got {other:?}")),
        }
    }
}

/// How the beamwidth angles of the clearance rule are interpreted.
///
/// `FullHpbw` plugs the full half-power beamwidth of each antenna into the
/// clearance formula and reproduces the published minimum heights for the
/// 73.5 GHz horn pairs (1.34 m widebeam, 0.61 m narrowbeam at 5 m).
/// `HalfHpbw` uses half of each beamwidth, the strictest literal reading of
/// the half-angle geometry, and yields roughly half the clearance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ClearanceConvention {
    #[default]
    FullHpbw,
    HalfHpbw,
}

/// A directional antenna as used for channel-sounder verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Antenna<T> {
    /// Label for reports ("widebeam", "narrowbeam", ...).
    pub name: String,
    /// Largest linear dimension of the aperture, in meters.
    pub aperture_largest_dim_m: T,
    /// Half-power beamwidth in the azimuth plane, degrees.
    pub hpbw_azimuth_deg: T,
    /// Half-power beamwidth in the elevation plane, degrees.
    pub hpbw_elevation_deg: T,
    /// Boresight gain, dBi.
    pub gain_dbi: T,
    /// Intrinsic cross-polarization leakage of the antenna, dB. This is the
    /// simulator's ground truth; a real campaign estimates it.
    pub xpd_leakage_db: T,
    /// Nominal mounting polarization.
    pub polarization: Polarization,
}

impl<T: Real> Antenna<T> {
    /// Checks the type invariants: positive aperture, beamwidths in
    /// (0, 180) degrees, finite gain, non-negative leakage.
    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.aperture_largest_dim_m > T::zero()) {
            return Err(GeometryError::NegativeAperture(
                self.aperture_largest_dim_m.as_f64(),
            ));
        }
        for hpbw in [self.hpbw_azimuth_deg, self.hpbw_elevation_deg] {
            if !(hpbw > T::zero() && hpbw < T::lit(180.0)) {
                return Err(GeometryError::HpbwOutOfRange(hpbw.as_f64()));
            }
        }
        if !self.gain_dbi.is_finite() {
            return Err(GeometryError::MalformedSetup(format!(
                "antenna {:?} has non-finite gain",
                self.name
            )));
        }
        if self.xpd_leakage_db < T::zero() {
            return Err(GeometryError::MalformedSetup(format!(
                "antenna {:?} has negative XPD leakage",
                self.name
            )));
        }
        Ok(())
    }

    /// Far-field boundary of this antenna at the given carrier frequency.
    pub fn fraunhofer_distance_m(&self, frequency_hz: T) -> Result<T, GeometryError> {
        fraunhofer_distance(self.aperture_largest_dim_m, frequency_hz)
    }
}

/// Internal-reflection description of a material under test: one echo
/// bouncing once off each inner face before exiting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InternalReflection<T> {
    /// Relative permittivity of the slab, sets the in-material speed.
    pub relative_permittivity: T,
    /// Loss per internal interface reflection, dB.
    pub interface_reflection_db: T,
}

/// A material under test (MUT), placed midway between the antennas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialSpec<T> {
    /// Label for reports ("clear glass", "drywall", ...).
    pub name: String,
    /// Slab thickness, centimeters.
    pub thickness_cm: T,
    /// One-way insertion loss of the slab, dB. Simulator ground truth.
    pub insertion_loss_db: T,
    /// Edge-to-edge height of the slab, meters.
    pub extent_height_m: T,
    /// Edge-to-edge width of the slab, meters.
    pub extent_width_m: T,
    /// Optional internal-reflection model for the slab.
    pub internal_reflection: Option<InternalReflection<T>>,
}

impl<T: Real> MaterialSpec<T> {
    /// Checks the type invariants: positive thickness and extents,
    /// non-negative insertion loss.
    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.thickness_cm > T::zero()) {
            return Err(GeometryError::MalformedSetup(format!(
                "material {:?} has non-positive thickness",
                self.name
            )));
        }
        if self.insertion_loss_db < T::zero() {
            return Err(GeometryError::MalformedSetup(format!(
                "material {:?} has negative insertion loss",
                self.name
            )));
        }
        if !(self.extent_height_m > T::zero() && self.extent_width_m > T::zero()) {
            return Err(GeometryError::MalformedSetup(format!(
                "material {:?} has non-positive extents",
                self.name
            )));
        }
        Ok(())
    }
}

/// A complete measurement setup: one TX/RX antenna pair on a line-of-sight
/// path, both mounted at the same height, optionally with a material under
/// test midway between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetupGeometry<T> {
    /// Carrier frequency, Hz. The wavelength is always derived from this.
    pub frequency_hz: T,
    /// T-R separation along boresight, meters.
    pub tr_separation_m: T,
    /// Height of both antennas above ground, meters.
    pub tx_height_m: T,
    /// Free distance from the antennas to the ceiling and to walls or
    /// obstructions on either side of the path, meters.
    pub clearance_above_and_sides_m: T,
    /// Transmit antenna.
    pub tx_antenna: Antenna<T>,
    /// Receive antenna.
    pub rx_antenna: Antenna<T>,
    /// Material under test, when this is a penetration setup.
    pub material: Option<MaterialSpec<T>>,
    /// Worst-case boresight pointing error of either antenna, degrees.
    /// `None` means the operators aligned by procedure and alignment is
    /// assumed; `Some(e)` with `e > 0` flags a boresight violation.
    pub pointing_error_deg: Option<T>,
}

impl<T: Real> SetupGeometry<T> {
    /// Carrier wavelength, meters.
    pub fn wavelength_m(&self) -> Result<T, GeometryError> {
        wavelength(self.frequency_hz)
    }

    /// Checks the type invariants of the setup and its antennas/material.
    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.frequency_hz > T::zero()) {
            return Err(GeometryError::NonPositiveFrequency(self.frequency_hz.as_f64()));
        }
        if !(self.tr_separation_m > T::zero()) {
            return Err(GeometryError::NonPositiveSeparation(
                self.tr_separation_m.as_f64(),
            ));
        }
        if self.tx_height_m < T::zero() || self.clearance_above_and_sides_m < T::zero() {
            return Err(GeometryError::MalformedSetup(
                "heights and clearances must be non-negative".to_string(),
            ));
        }
        self.tx_antenna.validate()?;
        self.rx_antenna.validate()?;
        if let Some(material) = &self.material {
            material.validate()?;
        }
        Ok(())
    }

    /// The larger of the two antennas' Fraunhofer distances.
    pub fn max_fraunhofer_m(&self) -> Result<T, GeometryError> {
        let tx = self.tx_antenna.fraunhofer_distance_m(self.frequency_hz)?;
        let rx = self.rx_antenna.fraunhofer_distance_m(self.frequency_hz)?;
        Ok(tx.max(rx))
    }
}

/// Which setup rule a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RuleId {
    /// T-R separation below the far-field minimum.
    FarField,
    /// Antennas not boresight-aligned.
    Boresight,
    /// Ground/ceiling/side clearance below the beamwidth-derived minimum.
    Clearance,
    /// T-R separation below the penetration minimum (material in the path).
    MutDistance,
    /// Material under test smaller than the illuminated cross-section.
    MutExtent,
    /// A multipath component too strong and too close to the first
    /// arriving path to be separated out.
    MultipathMargin,
}

impl std::fmt::Display for RuleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RuleId::FarField => "FAR_FIELD",
            RuleId::Boresight => "BORESIGHT",
            RuleId::Clearance => "CLEARANCE",
            RuleId::MutDistance => "MUT_DISTANCE",
            RuleId::MutExtent => "MUT_EXTENT",
            RuleId::MultipathMargin => "MULTIPATH_MARGIN",
        };
        write!(f, "{s}")
    }
}

/// Unit shared by the observed and required values of a violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Meters,
    Degrees,
    Decibels,
}

impl std::fmt::Display for Unit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Unit::Meters => "m",
            Unit::Degrees => "deg",
            Unit::Decibels => "dB",
        };
        write!(f, "{s}")
    }
}

/// One violated setup rule, with the offending and required values in a
/// common unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleViolation<T> {
    pub rule: RuleId,
    pub observed: T,
    pub required: T,
    pub unit: Unit,
    pub message: String,
}

impl<T: Real> std::fmt::Display for RuleViolation<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} (observed {:.3} {u}, required {:.3} {u})",
            self.rule,
            self.message,
            self.observed.as_f64(),
            self.required.as_f64(),
            u = self.unit
        )
    }
}

// ---------------------------------------------------------------------------
// Scalar operations
// ---------------------------------------------------------------------------

/// Carrier wavelength in meters for a frequency in Hz.
pub fn wavelength<T: Real>(frequency_hz: T) -> Result<T, GeometryError> {
    if !(frequency_hz > T::zero()) {
        return Err(GeometryError::NonPositiveFrequency(frequency_hz.as_f64()));
    }
    Ok(T::lit(SPEED_OF_LIGHT_M_PER_S) / frequency_hz)
}

/// Fraunhofer (far-field) distance `2 D^2 / lambda` of an aperture with
/// largest linear dimension `aperture_m` at `frequency_hz`.
pub fn fraunhofer_distance<T: Real>(aperture_m: T, frequency_hz: T) -> Result<T, GeometryError> {
    if aperture_m < T::zero() {
        return Err(GeometryError::NegativeAperture(aperture_m.as_f64()));
    }
    let lambda = wavelength(frequency_hz)?;
    Ok(T::lit(2.0) * aperture_m * aperture_m / lambda)
}

/// Minimum T-R separation for XPD verification: five Fraunhofer distances.
pub fn min_tr_separation_xpd<T: Real>(fraunhofer_m: T) -> T {
    T::lit(XPD_FAR_FIELD_FACTOR) * fraunhofer_m
}

/// Minimum T-R separation for penetration measurements: ten Fraunhofer
/// distances, leaving five on each side of the material.
pub fn min_tr_separation_penetration<T: Real>(fraunhofer_m: T) -> T {
    T::lit(PENETRATION_FAR_FIELD_FACTOR) * fraunhofer_m
}

/// Minimum antenna height above ground (and clearance below the ceiling /
/// to the sides) so that ground and ceiling bounces stay outside both
/// antennas' main lobes, including the doubled safety margin:
/// `2 * D_TR / (cot(theta_tx) + cot(theta_rx))`.
///
/// Uses the default [`ClearanceConvention::FullHpbw`] angle convention.
pub fn min_clearance_height<T: Real>(
    tr_separation_m: T,
    hpbw_tx_deg: T,
    hpbw_rx_deg: T,
) -> Result<T, GeometryError> {
    min_clearance_height_with(
        tr_separation_m,
        hpbw_tx_deg,
        hpbw_rx_deg,
        ClearanceConvention::FullHpbw,
    )
}

/// [`min_clearance_height`] with an explicit angle convention.
pub fn min_clearance_height_with<T: Real>(
    tr_separation_m: T,
    hpbw_tx_deg: T,
    hpbw_rx_deg: T,
    convention: ClearanceConvention,
) -> Result<T, GeometryError> {
    if !(tr_separation_m > T::zero()) {
        return Err(GeometryError::NonPositiveSeparation(tr_separation_m.as_f64()));
    }
    let half = T::lit(0.5);
    let mut cot_sum = T::zero();
    for hpbw in [hpbw_tx_deg, hpbw_rx_deg] {
        if !(hpbw > T::zero() && hpbw < T::lit(180.0)) {
            return Err(GeometryError::HpbwOutOfRange(hpbw.as_f64()));
        }
        let theta = match convention {
            ClearanceConvention::FullHpbw => hpbw,
            ClearanceConvention::HalfHpbw => hpbw * half,
        };
        cot_sum = cot_sum + theta.to_radians().tan().recip();
    }
    Ok(T::lit(2.0) * tr_separation_m / cot_sum)
}

/// Width of the cone a beam of `hpbw_deg` illuminates at `distance_m`:
/// `2 * distance * tan(HPBW / 2)`.
pub fn hpbw_illuminated_extent<T: Real>(distance_m: T, hpbw_deg: T) -> Result<T, GeometryError> {
    if !(hpbw_deg > T::zero() && hpbw_deg < T::lit(180.0)) {
        return Err(GeometryError::HpbwOutOfRange(hpbw_deg.as_f64()));
    }
    Ok(T::lit(2.0) * distance_m * (hpbw_deg * T::lit(0.5)).to_radians().tan())
}

/// Minimum edge-to-edge extent of a material under test placed five
/// Fraunhofer distances from the TX antenna, `margin_factor` times the
/// illuminated cross-section at that distance.
pub fn min_mut_extent<T: Real>(
    fraunhofer_m: T,
    hpbw_tx_deg: T,
    margin_factor: T,
) -> Result<T, GeometryError> {
    let tx_to_mut = T::lit(XPD_FAR_FIELD_FACTOR) * fraunhofer_m;
    Ok(margin_factor * hpbw_illuminated_extent(tx_to_mut, hpbw_tx_deg)?)
}

/// Radius of the `zone_index`-th Fresnel zone at the point splitting the
/// path into `d1_m` and `d2_m`: `sqrt(n * lambda * d1 * d2 / (d1 + d2))`.
pub fn fresnel_zone_radius<T: Real>(d1_m: T, d2_m: T, wavelength_m: T, zone_index: u32) -> T {
    let n = T::from_u32(zone_index).expect("zone index representable");
    (n * wavelength_m * d1_m * d2_m / (d1_m + d2_m)).sqrt()
}

/// Suggests `count` measurement distances starting at `min_distance_m`.
///
/// The first entry is the minimum itself; every later entry is 20-100%
/// beyond it, strictly increasing. Up to five distances this is a +25%
/// stair; beyond five the later entries spread evenly over
/// `[1.2, 2.0] * min_distance_m`.
pub fn suggest_verification_distances<T: Real>(
    min_distance_m: T,
    count: usize,
) -> Result<Vec<T>, GeometryError> {
    if !(min_distance_m > T::zero()) {
        return Err(GeometryError::NonPositiveSeparation(min_distance_m.as_f64()));
    }
    if count < 2 {
        return Err(GeometryError::ScheduleTooShort(count));
    }
    let mut schedule = Vec::with_capacity(count);
    if count <= 5 {
        for k in 0..count {
            let step = T::lit(0.25) * T::from_usize(k).expect("count fits scalar");
            schedule.push(min_distance_m * (T::one() + step));
        }
    } else {
        schedule.push(min_distance_m);
        let lo = T::lit(1.2);
        let span = T::lit(0.8);
        let denom = T::from_usize(count - 2).expect("count fits scalar");
        for k in 1..count {
            let frac = T::from_usize(k - 1).expect("count fits scalar") / denom;
            schedule.push(min_distance_m * (lo + span * frac));
        }
    }
    Ok(schedule)
}

// ---------------------------------------------------------------------------
// Setup validators
// ---------------------------------------------------------------------------

/// Validates an XPD verification setup. Empty result means the setup obeys
/// the far-field, clearance, and boresight rules.
pub fn validate_xpd_setup<T: Real>(
    setup: &SetupGeometry<T>,
) -> Result<Vec<RuleViolation<T>>, GeometryError> {
    validate_xpd_setup_with(setup, ClearanceConvention::FullHpbw)
}

/// [`validate_xpd_setup`] with an explicit clearance angle convention.
pub fn validate_xpd_setup_with<T: Real>(
    setup: &SetupGeometry<T>,
    convention: ClearanceConvention,
) -> Result<Vec<RuleViolation<T>>, GeometryError> {
    setup.validate()?;
    let mut violations = Vec::new();

    let max_df = setup.max_fraunhofer_m()?;
    let required_sep = min_tr_separation_xpd(max_df);
    if setup.tr_separation_m < required_sep {
        violations.push(RuleViolation {
            rule: RuleId::FarField,
            observed: setup.tr_separation_m,
            required: required_sep,
            unit: Unit::Meters,
            message: format!(
                "T-R separation below {} Fraunhofer distances (max D_f {:.3} m)",
                XPD_FAR_FIELD_FACTOR,
                max_df.as_f64()
            ),
        });
    }

    push_clearance_violations(setup, convention, &mut violations)?;
    push_boresight_violation(setup, &mut violations);
    Ok(violations)
}

/// Validates a penetration-loss setup (requires a material under test).
/// Checks the 10x far-field rule, the illuminated extent of the material at
/// the midpoint, clearances, and boresight alignment.
pub fn validate_penetration_setup<T: Real>(
    setup: &SetupGeometry<T>,
) -> Result<Vec<RuleViolation<T>>, GeometryError> {
    validate_penetration_setup_with(
        setup,
        ClearanceConvention::FullHpbw,
        T::lit(DEFAULT_MUT_MARGIN_FACTOR),
    )
}

/// [`validate_penetration_setup`] with explicit convention and extent margin.
pub fn validate_penetration_setup_with<T: Real>(
    setup: &SetupGeometry<T>,
    convention: ClearanceConvention,
    mut_margin_factor: T,
) -> Result<Vec<RuleViolation<T>>, GeometryError> {
    setup.validate()?;
    let material = setup.material.as_ref().ok_or(GeometryError::MissingMaterial)?;
    let mut violations = Vec::new();

    let max_df = setup.max_fraunhofer_m()?;
    let required_sep = min_tr_separation_penetration(max_df);
    if setup.tr_separation_m < required_sep {
        violations.push(RuleViolation {
            rule: RuleId::MutDistance,
            observed: setup.tr_separation_m,
            required: required_sep,
            unit: Unit::Meters,
            message: format!(
                "T-R separation below {} Fraunhofer distances with material in the path (max D_f {:.3} m)",
                PENETRATION_FAR_FIELD_FACTOR,
                max_df.as_f64()
            ),
        });
    }

    // Material is midway, so the TX illuminates it from D_TR / 2.
    let tx_to_mut = setup.tr_separation_m * T::lit(0.5);
    let checks = [
        (
            material.extent_height_m,
            setup.tx_antenna.hpbw_elevation_deg,
            "height",
        ),
        (
            material.extent_width_m,
            setup.tx_antenna.hpbw_azimuth_deg,
            "width",
        ),
    ];
    for (extent, hpbw, which) in checks {
        let required = mut_margin_factor * hpbw_illuminated_extent(tx_to_mut, hpbw)?;
        if extent < required {
            violations.push(RuleViolation {
                rule: RuleId::MutExtent,
                observed: extent,
                required,
                unit: Unit::Meters,
                message: format!(
                    "material {} smaller than the illuminated cross-section at {:.3} m",
                    which,
                    tx_to_mut.as_f64()
                ),
            });
        }
    }

    push_clearance_violations(setup, convention, &mut violations)?;
    push_boresight_violation(setup, &mut violations);
    Ok(violations)
}

fn push_clearance_violations<T: Real>(
    setup: &SetupGeometry<T>,
    convention: ClearanceConvention,
    violations: &mut Vec<RuleViolation<T>>,
) -> Result<(), GeometryError> {
    // Ground and ceiling bounces live in the elevation plane; side
    // obstructions in the azimuth plane. The single clearance figure must
    // cover both, so it is checked against the larger requirement.
    let required_elevation = min_clearance_height_with(
        setup.tr_separation_m,
        setup.tx_antenna.hpbw_elevation_deg,
        setup.rx_antenna.hpbw_elevation_deg,
        convention,
    )?;
    let required_azimuth = min_clearance_height_with(
        setup.tr_separation_m,
        setup.tx_antenna.hpbw_azimuth_deg,
        setup.rx_antenna.hpbw_azimuth_deg,
        convention,
    )?;
    if setup.tx_height_m < required_elevation {
        violations.push(RuleViolation {
            rule: RuleId::Clearance,
            observed: setup.tx_height_m,
            required: required_elevation,
            unit: Unit::Meters,
            message: "antenna height above ground below the beamwidth minimum".to_string(),
        });
    }
    let required_sides = required_elevation.max(required_azimuth);
    if setup.clearance_above_and_sides_m < required_sides {
        violations.push(RuleViolation {
            rule: RuleId::Clearance,
            observed: setup.clearance_above_and_sides_m,
            required: required_sides,
            unit: Unit::Meters,
            message: "ceiling/side clearance below the beamwidth minimum".to_string(),
        });
    }
    Ok(())
}

fn push_boresight_violation<T: Real>(
    setup: &SetupGeometry<T>,
    violations: &mut Vec<RuleViolation<T>>,
) {
    if let Some(error_deg) = setup.pointing_error_deg {
        if error_deg > T::zero() {
            violations.push(RuleViolation {
                rule: RuleId::Boresight,
                observed: error_deg,
                required: T::zero(),
                unit: Unit::Degrees,
                message: "antennas are not boresight-aligned".to_string(),
            });
        }
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

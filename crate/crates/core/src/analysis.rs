//! Measurement analysis: path loss, XPD, penetration loss, and
//! distance-consistency statistics.
//!
//! The measured quantity per capture is the first arriving component's
//! power. Path loss removes the antenna gains from it; XPD is the gap
//! between cross- and co-polarized path loss at the same distance; material
//! penetration loss is the excess of a behind-material capture over the
//! free-space baseline at the same distance, normalized per centimeter of
//! thickness. A campaign is consistent when these quantities do not move
//! with T-R separation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel_model::{PowerDelayProfile, PULSE_WIDTH_BINS};
use crate::geometry::Polarization;
use crate::num::{db_to_linear, linear_to_db, Real};

/// Default detection margin above the noise floor for the first arriving
/// component; multipath below this margin is treated as removable.
pub const DEFAULT_DETECTION_MARGIN_DB: f64 = 20.0;
/// Default max-minus-min threshold for a passing consistency check.
pub const DEFAULT_SPREAD_THRESHOLD_DB: f64 = 1.0;
/// Default sample standard deviation threshold for a passing consistency
/// check.
pub const DEFAULT_STD_THRESHOLD_DB: f64 = 1.1;
/// Default tolerance when comparing mean XPD across antenna combinations.
pub const DEFAULT_CROSS_COMBINATION_TOLERANCE_DB: f64 = 1.0;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors from the analysis pipeline.
#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("no PDP bin exceeds the detection threshold of {threshold_dbm} dBm")]
    NoSignal { threshold_dbm: f64 },
    #[error("consistency statistics need at least two values, got {0}")]
    NotEnoughValues(usize),
    #[error("record at {record_m} m does not match the baseline at {baseline_m} m")]
    DistanceMismatch { record_m: f64, baseline_m: f64 },
    #[error("path loss is only defined for free-space records (material present)")]
    UnexpectedMaterial,
    #[error("record has no material under test")]
    MissingMaterial,
    #[error("record has the wrong polarization pair, expected {0}")]
    WrongPolarization(&'static str),
    #[error("measured cross-polarized path loss required but not provided")]
    MissingCrossPathLoss,
    #[error("malformed record: {0}")]
    InvalidRecord(String),
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// TX/RX polarization combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PolarizationPair {
    #[serde(rename = "V-V")]
    VV,
    #[serde(rename = "V-H")]
    VH,
    #[serde(rename = "H-V")]
    HV,
    #[serde(rename = "H-H")]
    HH,
}

impl PolarizationPair {
    pub fn from_pols(tx: Polarization, rx: Polarization) -> Self {
        match (tx, rx) {
            (Polarization::V, Polarization::V) => PolarizationPair::VV,
            (Polarization::V, Polarization::H) => PolarizationPair::VH,
            (Polarization::H, Polarization::V) => PolarizationPair::HV,
            (Polarization::H, Polarization::H) => PolarizationPair::HH,
        }
    }

    pub fn tx(self) -> Polarization {
        match self {
            PolarizationPair::VV | PolarizationPair::VH => Polarization::V,
            PolarizationPair::HV | PolarizationPair::HH => Polarization::H,
        }
    }

    pub fn rx(self) -> Polarization {
        match self {
            PolarizationPair::VV | PolarizationPair::HV => Polarization::V,
            PolarizationPair::VH | PolarizationPair::HH => Polarization::H,
        }
    }

    /// Co-polarized (matching TX and RX polarization)?
    pub fn is_co(self) -> bool {
        matches!(self, PolarizationPair::VV | PolarizationPair::HH)
    }
}

impl std::fmt::Display for PolarizationPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}", self.tx(), self.rx())
    }
}

impl std::str::FromStr for PolarizationPair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "V-V" | "VV" => Ok(PolarizationPair::VV),
            "V-H" | "VH" => Ok(PolarizationPair::VH),
            "H-V" | "HV" => Ok(PolarizationPair::HV),
            "H-H" | "HH" => Ok(PolarizationPair::HH),
            other => Err(format!("polarization pair must be like V-V or V-H, got {other:?}")),
        }
    }
}

/// One captured link: powers, gains, polarizations, and the optional
/// material and PDP behind them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord<T> {
    /// T-R separation, meters.
    pub distance_m: T,
    pub tx_pol: Polarization,
    pub rx_pol: Polarization,
    /// Power into the TX antenna, dBm.
    pub transmit_power_dbm: T,
    /// Power of the first arriving component at the RX antenna output, dBm.
    pub received_power_first_path_dbm: T,
    pub gain_tx_dbi: T,
    pub gain_rx_dbi: T,
    /// Whether a material under test was in the path.
    pub mut_present: bool,
    /// Material thickness, centimeters, when present.
    pub mut_thickness_cm: Option<T>,
    /// The captured power delay profile, when retained.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pdp: Option<PowerDelayProfile<T>>,
}

impl<T: Real> MeasurementRecord<T> {
    /// TX/RX polarization combination of this record.
    pub fn polarization_pair(&self) -> PolarizationPair {
        PolarizationPair::from_pols(self.tx_pol, self.rx_pol)
    }

    /// Checks the type invariants.
    pub fn validate(&self) -> Result<(), AnalysisError> {
        if !(self.distance_m > T::zero()) {
            return Err(AnalysisError::InvalidRecord(format!(
                "distance must be positive, got {}",
                self.distance_m
            )));
        }
        for (label, v) in [
            ("transmit power", self.transmit_power_dbm),
            ("received power", self.received_power_first_path_dbm),
            ("TX gain", self.gain_tx_dbi),
            ("RX gain", self.gain_rx_dbi),
        ] {
            if !v.is_finite() {
                return Err(AnalysisError::InvalidRecord(format!("{label} is not finite")));
            }
        }
        if self.mut_present {
            match self.mut_thickness_cm {
                Some(t) if t > T::zero() => {}
                _ => {
                    return Err(AnalysisError::InvalidRecord(
                        "material present but thickness missing or non-positive".to_string(),
                    ))
                }
            }
        }
        Ok(())
    }
}

/// A free-space path loss pinned to the distance it was measured at, used
/// as the reference for penetration calculations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselinePathLoss<T> {
    pub distance_m: T,
    pub path_loss_db: T,
}

/// Distance-consistency statistics for one measured quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport<T> {
    /// (distance, value) pairs, sorted by distance.
    pub per_distance: Vec<(T, T)>,
    pub mean_db: T,
    /// Sample standard deviation (n-1 denominator).
    pub std_dev_db: T,
    /// max - min of the values.
    pub spread_db: T,
    pub pass: bool,
    pub threshold_spread_db: T,
    pub threshold_std_db: T,
}

/// Penetration loss of a material at one distance and polarization pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenetrationResult<T> {
    pub loss_db: T,
    /// `loss_db` divided by the material thickness in centimeters.
    pub normalized_loss_db_per_cm: T,
    pub polarization_pair: PolarizationPair,
    pub distance_m: T,
}

/// Which reference the cross-polarized penetration formula subtracts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CrossPenetrationForm {
    /// Predict the cross-polarized free-space path loss as the co-polarized
    /// baseline plus the XPD. Recovers the material loss cleanly.
    #[default]
    PredictedFromCopol,
    /// Subtract the directly measured cross-polarized free-space path loss
    /// and the XPD. Double-counts the XPD when the measured cross-polarized
    /// loss already contains it; kept selectable for comparison.
    MeasuredCross,
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Power of the first resolvable arriving component of a PDP, dBm.
///
/// Finds the earliest bin more than `detection_margin_db` above the noise
/// floor, climbs to the local maximum it leads to (advancing while a
/// stronger bin exists within one pulse width ahead, so the rising edge
/// and leading sidelobes of a band-limited pulse resolve to its peak), and
/// integrates the linear power over a window one pulse width either side
/// of that maximum.
pub fn first_arriving_component_power<T: Real>(
    pdp: &PowerDelayProfile<T>,
    detection_margin_db: T,
) -> Result<T, AnalysisError> {
    let threshold = pdp.noise_floor_dbm + detection_margin_db;
    let first = pdp
        .bins_dbm
        .iter()
        .position(|b| *b > threshold)
        .ok_or(AnalysisError::NoSignal {
            threshold_dbm: threshold.as_f64(),
        })?;

    let mut peak = first;
    loop {
        let search_end = (peak + PULSE_WIDTH_BINS).min(pdp.bins_dbm.len() - 1);
        let mut next = peak;
        for i in peak..=search_end {
            if pdp.bins_dbm[i] > pdp.bins_dbm[next] {
                next = i;
            }
        }
        if next == peak {
            break;
        }
        peak = next;
    }

    let lo = peak.saturating_sub(PULSE_WIDTH_BINS);
    let hi = (peak + PULSE_WIDTH_BINS).min(pdp.bins_dbm.len() - 1);
    let sum = pdp.bins_dbm[lo..=hi]
        .iter()
        .map(|b| db_to_linear(*b))
        .fold(T::zero(), |a, b| a + b);
    Ok(linear_to_db(sum))
}

/// Free-space path loss of a record with the antenna gains removed:
/// `P_t - P_r + G_TX + G_RX`. The same arithmetic serves co- and
/// cross-polarized records; the pair only labels the result.
pub fn path_loss<T: Real>(record: &MeasurementRecord<T>) -> Result<T, AnalysisError> {
    record.validate()?;
    if record.mut_present {
        return Err(AnalysisError::UnexpectedMaterial);
    }
    Ok(record.transmit_power_dbm - record.received_power_first_path_dbm
        + record.gain_tx_dbi
        + record.gain_rx_dbi)
}

/// Cross-polarization discrimination: cross-polarized minus co-polarized
/// path loss at the same distance.
pub fn xpd<T: Real>(path_loss_cross_db: T, path_loss_co_db: T) -> T {
    path_loss_cross_db - path_loss_co_db
}

/// Distance-consistency statistics over (distance, value) pairs: arithmetic
/// mean, sample standard deviation, max-minus-min spread, and a pass flag
/// requiring both spread and deviation under their thresholds.
pub fn consistency<T: Real>(
    values: &[(T, T)],
    threshold_spread_db: T,
    threshold_std_db: T,
) -> Result<ConsistencyReport<T>, AnalysisError> {
    if values.len() < 2 {
        return Err(AnalysisError::NotEnoughValues(values.len()));
    }
    let mut per_distance = values.to_vec();
    per_distance.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite distances"));

    let n = T::from_usize(values.len()).expect("count fits scalar");
    let sum = values.iter().map(|(_, v)| *v).fold(T::zero(), |a, b| a + b);
    let mean = sum / n;
    let ss = values
        .iter()
        .map(|(_, v)| (*v - mean) * (*v - mean))
        .fold(T::zero(), |a, b| a + b);
    let std_dev = (ss / (n - T::one())).sqrt();
    let max = values.iter().map(|(_, v)| *v).fold(T::neg_infinity(), T::max);
    let min = values.iter().map(|(_, v)| *v).fold(T::infinity(), T::min);
    let spread = max - min;

    Ok(ConsistencyReport {
        per_distance,
        mean_db: mean,
        std_dev_db: std_dev,
        spread_db: spread,
        pass: spread <= threshold_spread_db && std_dev <= threshold_std_db,
        threshold_spread_db,
        threshold_std_db,
    })
}

/// True when all mean values agree within `tolerance_db` (max - min).
/// Fewer than two means agree vacuously.
pub fn cross_combination_check<T: Real>(means: &[T], tolerance_db: T) -> bool {
    if means.len() < 2 {
        return true;
    }
    let max = means.iter().cloned().fold(T::neg_infinity(), T::max);
    let min = means.iter().cloned().fold(T::infinity(), T::min);
    max - min <= tolerance_db
}

/// Co-polarized material penetration loss: the behind-material path loss
/// minus the free-space baseline at the same distance, normalized per
/// centimeter of thickness.
pub fn penetration_loss_copol<T: Real>(
    mut_record: &MeasurementRecord<T>,
    baseline: &BaselinePathLoss<T>,
) -> Result<PenetrationResult<T>, AnalysisError> {
    mut_record.validate()?;
    if !mut_record.mut_present {
        return Err(AnalysisError::MissingMaterial);
    }
    let pair = mut_record.polarization_pair();
    if !pair.is_co() {
        return Err(AnalysisError::WrongPolarization("a co-polarized pair"));
    }
    check_same_distance(mut_record.distance_m, baseline.distance_m)?;

    let loss = mut_record.transmit_power_dbm - mut_record.received_power_first_path_dbm
        + mut_record.gain_tx_dbi
        + mut_record.gain_rx_dbi
        - baseline.path_loss_db;
    let thickness = mut_record
        .mut_thickness_cm
        .expect("validated material thickness");
    Ok(PenetrationResult {
        loss_db: loss,
        normalized_loss_db_per_cm: loss / thickness,
        polarization_pair: pair,
        distance_m: mut_record.distance_m,
    })
}

/// Cross-polarized material penetration loss. The reference subtracted from
/// the behind-material path loss is the predicted cross-polarized
/// free-space path loss: co-polarized baseline plus XPD (default form), or
/// the directly measured cross-polarized path loss plus XPD
/// ([`CrossPenetrationForm::MeasuredCross`]).
pub fn penetration_loss_crosspol<T: Real>(
    mut_record: &MeasurementRecord<T>,
    copol_baseline: &BaselinePathLoss<T>,
    xpd_db: T,
    form: CrossPenetrationForm,
    measured_cross_path_loss_db: Option<T>,
) -> Result<PenetrationResult<T>, AnalysisError> {
    mut_record.validate()?;
    if !mut_record.mut_present {
        return Err(AnalysisError::MissingMaterial);
    }
    let pair = mut_record.polarization_pair();
    if pair.is_co() {
        return Err(AnalysisError::WrongPolarization("a cross-polarized pair"));
    }
    check_same_distance(mut_record.distance_m, copol_baseline.distance_m)?;

    let reference = match form {
        CrossPenetrationForm::PredictedFromCopol => copol_baseline.path_loss_db + xpd_db,
        CrossPenetrationForm::MeasuredCross => {
            measured_cross_path_loss_db.ok_or(AnalysisError::MissingCrossPathLoss)? + xpd_db
        }
    };
    let loss = mut_record.transmit_power_dbm - mut_record.received_power_first_path_dbm
        + mut_record.gain_tx_dbi
        + mut_record.gain_rx_dbi
        - reference;
    let thickness = mut_record
        .mut_thickness_cm
        .expect("validated material thickness");
    Ok(PenetrationResult {
        loss_db: loss,
        normalized_loss_db_per_cm: loss / thickness,
        polarization_pair: pair,
        distance_m: mut_record.distance_m,
    })
}

fn check_same_distance<T: Real>(record_m: T, baseline_m: T) -> Result<(), AnalysisError> {
    let tolerance = T::lit(1e-9) * T::one().max(record_m.abs());
    if (record_m - baseline_m).abs() > tolerance {
        return Err(AnalysisError::DistanceMismatch {
            record_m: record_m.as_f64(),
            baseline_m: baseline_m.as_f64(),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

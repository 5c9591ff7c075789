//! Record pairing and per-scenario analysis shared by `analyze` and
//! `verify`: groups measurement records by distance, pairs cross-polarized
//! captures with their co-polarized baselines and behind-material captures
//! with their free-space baselines, and reduces each series to
//! distance-consistency statistics.

use serde::{Deserialize, Serialize};
use thiserror::Error;
use xpdcal_core::analysis::{
    consistency, path_loss, penetration_loss_copol, penetration_loss_crosspol, xpd, AnalysisError,
    BaselinePathLoss, CrossPenetrationForm, PolarizationPair,
};
use xpdcal_core::{ConsistencyReport64, MeasurementRecord64};

use crate::config::Thresholds;

/// Errors from pairing and reducing a scenario's records.
#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cross-polarized record at {distance_m} m has no co-polarized baseline")]
    MissingCopolBaseline { distance_m: f64 },
    #[error("material record at {distance_m} m has no free-space co-polarized baseline")]
    MissingFreeSpaceBaseline { distance_m: f64 },
    #[error("material record at {distance_m} m needs the free-space XPD, but no cross-polarized free-space record exists there")]
    MissingCrossBaseline { distance_m: f64 },
    #[error("duplicate record: {pair} at {distance_m} m (material {mut_present})")]
    DuplicateRecord {
        distance_m: f64,
        pair: PolarizationPair,
        mut_present: bool,
    },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// XPD at one distance, with the path losses it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XpdSample {
    pub distance_m: f64,
    pub path_loss_co_db: f64,
    pub path_loss_cross_db: f64,
    pub xpd_db: f64,
}

/// XPD over distance for one cross-polarized pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XpdSeries {
    pub pair: PolarizationPair,
    pub per_distance: Vec<XpdSample>,
    /// `None` when fewer than two distances were measured.
    pub consistency: Option<ConsistencyReport64>,
}

/// Penetration loss at one distance, with the path losses it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenetrationSample {
    pub distance_m: f64,
    /// Free-space reference path loss the material capture is compared to
    /// (predicted cross-polarized loss for cross pairs).
    pub reference_path_loss_db: f64,
    /// Path loss measured with the material in the path.
    pub mut_path_loss_db: f64,
    pub loss_db: f64,
    pub loss_db_per_cm: f64,
}

/// Penetration loss over distance for one polarization pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenetrationSeries {
    pub pair: PolarizationPair,
    pub per_distance: Vec<PenetrationSample>,
    /// Consistency of the (un-normalized) loss; `None` for one distance.
    pub consistency: Option<ConsistencyReport64>,
}

/// Everything the analysis derives from one scenario's records.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScenarioAnalysis {
    pub xpd: Vec<XpdSeries>,
    pub penetration: Vec<PenetrationSeries>,
}

impl ScenarioAnalysis {
    /// True when every series has computable, passing consistency.
    pub fn all_consistent(&self) -> bool {
        self.xpd
            .iter()
            .map(|s| &s.consistency)
            .chain(self.penetration.iter().map(|s| &s.consistency))
            .all(|c| c.as_ref().map(|r| r.pass).unwrap_or(false))
    }
}

struct DistanceBucket<'a> {
    distance_m: f64,
    free_space: Vec<&'a MeasurementRecord64>,
    behind_mut: Vec<&'a MeasurementRecord64>,
}

/// Pairs and reduces one scenario's records.
pub fn analyze_records(
    records: &[MeasurementRecord64],
    thresholds: &Thresholds,
    cross_form: CrossPenetrationForm,
) -> Result<ScenarioAnalysis, PipelineError> {
    let buckets = bucket_by_distance(records)?;

    let mut xpd_series: Vec<XpdSeries> = Vec::new();
    let mut pen_series: Vec<PenetrationSeries> = Vec::new();

    for bucket in &buckets {
        let co_baseline = |tx_pol| {
            find_copol(&bucket.free_space, tx_pol).map(|r| path_loss(r).map(|pl| (r, pl)))
        };

        // Free-space XPD: every cross-polarized capture against its
        // co-polarized baseline.
        for record in bucket.free_space.iter().filter(|r| !r.polarization_pair().is_co()) {
            let pair = record.polarization_pair();
            let (_, pl_co) = co_baseline(record.tx_pol)
                .ok_or(PipelineError::MissingCopolBaseline {
                    distance_m: bucket.distance_m,
                })??;
            let pl_cross = path_loss(record)?;
            push_sample(
                &mut xpd_series,
                pair,
                XpdSample {
                    distance_m: bucket.distance_m,
                    path_loss_co_db: pl_co,
                    path_loss_cross_db: pl_cross,
                    xpd_db: xpd(pl_cross, pl_co),
                },
            );
        }

        // Penetration: behind-material captures against free-space
        // baselines at the same distance.
        for record in &bucket.behind_mut {
            let pair = record.polarization_pair();
            let mut_pl = record.transmit_power_dbm - record.received_power_first_path_dbm
                + record.gain_tx_dbi
                + record.gain_rx_dbi;
            let (_, pl_co) = co_baseline(record.tx_pol)
                .ok_or(PipelineError::MissingFreeSpaceBaseline {
                    distance_m: bucket.distance_m,
                })??;
            let baseline = BaselinePathLoss {
                distance_m: bucket.distance_m,
                path_loss_db: pl_co,
            };

            let (result, reference) = if pair.is_co() {
                (penetration_loss_copol(record, &baseline)?, pl_co)
            } else {
                let cross_fs = find_pair(&bucket.free_space, pair).ok_or(
                    PipelineError::MissingCrossBaseline {
                        distance_m: bucket.distance_m,
                    },
                )?;
                let pl_cross = path_loss(cross_fs)?;
                let xpd_db = xpd(pl_cross, pl_co);
                let result = penetration_loss_crosspol(
                    record,
                    &baseline,
                    xpd_db,
                    cross_form,
                    Some(pl_cross),
                )?;
                let reference = match cross_form {
                    CrossPenetrationForm::PredictedFromCopol => pl_co + xpd_db,
                    CrossPenetrationForm::MeasuredCross => pl_cross + xpd_db,
                };
                (result, reference)
            };

            push_pen_sample(
                &mut pen_series,
                pair,
                PenetrationSample {
                    distance_m: bucket.distance_m,
                    reference_path_loss_db: reference,
                    mut_path_loss_db: mut_pl,
                    loss_db: result.loss_db,
                    loss_db_per_cm: result.normalized_loss_db_per_cm,
                },
            );
        }
    }

    for series in &mut xpd_series {
        series.consistency = reduce(
            series.per_distance.iter().map(|s| (s.distance_m, s.xpd_db)),
            thresholds,
        )?;
    }
    for series in &mut pen_series {
        series.consistency = reduce(
            series.per_distance.iter().map(|s| (s.distance_m, s.loss_db)),
            thresholds,
        )?;
    }

    Ok(ScenarioAnalysis {
        xpd: xpd_series,
        penetration: pen_series,
    })
}

fn bucket_by_distance(
    records: &[MeasurementRecord64],
) -> Result<Vec<DistanceBucket<'_>>, PipelineError> {
    let mut buckets: Vec<DistanceBucket> = Vec::new();
    for record in records {
        let bucket = match buckets
            .iter_mut()
            .find(|b| b.distance_m == record.distance_m)
        {
            Some(b) => b,
            None => {
                buckets.push(DistanceBucket {
                    distance_m: record.distance_m,
                    free_space: Vec::new(),
                    behind_mut: Vec::new(),
                });
                buckets.last_mut().expect("just pushed")
            }
        };
        let group = if record.mut_present {
            &mut bucket.behind_mut
        } else {
            &mut bucket.free_space
        };
        if group
            .iter()
            .any(|r| r.polarization_pair() == record.polarization_pair())
        {
            return Err(PipelineError::DuplicateRecord {
                distance_m: record.distance_m,
                pair: record.polarization_pair(),
                mut_present: record.mut_present,
            });
        }
        group.push(record);
    }
    buckets.sort_by(|a, b| a.distance_m.total_cmp(&b.distance_m));
    Ok(buckets)
}

/// Co-polarized record sharing the given TX polarization, falling back to
/// the only co-polarized record present.
fn find_copol<'a>(
    records: &[&'a MeasurementRecord64],
    tx_pol: xpdcal_core::geometry::Polarization,
) -> Option<&'a MeasurementRecord64> {
    let co: Vec<&&MeasurementRecord64> = records
        .iter()
        .filter(|r| r.polarization_pair().is_co())
        .collect();
    co.iter()
        .find(|r| r.tx_pol == tx_pol)
        .or(if co.len() == 1 { co.first() } else { None })
        .map(|r| **r)
}

fn find_pair<'a>(
    records: &[&'a MeasurementRecord64],
    pair: PolarizationPair,
) -> Option<&'a MeasurementRecord64> {
    records
        .iter()
        .find(|r| r.polarization_pair() == pair)
        .copied()
}

fn push_sample(series: &mut Vec<XpdSeries>, pair: PolarizationPair, sample: XpdSample) {
    match series.iter_mut().find(|s| s.pair == pair) {
        Some(s) => s.per_distance.push(sample),
        None => series.push(XpdSeries {
            pair,
            per_distance: vec![sample],
            consistency: None,
        }),
    }
}

fn push_pen_sample(
    series: &mut Vec<PenetrationSeries>,
    pair: PolarizationPair,
    sample: PenetrationSample,
) {
    match series.iter_mut().find(|s| s.pair == pair) {
        Some(s) => s.per_distance.push(sample),
        None => series.push(PenetrationSeries {
            pair,
            per_distance: vec![sample],
            consistency: None,
        }),
    }
}

fn reduce(
    values: impl Iterator<Item = (f64, f64)>,
    thresholds: &Thresholds,
) -> Result<Option<ConsistencyReport64>, PipelineError> {
    let values: Vec<(f64, f64)> = values.collect();
    if values.len() < 2 {
        return Ok(None);
    }
    Ok(Some(consistency(
        &values,
        thresholds.spread_db,
        thresholds.std_db,
    )?))
}

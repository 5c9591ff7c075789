//! `verify`: validate campaign geometry, check distance consistency of the
//! analyzed records, and persist a verdict report.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use chrono::Utc;
use xpdcal_core::analysis::{
    cross_combination_check, CrossPenetrationForm, DEFAULT_CROSS_COMBINATION_TOLERANCE_DB,
};
use xpdcal_core::channel_model::{check_multipath_margin, measurement_rays};
use xpdcal_core::geometry::{self, ClearanceConvention, Polarization, DEFAULT_MUT_MARGIN_FACTOR};
use xpdcal_core::io::read_records;

use super::{discover_record_files, load_config};
use crate::pipeline::analyze_records;
use crate::report::{
    CrossCombinationReport, ScenarioReport, Verdict, VerificationReport, ViolationReport,
};

pub struct VerifyOptions {
    pub spread_db: Option<f64>,
    pub std_db: Option<f64>,
    pub strict_halfangle: bool,
    pub eq11_literal: bool,
}

pub fn run(
    config_path: &Path,
    records_path: &Path,
    out_dir: &Path,
    options: &VerifyOptions,
) -> Result<i32> {
    let loaded = load_config(config_path)?;
    let mut config = loaded.config;
    if let Some(spread) = options.spread_db {
        config.thresholds.spread_db = spread;
    }
    if let Some(std) = options.std_db {
        config.thresholds.std_db = std;
    }
    let convention = if options.strict_halfangle {
        ClearanceConvention::HalfHpbw
    } else {
        ClearanceConvention::FullHpbw
    };
    let form = if options.eq11_literal {
        CrossPenetrationForm::MeasuredCross
    } else {
        CrossPenetrationForm::PredictedFromCopol
    };

    let record_files = discover_record_files(records_path, &config)?;
    let mut scenarios = Vec::new();
    let mut any_violation = false;
    let mut all_consistent = true;
    let mut xpd_means = Vec::new();

    for (name, path) in record_files {
        // A bare records file must still map onto a scenario, or the
        // geometry phase would be skipped silently.
        let scenario = match config.scenarios.iter().find(|s| s.name == name) {
            Some(scenario) => scenario,
            None if config.scenarios.len() == 1 => &config.scenarios[0],
            None => anyhow::bail!(
                "records {} cannot be matched to a scenario in the config (directory name {:?})",
                path.display(),
                name
            ),
        };

        // Geometry phase: re-validate the configured setup at every
        // distance, plus the predicted multipath margin of the traced rays.
        let mut violations = Vec::new();
        for &distance in &scenario.distances_m {
            let setup = config.setup_for(scenario, distance)?;
            let geometric = if scenario.material.is_some() {
                geometry::validate_penetration_setup_with(
                    &setup,
                    convention,
                    DEFAULT_MUT_MARGIN_FACTOR,
                )?
            } else {
                geometry::validate_xpd_setup_with(&setup, convention)?
            };
            for violation in geometric {
                violations.push(ViolationReport {
                    distance_m: distance,
                    violation,
                });
            }
            // Margin screening looks at the bare propagation environment;
            // a material's own attenuation and echoes are the
            // measurement's subject, not a setup defect.
            let env = config.environment();
            let mut free_space = setup.clone();
            free_space.material = None;
            let rays = measurement_rays(&free_space, &env, Polarization::V, Polarization::V)?;
            if let Some(violation) = check_multipath_margin(
                &rays,
                env.bin_width_ns,
                config.thresholds.detection_margin_db,
            ) {
                violations.push(ViolationReport {
                    distance_m: distance,
                    violation,
                });
            }
        }
        any_violation |= !violations.is_empty();

        // Analysis phase: distance consistency of the recorded values.
        let records = read_records(&path).with_context(|| format!("reading {}", path.display()))?;
        let analysis = analyze_records(&records, &config.thresholds, form)
            .with_context(|| format!("analyzing {}", path.display()))?;
        all_consistent &= analysis.all_consistent();
        for series in &analysis.xpd {
            if let Some(consistency) = &series.consistency {
                xpd_means.push(consistency.mean_db);
            }
        }

        scenarios.push(ScenarioReport {
            name,
            records_file: path.display().to_string(),
            violations,
            analysis,
        });
    }

    let verdict = if any_violation {
        Verdict::GeometryInvalid
    } else if all_consistent {
        Verdict::Verified
    } else {
        Verdict::Inconsistent
    };

    let cross_combination = (xpd_means.len() >= 2).then(|| {
        let max = xpd_means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = xpd_means.iter().cloned().fold(f64::INFINITY, f64::min);
        CrossCombinationReport {
            means_db: xpd_means.clone(),
            spread_db: max - min,
            tolerance_db: DEFAULT_CROSS_COMBINATION_TOLERANCE_DB,
            within_tolerance: cross_combination_check(
                &xpd_means,
                DEFAULT_CROSS_COMBINATION_TOLERANCE_DB,
            ),
        }
    });

    let report = VerificationReport {
        config_digest: loaded.digest_hex.clone(),
        created_utc: Utc::now().to_rfc3339(),
        seed: config.environment.rng_seed,
        thresholds: config.thresholds,
        strict_halfangle: options.strict_halfangle,
        eq11_literal: options.eq11_literal,
        scenarios,
        cross_combination,
        verdict,
    };

    let run_dir = persist(&report, out_dir, &loaded.digest_hex)?;
    println!("verdict: {verdict}");
    println!("report: {}", run_dir.join("report.json").display());
    Ok(verdict.exit_code())
}

/// Writes `report.json` and `report.txt` under a run directory named by
/// timestamp and config digest; returns the run directory.
fn persist(report: &VerificationReport, out_dir: &Path, digest: &str) -> Result<PathBuf> {
    let stamp = Utc::now().format("%Y%m%dT%H%M%S%.3fZ");
    let short_digest = &digest[..digest.len().min(8)];
    let run_dir = out_dir.join(format!("{stamp}_{short_digest}"));
    fs::create_dir_all(&run_dir).with_context(|| format!("creating {}", run_dir.display()))?;

    let json = serde_json::to_string_pretty(report)?;
    fs::write(run_dir.join("report.json"), json)?;
    fs::write(run_dir.join("report.txt"), report.render_text())?;
    Ok(run_dir)
}

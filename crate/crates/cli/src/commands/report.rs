//! `report`: export plot-ready series files from a verification report.
//!
//! Two delimited text files are written: the per-distance co-/cross-
//! polarized path losses with the XPD, and the free-space/behind-material
//! path losses with the penetration loss. The files carry headers even
//! when the report holds no data.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use crate::report::VerificationReport;

pub const XPD_SERIES_FILE: &str = "xpd_series.csv";
pub const PENETRATION_SERIES_FILE: &str = "penetration_series.csv";

pub fn run(report_path: &Path, out_dir: &Path) -> Result<i32> {
    let text = fs::read_to_string(report_path)
        .with_context(|| format!("reading report {}", report_path.display()))?;
    let report: VerificationReport =
        serde_json::from_str(&text).with_context(|| "parsing verification report")?;

    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;

    let mut xpd = String::from("scenario,pair,distance_m,pl_co_db,pl_cross_db,xpd_db\n");
    let mut penetration = String::from(
        "scenario,pair,distance_m,reference_pl_db,mut_pl_db,loss_db,loss_db_per_cm\n",
    );

    for scenario in &report.scenarios {
        for series in &scenario.analysis.xpd {
            for s in &series.per_distance {
                xpd.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    scenario.name,
                    series.pair,
                    s.distance_m,
                    s.path_loss_co_db,
                    s.path_loss_cross_db,
                    s.xpd_db
                ));
            }
        }
        for series in &scenario.analysis.penetration {
            for s in &series.per_distance {
                penetration.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    scenario.name,
                    series.pair,
                    s.distance_m,
                    s.reference_path_loss_db,
                    s.mut_path_loss_db,
                    s.loss_db,
                    s.loss_db_per_cm
                ));
            }
        }
    }

    let xpd_path = out_dir.join(XPD_SERIES_FILE);
    let pen_path = out_dir.join(PENETRATION_SERIES_FILE);
    fs::write(&xpd_path, xpd)?;
    fs::write(&pen_path, penetration)?;
    println!("wrote {}", xpd_path.display());
    println!("wrote {}", pen_path.display());
    Ok(0)
}

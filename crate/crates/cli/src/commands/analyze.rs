//! `analyze`: reduce measurement records to per-distance XPD and
//! penetration tables with mean and sigma columns.

use std::path::Path;

use anyhow::{Context, Result};
use xpdcal_core::analysis::CrossPenetrationForm;
use xpdcal_core::io::read_records;

use super::{discover_record_files, load_config};
use crate::pipeline::{analyze_records, ScenarioAnalysis};

pub fn run(config_path: &Path, records_path: &Path, eq11_literal: bool) -> Result<i32> {
    let loaded = load_config(config_path)?;
    let config = loaded.config;
    let form = if eq11_literal {
        CrossPenetrationForm::MeasuredCross
    } else {
        CrossPenetrationForm::PredictedFromCopol
    };

    for (name, path) in discover_record_files(records_path, &config)? {
        let records = read_records(&path).with_context(|| format!("reading {}", path.display()))?;
        let analysis = analyze_records(&records, &config.thresholds, form)
            .with_context(|| format!("analyzing {}", path.display()))?;
        println!("scenario {name} ({})", path.display());
        print_analysis(&analysis);
    }
    Ok(0)
}

fn print_analysis(analysis: &ScenarioAnalysis) {
    if analysis.xpd.is_empty() && analysis.penetration.is_empty() {
        println!("  no cross-polarized or material records; nothing to analyze");
        return;
    }
    for series in &analysis.xpd {
        let distances: Vec<String> = series
            .per_distance
            .iter()
            .map(|s| format!("{:>9}", format!("{} m", s.distance_m)))
            .collect();
        let values: Vec<String> = series
            .per_distance
            .iter()
            .map(|s| format!("{:>9.3}", s.xpd_db))
            .collect();
        println!("  XPD {} [dB]", series.pair);
        println!("    {}", distances.join(" "));
        println!("    {}", values.join(" "));
        print_consistency(&series.consistency);
    }
    for series in &analysis.penetration {
        let distances: Vec<String> = series
            .per_distance
            .iter()
            .map(|s| format!("{:>17}", format!("{} m", s.distance_m)))
            .collect();
        let values: Vec<String> = series
            .per_distance
            .iter()
            .map(|s| format!("{:>8.3} ({:.3})", s.loss_db, s.loss_db_per_cm))
            .collect();
        println!("  penetration {} [dB (dB/cm)]", series.pair);
        println!("    {}", distances.join(" "));
        println!("    {}", values.join(" "));
        print_consistency(&series.consistency);
    }
}

fn print_consistency(consistency: &Option<xpdcal_core::ConsistencyReport64>) {
    match consistency {
        Some(r) => println!(
            "    mean {:.3}  sigma {:.3}  spread {:.3}",
            r.mean_db, r.std_dev_db, r.spread_db
        ),
        None => println!("    mean n/a  sigma n/a (single distance)"),
    }
}

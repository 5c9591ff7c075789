//! `plan`: print the planning figures for every scenario and flag rule
//! violations before anyone mounts an antenna.

use std::path::Path;

use anyhow::Result;
use xpdcal_core::geometry::{
    self, ClearanceConvention, RuleViolation, DEFAULT_MUT_MARGIN_FACTOR,
};

use super::load_config;

pub fn run(config_path: &Path, strict_halfangle: bool) -> Result<i32> {
    let loaded = load_config(config_path)?;
    let config = loaded.config;
    let convention = if strict_halfangle {
        ClearanceConvention::HalfHpbw
    } else {
        ClearanceConvention::FullHpbw
    };

    let mut total_violations = 0usize;
    for scenario in &config.scenarios {
        let tx = config.antenna(&scenario.tx_antenna).expect("validated");
        let rx = config.antenna(&scenario.rx_antenna).expect("validated");
        let df_tx = geometry::fraunhofer_distance(tx.aperture_largest_dim_m, config.frequency_hz)?;
        let df_rx = geometry::fraunhofer_distance(rx.aperture_largest_dim_m, config.frequency_hz)?;
        let max_df = df_tx.max(df_rx);
        let min_xpd = geometry::min_tr_separation_xpd(max_df);
        let min_pen = geometry::min_tr_separation_penetration(max_df);

        println!(
            "scenario {} (tx {}, rx {})",
            scenario.name, scenario.tx_antenna, scenario.rx_antenna
        );
        println!("  Fraunhofer distance: tx {df_tx:.3} m, rx {df_rx:.3} m");
        println!("  min T-R separation (XPD): {min_xpd:.3} m");
        if scenario.material.is_some() {
            println!("  min T-R separation (penetration): {min_pen:.3} m");
        }

        let schedule_from = if scenario.material.is_some() { min_pen } else { min_xpd };
        if schedule_from > 0.0 {
            let schedule = geometry::suggest_verification_distances(schedule_from, 5)?;
            let rendered: Vec<String> = schedule.iter().map(|d| format!("{d:.3}")).collect();
            println!("  suggested distances [m]: {}", rendered.join(", "));
        }

        for &distance in &scenario.distances_m {
            let setup = config.setup_for(scenario, distance)?;
            let min_height = geometry::min_clearance_height_with(
                distance,
                tx.hpbw_elevation_deg,
                rx.hpbw_elevation_deg,
                convention,
            )?;
            print!("  at {distance} m: min height/clearance {min_height:.3} m");
            if scenario.material.is_some() {
                let extent = DEFAULT_MUT_MARGIN_FACTOR
                    * geometry::hpbw_illuminated_extent(distance / 2.0, tx.hpbw_elevation_deg)?;
                print!(", min material extent {extent:.3} m");
            }
            println!();

            let violations: Vec<RuleViolation<f64>> = if scenario.material.is_some() {
                geometry::validate_penetration_setup_with(
                    &setup,
                    convention,
                    DEFAULT_MUT_MARGIN_FACTOR,
                )?
            } else {
                geometry::validate_xpd_setup_with(&setup, convention)?
            };
            for violation in &violations {
                println!("    violation {violation}");
            }
            total_violations += violations.len();
        }
        println!();
    }

    if total_violations == 0 {
        println!("plan ok: no violations");
        Ok(0)
    } else {
        println!("plan found {total_violations} violation(s)");
        Ok(1)
    }
}

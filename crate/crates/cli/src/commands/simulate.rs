//! `simulate`: synthesize one measurement record (and PDP file) per
//! (scenario, distance, polarization pair, material on/off), deterministic
//! for a fixed seed.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use xpdcal_core::channel_model::simulate_measurement;
use xpdcal_core::io::{write_pdp, write_records};
use xpdcal_core::MeasurementRecord64;

use super::{fnv1a, load_config, RECORDS_FILE};
use crate::config::{CampaignConfig, ScenarioConfig};

pub fn run(config_path: &Path, out_dir: &Path, seed_override: Option<u64>) -> Result<i32> {
    let loaded = load_config(config_path)?;
    let config = loaded.config;
    let master_seed = seed_override.unwrap_or(config.environment.rng_seed);

    for scenario in &config.scenarios {
        let scenario_dir = out_dir.join(&scenario.name);
        fs::create_dir_all(&scenario_dir)
            .with_context(|| format!("creating {}", scenario_dir.display()))?;
        let records = simulate_scenario(&config, scenario, master_seed, &scenario_dir)?;
        let records_path = scenario_dir.join(RECORDS_FILE);
        write_records(&records_path, &records)
            .with_context(|| format!("writing {}", records_path.display()))?;
        println!(
            "scenario {}: {} records -> {}",
            scenario.name,
            records.len(),
            records_path.display()
        );
    }
    println!("seed: {master_seed}");
    Ok(0)
}

/// Simulates every capture of one scenario and writes the PDP files.
/// Records are ordered by distance, then polarization pair, free-space
/// captures before behind-material captures.
pub fn simulate_scenario(
    config: &CampaignConfig,
    scenario: &ScenarioConfig,
    master_seed: u64,
    pdp_dir: &Path,
) -> Result<Vec<MeasurementRecord64>> {
    let mut records = Vec::new();
    for &distance in &scenario.distances_m {
        for with_material in [false, true] {
            if with_material && scenario.material.is_none() {
                continue;
            }
            for &pair in &scenario.polarization_pairs {
                let mut setup = config.setup_for(scenario, distance)?;
                if !with_material {
                    setup.material = None;
                }
                let mut env = config.environment();
                let key = format!(
                    "{}|{}|{}|{}",
                    scenario.name,
                    distance.to_bits(),
                    pair,
                    if with_material { "mut" } else { "fs" }
                );
                env.rng_seed = master_seed ^ fnv1a(key.as_bytes());

                let record = simulate_measurement(
                    &setup,
                    &env,
                    pair.tx(),
                    pair.rx(),
                    scenario.transmit_power_dbm,
                )
                .with_context(|| format!("simulating {key}"))?;

                if let Some(pdp) = &record.pdp {
                    let pdp_path = pdp_dir.join(format!(
                        "pdp_{distance}m_{pair}_{}.csv",
                        if with_material { "mut" } else { "fs" }
                    ));
                    write_pdp(&pdp_path, pdp)
                        .with_context(|| format!("writing {}", pdp_path.display()))?;
                }
                records.push(record);
            }
        }
    }
    Ok(records)
}

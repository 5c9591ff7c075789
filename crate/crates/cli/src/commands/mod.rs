//! Subcommand implementations. Each `run` returns the process exit code;
//! hard errors (unreadable files, malformed configs or records) propagate
//! as errors and exit with code 2.

pub mod analyze;
pub mod plan;
pub mod report;
pub mod simulate;
pub mod verify;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use crate::config::CampaignConfig;

/// Name of the per-scenario records file written by `simulate`.
pub const RECORDS_FILE: &str = "records.csv";

/// Resolves a records path into (scenario name, records file) pairs.
///
/// Accepts either a single records file (scenario name taken from the
/// containing directory) or a directory laid out as `simulate` writes it:
/// one subdirectory per scenario, each holding a `records.csv`.
pub fn discover_record_files(
    records_path: &Path,
    config: &CampaignConfig,
) -> Result<Vec<(String, PathBuf)>> {
    if records_path.is_file() {
        let name = records_path
            .parent()
            .and_then(|p| p.file_name())
            .map(|n| n.to_string_lossy().to_string())
            .filter(|n| !n.is_empty())
            .unwrap_or_else(|| "records".to_string());
        return Ok(vec![(name, records_path.to_path_buf())]);
    }
    if records_path.is_dir() {
        let direct = records_path.join(RECORDS_FILE);
        if direct.is_file() {
            let name = records_path
                .file_name()
                .map(|n| n.to_string_lossy().to_string())
                .unwrap_or_else(|| "records".to_string());
            return Ok(vec![(name, direct)]);
        }
        let mut found = Vec::new();
        for scenario in &config.scenarios {
            let candidate = records_path.join(&scenario.name).join(RECORDS_FILE);
            if candidate.is_file() {
                found.push((scenario.name.clone(), candidate));
            }
        }
        if found.is_empty() {
            bail!(
                "no records found under {} (expected <scenario>/{RECORDS_FILE})",
                records_path.display()
            );
        }
        return Ok(found);
    }
    bail!("records path {} does not exist", records_path.display());
}

/// Loads and validates a campaign configuration.
pub fn load_config(path: &Path) -> Result<crate::config::LoadedConfig> {
    CampaignConfig::load(path).with_context(|| format!("loading config {}", path.display()))
}

/// FNV-1a over a byte string; used to derive stable per-record seeds.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

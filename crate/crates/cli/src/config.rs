//! Campaign configuration: a TOML schema mirroring the domain types, with
//! sensible defaults, semantic validation, and conversions into the core
//! setup/environment structures.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;
use xpdcal_core::analysis::PolarizationPair;
use xpdcal_core::geometry::{Antenna, InternalReflection, MaterialSpec, Polarization, SetupGeometry};
use xpdcal_core::{Environment64, SetupGeometry64};

/// Errors from loading or validating a campaign configuration.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config parse error in {path}:\n{message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid config: {0}")]
    Semantic(String),
}

/// A full measurement campaign: carrier, environment, antenna inventory,
/// scenarios, and verdict thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    /// Carrier frequency, Hz.
    pub frequency_hz: f64,
    #[serde(default)]
    pub environment: EnvironmentConfig,
    pub antennas: Vec<AntennaConfig>,
    pub scenarios: Vec<ScenarioConfig>,
    #[serde(default)]
    pub thresholds: Thresholds,
}

/// Antenna inventory entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AntennaConfig {
    pub name: String,
    pub aperture_largest_dim_m: f64,
    pub hpbw_azimuth_deg: f64,
    pub hpbw_elevation_deg: f64,
    pub gain_dbi: f64,
    /// Intrinsic cross-polarization leakage used as simulation ground truth.
    pub xpd_leakage_db: f64,
    #[serde(default = "default_polarization")]
    pub polarization: Polarization,
}

fn default_polarization() -> Polarization {
    Polarization::V
}

/// Static environment around the links.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentConfig {
    #[serde(default = "default_ground_reflection")]
    pub ground_reflection_db: f64,
    pub ceiling_height_m: Option<f64>,
    #[serde(default = "default_ceiling_reflection")]
    pub ceiling_reflection_db: f64,
    pub wall_clearance_m: Option<f64>,
    #[serde(default = "default_noise_floor")]
    pub noise_floor_dbm: f64,
    #[serde(default = "default_true")]
    pub noise_enabled: bool,
    #[serde(default)]
    pub rng_seed: u64,
    #[serde(default = "default_bin_width")]
    pub bin_width_ns: f64,
    #[serde(default = "default_depolarization")]
    pub reflection_depolarization_db: f64,
}

fn default_ground_reflection() -> f64 {
    3.0
}
fn default_ceiling_reflection() -> f64 {
    6.0
}
fn default_noise_floor() -> f64 {
    -100.0
}
fn default_true() -> bool {
    true
}
fn default_bin_width() -> f64 {
    xpdcal_core::channel_model::DEFAULT_BIN_WIDTH_NS
}
fn default_depolarization() -> f64 {
    15.0
}

impl Default for EnvironmentConfig {
    fn default() -> Self {
        EnvironmentConfig {
            ground_reflection_db: default_ground_reflection(),
            ceiling_height_m: None,
            ceiling_reflection_db: default_ceiling_reflection(),
            wall_clearance_m: None,
            noise_floor_dbm: default_noise_floor(),
            noise_enabled: true,
            rng_seed: 0,
            bin_width_ns: default_bin_width(),
            reflection_depolarization_db: default_depolarization(),
        }
    }
}

/// One scenario: an antenna pair measured over a set of distances and
/// polarization pairs, optionally through a material under test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub tx_antenna: String,
    pub rx_antenna: String,
    pub distances_m: Vec<f64>,
    pub tx_height_m: f64,
    /// Clearance to the ceiling and to either side of the path. When
    /// omitted it is derived from the environment's ceiling height and
    /// wall clearance.
    pub clearance_above_and_sides_m: Option<f64>,
    #[serde(default = "default_pairs")]
    pub polarization_pairs: Vec<PolarizationPair>,
    #[serde(default)]
    pub transmit_power_dbm: f64,
    #[serde(default, rename = "mut")]
    pub material: Option<MutConfig>,
    pub pointing_error_deg: Option<f64>,
}

fn default_pairs() -> Vec<PolarizationPair> {
    vec![PolarizationPair::VV, PolarizationPair::VH]
}

/// Material under test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MutConfig {
    pub name: String,
    pub thickness_cm: f64,
    pub insertion_loss_db: f64,
    pub extent_height_m: f64,
    pub extent_width_m: f64,
    pub internal_reflection: Option<InternalReflectionConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InternalReflectionConfig {
    pub relative_permittivity: f64,
    pub interface_reflection_db: f64,
}

/// Verdict thresholds, all overridable on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    #[serde(default = "default_spread")]
    pub spread_db: f64,
    #[serde(default = "default_std")]
    pub std_db: f64,
    #[serde(default = "default_margin")]
    pub detection_margin_db: f64,
}

fn default_spread() -> f64 {
    xpdcal_core::analysis::DEFAULT_SPREAD_THRESHOLD_DB
}
fn default_std() -> f64 {
    xpdcal_core::analysis::DEFAULT_STD_THRESHOLD_DB
}
fn default_margin() -> f64 {
    xpdcal_core::analysis::DEFAULT_DETECTION_MARGIN_DB
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            spread_db: default_spread(),
            std_db: default_std(),
            detection_margin_db: default_margin(),
        }
    }
}

/// A parsed configuration together with the digest of its file bytes.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: CampaignConfig,
    /// SHA-256 of the raw config file, hex.
    pub digest_hex: String,
}

impl CampaignConfig {
    /// Reads, parses, and validates a configuration file.
    pub fn load(path: impl AsRef<Path>) -> Result<LoadedConfig, ConfigError> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let text = String::from_utf8_lossy(&bytes);
        let config: CampaignConfig = toml::from_str(&text).map_err(|e| ConfigError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        config.validate()?;
        let digest_hex = hex_digest(&bytes);
        Ok(LoadedConfig { config, digest_hex })
    }

    /// Semantic validation beyond what the TOML schema enforces.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.frequency_hz > 0.0) {
            return Err(ConfigError::Semantic(format!(
                "frequency_hz must be positive, got {}",
                self.frequency_hz
            )));
        }
        if self.antennas.is_empty() {
            return Err(ConfigError::Semantic("no antennas declared".to_string()));
        }
        let mut names = std::collections::HashSet::new();
        for antenna in &self.antennas {
            check_name("antenna", &antenna.name)?;
            if !names.insert(&antenna.name) {
                return Err(ConfigError::Semantic(format!(
                    "duplicate antenna name {:?}",
                    antenna.name
                )));
            }
        }
        if self.scenarios.is_empty() {
            return Err(ConfigError::Semantic("no scenarios".to_string()));
        }
        let mut scenario_names = std::collections::HashSet::new();
        for scenario in &self.scenarios {
            check_name("scenario", &scenario.name)?;
            if !scenario_names.insert(&scenario.name) {
                return Err(ConfigError::Semantic(format!(
                    "duplicate scenario name {:?}",
                    scenario.name
                )));
            }
            for antenna in [&scenario.tx_antenna, &scenario.rx_antenna] {
                if !self.antennas.iter().any(|a| &a.name == antenna) {
                    return Err(ConfigError::Semantic(format!(
                        "scenario {:?} references undeclared antenna {:?}",
                        scenario.name, antenna
                    )));
                }
            }
            if scenario.distances_m.is_empty() {
                return Err(ConfigError::Semantic(format!(
                    "scenario {:?} has no distances",
                    scenario.name
                )));
            }
            if scenario.distances_m.iter().any(|d| !(*d > 0.0)) {
                return Err(ConfigError::Semantic(format!(
                    "scenario {:?} has a non-positive distance",
                    scenario.name
                )));
            }
            if scenario.polarization_pairs.is_empty() {
                return Err(ConfigError::Semantic(format!(
                    "scenario {:?} has no polarization pairs",
                    scenario.name
                )));
            }
        }
        if !(self.environment.bin_width_ns > 0.0) {
            return Err(ConfigError::Semantic("bin_width_ns must be positive".to_string()));
        }
        for (key, value) in [
            ("ground_reflection_db", self.environment.ground_reflection_db),
            ("ceiling_reflection_db", self.environment.ceiling_reflection_db),
            (
                "reflection_depolarization_db",
                self.environment.reflection_depolarization_db,
            ),
        ] {
            if !(value >= 0.0) {
                return Err(ConfigError::Semantic(format!(
                    "{key} must be non-negative, got {value}"
                )));
            }
        }
        if !self.environment.noise_floor_dbm.is_finite() {
            return Err(ConfigError::Semantic("noise_floor_dbm must be finite".to_string()));
        }
        Ok(())
    }

    pub fn antenna(&self, name: &str) -> Option<&AntennaConfig> {
        self.antennas.iter().find(|a| a.name == name)
    }

    /// Core environment for simulation.
    pub fn environment(&self) -> Environment64 {
        let e = &self.environment;
        Environment64 {
            ground_reflection_db: e.ground_reflection_db,
            ceiling_height_m: e.ceiling_height_m,
            ceiling_reflection_db: e.ceiling_reflection_db,
            wall_clearance_m: e.wall_clearance_m,
            noise_floor_dbm: e.noise_floor_dbm,
            noise_enabled: e.noise_enabled,
            rng_seed: e.rng_seed,
            bin_width_ns: e.bin_width_ns,
            reflection_depolarization_db: e.reflection_depolarization_db,
        }
    }

    /// Core setup for one scenario at one distance.
    pub fn setup_for(
        &self,
        scenario: &ScenarioConfig,
        distance_m: f64,
    ) -> Result<SetupGeometry64, ConfigError> {
        let tx = self.antenna(&scenario.tx_antenna).ok_or_else(|| {
            ConfigError::Semantic(format!("undeclared antenna {:?}", scenario.tx_antenna))
        })?;
        let rx = self.antenna(&scenario.rx_antenna).ok_or_else(|| {
            ConfigError::Semantic(format!("undeclared antenna {:?}", scenario.rx_antenna))
        })?;
        let clearance = scenario.clearance_above_and_sides_m.unwrap_or_else(|| {
            let ceiling = self
                .environment
                .ceiling_height_m
                .map(|c| c - scenario.tx_height_m);
            match (ceiling, self.environment.wall_clearance_m) {
                (Some(c), Some(w)) => c.min(w),
                (Some(c), None) => c,
                (None, Some(w)) => w,
                (None, None) => f64::INFINITY,
            }
        });
        Ok(SetupGeometry {
            frequency_hz: self.frequency_hz,
            tr_separation_m: distance_m,
            tx_height_m: scenario.tx_height_m,
            clearance_above_and_sides_m: clearance,
            tx_antenna: core_antenna(tx),
            rx_antenna: core_antenna(rx),
            material: scenario.material.as_ref().map(core_material),
            pointing_error_deg: scenario.pointing_error_deg,
        })
    }
}

fn core_antenna(a: &AntennaConfig) -> Antenna<f64> {
    Antenna {
        name: a.name.clone(),
        aperture_largest_dim_m: a.aperture_largest_dim_m,
        hpbw_azimuth_deg: a.hpbw_azimuth_deg,
        hpbw_elevation_deg: a.hpbw_elevation_deg,
        gain_dbi: a.gain_dbi,
        xpd_leakage_db: a.xpd_leakage_db,
        polarization: a.polarization,
    }
}

fn core_material(m: &MutConfig) -> MaterialSpec<f64> {
    MaterialSpec {
        name: m.name.clone(),
        thickness_cm: m.thickness_cm,
        insertion_loss_db: m.insertion_loss_db,
        extent_height_m: m.extent_height_m,
        extent_width_m: m.extent_width_m,
        internal_reflection: m.internal_reflection.map(|ir| InternalReflection {
            relative_permittivity: ir.relative_permittivity,
            interface_reflection_db: ir.interface_reflection_db,
        }),
    }
}

fn check_name(kind: &str, name: &str) -> Result<(), ConfigError> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if ok {
        Ok(())
    } else {
        Err(ConfigError::Semantic(format!(
            "{kind} name {name:?} must be non-empty and use only letters, digits, '-', '_', '.'"
        )))
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const SAMPLE: &str = r#"
frequency_hz = 73.5e9

[environment]
noise_enabled = false
rng_seed = 7

[[antennas]]
name = "widebeam"
aperture_largest_dim_m = 0.02
hpbw_azimuth_deg = 15.0
hpbw_elevation_deg = 15.0
gain_dbi = 20.0
xpd_leakage_db = 29.15

[[scenarios]]
name = "wide-to-wide"
tx_antenna = "widebeam"
rx_antenna = "widebeam"
distances_m = [3.0, 3.5, 4.0, 4.5, 5.0]
tx_height_m = 1.5
clearance_above_and_sides_m = 1.5

[thresholds]
spread_db = 1.0
"#;

    #[test]
    fn parses_sample_with_defaults() {
        let config: CampaignConfig = toml::from_str(SAMPLE).unwrap();
        config.validate().unwrap();
        assert_eq!(config.environment.noise_floor_dbm, -100.0);
        assert_eq!(config.environment.rng_seed, 7);
        assert_eq!(config.thresholds.std_db, 1.1);
        assert_eq!(
            config.scenarios[0].polarization_pairs,
            vec![PolarizationPair::VV, PolarizationPair::VH]
        );
    }

    #[test]
    fn round_trips_through_toml() {
        let config: CampaignConfig = toml::from_str(SAMPLE).unwrap();
        let text = toml::to_string(&config).unwrap();
        let back: CampaignConfig = toml::from_str(&text).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn rejects_undeclared_antenna() {
        let mut config: CampaignConfig = toml::from_str(SAMPLE).unwrap();
        config.scenarios[0].rx_antenna = "missing".to_string();
        let err = config.validate().unwrap_err();
        assert!(err.to_string().contains("undeclared antenna"));
    }

    #[test]
    fn rejects_empty_scenarios() {
        let mut config: CampaignConfig = toml::from_str(SAMPLE).unwrap();
        config.scenarios.clear();
        assert!(config.validate().unwrap_err().to_string().contains("no scenarios"));
    }

    #[test]
    fn rejects_negative_reflection_loss() {
        let mut config: CampaignConfig = toml::from_str(SAMPLE).unwrap();
        config.environment.ground_reflection_db = -1.0;
        let err = config.validate().unwrap_err();
        assert!(err.to_string().contains("ground_reflection_db"), "{err}");
    }

    #[test]
    fn setup_derives_clearance_from_environment() {
        let mut config: CampaignConfig = toml::from_str(SAMPLE).unwrap();
        config.environment.ceiling_height_m = Some(3.0);
        config.environment.wall_clearance_m = Some(2.5);
        config.scenarios[0].clearance_above_and_sides_m = None;
        let setup = config.setup_for(&config.scenarios[0].clone(), 5.0).unwrap();
        assert_eq!(setup.clearance_above_and_sides_m, 1.5); // ceiling - height
    }
}

//! Verification report: the persisted, structured outcome of `verify`.

use serde::{Deserialize, Serialize};
use xpdcal_core::RuleViolation64;

use crate::config::Thresholds;
use crate::pipeline::ScenarioAnalysis;

/// Overall campaign verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// Geometry obeys every rule and all measured quantities are
    /// distance-consistent.
    Verified,
    /// At least one quantity moves with distance (or was measured at a
    /// single distance, leaving consistency unestablished).
    Inconsistent,
    /// The setup violates at least one geometric rule.
    GeometryInvalid,
}

impl Verdict {
    /// Process exit code for this verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified => 0,
            Verdict::Inconsistent => 1,
            Verdict::GeometryInvalid => 2,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Verified => "VERIFIED",
            Verdict::Inconsistent => "INCONSISTENT",
            Verdict::GeometryInvalid => "GEOMETRY_INVALID",
        };
        write!(f, "{s}")
    }
}

/// A rule violation pinned to the scenario distance it occurred at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub distance_m: f64,
    #[serde(flatten)]
    pub violation: RuleViolation64,
}

/// Per-scenario slice of the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    pub records_file: String,
    pub violations: Vec<ViolationReport>,
    #[serde(flatten)]
    pub analysis: ScenarioAnalysis,
}

/// Agreement of mean XPD across scenarios (informational; does not gate
/// the verdict because simulated campaigns may configure different ground
/// truths per antenna pair).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCombinationReport {
    pub means_db: Vec<f64>,
    pub spread_db: f64,
    pub tolerance_db: f64,
    pub within_tolerance: bool,
}

/// The persisted verification outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// SHA-256 of the config file the run used, hex.
    pub config_digest: String,
    /// Report creation time, RFC 3339 UTC.
    pub created_utc: String,
    /// Simulation seed in effect (for reproducing the records).
    pub seed: u64,
    pub thresholds: Thresholds,
    pub strict_halfangle: bool,
    pub eq11_literal: bool,
    pub scenarios: Vec<ScenarioReport>,
    pub cross_combination: Option<CrossCombinationReport>,
    pub verdict: Verdict,
}

impl VerificationReport {
    /// Human-readable rendering for `report.txt`.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out.push_str(&format!("created: {}\n", self.created_utc));
        out.push_str(&format!("config digest: {}\n", self.config_digest));
        out.push_str(&format!(
            "thresholds: spread <= {} dB, sigma <= {} dB, detection margin {} dB\n",
            self.thresholds.spread_db, self.thresholds.std_db, self.thresholds.detection_margin_db
        ));
        out.push_str(&format!("seed: {}\n", self.seed));
        for scenario in &self.scenarios {
            out.push_str(&format!("\nscenario {}\n", scenario.name));
            if scenario.violations.is_empty() {
                out.push_str("  geometry: ok\n");
            } else {
                out.push_str("  geometry violations:\n");
                for v in &scenario.violations {
                    out.push_str(&format!("    at {} m: {}\n", v.distance_m, v.violation));
                }
            }
            for series in &scenario.analysis.xpd {
                out.push_str(&format!("  XPD {} [dB]\n", series.pair));
                for sample in &series.per_distance {
                    out.push_str(&format!(
                        "    {:>6.2} m: {:8.3}\n",
                        sample.distance_m, sample.xpd_db
                    ));
                }
                out.push_str(&render_consistency(&series.consistency));
            }
            for series in &scenario.analysis.penetration {
                out.push_str(&format!("  penetration {} [dB (dB/cm)]\n", series.pair));
                for sample in &series.per_distance {
                    out.push_str(&format!(
                        "    {:>6.2} m: {:8.3} ({:.3})\n",
                        sample.distance_m, sample.loss_db, sample.loss_db_per_cm
                    ));
                }
                out.push_str(&render_consistency(&series.consistency));
            }
        }
        if let Some(cc) = &self.cross_combination {
            out.push_str(&format!(
                "\ncross-combination XPD means: spread {:.3} dB over {} series (tolerance {} dB): {}\n",
                cc.spread_db,
                cc.means_db.len(),
                cc.tolerance_db,
                if cc.within_tolerance { "within" } else { "exceeds" }
            ));
        }
        out
    }
}

fn render_consistency(report: &Option<xpdcal_core::ConsistencyReport64>) -> String {
    match report {
        Some(r) => format!(
            "    mean {:.3}  sigma {:.3}  spread {:.3}  -> {}\n",
            r.mean_db,
            r.std_dev_db,
            r.spread_db,
            if r.pass { "pass" } else { "FAIL" }
        ),
        None => "    sigma n/a (single distance; consistency not established)\n".to_string(),
    }
}

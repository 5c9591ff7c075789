//! Acceptance suite: the toolkit's exit gate. Each test checks one
//! criterion at its stated tolerance and prints a `[PASS]`/`[FAIL]` line
//! (run with `--nocapture` to see them).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;
use xpdcal_cli::config::Thresholds;
use xpdcal_cli::pipeline::analyze_records;
use xpdcal_core::analysis::{
    consistency, first_arriving_component_power, path_loss, penetration_loss_copol,
    penetration_loss_crosspol, xpd, BaselinePathLoss, CrossPenetrationForm,
};
use xpdcal_core::channel_model::{
    friis_free_space_path_loss, measurement_rays, synthesize_pdp, trace_rays, Environment,
    PathKind, Ray, PULSE_WIDTH_BINS,
};
use xpdcal_core::geometry::{
    fraunhofer_distance, fresnel_zone_radius, min_clearance_height, min_tr_separation_xpd,
    validate_xpd_setup, Antenna, Polarization, SetupGeometry,
};
use xpdcal_core::io::read_records;
use xpdcal_core::num::{db_to_linear, linear_to_db};

/// Records sub-checks for one criterion and prints the verdict line.
struct Criterion {
    name: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Criterion {
            name,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, label: &str, ok: bool) {
        if !ok {
            self.failures.push(label.to_string());
        }
    }

    fn close_to(&mut self, label: &str, value: f64, expected: f64, tolerance: f64) {
        if (value - expected).abs() > tolerance {
            self.failures
                .push(format!("{label}: {value} != {expected} (+/- {tolerance})"));
        }
    }

    fn finish(self) {
        let verdict = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("[{verdict}] {}", self.name);
        assert!(
            self.failures.is_empty(),
            "{} failed:\n  {}",
            self.name,
            self.failures.join("\n  ")
        );
    }
}

// ---------------------------------------------------------------------------
// Shared fixtures
// ---------------------------------------------------------------------------

const FREQ: f64 = 73.5e9;
const LEAKAGE: f64 = 29.15;

fn widebeam() -> Antenna<f64> {
    Antenna {
        name: "widebeam".to_string(),
        aperture_largest_dim_m: 0.02,
        hpbw_azimuth_deg: 15.0,
        hpbw_elevation_deg: 15.0,
        gain_dbi: 20.0,
        xpd_leakage_db: LEAKAGE,
        polarization: Polarization::V,
    }
}

fn setup(distance_m: f64, height_m: f64) -> SetupGeometry<f64> {
    SetupGeometry {
        frequency_hz: FREQ,
        tr_separation_m: distance_m,
        tx_height_m: height_m,
        clearance_above_and_sides_m: height_m,
        tx_antenna: widebeam(),
        rx_antenna: widebeam(),
        material: None,
        pointing_error_deg: None,
    }
}

fn noise_free_env() -> Environment<f64> {
    Environment {
        noise_enabled: false,
        ..Environment::default()
    }
}

fn bin_run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xpdcal"))
        .args(args)
        .output()
        .expect("spawn xpdcal")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("campaign.toml");
    std::fs::write(&path, body).unwrap();
    path
}

fn campaign_config(tx_height_m: f64, distances: &str, material: bool) -> String {
    let mut text = format!(
        r#"
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
name = "campaign"
tx_antenna = "widebeam"
rx_antenna = "widebeam"
distances_m = {distances}
tx_height_m = {tx_height_m}
clearance_above_and_sides_m = {tx_height_m}
"#
    );
    if material {
        text.push_str(
            r#"
[scenarios.mut]
name = "clear-glass"
thickness_cm = 1.2
insertion_loss_db = 7.72
extent_height_m = 2.0
extent_width_m = 2.0
"#,
        );
    }
    text
}

fn report_verdict(verify_out: &Path) -> String {
    let run_dir = std::fs::read_dir(verify_out)
        .unwrap()
        .next()
        .expect("run dir")
        .unwrap()
        .path();
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run_dir.join("report.json")).unwrap())
            .unwrap();
    report["verdict"].as_str().unwrap().to_string()
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_fraunhofer_distances_and_minimum_separations() {
    let mut c = Criterion::new("criterion 1: Fraunhofer distances and minimum separations");
    let wide = fraunhofer_distance(0.02, FREQ).unwrap();
    let narrow = fraunhofer_distance(0.041, FREQ).unwrap();
    c.close_to("widebeam D_f", wide, 0.196, 0.001);
    c.close_to("narrowbeam D_f", narrow, 0.824, 0.001);
    c.close_to("widebeam min separation", min_tr_separation_xpd(wide), 0.98, 0.01);
    c.close_to("narrowbeam min separation", min_tr_separation_xpd(narrow), 4.12, 0.01);
    c.finish();
}

#[test]
fn criterion_2_minimum_clearance_heights() {
    let mut c = Criterion::new("criterion 2: minimum clearance heights at 5 m");
    c.close_to(
        "widebeam pair",
        min_clearance_height(5.0, 15.0, 15.0).unwrap(),
        1.34,
        0.01,
    );
    c.close_to(
        "narrowbeam pair",
        min_clearance_height(5.0, 7.0, 7.0).unwrap(),
        0.61,
        0.01,
    );
    c.finish();
}

#[test]
fn criterion_3_consistency_statistics_oracle() {
    let mut c = Criterion::new("criterion 3: consistency statistics reproduce the reference rows");
    let rows: [(&str, Vec<f64>, f64, f64); 5] = [
        ("wide-to-wide", vec![29.17, 28.98, 29.13, 29.01, 29.46], 29.15, 0.19),
        ("narrow-to-wide", vec![28.73, 28.98, 29.58, 29.42, 29.79], 29.30, 0.44),
        ("narrow-to-narrow", vec![28.54, 30.60, 30.17, 30.9, 31.31], 30.30, 1.07),
        ("glass V-V", vec![7.54, 7.39, 8.23], 7.72, 0.45),
        ("glass V-H", vec![8.48, 7.16, 7.62], 7.75, 0.67),
    ];
    for (label, values, mean, sigma) in rows {
        let pairs: Vec<(f64, f64)> = values
            .iter()
            .enumerate()
            .map(|(i, v)| (3.0 + 0.5 * i as f64, *v))
            .collect();
        let report = consistency(&pairs, f64::INFINITY, f64::INFINITY).unwrap();
        c.close_to(&format!("{label} mean"), report.mean_db, mean, 0.005);
        c.close_to(&format!("{label} sigma"), report.std_dev_db, sigma, 0.005);
    }
    c.finish();
}

#[test]
fn criterion_4_xpd_round_trip_distance_invariant_and_verified() {
    let mut c = Criterion::new("criterion 4: XPD round trip over 3..5 m recovers 29.15 dB, VERIFIED");
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        &campaign_config(1.5, "[3.0, 3.5, 4.0, 4.5, 5.0]", false),
    );
    let run_dir = dir.path().join("run");
    let sim = bin_run(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        run_dir.to_str().unwrap(),
    ]);
    c.check("simulate exits 0", sim.status.code() == Some(0));

    let records = read_records::<f64>(run_dir.join("campaign/records.csv")).unwrap();
    let analysis = analyze_records(
        &records,
        &Thresholds::default(),
        CrossPenetrationForm::PredictedFromCopol,
    )
    .unwrap();
    let series = &analysis.xpd[0];
    c.check("five distances analyzed", series.per_distance.len() == 5);
    for sample in &series.per_distance {
        c.close_to(
            &format!("xpd at {} m", sample.distance_m),
            sample.xpd_db,
            LEAKAGE,
            0.05,
        );
    }
    let spread = series.consistency.as_ref().unwrap().spread_db;
    c.check(&format!("spread {spread} < 0.05 dB"), spread < 0.05);

    let verify_out = dir.path().join("verify");
    let verify = bin_run(&[
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--records",
        run_dir.to_str().unwrap(),
        "--out",
        verify_out.to_str().unwrap(),
    ]);
    c.check("verify exits 0", verify.status.code() == Some(0));
    c.check("verdict VERIFIED", report_verdict(&verify_out) == "VERIFIED");
    c.finish();
}

#[test]
fn criterion_5_penetration_round_trip_both_formulas() {
    let mut c =
        Criterion::new("criterion 5: penetration round trip recovers 7.72 dB / 6.43 dB per cm");
    let env = noise_free_env();
    for d in [3.0, 4.0, 5.0] {
        let free = setup(d, 1.5);
        let mut behind = setup(d, 1.5);
        behind.material = Some(xpdcal_core::geometry::MaterialSpec {
            name: "clear-glass".to_string(),
            thickness_cm: 1.2,
            insertion_loss_db: 7.72,
            extent_height_m: 2.0,
            extent_width_m: 2.0,
            internal_reflection: None,
        });
        let simulate = |s: &SetupGeometry<f64>, tx, rx| {
            xpdcal_core::channel_model::simulate_measurement(s, &env, tx, rx, 0.0).unwrap()
        };
        use Polarization::{H, V};
        let pl_co = path_loss(&simulate(&free, V, V)).unwrap();
        let pl_cross = path_loss(&simulate(&free, V, H)).unwrap();
        let baseline = BaselinePathLoss {
            distance_m: d,
            path_loss_db: pl_co,
        };
        let xpd_db = xpd(pl_cross, pl_co);

        let copol = penetration_loss_copol(&simulate(&behind, V, V), &baseline).unwrap();
        c.close_to(&format!("co-pol loss at {d} m"), copol.loss_db, 7.72, 0.05);
        c.close_to(
            &format!("co-pol dB/cm at {d} m"),
            copol.normalized_loss_db_per_cm,
            6.43,
            0.05,
        );

        let crosspol = penetration_loss_crosspol(
            &simulate(&behind, V, H),
            &baseline,
            xpd_db,
            CrossPenetrationForm::PredictedFromCopol,
            Some(pl_cross),
        )
        .unwrap();
        c.close_to(&format!("cross-pol loss at {d} m"), crosspol.loss_db, 7.72, 0.05);
        c.close_to(
            &format!("cross-pol dB/cm at {d} m"),
            crosspol.normalized_loss_db_per_cm,
            6.43,
            0.05,
        );
    }
    c.finish();
}

#[test]
fn criterion_6_violation_sensitivity_at_low_height() {
    let mut c = Criterion::new(
        "criterion 6: 0.2 m antennas at 5 m give GEOMETRY_INVALID and a corrupted XPD estimate",
    );
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), &campaign_config(0.2, "[5.0]", false));
    let run_dir = dir.path().join("run");
    bin_run(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        run_dir.to_str().unwrap(),
    ]);
    let verify_out = dir.path().join("verify");
    let verify = bin_run(&[
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--records",
        run_dir.to_str().unwrap(),
        "--out",
        verify_out.to_str().unwrap(),
    ]);
    c.check("verify exits 2", verify.status.code() == Some(2));
    c.check(
        "verdict GEOMETRY_INVALID",
        report_verdict(&verify_out) == "GEOMETRY_INVALID",
    );

    // The ground bounce lands inside the first-path window...
    let env = noise_free_env();
    let low = setup(5.0, 0.2);
    let rays = measurement_rays(&low, &env, Polarization::V, Polarization::V).unwrap();
    let direct = rays.iter().find(|r| r.path_kind == PathKind::Direct).unwrap();
    let ground = rays
        .iter()
        .find(|r| r.path_kind == PathKind::GroundBounce)
        .unwrap();
    let window_ns = PULSE_WIDTH_BINS as f64 * env.bin_width_ns;
    c.check(
        "ground bounce inside the first-path window",
        (ground.delay_ns - direct.delay_ns).abs() <= window_ns,
    );

    // ... and shifts the naive estimate by far more than 0.5 dB.
    let records = read_records::<f64>(run_dir.join("campaign/records.csv")).unwrap();
    let co = records.iter().find(|r| r.rx_pol == Polarization::V).unwrap();
    let cross = records.iter().find(|r| r.rx_pol == Polarization::H).unwrap();
    let estimate = xpd(path_loss(cross).unwrap(), path_loss(co).unwrap());
    c.check(
        &format!("estimate {estimate:.2} dB shifted > 0.5 dB from {LEAKAGE}"),
        (estimate - LEAKAGE).abs() > 0.5,
    );
    c.finish();
}

#[test]
fn criterion_7_friis_oracle() {
    let mut c = Criterion::new("criterion 7: free-space path loss at 4 m matches the brute-force oracle");
    let pl = friis_free_space_path_loss(4.0, FREQ).unwrap();
    // Independent evaluation of 20 log10(4 pi d / lambda).
    let lambda = 299_792_458.0 / FREQ;
    let oracle = 20.0 * (4.0 * std::f64::consts::PI * 4.0 / lambda).log10();
    c.close_to("published value", pl, 81.8, 0.1);
    c.close_to("oracle agreement", pl, oracle, 1e-9);
    c.finish();
}

#[test]
fn criterion_8_invariant_suites() {
    let mut c = Criterion::new(
        "criterion 8: reciprocity, power conservation, Fresnel scaling, planner self-consistency, determinism",
    );
    let env = noise_free_env();
    let mut rng = ChaCha8Rng::seed_from_u64(8);

    // Reciprocity over sampled geometries.
    for _ in 0..50 {
        let d = rng.gen_range(2.0..20.0);
        let h = rng.gen_range(0.5..3.0);
        let forward = trace_rays(&setup(d, h), &env).unwrap();
        let mut swapped_setup = setup(d, h);
        std::mem::swap(&mut swapped_setup.tx_antenna, &mut swapped_setup.rx_antenna);
        let swapped = trace_rays(&swapped_setup, &env).unwrap();
        let ok = forward.len() == swapped.len()
            && forward
                .iter()
                .zip(&swapped)
                .all(|(a, b)| (a.amplitude_db - b.amplitude_db).abs() < 1e-9);
        c.check("reciprocity", ok);
        if !ok {
            break;
        }
    }

    // Power conservation within 0.1 dB (noise floor pushed out of the way).
    let quiet = Environment {
        noise_floor_dbm: -300.0,
        noise_enabled: false,
        ..Environment::default()
    };
    for _ in 0..50 {
        let rays: Vec<Ray<f64>> = (0..rng.gen_range(1..5))
            .map(|_| {
                let delay_ns = rng.gen_range(5.0..120.0);
                Ray {
                    path_kind: PathKind::Direct,
                    path_length_m: delay_ns * 0.299792458,
                    delay_ns,
                    departure_deg: 0.0,
                    arrival_deg: 0.0,
                    amplitude_db: rng.gen_range(-80.0..-30.0),
                }
            })
            .collect();
        let pdp = synthesize_pdp(&rays, 2.0, &quiet, 0.0);
        let binned: f64 = pdp.bins_dbm.iter().map(|b| db_to_linear(*b)).sum();
        let emitted: f64 = rays.iter().map(|r| db_to_linear(r.amplitude_db)).sum();
        let gap = (linear_to_db(binned) - linear_to_db(emitted)).abs();
        c.check(&format!("power conservation (gap {gap:.2e} dB)"), gap <= 0.1);
        if gap > 0.1 {
            break;
        }
    }

    // Fresnel sqrt(n) scaling.
    for zone in 2u32..=9 {
        let r1 = fresnel_zone_radius(2.5, 2.5, 0.004079, 1);
        let rn = fresnel_zone_radius(2.5, 2.5, 0.004079, zone);
        c.close_to(
            &format!("fresnel zone {zone}"),
            rn,
            (zone as f64).sqrt() * r1,
            1e-12,
        );
    }

    // Planner self-consistency: 1,000 randomized setups built from the
    // planner's own minimums validate cleanly.
    let mut violations_seen = 0usize;
    for _ in 0..1000 {
        let freq: f64 = rng.gen_range(2.0e10..1.5e11);
        let aperture: f64 = rng.gen_range(0.005..0.05);
        let hpbw_tx: f64 = rng.gen_range(4.0..24.0);
        let hpbw_rx = (hpbw_tx * rng.gen_range(1.0..2.2)).min(35.0);
        let df = fraunhofer_distance(aperture, freq).unwrap();
        let d = min_tr_separation_xpd(df).max(0.2) * rng.gen_range(1.01..4.0);
        let h = min_clearance_height(d, hpbw_tx, hpbw_rx).unwrap() * rng.gen_range(1.05..3.0);
        let mut s = setup(d, h);
        s.frequency_hz = freq;
        s.tx_antenna.aperture_largest_dim_m = aperture;
        s.rx_antenna.aperture_largest_dim_m = aperture;
        s.tx_antenna.hpbw_azimuth_deg = hpbw_tx;
        s.tx_antenna.hpbw_elevation_deg = hpbw_tx;
        s.rx_antenna.hpbw_azimuth_deg = hpbw_rx;
        s.rx_antenna.hpbw_elevation_deg = hpbw_rx;
        violations_seen += validate_xpd_setup(&s).unwrap().len();
    }
    c.check("planner self-consistency over 1000 setups", violations_seen == 0);

    // Determinism: a fixed seed reproduces the PDP bit for bit.
    let seeded = Environment {
        rng_seed: 424242,
        ..Environment::default()
    };
    let rays = trace_rays(&setup(5.0, 1.5), &seeded).unwrap();
    c.check(
        "fixed-seed determinism",
        synthesize_pdp(&rays, 2.0, &seeded, 0.0) == synthesize_pdp(&rays, 2.0, &seeded, 0.0),
    );

    // The detection-margin window logic holds on a synthesized profile.
    let pdp = synthesize_pdp(
        &[Ray {
            path_kind: PathKind::Direct,
            path_length_m: 4.796679,
            delay_ns: 16.0,
            departure_deg: 0.0,
            arrival_deg: 0.0,
            amplitude_db: -41.8,
        }],
        2.0,
        &env,
        0.0,
    );
    c.close_to(
        "first-path window power",
        first_arriving_component_power(&pdp, 20.0).unwrap(),
        -41.8,
        0.1,
    );
    c.finish();
}

//! Synthetic measurement channel: image-method rays and band-limited
//! power delay profiles.
//!
//! The analysis pipeline needs realistic inputs to be verifiable without
//! hardware. This module builds them from first principles: a direct ray
//! plus ground/ceiling bounces constructed with mirror images, each ray
//! carrying Friis spreading loss, the antenna pattern gains at its
//! departure/arrival angles, and any reflection loss. Rays are rendered
//! into a time-binned power delay profile through a squared-sinc pulse
//! whose main lobe matches the sounder's time resolution, with seeded
//! noise at a configurable floor.
//!
//! Cross-polarized measurements attenuate the direct path by the TX
//! antenna's intrinsic leakage. Reflected paths are additionally
//! depolarization-limited: a bounce scrambles polarization, so its
//! cross-polarized suppression cannot exceed the reflection's own
//! polarization purity. This is what makes an in-beam ground bounce
//! corrupt an XPD estimate instead of cancelling out of it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{AnalysisError, MeasurementRecord};
use crate::geometry::{
    Antenna, GeometryError, Polarization, RuleId, RuleViolation, SetupGeometry, Unit,
};
use crate::num::{db_to_linear, linear_to_db, Real};
use crate::SPEED_OF_LIGHT_M_PER_S;

/// Default PDP bin width: 2 ns, the time resolution of a 1 GHz null-to-null
/// sounding waveform.
pub const DEFAULT_BIN_WIDTH_NS: f64 = 2.0;
/// Gaussian main-lobe roll-off coefficient: -12 dB at one full beamwidth
/// off boresight, so -3 dB at half the beamwidth.
pub const PATTERN_ROLLOFF_DB: f64 = 12.0;
/// Side-lobe floor of the antenna pattern model, dB below boresight gain.
pub const SIDELOBE_FLOOR_DB: f64 = 30.0;
/// Rays this far below the noise floor (at a 0 dBm transmit reference) are
/// dropped from the trace.
pub const RAY_PRUNE_MARGIN_DB: f64 = 10.0;
/// Main-lobe width of the rendering pulse, in bins. The first-path window
/// used throughout the toolkit is one pulse width on either side of the
/// first arrival.
pub const PULSE_WIDTH_BINS: usize = 2;

/// One-sided extent, in bins, over which a ray's pulse is sampled.
const PULSE_SPAN_BINS: usize = 64;
/// Trailing bins appended after the latest ray.
const PDP_TAIL_BINS: usize = 80;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors from ray tracing and measurement simulation.
#[derive(Debug, Error)]
pub enum ChannelError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("distance must be positive, got {0} m")]
    NonPositiveDistance(f64),
    #[error("no propagation path survives the noise floor")]
    NoDetectablePath,
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Which propagation mechanism produced a ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PathKind {
    Direct,
    GroundBounce,
    CeilingBounce,
    /// Echo bouncing once off each inner face of the material under test.
    MutInternal,
}

/// A single specular ray between TX and RX.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ray<T> {
    pub path_kind: PathKind,
    /// Geometric (for `MutInternal`: optical) path length, meters.
    pub path_length_m: T,
    /// Propagation delay, nanoseconds; always `path_length / c`.
    pub delay_ns: T,
    /// Departure angle off the TX boresight, degrees.
    pub departure_deg: T,
    /// Arrival angle off the RX boresight, degrees.
    pub arrival_deg: T,
    /// Received power relative to the transmit power, dB. Composes
    /// spreading loss, both pattern gains, and reflection/transmission
    /// losses.
    pub amplitude_db: T,
}

/// A received power trace binned at the sounder's time resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerDelayProfile<T> {
    /// Bin width, nanoseconds.
    pub bin_width_ns: T,
    /// Power per bin, dBm.
    pub bins_dbm: Vec<T>,
    /// Noise floor, dBm.
    pub noise_floor_dbm: T,
    /// Delay of the first bin, nanoseconds.
    pub first_bin_delay_ns: T,
}

impl<T: Real> PowerDelayProfile<T> {
    /// Delay at the center of bin `index`, nanoseconds.
    pub fn bin_delay_ns(&self, index: usize) -> T {
        self.first_bin_delay_ns + self.bin_width_ns * T::from_usize(index).expect("index fits")
    }

    /// Checks the type invariants: positive bin width, finite bins, and no
    /// bin more than 3 dB below the noise floor.
    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.bin_width_ns > T::zero()) {
            return Err(GeometryError::MalformedSetup(
                "PDP bin width must be positive".to_string(),
            ));
        }
        let lower_bound = self.noise_floor_dbm - T::lit(3.0);
        for (i, bin) in self.bins_dbm.iter().enumerate() {
            if !bin.is_finite() {
                return Err(GeometryError::MalformedSetup(format!(
                    "PDP bin {i} is not finite"
                )));
            }
            if *bin < lower_bound {
                return Err(GeometryError::MalformedSetup(format!(
                    "PDP bin {i} is more than 3 dB below the noise floor"
                )));
            }
        }
        Ok(())
    }
}

/// Static measurement environment around the link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment<T> {
    /// Power loss of a ground bounce, dB.
    pub ground_reflection_db: T,
    /// Ceiling height above ground, meters; `None` for open sky.
    pub ceiling_height_m: Option<T>,
    /// Power loss of a ceiling bounce, dB.
    pub ceiling_reflection_db: T,
    /// Free distance to walls or obstructions beside the path, meters;
    /// informational (used when deriving setup clearances), no wall rays
    /// are traced.
    pub wall_clearance_m: Option<T>,
    /// Receiver noise floor, dBm.
    pub noise_floor_dbm: T,
    /// Disable to render noiseless profiles (bins clamp at the floor).
    pub noise_enabled: bool,
    /// Seed for the noise realization.
    pub rng_seed: u64,
    /// Sounder time resolution, nanoseconds.
    pub bin_width_ns: T,
    /// Polarization purity of a reflection, dB: a bounce's cross-polarized
    /// suppression is limited to this value no matter how pure the
    /// antennas are. Use infinity to keep bounces at the antenna leakage.
    pub reflection_depolarization_db: T,
}

impl<T: Real> Default for Environment<T> {
    fn default() -> Self {
        Environment {
            ground_reflection_db: T::lit(3.0),
            ceiling_height_m: None,
            ceiling_reflection_db: T::lit(6.0),
            wall_clearance_m: None,
            noise_floor_dbm: T::lit(-100.0),
            noise_enabled: true,
            rng_seed: 0,
            bin_width_ns: T::lit(DEFAULT_BIN_WIDTH_NS),
            reflection_depolarization_db: T::lit(15.0),
        }
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Antenna gain at an off-boresight angle in the elevation plane (the plane
/// of the ground/ceiling bounce geometry): Gaussian main-lobe roll-off
/// `-12 (off / HPBW)^2` dB, floored 30 dB below boresight.
pub fn antenna_gain_at<T: Real>(antenna: &Antenna<T>, off_boresight_deg: T) -> T {
    let ratio = off_boresight_deg / antenna.hpbw_elevation_deg;
    let rolloff = (T::lit(PATTERN_ROLLOFF_DB) * ratio * ratio).min(T::lit(SIDELOBE_FLOOR_DB));
    antenna.gain_dbi - rolloff
}

/// Free-space path loss `20 log10(4 pi d / lambda)` in dB.
pub fn friis_free_space_path_loss<T: Real>(
    distance_m: T,
    frequency_hz: T,
) -> Result<T, ChannelError> {
    if !(distance_m > T::zero()) {
        return Err(ChannelError::NonPositiveDistance(distance_m.as_f64()));
    }
    let lambda = crate::geometry::wavelength(frequency_hz)?;
    let four_pi = T::lit(4.0) * T::PI();
    Ok(T::lit(20.0) * (four_pi * distance_m / lambda).log10())
}

fn delay_ns_for_length<T: Real>(path_length_m: T) -> T {
    path_length_m / T::lit(SPEED_OF_LIGHT_M_PER_S) * T::lit(1.0e9)
}

/// Traces the direct ray plus ground and ceiling bounces via mirror
/// images of the TX across the reflecting planes. Both antennas sit at
/// the setup's height, boresight-aligned along the direct path. Rays whose
/// received power (at a 0 dBm transmit reference) falls more than
/// [`RAY_PRUNE_MARGIN_DB`] below the noise floor are dropped.
pub fn trace_rays<T: Real>(
    setup: &SetupGeometry<T>,
    env: &Environment<T>,
) -> Result<Vec<Ray<T>>, ChannelError> {
    setup.validate()?;
    let d = setup.tr_separation_m;
    let prune_below = env.noise_floor_dbm - T::lit(RAY_PRUNE_MARGIN_DB);
    let mut rays = Vec::with_capacity(3);

    let push = |kind: PathKind,
                    length: T,
                    off_boresight_deg: T,
                    reflection_db: T,
                    rays: &mut Vec<Ray<T>>|
     -> Result<(), ChannelError> {
        let amplitude = antenna_gain_at(&setup.tx_antenna, off_boresight_deg)
            + antenna_gain_at(&setup.rx_antenna, off_boresight_deg)
            - friis_free_space_path_loss(length, setup.frequency_hz)?
            - reflection_db;
        if amplitude >= prune_below {
            rays.push(Ray {
                path_kind: kind,
                path_length_m: length,
                delay_ns: delay_ns_for_length(length),
                departure_deg: off_boresight_deg,
                arrival_deg: off_boresight_deg,
                amplitude_db: amplitude,
            });
        }
        Ok(())
    };

    push(PathKind::Direct, d, T::zero(), T::zero(), &mut rays)?;

    // Ground bounce: image of the TX at -h below ground.
    let h = setup.tx_height_m;
    if h > T::zero() {
        let two_h = T::lit(2.0) * h;
        let length = (d * d + two_h * two_h).sqrt();
        let angle = (two_h / d).atan().to_degrees();
        push(
            PathKind::GroundBounce,
            length,
            angle,
            env.ground_reflection_db,
            &mut rays,
        )?;
    }

    // Ceiling bounce: image of the TX mirrored across the ceiling plane.
    if let Some(ceiling) = env.ceiling_height_m {
        if ceiling > h {
            let two_c = T::lit(2.0) * (ceiling - h);
            let length = (d * d + two_c * two_c).sqrt();
            let angle = (two_c / d).atan().to_degrees();
            push(
                PathKind::CeilingBounce,
                length,
                angle,
                env.ceiling_reflection_db,
                &mut rays,
            )?;
        }
    }

    Ok(rays)
}

fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-12) {
        T::one()
    } else {
        let px = T::PI() * x;
        px.sin() / px
    }
}

/// Renders rays into a power delay profile. Each ray deposits its linear
/// power through a squared-sinc pulse of main-lobe width two bins centered
/// at its delay; the sampled pulse weights are normalized to unit sum, so
/// the binned power equals the ray power exactly. Bin powers add linearly,
/// then seeded noise is applied at the floor (or the floor clamps the bins
/// when noise is disabled).
pub fn synthesize_pdp<T: Real>(
    rays: &[Ray<T>],
    bin_width_ns: T,
    env: &Environment<T>,
    transmit_power_dbm: T,
) -> PowerDelayProfile<T> {
    let max_delay_bins = rays
        .iter()
        .map(|r| (r.delay_ns / bin_width_ns).ceil().as_f64() as usize)
        .max()
        .unwrap_or(0);
    let n_bins = max_delay_bins + PDP_TAIL_BINS;

    let mut signal_mw = vec![T::zero(); n_bins];
    for ray in rays {
        let power_mw = db_to_linear(transmit_power_dbm + ray.amplitude_db);
        let center_bins = ray.delay_ns / bin_width_ns;
        let center_idx = center_bins.round().as_f64() as isize;
        let lo = (center_idx - PULSE_SPAN_BINS as isize).max(0) as usize;
        let hi = ((center_idx + PULSE_SPAN_BINS as isize) as usize).min(n_bins - 1);
        let mut weights = Vec::with_capacity(hi - lo + 1);
        let mut weight_sum = T::zero();
        for bin in lo..=hi {
            let offset = T::from_usize(bin).expect("bin fits") - center_bins;
            let w = sinc(offset);
            let w2 = w * w;
            weights.push(w2);
            weight_sum = weight_sum + w2;
        }
        if weight_sum > T::zero() {
            for (bin, w2) in (lo..=hi).zip(weights) {
                signal_mw[bin] = signal_mw[bin] + power_mw * w2 / weight_sum;
            }
        }
    }

    let floor_mw = db_to_linear(env.noise_floor_dbm);
    let mut rng = ChaCha8Rng::seed_from_u64(env.rng_seed);
    let bins_dbm = signal_mw
        .into_iter()
        .map(|signal| {
            if env.noise_enabled {
                // Uniform power jitter in [0.55, 1.45] x floor keeps every
                // realization within 3 dB of the nominal floor.
                let jitter = T::lit(0.55 + 0.9 * rng.gen::<f64>());
                linear_to_db(signal + floor_mw * jitter)
            } else {
                linear_to_db(signal.max(floor_mw))
            }
        })
        .collect();

    PowerDelayProfile {
        bin_width_ns,
        bins_dbm,
        noise_floor_dbm: env.noise_floor_dbm,
        first_bin_delay_ns: T::zero(),
    }
}

/// Cross-polarized suppression of a reflected ray: the antenna leakage and
/// the reflection's own depolarization act as parallel leakage paths, so
/// the weaker suppression dominates.
fn reflected_cross_suppression_db<T: Real>(leakage_db: T, depolarization_db: T) -> T {
    if depolarization_db.is_infinite() {
        return leakage_db;
    }
    -linear_to_db(db_to_linear(-leakage_db) + db_to_linear(-depolarization_db))
}

/// The traced rays as one polarization-pair capture sees them:
/// cross-polarized captures attenuate the direct path (and any echo of it)
/// by the TX antenna's leakage while reflected paths are
/// depolarization-limited, and a material under test attenuates the direct
/// path by its insertion loss and optionally adds an internal-reflection
/// echo delayed by the two-way in-material travel time.
pub fn measurement_rays<T: Real>(
    setup: &SetupGeometry<T>,
    env: &Environment<T>,
    tx_pol: Polarization,
    rx_pol: Polarization,
) -> Result<Vec<Ray<T>>, ChannelError> {
    let mut rays = trace_rays(setup, env)?;

    if tx_pol != rx_pol {
        let leakage = setup.tx_antenna.xpd_leakage_db;
        let bounce =
            reflected_cross_suppression_db(leakage, env.reflection_depolarization_db);
        for ray in &mut rays {
            let suppression = match ray.path_kind {
                PathKind::Direct | PathKind::MutInternal => leakage,
                PathKind::GroundBounce | PathKind::CeilingBounce => bounce,
            };
            ray.amplitude_db = ray.amplitude_db - suppression;
        }
    }

    if let Some(material) = &setup.material {
        let mut echo = None;
        if let Some(direct) = rays.iter_mut().find(|r| r.path_kind == PathKind::Direct) {
            direct.amplitude_db = direct.amplitude_db - material.insertion_loss_db;
            if let Some(internal) = &material.internal_reflection {
                let extra_m = T::lit(2.0)
                    * (material.thickness_cm / T::lit(100.0))
                    * internal.relative_permittivity.sqrt();
                let length = direct.path_length_m + extra_m;
                echo = Some(Ray {
                    path_kind: PathKind::MutInternal,
                    path_length_m: length,
                    delay_ns: delay_ns_for_length(length),
                    departure_deg: direct.departure_deg,
                    arrival_deg: direct.arrival_deg,
                    amplitude_db: direct.amplitude_db
                        - T::lit(2.0) * internal.interface_reflection_db,
                });
            }
        }
        if let Some(echo) = echo {
            rays.push(echo);
        }
    }

    Ok(rays)
}

/// Simulates one captured link and returns its measurement record with the
/// synthesized PDP embedded.
///
/// The record's first-path power is the linear sum of the rays arriving
/// within one pulse width of the earliest ray, the same window the
/// analysis side integrates over a PDP.
pub fn simulate_measurement<T: Real>(
    setup: &SetupGeometry<T>,
    env: &Environment<T>,
    tx_pol: Polarization,
    rx_pol: Polarization,
    transmit_power_dbm: T,
) -> Result<MeasurementRecord<T>, ChannelError> {
    let rays = measurement_rays(setup, env, tx_pol, rx_pol)?;
    if rays.is_empty() {
        return Err(ChannelError::NoDetectablePath);
    }

    let pdp = synthesize_pdp(&rays, env.bin_width_ns, env, transmit_power_dbm);
    let received = transmit_power_dbm + first_path_window_power_db(&rays, env.bin_width_ns);

    Ok(MeasurementRecord {
        distance_m: setup.tr_separation_m,
        tx_pol,
        rx_pol,
        transmit_power_dbm,
        received_power_first_path_dbm: received,
        gain_tx_dbi: setup.tx_antenna.gain_dbi,
        gain_rx_dbi: setup.rx_antenna.gain_dbi,
        mut_present: setup.material.is_some(),
        mut_thickness_cm: setup.material.as_ref().map(|m| m.thickness_cm),
        pdp: Some(pdp),
    })
}

/// Linear power sum (relative to transmit power, dB) of the rays arriving
/// within one pulse width of the earliest ray.
fn first_path_window_power_db<T: Real>(rays: &[Ray<T>], bin_width_ns: T) -> T {
    let first_delay = rays
        .iter()
        .map(|r| r.delay_ns)
        .fold(T::infinity(), |a, b| a.min(b));
    let window = T::from_usize(PULSE_WIDTH_BINS).expect("fits") * bin_width_ns;
    let sum = rays
        .iter()
        .filter(|r| (r.delay_ns - first_delay).abs() <= window)
        .map(|r| db_to_linear(r.amplitude_db))
        .fold(T::zero(), |a, b| a + b);
    linear_to_db(sum)
}

/// Checks that every multipath component is either separable from the
/// first arriving path (outside its window) or at least `margin_db` below
/// it. Returns the worst offender as a violation, if any.
pub fn check_multipath_margin<T: Real>(
    rays: &[Ray<T>],
    bin_width_ns: T,
    margin_db: T,
) -> Option<RuleViolation<T>> {
    let first = rays
        .iter()
        .min_by(|a, b| a.delay_ns.partial_cmp(&b.delay_ns).expect("finite delays"))?;
    let window = T::from_usize(PULSE_WIDTH_BINS).expect("fits") * bin_width_ns;
    let mut worst: Option<&Ray<T>> = None;
    for ray in rays {
        if std::ptr::eq(ray, first) {
            continue;
        }
        if (ray.delay_ns - first.delay_ns).abs() > window {
            continue;
        }
        let down = first.amplitude_db - ray.amplitude_db;
        if down < margin_db && worst.is_none_or(|w| ray.amplitude_db > w.amplitude_db) {
            worst = Some(ray);
        }
    }
    worst.map(|ray| RuleViolation {
        rule: RuleId::MultipathMargin,
        observed: first.amplitude_db - ray.amplitude_db,
        required: margin_db,
        unit: Unit::Decibels,
        message: format!(
            "{:?} path arrives {:.2} ns after the first path, inside its window",
            ray.path_kind,
            (ray.delay_ns - first.delay_ns).as_f64()
        ),
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::MaterialSpec;

    const FREQ: f64 = 73.5e9;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn widebeam() -> Antenna<f64> {
        Antenna {
            name: "widebeam".to_string(),
            aperture_largest_dim_m: 0.02,
            hpbw_azimuth_deg: 15.0,
            hpbw_elevation_deg: 15.0,
            gain_dbi: 20.0,
            xpd_leakage_db: 29.15,
            polarization: Polarization::V,
        }
    }

    fn narrowbeam() -> Antenna<f64> {
        Antenna {
            name: "narrowbeam".to_string(),
            aperture_largest_dim_m: 0.041,
            hpbw_azimuth_deg: 7.0,
            hpbw_elevation_deg: 7.0,
            gain_dbi: 27.0,
            xpd_leakage_db: 30.30,
            polarization: Polarization::V,
        }
    }

    fn setup(tr_m: f64, height_m: f64) -> SetupGeometry<f64> {
        SetupGeometry {
            frequency_hz: FREQ,
            tr_separation_m: tr_m,
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

    #[test]
    fn pattern_boresight_and_half_power() {
        let a = widebeam();
        assert_eq!(antenna_gain_at(&a, 0.0), 20.0);
        assert!(approx(antenna_gain_at(&a, 7.5), 17.0, 1e-12));
    }

    #[test]
    fn pattern_sidelobe_floor() {
        let a = narrowbeam();
        assert!(approx(antenna_gain_at(&a, 90.0), -3.0, 1e-12));
    }

    #[test]
    fn friis_at_four_meters() {
        let pl = friis_free_space_path_loss(4.0, FREQ).unwrap();
        assert!(approx(pl, 81.8, 0.1), "pl = {pl}");
    }

    #[test]
    fn friis_unit_argument_and_doubling() {
        let lambda = crate::geometry::wavelength(FREQ).unwrap();
        let pl0 = friis_free_space_path_loss(lambda / (4.0 * std::f64::consts::PI), FREQ).unwrap();
        assert!(approx(pl0, 0.0, 1e-9));
        let d1 = friis_free_space_path_loss(3.0, FREQ).unwrap();
        let d2 = friis_free_space_path_loss(6.0, FREQ).unwrap();
        assert!(approx(d2 - d1, 20.0 * 2.0_f64.log10(), 1e-9));
    }

    #[test]
    fn friis_rejects_non_positive_distance() {
        assert!(friis_free_space_path_loss(0.0, FREQ).is_err());
    }

    #[test]
    fn ground_bounce_geometry() {
        let rays = trace_rays(&setup(5.0, 1.5), &noise_free_env()).unwrap();
        let direct = rays.iter().find(|r| r.path_kind == PathKind::Direct).unwrap();
        let ground = rays
            .iter()
            .find(|r| r.path_kind == PathKind::GroundBounce)
            .unwrap();
        assert!(approx(ground.departure_deg, 31.0, 0.05));
        assert!(approx(ground.arrival_deg, 31.0, 0.05));
        assert!(approx(direct.delay_ns, 16.68, 0.005));
        assert!(approx(ground.path_length_m, (25.0_f64 + 9.0).sqrt(), 1e-12));
    }

    #[test]
    fn distant_ground_image_is_pruned() {
        let rays = trace_rays(&setup(5.0, 1.0e6), &noise_free_env()).unwrap();
        assert_eq!(rays.len(), 1);
        assert_eq!(rays[0].path_kind, PathKind::Direct);
    }

    #[test]
    fn ceiling_bounce_present_when_configured() {
        let mut env = noise_free_env();
        env.ceiling_height_m = Some(2.5);
        let rays = trace_rays(&setup(5.0, 1.5), &env).unwrap();
        let ceiling = rays
            .iter()
            .find(|r| r.path_kind == PathKind::CeilingBounce)
            .unwrap();
        assert!(approx(ceiling.departure_deg, (2.0_f64 / 5.0).atan().to_degrees(), 1e-9));
    }

    #[test]
    fn undetectable_ceiling_bounce_is_pruned() {
        // A 3 m ceiling puts the bounce ~111 dB below a 0 dBm transmit,
        // under the prune threshold for the default -100 dBm floor.
        let mut env = noise_free_env();
        env.ceiling_height_m = Some(3.0);
        let rays = trace_rays(&setup(5.0, 1.5), &env).unwrap();
        assert!(rays.iter().all(|r| r.path_kind != PathKind::CeilingBounce));
    }

    #[test]
    fn single_tap_peak_matches_ray_power() {
        // Bin-aligned tap: all pulse samples away from the center are zero.
        let ray = Ray {
            path_kind: PathKind::Direct,
            path_length_m: 4.796679,
            delay_ns: 16.0,
            departure_deg: 0.0,
            arrival_deg: 0.0,
            amplitude_db: -41.8,
        };
        let pdp = synthesize_pdp(&[ray], 2.0, &noise_free_env(), 0.0);
        let peak = pdp
            .bins_dbm
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(approx(peak, -41.8, 0.1), "peak = {peak}");
        pdp.validate().unwrap();
    }

    #[test]
    fn separated_taps_make_two_local_maxima() {
        let mk = |delay_ns: f64, amp: f64| Ray {
            path_kind: PathKind::Direct,
            path_length_m: delay_ns * 0.299792458,
            delay_ns,
            departure_deg: 0.0,
            arrival_deg: 0.0,
            amplitude_db: amp,
        };
        let pdp = synthesize_pdp(&[mk(10.0, -40.0), mk(20.0, -43.0)], 2.0, &noise_free_env(), 0.0);
        let bins = &pdp.bins_dbm;
        let mut maxima = 0;
        for i in 1..bins.len() - 1 {
            if bins[i] > bins[i - 1] && bins[i] > bins[i + 1] && bins[i] > -60.0 {
                maxima += 1;
            }
        }
        assert_eq!(maxima, 2);
    }

    #[test]
    fn empty_ray_list_gives_all_noise_pdp() {
        let env = Environment::<f64>::default();
        let pdp = synthesize_pdp(&[], 2.0, &env, 0.0);
        assert!(!pdp.bins_dbm.is_empty());
        pdp.validate().unwrap();
        assert!(pdp.bins_dbm.iter().all(|b| (*b - -100.0).abs() < 3.0));
    }

    #[test]
    fn fixed_seed_is_bit_identical() {
        let env = Environment::<f64> {
            rng_seed: 1234,
            ..Environment::default()
        };
        let rays = trace_rays(&setup(5.0, 1.5), &env).unwrap();
        let a = synthesize_pdp(&rays, 2.0, &env, 0.0);
        let b = synthesize_pdp(&rays, 2.0, &env, 0.0);
        assert_eq!(a, b);
    }

    #[test]
    fn copol_first_path_composes_friis() {
        let record =
            simulate_measurement(&setup(4.0, 1.5), &noise_free_env(), Polarization::V, Polarization::V, 0.0)
                .unwrap();
        assert!(
            approx(record.received_power_first_path_dbm, -41.8, 0.2),
            "pr = {}",
            record.received_power_first_path_dbm
        );
    }

    #[test]
    fn crosspol_first_path_drops_by_leakage() {
        let record =
            simulate_measurement(&setup(4.0, 1.5), &noise_free_env(), Polarization::V, Polarization::H, 0.0)
                .unwrap();
        assert!(
            approx(record.received_power_first_path_dbm, -70.95, 0.2),
            "pr = {}",
            record.received_power_first_path_dbm
        );
    }

    #[test]
    fn mut_attenuates_first_path_by_insertion_loss() {
        let mut with_mut = setup(4.0, 1.5);
        with_mut.material = Some(MaterialSpec {
            name: "clear glass".to_string(),
            thickness_cm: 1.2,
            insertion_loss_db: 7.72,
            extent_height_m: 2.0,
            extent_width_m: 2.0,
            internal_reflection: None,
        });
        let env = noise_free_env();
        let free =
            simulate_measurement(&setup(4.0, 1.5), &env, Polarization::V, Polarization::V, 0.0)
                .unwrap();
        let behind =
            simulate_measurement(&with_mut, &env, Polarization::V, Polarization::V, 0.0).unwrap();
        // The far-below-floor ground tap sits inside the first-path window
        // at 4 m, shifting the difference by a few 1e-6 dB.
        let drop = free.received_power_first_path_dbm - behind.received_power_first_path_dbm;
        assert!(approx(drop, 7.72, 1e-4), "drop = {drop}");
        assert!(behind.mut_present);
        assert_eq!(behind.mut_thickness_cm, Some(1.2));
    }

    #[test]
    fn mut_internal_reflection_adds_an_echo() {
        let mut s = setup(4.0, 1.5);
        s.material = Some(MaterialSpec {
            name: "thick slab".to_string(),
            thickness_cm: 60.0,
            insertion_loss_db: 3.0,
            extent_height_m: 2.0,
            extent_width_m: 2.0,
            internal_reflection: Some(crate::geometry::InternalReflection {
                relative_permittivity: 2.25,
                interface_reflection_db: 8.0,
            }),
        });
        let record =
            simulate_measurement(&s, &noise_free_env(), Polarization::V, Polarization::V, 0.0)
                .unwrap();
        let pdp = record.pdp.unwrap();
        // Echo travels an extra 2 * 0.6 m * 1.5 = 1.8 m -> 6.0 ns behind
        // the direct arrival, two strong local maxima in the profile.
        let mut maxima = Vec::new();
        for i in 1..pdp.bins_dbm.len() - 1 {
            if pdp.bins_dbm[i] > pdp.bins_dbm[i - 1]
                && pdp.bins_dbm[i] > pdp.bins_dbm[i + 1]
                && pdp.bins_dbm[i] > -75.0
            {
                maxima.push(pdp.bin_delay_ns(i));
            }
        }
        assert_eq!(maxima.len(), 2, "maxima at {maxima:?}");
        assert!(approx(maxima[1] - maxima[0], 6.0, 2.0));
    }

    #[test]
    fn multipath_margin_flags_in_window_bounce() {
        let env = noise_free_env();
        let low = trace_rays(&setup(5.0, 0.2), &env).unwrap();
        let violation = check_multipath_margin(&low, 2.0, 20.0).unwrap();
        assert_eq!(violation.rule, RuleId::MultipathMargin);
        assert!(violation.observed < 20.0);

        let high = trace_rays(&setup(5.0, 1.5), &env).unwrap();
        assert!(check_multipath_margin(&high, 2.0, 20.0).is_none());
    }

    #[test]
    fn depolarization_limits_bounce_suppression() {
        assert!(approx(
            reflected_cross_suppression_db(29.15_f64, f64::INFINITY),
            29.15,
            1e-12
        ));
        let eff = reflected_cross_suppression_db(29.15_f64, 15.0);
        assert!(eff < 15.0 && eff > 14.0, "eff = {eff}");
    }
}

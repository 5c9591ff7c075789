//! Text interchange formats: measurement-record CSV and PDP export.
//!
//! Records travel as comma-delimited text with a mandatory header:
//!
//! ```text
//! distance_m,tx_pol,rx_pol,pt_dbm,pr_dbm,gtx_dbi,grx_dbi,mut_present,mut_thickness_cm
//! ```
//!
//! Polarizations are `V`/`H`, booleans `true`/`false`, and the thickness
//! field is empty for free-space rows. PDPs export as two columns,
//! `delay_ns,power_dbm`, one row per bin. Numbers are written in the
//! shortest form that parses back to the identical value.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::analysis::MeasurementRecord;
use crate::channel_model::PowerDelayProfile;
use crate::geometry::Polarization;
use crate::num::Real;

/// Header line of a measurement-record file.
pub const RECORDS_HEADER: &str =
    "distance_m,tx_pol,rx_pol,pt_dbm,pr_dbm,gtx_dbi,grx_dbi,mut_present,mut_thickness_cm";
/// Header line of a PDP export.
pub const PDP_HEADER: &str = "delay_ns,power_dbm";

/// Errors from reading or writing the interchange formats.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("missing or wrong header: expected {expected:?}, found {found:?}")]
    Header { expected: &'static str, found: String },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

fn line_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Line {
        line,
        message: message.into(),
    }
}

fn parse_scalar<T: Real>(field: &str, name: &str, line: usize) -> Result<T, FormatError> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| line_err(line, format!("{name} is not a number: {field:?}")))?;
    Ok(T::lit(v))
}

// ---------------------------------------------------------------------------
// Measurement records
// ---------------------------------------------------------------------------

/// Serializes records to the delimited text format (PDPs are not included;
/// they export separately).
pub fn records_to_string<T: Real>(records: &[MeasurementRecord<T>]) -> String {
    let mut out = String::from(RECORDS_HEADER);
    out.push('\n');
    for r in records {
        let thickness = r
            .mut_thickness_cm
            .map(|t| t.as_f64().to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.distance_m.as_f64(),
            r.tx_pol,
            r.rx_pol,
            r.transmit_power_dbm.as_f64(),
            r.received_power_first_path_dbm.as_f64(),
            r.gain_tx_dbi.as_f64(),
            r.gain_rx_dbi.as_f64(),
            r.mut_present,
            thickness,
        ));
    }
    out
}

/// Parses records from the delimited text format.
pub fn records_from_str<T: Real>(text: &str) -> Result<Vec<MeasurementRecord<T>>, FormatError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == RECORDS_HEADER => {}
        other => {
            return Err(FormatError::Header {
                expected: RECORDS_HEADER,
                found: other.map(|(_, l)| l.to_string()).unwrap_or_default(),
            })
        }
    }

    let mut records = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1; // 1-based for messages
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 9 {
            return Err(line_err(line, format!("expected 9 fields, found {}", fields.len())));
        }
        let tx_pol: Polarization = fields[1]
            .parse()
            .map_err(|e: String| line_err(line, e))?;
        let rx_pol: Polarization = fields[2]
            .parse()
            .map_err(|e: String| line_err(line, e))?;
        let mut_present = match fields[7].trim() {
            "true" => true,
            "false" => false,
            other => {
                return Err(line_err(line, format!("mut_present must be true/false, got {other:?}")))
            }
        };
        let mut_thickness_cm = if fields[8].trim().is_empty() {
            None
        } else {
            Some(parse_scalar(fields[8], "mut_thickness_cm", line)?)
        };

        let record = MeasurementRecord {
            distance_m: parse_scalar(fields[0], "distance_m", line)?,
            tx_pol,
            rx_pol,
            transmit_power_dbm: parse_scalar(fields[3], "pt_dbm", line)?,
            received_power_first_path_dbm: parse_scalar(fields[4], "pr_dbm", line)?,
            gain_tx_dbi: parse_scalar(fields[5], "gtx_dbi", line)?,
            gain_rx_dbi: parse_scalar(fields[6], "grx_dbi", line)?,
            mut_present,
            mut_thickness_cm,
            pdp: None,
        };
        record
            .validate()
            .map_err(|e| line_err(line, e.to_string()))?;
        records.push(record);
    }
    Ok(records)
}

/// Writes records to a file.
pub fn write_records<T: Real>(
    path: impl AsRef<Path>,
    records: &[MeasurementRecord<T>],
) -> Result<(), FormatError> {
    fs::write(path, records_to_string(records))?;
    Ok(())
}

/// Reads records from a file.
pub fn read_records<T: Real>(path: impl AsRef<Path>) -> Result<Vec<MeasurementRecord<T>>, FormatError> {
    let text = fs::read_to_string(path)?;
    records_from_str(&text)
}

// ---------------------------------------------------------------------------
// Power delay profiles
// ---------------------------------------------------------------------------

/// Serializes a PDP to two-column text, one row per bin.
pub fn pdp_to_string<T: Real>(pdp: &PowerDelayProfile<T>) -> String {
    let mut out = String::from(PDP_HEADER);
    out.push('\n');
    for (i, bin) in pdp.bins_dbm.iter().enumerate() {
        out.push_str(&format!(
            "{},{}\n",
            pdp.bin_delay_ns(i).as_f64(),
            bin.as_f64()
        ));
    }
    out
}

/// Parses a PDP from two-column text. The bin width is recovered from the
/// delay spacing (which must be uniform) and the noise floor is estimated
/// as the weakest bin.
pub fn pdp_from_str<T: Real>(text: &str) -> Result<PowerDelayProfile<T>, FormatError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == PDP_HEADER => {}
        other => {
            return Err(FormatError::Header {
                expected: PDP_HEADER,
                found: other.map(|(_, l)| l.to_string()).unwrap_or_default(),
            })
        }
    }

    let mut delays: Vec<T> = Vec::new();
    let mut bins: Vec<T> = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 2 {
            return Err(line_err(line, format!("expected 2 fields, found {}", fields.len())));
        }
        delays.push(parse_scalar(fields[0], "delay_ns", line)?);
        bins.push(parse_scalar(fields[1], "power_dbm", line)?);
    }
    if bins.len() < 2 {
        return Err(line_err(0, "a PDP needs at least two bins"));
    }

    let bin_width = delays[1] - delays[0];
    if !(bin_width > T::zero()) {
        return Err(line_err(2, "delays must be strictly increasing"));
    }
    let tolerance = bin_width * T::lit(1e-6);
    for (i, pair) in delays.windows(2).enumerate() {
        if ((pair[1] - pair[0]) - bin_width).abs() > tolerance {
            return Err(line_err(i + 3, "delay spacing is not uniform"));
        }
    }
    let noise_floor = bins.iter().cloned().fold(T::infinity(), T::min);

    Ok(PowerDelayProfile {
        bin_width_ns: bin_width,
        bins_dbm: bins,
        noise_floor_dbm: noise_floor,
        first_bin_delay_ns: delays[0],
    })
}

/// Writes a PDP export file.
pub fn write_pdp<T: Real>(
    path: impl AsRef<Path>,
    pdp: &PowerDelayProfile<T>,
) -> Result<(), FormatError> {
    fs::write(path, pdp_to_string(pdp))?;
    Ok(())
}

/// Reads a PDP export file.
pub fn read_pdp<T: Real>(path: impl AsRef<Path>) -> Result<PowerDelayProfile<T>, FormatError> {
    let text = fs::read_to_string(path)?;
    pdp_from_str(&text)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

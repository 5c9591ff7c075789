//! `xpdcal`: plan, simulate, analyze, and verify XPD and material
//! penetration loss measurement campaigns for directional wideband channel
//! sounders.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use xpdcal_cli::commands;

#[derive(Parser)]
#[command(
    name = "xpdcal",
    version,
    about = "Plan, simulate, analyze, and verify antenna XPD and material penetration loss measurement campaigns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print planning figures (far-field distances, minimum heights,
    /// material extents, distance schedules) and flag geometry violations
    Plan {
        /// Campaign configuration (TOML)
        #[arg(long)]
        config: PathBuf,
        /// Use half the beamwidth as the clearance half-angle (strict
        /// literal convention) instead of the full beamwidth
        #[arg(long)]
        strict_halfangle: bool,
    },
    /// Synthesize measurement records and PDP files for every scenario
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (one subdirectory per scenario)
        #[arg(long)]
        out: PathBuf,
        /// Override the configured simulation seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reduce measurement records to per-distance XPD / penetration tables
    Analyze {
        #[arg(long)]
        config: PathBuf,
        /// Records file, or a directory holding `<scenario>/records.csv`
        #[arg(long)]
        records: PathBuf,
        /// Subtract the measured cross-polarized path loss (and the XPD)
        /// in the cross-polarized penetration formula
        #[arg(long)]
        eq11_literal: bool,
    },
    /// Validate geometry and distance consistency; persist a verdict report.
    /// Exit code: 0 VERIFIED, 1 INCONSISTENT, 2 GEOMETRY_INVALID
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        records: PathBuf,
        /// Directory for the timestamped run directory
        #[arg(long)]
        out: PathBuf,
        /// Override the max-minus-min consistency threshold, dB
        #[arg(long)]
        spread_db: Option<f64>,
        /// Override the standard deviation consistency threshold, dB
        #[arg(long)]
        std_db: Option<f64>,
        #[arg(long)]
        strict_halfangle: bool,
        #[arg(long)]
        eq11_literal: bool,
    },
    /// Export plot-ready series files from a verification report
    Report {
        /// Path to a report.json written by `verify`
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Plan {
            config,
            strict_halfangle,
        } => commands::plan::run(config, *strict_halfangle),
        Command::Simulate { config, out, seed } => commands::simulate::run(config, out, *seed),
        Command::Analyze {
            config,
            records,
            eq11_literal,
        } => commands::analyze::run(config, records, *eq11_literal),
        Command::Verify {
            config,
            records,
            out,
            spread_db,
            std_db,
            strict_halfangle,
            eq11_literal,
        } => commands::verify::run(
            config,
            records,
            out,
            &commands::verify::VerifyOptions {
                spread_db: *spread_db,
                std_db: *std_db,
                strict_halfangle: *strict_halfangle,
                eq11_literal: *eq11_literal,
            },
        ),
        Command::Report { report, out } => commands::report::run(report, out),
    };

    match result {
        Ok(code) => ExitCode::from(u8::try_from(code).unwrap_or(1)),
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}

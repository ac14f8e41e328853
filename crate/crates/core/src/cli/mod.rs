//! Configuration files and the `nldirac` subcommands.
//!
//! Exit codes: 0 success, 2 configuration error, 3 stability fault,
//! 4 verification failure.

mod commands;
mod config;

pub use commands::{
    build_initial, cmd_covariance, cmd_dispersion, cmd_simulate, cmd_verify, output_directory,
    CovarianceReport, DispersionRow, SimulationReport, OUTPUT_ENV,
};
pub use config::{InitialSpec, OutputSection, RunConfig, RunSection};

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::identities::GammaSet;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_STABILITY: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("stability fault: {0}")]
    Stability(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Stability(_) => EXIT_STABILITY,
            CliError::Verification(_) => EXIT_VERIFICATION,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "nldirac", version, about = "Nonlinear Dirac equation laboratory")]
struct Args {
    /// Worker threads for field evolution (recorded in config.echo).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the algebraic identities exactly.
    Verify {
        /// Negate one entry of γ² before checking (exercises the FAIL path).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Integrate a configured run and write the diagnostic series.
    Simulate { config: PathBuf },
    /// Measure ω(p) for plane waves and compare with √(p² + m²).
    Dispersion {
        config: PathBuf,
        /// Momentum indices along the last grid axis.
        #[arg(long, num_args = 0.., value_delimiter = ',', allow_negative_numbers = true)]
        p_indices: Vec<i64>,
    },
    /// Transform an exact solution and compare residuals.
    Covariance {
        config: PathBuf,
        #[arg(long)]
        transform: String,
    },
}

fn read_config(path: &PathBuf) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    text.parse()
}

fn dispatch(command: Command, config: Option<RunConfig>, out: &mut (dyn Write + Send)) -> Result<i32, CliError> {
    match command {
        Command::Verify { inject_fault } => {
            let mut set = GammaSet::canonical();
            if inject_fault {
                set = set.with_entry_negated(2, 0, 3);
            }
            cmd_verify(&set, out)
        }
        Command::Simulate { .. } => {
            cmd_simulate(&config.expect("config loaded"), out)?;
            Ok(EXIT_OK)
        }
        Command::Dispersion { p_indices, .. } => {
            cmd_dispersion(&config.expect("config loaded"), &p_indices, out)?;
            Ok(EXIT_OK)
        }
        Command::Covariance { transform, .. } => {
            let report = cmd_covariance(&config.expect("config loaded"), &transform, out)?;
            Ok(if report.passed { EXIT_OK } else { EXIT_VERIFICATION })
        }
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn run_cli<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let config_path = match &args.command {
        Command::Verify { .. } => None,
        Command::Simulate { config } | Command::Dispersion { config, .. } | Command::Covariance { config, .. } => {
            Some(config.clone())
        }
    };
    let config = match config_path.as_ref().map(read_config).transpose() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "nldirac: {e}");
            return e.exit_code();
        }
    };
    let threads = args.threads.or(config.as_ref().and_then(|c| c.run.threads));
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            let _ = writeln!(err, "nldirac: --threads must be at least 1");
            return EXIT_CONFIG;
        }
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "nldirac: thread pool: {e}");
            return EXIT_CONFIG;
        }
    };
    match pool.install(|| dispatch(args.command, config, out)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "nldirac: {e}");
            e.exit_code()
        }
    }
}

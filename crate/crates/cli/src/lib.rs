//! `gradual`: evaluate weighted argumentation frameworks under kernel-based
//! semantics, compute weights that realize a requested ranking, and inspect
//! the space of reachable degree vectors.
//!
//! Exit codes: `0` success, `1` semantic failure (verification failed,
//! infeasible weights, non-convergence, axiom violations), `2` usage or
//! input error.

#![forbid(unsafe_code)]

mod commands;
mod error;
pub mod format;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use gradual_core::KernelDescriptor;

pub use error::CliError;
pub use report::{RunReport, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(
    name = "gradual",
    version,
    about = "Kernel-based gradual semantics and their inverse problem"
)]
struct Cli {
    /// Emit the full run report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Acceptability degrees and ranking of a weighted framework.
    Evaluate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
        #[arg(long = "max-iter", default_value_t = 10_000)]
        max_iter: usize,
    },
    /// Target degrees for an ordering.
    Bounds {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ordering: String,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Weights realizing an ordering, checked by a forward solve.
    Invert {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ordering: String,
        #[arg(long, value_enum, default_value_t = Method::Analytic)]
        method: Method,
        #[command(flatten)]
        bounds: BoundsArgs,
        /// Fixed-point tolerance.
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
        #[arg(long = "max-iter", default_value_t = 10_000)]
        max_iter: usize,
        #[arg(long = "bisection-tolerance", default_value_t = 1e-9)]
        bisection_tolerance: f64,
        #[arg(long = "max-rounds")]
        max_rounds: Option<usize>,
        /// Write the framework with the computed weights here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Membership of degree vectors (CSV rows) in the reachable space.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        degrees: PathBuf,
        /// Allowed excess of an implied weight above 1.
        #[arg(long, default_value_t = 1e-9)]
        slack: f64,
    },
    /// Sample reachable degree vectors into a CSV file.
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long, required_unless_present = "grid", conflicts_with = "grid")]
        count: Option<usize>,
        /// Comma-separated weight values; every combination is used.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Randomized check of nonnegativity, monotonicity and homogeneity.
    CheckKernel {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Framework file (JSON).
    #[arg(long)]
    framework: PathBuf,
    /// Kernel descriptor, e.g. `hc`, `lp:2`, `lin:0.5*hc+0.5*mb`.
    #[arg(long, value_parser = parse_semantics)]
    semantics: KernelDescriptor,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 1.0)]
    zeta: f64,
    /// Degree bound above the top class.
    #[arg(long, default_value_t = 1.0)]
    top: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Analytic,
    Bisection,
}

fn parse_semantics(text: &str) -> Result<KernelDescriptor, String> {
    text.parse().map_err(|e: gradual_core::Error| e.to_string())
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: RunReport,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.report.exit_code
    }
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let json = argv.iter().skip(1).any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => return usage_error(&argv, e, json),
    };
    let name = cli.command.name();
    let mut report = RunReport::new(name);
    let mut human = String::new();
    let result = commands::dispatch(cli.command, &mut report, &mut human);
    let mut stderr = String::new();
    if let Err(e) = result {
        report.exit_code = EXIT_USAGE;
        report.diagnostic("error", e.to_string());
        stderr = format!("error: {e}\n");
    }
    let stdout = if cli.json {
        report.to_json()
    } else if report.exit_code == EXIT_USAGE {
        String::new()
    } else {
        human
    };
    Outcome { report, stdout, stderr }
}

fn usage_error(argv: &[OsString], e: clap::Error, json: bool) -> Outcome {
    let message = e.render().to_string();
    if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
        return Outcome {
            report: RunReport {
                subcommand: None,
                ..RunReport::new("")
            },
            stdout: message,
            stderr: String::new(),
        };
    }
    let mut report = RunReport::new("");
    report.subcommand = argv
        .get(1)
        .and_then(|a| a.to_str())
        .filter(|a| !a.starts_with('-'))
        .map(str::to_string);
    report.exit_code = EXIT_USAGE;
    report.diagnostic("error", message.trim_end().to_string());
    let stdout = if json { report.to_json() } else { String::new() };
    Outcome {
        report,
        stdout,
        stderr: message,
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Evaluate { .. } => "evaluate",
            Self::Bounds { .. } => "bounds",
            Self::Invert { .. } => "invert",
            Self::Validate { .. } => "validate",
            Self::Sample { .. } => "sample",
            Self::CheckKernel { .. } => "check-kernel",
        }
    }
}

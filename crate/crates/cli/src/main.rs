//! `dsm`: construct, validate, iterate, sample and measure d-stochastic
//! measures with self-similar support.
//!
//! Exit codes: 0 success, 1 validation failure, 2 parse error, 3 budget
//! exceeded.

mod commands;
mod input;
mod manifest;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dsm_core::error::Error as CoreError;

use manifest::Manifest;

#[derive(Parser)]
#[command(
    name = "dsm",
    version,
    about = "Exact construction and analysis of d-stochastic measures with self-similar support"
)]
struct Cli {
    /// Bisection tolerance for the dimension solver.
    #[arg(long, global = true, value_name = "TOL")]
    tol: Option<f64>,

    /// Cell budget for iteration, or cells-per-side budget for transport.
    #[arg(long, global = true, value_name = "CELLS")]
    budget: Option<usize>,

    /// RNG seed for sampling.
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,

    /// Write a run manifest (command, settings, output digests) here.
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a matrix: validity, uniformity, class, support, dimension.
    Validate { input: String },
    /// Materialize a preset as TMX (matrices) or GMX (measures).
    Example {
        preset: String,
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Write the exact Markov iterates of Lebesgue measure as GMX files.
    Iterate {
        input: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = ".")]
        out_dir: String,
    },
    /// Export a depth-n Hutchinson iterate of the unit cube.
    Support {
        input: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = SupportFormat::Rects)]
        format: SupportFormat,
        #[arg(short, long)]
        out: Option<String>,
        /// Share coincident vertices in PLY output.
        #[arg(long)]
        weld: bool,
    },
    /// Chaos-game samples of the fixed-point measure, as CSV.
    Sample {
        input: String,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        burn_in: Option<usize>,
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Exact marginal of a grid measure (drop one 1-based coordinate).
    Marginal {
        input: String,
        #[arg(long)]
        drop: usize,
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Distances between grid measures and sample diagnostics.
    Metric {
        #[command(subcommand)]
        metric: MetricCommand,
    },
    /// Support size and attractor dimension of a matrix.
    Dimension { input: String },
    /// Cube coarsening of a measure (GMX) or sample cloud (CSV) as TMX.
    Checkerboard {
        input: String,
        #[arg(long)]
        boxes: usize,
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Diagnostic exports of the induced function system.
    Export {
        input: String,
        #[arg(long, value_enum, default_value_t = ExportKind::Ifsp)]
        what: ExportKind,
        #[arg(short, long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum MetricCommand {
    /// Exact optimal transport between cell centers.
    Wasserstein {
        a: String,
        b: String,
        /// Write the transport plan as a 3-column text file.
        #[arg(long)]
        plan: Option<String>,
    },
    /// Conditional-kernel L1 metric (uniform base marginals required).
    D1 { a: String, b: String },
    /// Certified copula sup-distance bound.
    Sup { a: String, b: String },
    /// Kolmogorov-Smirnov uniformity test of one sample coordinate.
    Ks {
        /// Sample CSV; stdin when omitted.
        file: Option<String>,
        #[arg(long)]
        coord: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SupportFormat {
    Rects,
    Csv,
    Ply,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportKind {
    Ifsp,
    Tmx,
}

pub struct Ctx {
    pub tol: f64,
    pub cell_budget: usize,
    pub transport_budget: usize,
    pub seed: u64,
    pub manifest: Manifest,
}

#[derive(Debug)]
pub enum CliError {
    Core(CoreError),
    Io { path: String, source: std::io::Error },
    ValidationFailed,
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{path}: {source}"),
            CliError::ValidationFailed => write!(f, "validation failed"),
            CliError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(CoreError::Parse { .. }) => 2,
            CliError::Core(CoreError::BudgetExceeded { .. }) => 3,
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut ctx = Ctx {
        tol: cli.tol.unwrap_or(dsm_core::ifsp::DEFAULT_DIMENSION_TOL),
        cell_budget: cli
            .budget
            .unwrap_or(dsm_core::cellset::DEFAULT_CELL_BUDGET),
        transport_budget: cli
            .budget
            .unwrap_or(dsm_core::analysis::DEFAULT_TRANSPORT_BUDGET),
        seed: cli.seed.unwrap_or(0),
        manifest: Manifest::default(),
    };

    let result = run(&cli.command, &mut ctx);
    match result {
        Ok(()) => {
            if let Some(path) = &cli.manifest {
                if let Err(e) = ctx.manifest.write_to(path) {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: &Command, ctx: &mut Ctx) -> Result<(), CliError> {
    match command {
        Command::Validate { input } => commands::validate(ctx, input),
        Command::Example { preset, out } => commands::example(ctx, preset, out),
        Command::Iterate { input, n, out_dir } => commands::iterate(ctx, input, *n, out_dir),
        Command::Support {
            input,
            n,
            format,
            out,
            weld,
        } => commands::support(ctx, input, *n, *format, out, *weld),
        Command::Sample {
            input,
            count,
            burn_in,
            out,
        } => commands::sample(ctx, input, *count, *burn_in, out),
        Command::Marginal { input, drop, out } => commands::marginal_cmd(ctx, input, *drop, out),
        Command::Metric { metric } => commands::metric(ctx, metric),
        Command::Dimension { input } => commands::dimension(ctx, input),
        Command::Checkerboard { input, boxes, out } => {
            commands::checkerboard(ctx, input, *boxes, out)
        }
        Command::Export { input, what, out } => commands::export(ctx, input, *what, out),
    }
}

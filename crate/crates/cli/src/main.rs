//! `matred` — reducibility analysis of matrix-valued measures.
//!
//! Exit codes: 0 on success, 1 on errors (including failed verification
//! properties), 2 when a verdict is tolerance-sensitive.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::Options;
use crate::input::Input;
use crate::report::Report;

#[derive(Parser)]
#[command(
    name = "matred",
    version,
    about = "Decide whether a matrix-valued measure splits into smaller blocks, produce the reducing transform, and build its matrix orthogonal polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Builtin input: tirao-variant | gegenbauer(ell, nu) |
    /// q-gegenbauer-norms(ell, q, count)
    #[arg(long, conflicts_with = "spec")]
    builtin: Option<String>,

    /// Path to a weight-spec JSON file
    #[arg(long)]
    spec: Option<PathBuf>,

    /// Print a plain-text summary instead of JSON
    #[arg(long)]
    human: bool,

    /// Relative singular-value cutoff for kernel ranks
    #[arg(long, default_value_t = 1e-9)]
    kernel_tol: f64,

    /// Span-membership tolerance
    #[arg(long, default_value_t = 1e-8)]
    span_tol: f64,

    /// Seed for the generic Hermitian combination in the reduction
    #[arg(long, default_value_t = matred_core::reduction::DEFAULT_SEED)]
    seed: u64,

    /// Maximal polynomial degree for the orthogonal-polynomial blocks
    #[arg(long, default_value_t = matred_core::mop::DEFAULT_MAX_DEGREE)]
    degree: usize,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Write one weight-spec JSON per extracted block into this directory
    #[arg(long)]
    emit_blocks: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the symmetry space, the commutant and the classification
    Analyze(CommonArgs),
    /// Additionally produce the explicit reducing transform
    Reduce(ReduceArgs),
    /// Monic matrix orthogonal polynomials: norms and recurrence
    Mop(CommonArgs),
    /// Run the full property suite (structural identities, intertwining
    /// identities, construction cross-checks, closed-form references)
    Verify(CommonArgs),
}

fn resolve_input(common: &CommonArgs) -> Result<Input, String> {
    match (&common.builtin, &common.spec) {
        (Some(expr), None) => input::parse_builtin_expr(expr).map_err(|e| e.to_string()),
        (None, Some(path)) => input::load_spec_file(path),
        (None, None) => Err("one of --builtin or --spec is required".into()),
        (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
    }
}

fn options(common: &CommonArgs) -> Result<Options, String> {
    if !(common.kernel_tol > 0.0 && common.kernel_tol < 1.0) {
        return Err(format!(
            "--kernel-tol must lie in (0, 1), got {}",
            common.kernel_tol
        ));
    }
    if !(common.span_tol > 0.0 && common.span_tol < 1.0) {
        return Err(format!(
            "--span-tol must lie in (0, 1), got {}",
            common.span_tol
        ));
    }
    Ok(Options {
        kernel_tol: common.kernel_tol,
        span_tol: common.span_tol,
        seed: common.seed,
        degree: common.degree,
    })
}

fn emit(report: &Report, human: bool) -> ExitCode {
    if human {
        print!("{}", report.to_human());
    } else {
        println!("{}", report.to_json());
    }
    if report.any_property_failed() {
        eprintln!("error: verification properties failed");
        ExitCode::from(1)
    } else if report.tolerance_sensitive() {
        eprintln!("warning: tolerance-sensitive verdict");
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let (common, result) = match &cli.command {
        Command::Analyze(common) => {
            let inp = resolve_input(common)?;
            let opts = options(common)?;
            (common, commands::cmd_analyze(&inp, &opts))
        }
        Command::Reduce(args) => {
            let inp = resolve_input(&args.common)?;
            let opts = options(&args.common)?;
            (
                &args.common,
                commands::cmd_reduce(&inp, &opts, args.emit_blocks.as_deref()),
            )
        }
        Command::Mop(common) => {
            let inp = resolve_input(common)?;
            let opts = options(common)?;
            (common, commands::cmd_mop(&inp, &opts))
        }
        Command::Verify(common) => {
            let inp = resolve_input(common)?;
            let opts = options(common)?;
            (common, commands::cmd_verify(&inp, &opts))
        }
    };
    let report = result.map_err(|e| e.to_string())?;
    Ok(emit(&report, common.human))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

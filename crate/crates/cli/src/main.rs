use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use ghz_discord::report::{csv_twin_path, validate_tables, ValidationConfig};
use ghz_discord::sweep::{figure_preset, run_sweep, write_csv, SweepConfig, FIGURE_PRESETS};
use ghz_discord::Execution;

mod config;

use config::{resolve_sweep, FileConfig, SweepOverrides};

/// Global and geometric quantum discord of noisy GHZ-type states.
#[derive(Parser, Debug)]
#[command(name = "ghz-discord", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep decoherence strength (and r for the accelerated family) and write CSV.
    Sweep(SweepArgs),
    /// Compare closed-form geometric discord against numerical minimization.
    ValidateTables(ValidateArgs),
    /// Run a named figure preset and write its CSV.
    Figure(FigureArgs),
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// TOML file with sweep settings; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// State family: werner-ghz or rindler.
    #[arg(long)]
    family: Option<String>,
    /// Number of qubits (Werner-GHZ).
    #[arg(long)]
    n: Option<usize>,
    /// GHZ weight (Werner-GHZ).
    #[arg(long)]
    mu: Option<f64>,
    /// Comma-separated channels, or `all`.
    #[arg(long)]
    channels: Option<String>,
    /// Decoherence grid, start:stop:count.
    #[arg(long)]
    p_grid: Option<String>,
    /// Acceleration grid, start:stop:count (rindler).
    #[arg(long)]
    r_grid: Option<String>,
    /// Comma-separated measures: QD, GQD_HS, GQD_ENTROPIC, GQD_CLOSED.
    #[arg(long)]
    measures: Option<String>,
    /// Comma-separated qubits the channel acts on (default: all).
    #[arg(long)]
    targets: Option<String>,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Text report path; the CSV twin is written next to it.
    #[arg(long, default_value = "validation_report.txt")]
    out: PathBuf,
    /// Exit with status 1 if any row fails (discrepant-by-design rows excluded).
    #[arg(long)]
    strict: bool,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// One of fig1a, fig1b, fig2a, fig2b, fig3a, fig3b, fig4.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(FIGURE_PRESETS))]
    preset: String,
    /// Output CSV; defaults to `<preset>.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::best_available()
    }
}

fn emit(config: &SweepConfig, out: Option<&Path>) -> Result<()> {
    let output = run_sweep(config)?;
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    match out {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            write_csv(&output.rows, BufWriter::new(file))?;
            eprintln!("wrote {} rows to {}", output.rows.len(), path.display());
        }
        None => {
            let stdout = io::stdout();
            write_csv(&output.rows, stdout.lock())?;
        }
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let resolved = resolve_sweep(
        file,
        SweepOverrides {
            family: args.family,
            n: args.n,
            mu: args.mu,
            channels: args.channels,
            p_grid: args.p_grid,
            r_grid: args.r_grid,
            measures: args.measures,
            targets: args.targets,
            out: args.out,
            sequential: args.sequential,
        },
    )?;
    emit(&resolved.config, resolved.out.as_deref())
}

fn figure(args: FigureArgs) -> Result<()> {
    let mut config = figure_preset(&args.preset)?;
    config.execution = execution(args.sequential);
    let out = args
        .out
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", args.preset)));
    emit(&config, Some(&out))
}

/// Returns the number of failing rows.
fn validate(args: ValidateArgs) -> Result<usize> {
    let cfg = ValidationConfig {
        execution: execution(args.sequential),
        ..ValidationConfig::default()
    };
    let report = validate_tables(&args.out, &cfg)
        .with_context(|| format!("cannot write report {}", args.out.display()))?;
    let mut err = io::stderr().lock();
    let _ = writeln!(
        err,
        "wrote {} and {}: {} rows, {} failing",
        args.out.display(),
        csv_twin_path(&args.out).display(),
        report.rows.len(),
        report.failures()
    );
    Ok(report.failures())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Sweep(args) => sweep(args)?,
        Command::Figure(args) => figure(args)?,
        Command::ValidateTables(args) => {
            let strict = args.strict;
            if validate(args)? > 0 && strict {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

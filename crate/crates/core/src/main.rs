//! `spincat`: batch runner for superradiant decoherence experiments.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 numerical failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use spincat::cli::commands::{cmd_evolve, cmd_prepare, cmd_sweep, CommandError, Table};
use spincat::cli::config::{ConfigMap, RunConfig, SweepConfig};
use spincat::cli::verify;

#[derive(Parser)]
#[command(
    name = "spincat",
    version,
    about = "Collective-spin superradiance simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Comma-separated table with a header row.
    Table,
    /// JSON, including full state dumps where applicable.
    Structured,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a configuration key (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Write results here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate one initial state and tabulate norms and observables.
    Evolve(CommonArgs),
    /// Fit decay rates over a grid of j values and gamma pairs.
    Sweep(CommonArgs),
    /// Run the three-step cat preparation and dump per-step diagnostics.
    Prepare(CommonArgs),
    /// Run the full acceptance suite and report per-criterion results.
    Verify(CommonArgs),
}

/// Minimal env-independent stderr logger so library warnings are visible.
struct StderrLogger;

impl log::Log for StderrLogger {
    fn enabled(&self, metadata: &log::Metadata) -> bool {
        metadata.level() <= log::Level::Warn
    }

    fn log(&self, record: &log::Record) {
        if self.enabled(record.metadata()) {
            eprintln!("{}: {}", record.level(), record.args());
        }
    }

    fn flush(&self) {}
}

static LOGGER: StderrLogger = StderrLogger;

fn load_map(args: &CommonArgs) -> Result<ConfigMap, CommandError> {
    let mut map = match &args.config {
        Some(path) => ConfigMap::load(path)?,
        None => ConfigMap::default(),
    };
    map.apply_overrides(&args.set)?;
    Ok(map)
}

fn emit(args: &CommonArgs, text: String) -> std::io::Result<()> {
    match &args.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn emit_table(args: &CommonArgs, table: &Table) -> std::io::Result<()> {
    let text = match args.format {
        Format::Table => table.to_csv(),
        Format::Structured => format!("{:#}\n", table.to_json()),
    };
    emit(args, text)
}

fn exit_code_for(err: &CommandError) -> u8 {
    match err {
        CommandError::Config(_) => 2,
        CommandError::Numerical(_) => 3,
    }
}

fn run(cli: Cli) -> Result<u8, (CommandError, u8)> {
    let wrap = |e: CommandError| {
        let code = exit_code_for(&e);
        (e, code)
    };
    match cli.command {
        Command::Evolve(args) => {
            let map = load_map(&args).map_err(wrap)?;
            let cfg = RunConfig::from_map(&map)
                .map_err(CommandError::from)
                .map_err(wrap)?;
            let table = cmd_evolve(&cfg).map_err(wrap)?;
            emit_table(&args, &table)
                .map_err(io_failure)
                .map_err(wrap)?;
            Ok(0)
        }
        Command::Sweep(args) => {
            let map = load_map(&args).map_err(wrap)?;
            let cfg = SweepConfig::from_map(&map)
                .map_err(CommandError::from)
                .map_err(wrap)?;
            let table = cmd_sweep(&cfg).map_err(wrap)?;
            emit_table(&args, &table)
                .map_err(io_failure)
                .map_err(wrap)?;
            Ok(0)
        }
        Command::Prepare(args) => {
            let map = load_map(&args).map_err(wrap)?;
            let cfg = RunConfig::from_map(&map)
                .map_err(CommandError::from)
                .map_err(wrap)?;
            let report = cmd_prepare(&cfg).map_err(wrap)?;
            let text = match args.format {
                Format::Table => report.to_text(),
                Format::Structured => format!("{:#}\n", report.to_json()),
            };
            emit(&args, text).map_err(io_failure).map_err(wrap)?;
            Ok(0)
        }
        Command::Verify(args) => {
            let outcomes = verify::run_all();
            for outcome in &outcomes {
                println!("{}", outcome.summary_line());
                for line in &outcome.details {
                    println!("    {line}");
                }
            }
            let all_pass = outcomes.iter().all(|o| o.pass);
            let report = verify::report_json(&outcomes);
            if args.format == Format::Structured || args.out.is_some() {
                let text = format!("{report:#}\n");
                if args.out.is_some() {
                    emit(&args, text).map_err(io_failure).map_err(wrap)?;
                } else {
                    print!("{text}");
                }
            }
            println!(
                "{} of {} criteria passed",
                outcomes.iter().filter(|o| o.pass).count(),
                outcomes.len()
            );
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}

fn io_failure(e: std::io::Error) -> CommandError {
    CommandError::Config(spincat::cli::config::ConfigError {
        line: None,
        field: None,
        message: format!("cannot write output: {e}"),
    })
}

fn main() -> ExitCode {
    let _ = log::set_logger(&LOGGER);
    log::set_max_level(log::LevelFilter::Warn);
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err((err, code)) => {
            eprintln!("error: {err}");
            ExitCode::from(code)
        }
    }
}

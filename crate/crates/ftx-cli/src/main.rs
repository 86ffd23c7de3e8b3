#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod error;
mod report;

use config::Format;
use error::Result;

#[derive(Parser)]
#[command(name = "ftx", version, about = "Fault-tolerant resource estimates for lattice-model energy estimation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// T-counts, error budgets and code plans per algorithm.
    Estimate(RunArgs),
    /// Lattice-surgery schedule of one SELECT per layout.
    Simulate(RunArgs),
    /// Code distance, qubits and runtime over an (epsilon, p) grid.
    Sweep(RunArgs),
    /// Classical versus quantum runtime crosspoint.
    Crossover(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// TOML or JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, env = "FTX_OUT_DIR", default_value = "ftx-out")]
    out: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads for data-parallel stages.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
}

fn set_threads(n: Option<u16>) -> Result<()> {
    let Some(n) = n else { return Ok(()) };
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n as usize)
        .build_global()
        .map_err(|e| error::CliError::Config(format!("cannot size thread pool: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

type Handler = fn(&config::Loaded) -> Result<commands::Output>;

fn run(cli: Cli) -> Result<Option<String>> {
    let (name, args, f): (&str, RunArgs, Handler) = match cli.command {
        Command::Estimate(a) => ("estimate", a, commands::estimate_cmd),
        Command::Simulate(a) => ("simulate", a, commands::simulate_cmd),
        Command::Sweep(a) => ("sweep", a, commands::sweep_cmd),
        Command::Crossover(a) => ("crossover", a, commands::crossover_cmd),
    };
    set_threads(args.threads)?;
    let loaded = config::load(&args.config)?;
    let out = f(&loaded)?;
    let formats: Vec<Format> = match args.format.or(loaded.config.format) {
        Some(fmt) => vec![fmt],
        None => out.default_formats.to_vec(),
    };
    std::fs::create_dir_all(&args.out)?;
    for a in &out.artifacts {
        for &fmt in &formats {
            let (file, body) = report::render(a, fmt, name, &loaded.config)?;
            let path = args.out.join(file);
            std::fs::write(&path, body)?;
            println!("{}", path.display());
        }
    }
    Ok(out.infeasible)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(msg)) => {
            eprintln!("ftx: infeasible: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("ftx: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use harper_experiments::{execute, CliError, CliResult, Command, Experiment, RunConfig};

/// Two-photon experiments on off-diagonal Harper photonic lattices.
#[derive(Parser)]
#[command(version)]
struct Args {
    #[arg(value_enum)]
    command: Command,

    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(args: Args) -> CliResult<()> {
    let start = Instant::now();
    let config = RunConfig::load(&args.config)?;
    let out = args
        .out
        .or_else(|| config.output_dir.clone())
        .ok_or_else(|| {
            CliError::Config("no output directory given in config or on the command line".into())
        })?;
    let exp = Experiment::prepare(config, args.seed)?;
    let prepare_ms = start.elapsed().as_secs_f64() * 1e3;
    let manifest = execute(args.command, &exp, &out, prepare_ms)?;
    for o in &manifest.outputs {
        println!("{}  {}", o.sha256, out.join(&o.file).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

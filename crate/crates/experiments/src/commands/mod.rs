//! One function per CLI subcommand. Each computes its outputs in memory;
//! [`execute`] then writes them under the output lock with a manifest.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::artifact::{persist, Artifact, OutputLock, RunManifest, Timings};
use crate::config::Experiment;
use crate::error::{CliError, CliResult};

pub mod bands;
pub mod calibrate;
pub mod correlate;
pub mod counts;
pub mod disorder;
pub mod evolve;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Bands,
    Evolve,
    Correlate,
    Counts,
    Disorder,
    Calibrate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Bands => "bands",
            Command::Evolve => "evolve",
            Command::Correlate => "correlate",
            Command::Counts => "counts",
            Command::Disorder => "disorder",
            Command::Calibrate => "calibrate",
        }
    }
}

pub struct CommandOutput {
    pub artifacts: Vec<Artifact>,
    pub summary: serde_json::Value,
}

pub fn compute(command: Command, exp: &Experiment) -> CliResult<CommandOutput> {
    match command {
        Command::Bands => bands::run(exp),
        Command::Evolve => evolve::run(exp),
        Command::Correlate => correlate::run(exp),
        Command::Counts => counts::run(exp),
        Command::Disorder => disorder::run(exp),
        Command::Calibrate => calibrate::run(exp),
    }
}

/// Runs `command` and writes its outputs plus `<command>.manifest.json`
/// into `out`. `prepare_ms` is the time already spent building `exp`.
pub fn execute(
    command: Command,
    exp: &Experiment,
    out: &Path,
    prepare_ms: f64,
) -> CliResult<RunManifest> {
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let _lock = OutputLock::acquire(out)?;

    let start = Instant::now();
    let output = compute(command, exp)?;
    let compute_ms = start.elapsed().as_secs_f64() * 1e3;

    let start = Instant::now();
    let outputs = persist(out, &output.artifacts)?;
    let mut manifest = RunManifest {
        artifact_version: env!("CARGO_PKG_VERSION"),
        command: command.name().to_string(),
        seed: exp.seed,
        config: serde_json::to_value(&exp.config).expect("config serializes"),
        effective_t: exp.lattice.t(),
        summary: output.summary,
        outputs,
        timings: Timings {
            prepare_ms,
            compute_ms,
            write_ms: 0.0,
        },
    };
    manifest.timings.write_ms = start.elapsed().as_secs_f64() * 1e3;
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    let written = persist(
        out,
        &[Artifact::text(
            RunManifest::file_name(command.name()),
            json + "\n",
        )],
    );
    if let Err(e) = written {
        for o in &manifest.outputs {
            let _ = std::fs::remove_file(out.join(&o.file));
        }
        return Err(e);
    }
    Ok(manifest)
}

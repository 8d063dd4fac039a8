//! Config-driven experiments on off-diagonal Harper lattices: band sweeps,
//! propagation, two-photon coincidences, photon-counting tables and
//! disorder ensembles, written as CSV and SVG with a hashed manifest.

pub mod artifact;
pub mod calibrate;
pub mod commands;
pub mod config;
pub mod error;
pub mod svg;

pub use calibrate::{calibrate_coupling, Calibration};
pub use commands::{compute, execute, Command, CommandOutput};
pub use config::{Experiment, RunConfig};
pub use error::{CliError, CliResult};

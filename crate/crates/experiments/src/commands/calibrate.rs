//! Reports the coupling chosen by the calibration and checks it by direct
//! propagation.

use harper_core::{build_hamiltonian, coupling_profile, propagate, two_photon_correlation};
use serde_json::json;

use super::CommandOutput;
use crate::artifact::{num, Table};
use crate::calibrate::calibrate_coupling;
use crate::config::Experiment;
use crate::error::CliResult;

pub fn run(exp: &Experiment) -> CliResult<CommandOutput> {
    let target = exp.config.propagation.calibration_target;
    let cal = match exp.calibration {
        Some(c) => c,
        None => calibrate_coupling(&exp.nominal_lattice, exp.z, target)?,
    };
    let lattice = exp.nominal_lattice.with_t(cal.t)?;
    let u = propagate(&build_hamiltonian(coupling_profile(&lattice)), exp.z)?;
    let b = exp.boundary_site;
    let gamma = two_photon_correlation(&u, b, b, true)?.at(b, b)?;
    let mut table = Table::new(&[
        "z_mm",
        "target",
        "t_per_mm",
        "t_z",
        "single_confinement",
        "two_photon_predicted",
        "two_photon_propagated",
    ]);
    table.push([
        num(cal.z),
        num(cal.target),
        num(cal.t),
        num(cal.tz()),
        num(cal.single_confinement),
        num(cal.two_photon()),
        num(gamma),
    ]);
    Ok(CommandOutput {
        artifacts: vec![table.finish("calibration.csv")],
        summary: json!({ "calibration": cal, "two_photon_propagated": gamma }),
    })
}

//! Phase sweep of the spectrum with boundary-mode labels.

use std::f64::consts::PI;

use harper_core::{
    build_hamiltonian, classify_modes, coupling_profile, eigendecompose, phase_sweep,
    BandStructure, ModeLabel,
};
use serde_json::json;

use super::CommandOutput;
use crate::artifact::{num, Artifact, Table};
use crate::config::Experiment;
use crate::error::CliResult;
use crate::svg::{self, Axes, Series};

/// Sweep at the nominal coupling, so energies are in units of the configured `t`.
pub fn band_structure(exp: &Experiment) -> CliResult<BandStructure> {
    Ok(phase_sweep(
        &exp.nominal_lattice,
        exp.config.bands.n_phi,
        exp.classifier,
    )?)
}

pub fn run(exp: &Experiment) -> CliResult<CommandOutput> {
    let bands = band_structure(exp)?;
    let mut table = Table::new(&[
        "phi",
        "phi_over_pi",
        "mode",
        "eigenvalue",
        "label",
        "edge_weight_left",
        "edge_weight_right",
        "ipr",
    ]);
    let mut series: [Vec<(f64, f64)>; 3] = Default::default();
    for ((&phi, s), labels) in bands.phis.iter().zip(&bands.spectra).zip(&bands.labels) {
        for k in 0..s.dimension() {
            table.push([
                num(phi),
                num(phi / PI),
                k.to_string(),
                num(s.eigenvalues[k]),
                labels[k].to_string(),
                num(s.edge_weight_left[k]),
                num(s.edge_weight_right[k]),
                num(s.ipr[k]),
            ]);
            let slot = match labels[k] {
                ModeLabel::Bulk => 0,
                ModeLabel::LeftBoundary => 1,
                ModeLabel::RightBoundary => 2,
            };
            series[slot].push((phi / PI, s.eigenvalues[k]));
        }
    }
    let count = |l: ModeLabel| bands.labels.iter().flatten().filter(|&&x| x == l).count();

    // the configured phase is generally not on the sweep grid
    let at_phi = eigendecompose(&build_hamiltonian(coupling_profile(&exp.nominal_lattice)))?;
    let labels_at_phi = classify_modes(&at_phi, exp.classifier)?;
    let in_gap = at_phi.in_gap(exp.classifier.gap_fraction);
    let best_left = (0..at_phi.dimension())
        .filter(|&k| in_gap[k])
        .map(|k| at_phi.edge_weight_left[k])
        .fold(None, |m: Option<f64>, w| Some(m.map_or(w, |m| m.max(w))));

    let t = exp.nominal_lattice.t();
    let e_max = bands
        .spectra
        .iter()
        .flat_map(|s| s.eigenvalues.iter())
        .fold(0.0_f64, |m, e| m.max(e.abs() / t))
        .max(1e-12);
    let axes = Axes {
        title: format!("Spectrum vs phase, N = {}", exp.nominal_lattice.n_sites()),
        x_label: "phi / pi".into(),
        y_label: "E / t".into(),
        x_range: (0.0, 2.0),
        y_range: (-1.05 * e_max, 1.05 * e_max),
    };
    let [bulk, left, right] = series;
    let scale = |v: Vec<(f64, f64)>| v.into_iter().map(|(x, y)| (x, y / t)).collect::<Vec<_>>();
    let plot = svg::scatter(
        &axes,
        &[
            Series {
                label: "bulk",
                color: "#9e9e9e",
                radius: 0.8,
                points: scale(bulk),
            },
            Series {
                label: "left boundary",
                color: "#d62728",
                radius: 1.6,
                points: scale(left),
            },
            Series {
                label: "right boundary",
                color: "#1f77b4",
                radius: 1.6,
                points: scale(right),
            },
        ],
    );

    Ok(CommandOutput {
        artifacts: vec![table.finish("bands.csv"), Artifact::text("bands.svg", plot)],
        summary: json!({
            "n_phi": bands.len(),
            "left_boundary_points": count(ModeLabel::LeftBoundary),
            "right_boundary_points": count(ModeLabel::RightBoundary),
            "at_configured_phi": {
                "phi": exp.nominal_lattice.phi(),
                "left_boundary_modes": labels_at_phi.iter().filter(|&&l| l == ModeLabel::LeftBoundary).count(),
                "right_boundary_modes": labels_at_phi.iter().filter(|&&l| l == ModeLabel::RightBoundary).count(),
                "max_in_gap_edge_weight_left": best_left,
            },
        }),
    })
}

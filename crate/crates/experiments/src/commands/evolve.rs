//! Single-photon intensity evolution along the chip for each launch site.

use harper_core::{build_hamiltonian, confinement, coupling_profile, evolution_snapshots, Site};
use serde_json::json;

use super::CommandOutput;
use crate::artifact::{num, Artifact, Table};
use crate::config::Experiment;
use crate::error::CliResult;
use crate::svg::{self, Axes};

pub struct Evolution {
    pub input: Site,
    pub z_samples: Vec<f64>,
    /// `snapshots[k][q]`: probability at site `q + 1` after `z_samples[k]`.
    pub snapshots: Vec<Vec<f64>>,
}

impl Evolution {
    pub fn final_distribution(&self) -> &[f64] {
        self.snapshots.last().expect("at least one snapshot")
    }
}

pub fn evolutions(exp: &Experiment) -> CliResult<Vec<Evolution>> {
    let h = build_hamiltonian(coupling_profile(&exp.lattice));
    let z_samples = exp.z_samples();
    exp.injections
        .iter()
        .map(|&input| {
            Ok(Evolution {
                input,
                snapshots: evolution_snapshots(&h, input, &z_samples)?,
                z_samples: z_samples.clone(),
            })
        })
        .collect()
}

pub fn run(exp: &Experiment) -> CliResult<CommandOutput> {
    let mut artifacts = Vec::new();
    let mut report = Vec::new();
    let n = exp.lattice.n_sites();
    for ev in evolutions(exp)? {
        let a = ev.input.0;
        let mut table = Table::new(&["z_mm", "site", "probability"]);
        for (z, row) in ev.z_samples.iter().zip(&ev.snapshots) {
            for (q, p) in row.iter().enumerate() {
                table.push([num(*z), (q + 1).to_string(), num(*p)]);
            }
        }
        artifacts.push(table.finish(format!("evolve_site{a}.csv")));

        let last = ev.final_distribution();
        let mut table = Table::new(&["site", "probability"]);
        for (q, p) in last.iter().enumerate() {
            table.push([(q + 1).to_string(), num(*p)]);
        }
        artifacts.push(table.finish(format!("final_site{a}.csv")));

        let axes = Axes {
            title: format!("Intensity, launch at site {a}"),
            x_label: "site".into(),
            y_label: "z (mm)".into(),
            x_range: (1.0, n as f64),
            y_range: (ev.z_samples[0], *ev.z_samples.last().expect("nonempty")),
        };
        artifacts.push(Artifact::text(
            format!("evolve_site{a}.svg"),
            svg::heatmap(&axes, &ev.snapshots),
        ));

        report.push(json!({
            "input": a,
            "final_at_input": last[a - 1],
            "final_region_confinement": confinement(last, &exp.region)?,
        }));
    }
    Ok(CommandOutput {
        artifacts,
        summary: json!({ "z_samples": exp.z_samples().len(), "injections": report }),
    })
}

//! Two-photon coincidence matrices for photon pairs launched into one site.
//!
//! Each pair probability is reported twice: normalized over all site pairs
//! and renormalized to pairs inside the configured region.

use harper_core::{
    build_hamiltonian, coupling_profile, propagate, single_photon_distribution,
    two_photon_correlation, Site, TwoPhotonCorrelation,
};
use serde_json::json;

use super::CommandOutput;
use crate::artifact::{num, opt, Artifact, Table};
use crate::config::Experiment;
use crate::error::CliResult;
use crate::svg::{self, Axes};

pub struct Scenario {
    pub input: Site,
    pub gamma: TwoPhotonCorrelation,
    /// `None` when no probability falls inside the region.
    pub gamma_region: Option<TwoPhotonCorrelation>,
    pub single_at_input: f64,
}

pub fn scenarios(exp: &Experiment) -> CliResult<Vec<Scenario>> {
    let u = propagate(&build_hamiltonian(coupling_profile(&exp.lattice)), exp.z)?;
    exp.injections
        .iter()
        .map(|&a| {
            let gamma = two_photon_correlation(&u, a, a, true)?;
            let gamma_region = gamma.restricted_to(&exp.region).ok();
            let p = single_photon_distribution(&u, a)?;
            Ok(Scenario {
                input: a,
                single_at_input: p[a.0 - 1],
                gamma,
                gamma_region,
            })
        })
        .collect()
}

pub fn run(exp: &Experiment) -> CliResult<CommandOutput> {
    let n = exp.lattice.n_sites();
    let mut artifacts = Vec::new();
    let mut report = Table::new(&[
        "input_site",
        "gamma_at_input",
        "gamma_at_input_region",
        "region_pair_mass",
        "max_entry",
        "max_q",
        "max_r",
        "single_at_input",
    ]);
    let mut summary = Vec::new();
    let in_region = {
        let mut m = vec![false; n];
        for s in &exp.region {
            m[s.0 - 1] = true;
        }
        m
    };
    for sc in scenarios(exp)? {
        let a = sc.input.0;
        let g = sc.gamma.gamma();
        let mut table = Table::new(&["q", "r", "gamma", "gamma_region"]);
        let (mut best, mut arg, mut mass) = (f64::NEG_INFINITY, (0, 0), 0.0);
        for q in 0..n {
            for r in q..n {
                let v = g[(q, r)];
                if v > best {
                    best = v;
                    arg = (q + 1, r + 1);
                }
                let inside = in_region[q] && in_region[r];
                if inside {
                    mass += v;
                }
                let vr = sc
                    .gamma_region
                    .as_ref()
                    .filter(|_| inside)
                    .map(|x| x.gamma()[(q, r)]);
                table.push([(q + 1).to_string(), (r + 1).to_string(), num(v), opt(vr)]);
            }
        }
        artifacts.push(table.finish(format!("gamma_site{a}.csv")));

        let rows: Vec<Vec<f64>> = (0..n)
            .map(|r| (0..n).map(|q| g[(q, r)]).collect())
            .collect();
        let axes = Axes {
            title: format!("Two-photon coincidences, launch at site {a}"),
            x_label: "site q".into(),
            y_label: "site r".into(),
            x_range: (1.0, n as f64),
            y_range: (1.0, n as f64),
        };
        artifacts.push(Artifact::text(
            format!("gamma_site{a}.svg"),
            svg::heatmap(&axes, &rows),
        ));

        let at_input = g[(a - 1, a - 1)];
        let at_input_region = sc
            .gamma_region
            .as_ref()
            .filter(|_| in_region[a - 1])
            .map(|x| x.gamma()[(a - 1, a - 1)]);
        report.push([
            a.to_string(),
            num(at_input),
            opt(at_input_region),
            num(mass),
            num(best),
            arg.0.to_string(),
            arg.1.to_string(),
            num(sc.single_at_input),
        ]);
        summary.push(json!({
            "input": a,
            "gamma_at_input": at_input,
            "gamma_at_input_region": at_input_region,
            "max_entry": best,
        }));
    }
    artifacts.push(report.finish("correlate.csv"));
    Ok(CommandOutput {
        artifacts,
        summary: json!({ "scenarios": summary }),
    })
}

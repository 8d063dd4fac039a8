//! Ensemble of coupling-disorder realizations: boundary-mode edge weight and
//! boundary confinement per realization, with summary quantiles.

use harper_core::statistics::derive_seed;
use harper_core::{
    build_hamiltonian, confinement, coupling_profile, eigendecompose, propagator_from_spectrum,
    single_photon_distribution,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::CommandOutput;
use crate::artifact::{num, opt, Table};
use crate::config::Experiment;
use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Realization {
    pub index: usize,
    pub seed: u64,
    /// Largest left edge weight among in-gap modes; `None` without a gap.
    pub edge_weight: Option<f64>,
    /// Return probability at the boundary launch site after `z`.
    pub site_confinement: f64,
    pub region_confinement: f64,
}

pub fn ensemble(exp: &Experiment) -> CliResult<Vec<Realization>> {
    let clean = coupling_profile(&exp.lattice);
    let strength = exp.config.disorder.strength;
    let b = exp.boundary_site;
    (0..exp.config.disorder.ensemble)
        .into_par_iter()
        .map(|index| {
            let seed = derive_seed(exp.seed, index as u64);
            let h = build_hamiltonian(clean.apply_disorder(strength, seed)?);
            let spectral = eigendecompose(&h)?;
            let in_gap = spectral.in_gap(exp.classifier.gap_fraction);
            let edge_weight = (0..spectral.dimension())
                .filter(|&k| in_gap[k])
                .map(|k| spectral.edge_weight_left[k])
                .reduce(f64::max);
            let u = propagator_from_spectrum(&spectral, exp.z)?;
            let p = single_photon_distribution(&u, b)?;
            Ok(Realization {
                index,
                seed,
                edge_weight,
                site_confinement: p[b.0 - 1],
                region_confinement: confinement(&p, &exp.region)?,
            })
        })
        .collect()
}

/// Linear interpolation between order statistics; `sorted` must be ascending.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = q * (sorted.len() - 1) as f64;
    let i = h.floor() as usize;
    match sorted.get(i + 1) {
        Some(&next) => sorted[i] + (h - i as f64) * (next - sorted[i]),
        None => sorted[i],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub quantity: &'static str,
    pub n: usize,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub quantiles: Option<[f64; 7]>,
    pub fraction_above: Option<f64>,
}

pub const QUANTILES: [f64; 7] = [0.0, 0.05, 0.25, 0.5, 0.75, 0.95, 1.0];

pub fn summarize(
    quantity: &'static str,
    values: impl Iterator<Item = f64>,
    threshold: f64,
) -> Summary {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return Summary {
            quantity,
            n,
            mean: None,
            std: None,
            quantiles: None,
            fraction_above: None,
        };
    }
    // shifted by the first value so that identical inputs give zero spread
    let shift = v[0];
    let offset = v.iter().map(|x| x - shift).sum::<f64>() / n as f64;
    let mean = shift + offset;
    let var = v.iter().map(|x| (x - shift - offset).powi(2)).sum::<f64>() / n as f64;
    Summary {
        quantity,
        n,
        mean: Some(mean),
        std: Some(var.sqrt()),
        quantiles: Some(QUANTILES.map(|q| quantile(&v, q))),
        fraction_above: Some(v.iter().filter(|&&x| x > threshold).count() as f64 / n as f64),
    }
}

pub fn summaries(exp: &Experiment, rs: &[Realization]) -> Vec<Summary> {
    let th = exp.config.disorder.threshold;
    vec![
        summarize("edge_weight", rs.iter().filter_map(|r| r.edge_weight), th),
        summarize(
            "site_confinement",
            rs.iter().map(|r| r.site_confinement),
            th,
        ),
        summarize(
            "region_confinement",
            rs.iter().map(|r| r.region_confinement),
            th,
        ),
    ]
}

pub fn run(exp: &Experiment) -> CliResult<CommandOutput> {
    let rs = ensemble(exp)?;
    let mut table = Table::new(&[
        "realization",
        "seed",
        "edge_weight",
        "site_confinement",
        "region_confinement",
    ]);
    for r in &rs {
        table.push([
            r.index.to_string(),
            r.seed.to_string(),
            opt(r.edge_weight),
            num(r.site_confinement),
            num(r.region_confinement),
        ]);
    }
    let sums = summaries(exp, &rs);
    let mut summary = Table::new(&[
        "quantity",
        "n",
        "mean",
        "std",
        "min",
        "q05",
        "q25",
        "median",
        "q75",
        "q95",
        "max",
        "fraction_above_threshold",
    ]);
    for s in &sums {
        let mut row = vec![
            s.quantity.to_string(),
            s.n.to_string(),
            opt(s.mean),
            opt(s.std),
        ];
        match s.quantiles {
            Some(q) => row.extend(q.iter().map(|&x| num(x))),
            None => row.extend(std::iter::repeat_n(
                crate::artifact::NULL.to_string(),
                QUANTILES.len(),
            )),
        }
        row.push(opt(s.fraction_above));
        summary.push(row);
    }
    Ok(CommandOutput {
        artifacts: vec![
            table.finish("disorder.csv"),
            summary.finish("disorder_summary.csv"),
        ],
        summary: json!({
            "strength": exp.config.disorder.strength,
            "threshold": exp.config.disorder.threshold,
            "summaries": sums,
        }),
    })
}

//! Table of cross- and auto-correlations with the Cauchy-Schwarz test for
//! the source itself, the boundary site and the monitored bulk sites.

use harper_core::statistics::{
    derive_seed, match_flux, measure_correlations, site_measurements, ClickProbabilities,
    CorrelationMeasurement, DetectionChannel, G2Estimate,
};
use harper_core::{
    build_hamiltonian, coupling_profile, propagate, single_photon_distribution, Propagator, Site,
};
use serde::Serialize;
use serde_json::json;

use super::CommandOutput;
use crate::artifact::{num, opt, Table};
use crate::config::Experiment;
use crate::error::CliResult;

const INPUT_TAG: u64 = 0x1_0001;
const BOUNDARY_TAG: u64 = 0x1_0002;
const BULK_TAG: u64 = 0x1_0003;

/// Per-arm transmissions before the site-dependent output probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxPlan {
    /// Source measured directly, without the chip.
    pub input: f64,
    /// Chip rows; multiplied by the output probability of each site.
    pub chip: f64,
}

pub struct CountsRow {
    pub label: String,
    pub input_site: Option<Site>,
    pub pickup_site: Option<Site>,
    /// Cross-correlation expected from the click probabilities, darks included.
    pub expected_g_si: f64,
    pub measurement: CorrelationMeasurement,
}

fn propagator(exp: &Experiment) -> CliResult<Propagator> {
    Ok(propagate(
        &build_hamiltonian(coupling_profile(&exp.lattice)),
        exp.z,
    )?)
}

pub fn flux_plan(exp: &Experiment, u: &Propagator) -> CliResult<FluxPlan> {
    let c = &exp.config.counts;
    if !c.match_flux {
        let t = exp.detection.transmission();
        return Ok(FluxPlan { input: t, chip: t });
    }
    let dark = exp.detection.dark_prob();
    let input = match_flux(
        &exp.source,
        (1.0, 1.0),
        dark,
        c.duration_s,
        c.input_relative_sigma,
    )?;
    let b = exp.boundary_site;
    let p = single_photon_distribution(u, b)?[b.0 - 1];
    let chip = match_flux(
        &exp.source,
        (p, p),
        dark,
        c.duration_s,
        c.boundary_relative_sigma,
    )?;
    Ok(FluxPlan {
        input: input.transmission,
        chip: chip.transmission,
    })
}

/// Rows in order: input, boundary, then one per bulk site.
pub fn counts_table(exp: &Experiment) -> CliResult<(FluxPlan, Vec<CountsRow>)> {
    let u = propagator(exp)?;
    let plan = flux_plan(exp, &u)?;
    let duration = exp.config.counts.duration_s;
    let dark = exp.detection.dark_prob();
    let expected = |m: &CorrelationMeasurement| {
        ClickProbabilities::cross(&exp.source, &m.channel_s, &m.channel_i).expected_g2()
    };

    let mut rows = Vec::new();
    let ch = DetectionChannel::new(plan.input, dark)?;
    let m = measure_correlations(
        &exp.source,
        &ch,
        &ch,
        duration,
        derive_seed(exp.seed, INPUT_TAG),
    )?;
    rows.push(CountsRow {
        label: "input".into(),
        input_site: None,
        pickup_site: None,
        expected_g_si: expected(&m),
        measurement: m,
    });

    let base = DetectionChannel::new(plan.chip, dark)?;
    let b = exp.boundary_site;
    let boundary = site_measurements(
        &u,
        b,
        b,
        &exp.source,
        &base,
        &[b],
        duration,
        derive_seed(exp.seed, BOUNDARY_TAG),
    )?;
    let bulk = site_measurements(
        &u,
        exp.bulk_input,
        exp.bulk_input,
        &exp.source,
        &base,
        &exp.bulk_sites,
        duration,
        derive_seed(exp.seed, BULK_TAG),
    )?;
    let chip_row =
        |label: String, input: Site, (site, m): (Site, CorrelationMeasurement)| CountsRow {
            label,
            input_site: Some(input),
            pickup_site: Some(site),
            expected_g_si: expected(&m),
            measurement: m,
        };
    for x in boundary {
        rows.push(chip_row("boundary".into(), b, x));
    }
    for x in bulk {
        rows.push(chip_row(format!("bulk{}", x.0 .0), exp.bulk_input, x));
    }
    Ok((plan, rows))
}

fn value(e: &harper_core::Result<G2Estimate>) -> Option<f64> {
    e.as_ref().ok().map(|g| g.value)
}

fn sigma(e: &harper_core::Result<G2Estimate>) -> Option<f64> {
    e.as_ref().ok().map(|g| g.sigma)
}

pub fn run(exp: &Experiment) -> CliResult<CommandOutput> {
    let (plan, rows) = counts_table(exp)?;
    let mut table = Table::new(&[
        "row",
        "input_site",
        "pickup_site",
        "transmission_s",
        "transmission_i",
        "windows",
        "singles_s",
        "singles_i",
        "coincidences",
        "g_si_expected",
        "g_si",
        "g_si_sigma",
        "g_ss",
        "g_ss_sigma",
        "g_ii",
        "g_ii_sigma",
        "violation",
        "sigma_v",
        "sds",
    ]);
    let site =
        |s: Option<Site>| s.map_or_else(|| crate::artifact::NULL.to_string(), |s| s.0.to_string());
    let mut summary = Vec::new();
    for r in &rows {
        let m = &r.measurement;
        let c = m.cross_counts;
        let cs = m.cauchy_schwarz();
        table.push([
            r.label.clone(),
            site(r.input_site),
            site(r.pickup_site),
            num(m.channel_s.transmission()),
            num(m.channel_i.transmission()),
            c.n_windows.to_string(),
            c.singles_s.to_string(),
            c.singles_i.to_string(),
            c.coincidences.to_string(),
            num(r.expected_g_si),
            opt(value(&m.g_si)),
            opt(sigma(&m.g_si)),
            opt(value(&m.g_ss)),
            opt(sigma(&m.g_ss)),
            opt(value(&m.g_ii)),
            opt(sigma(&m.g_ii)),
            opt(cs.map(|x| x.violation)),
            opt(cs.map(|x| x.sigma_v)),
            opt(cs.map(|x| x.sds)),
        ]);
        summary.push(json!({
            "row": r.label,
            "g_si": value(&m.g_si),
            "g_si_sigma": sigma(&m.g_si),
            "sds": cs.map(|x| x.sds),
        }));
    }
    Ok(CommandOutput {
        artifacts: vec![table.finish("counts.csv")],
        summary: json!({ "flux": plan, "rows": summary }),
    })
}

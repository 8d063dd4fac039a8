//! Measurement scenarios: HBT auto-correlation of one arm, full
//! cross/auto/Cauchy-Schwarz rows, and per-site scans behind a lattice.

use serde::Serialize;

use super::counting::{sample_clicks, Arm, ClickProbabilities, CountRecord, DetectionChannel};
use super::estimate::{cauchy_schwarz, estimate_g2, CauchySchwarzResult, G2Estimate};
use super::source::SourceModel;
use super::{derive_seed, simulate_counts};
use crate::error::{Error, Result};
use crate::lattice::Site;
use crate::propagation::{single_photon_distribution, Propagator};

/// Counts from one arm split 50:50 onto two detectors. The arm keeps the
/// transmission of `ch`, so its flux matches the cross-correlation run.
pub fn hbt_counts(
    source: &SourceModel,
    arm: Arm,
    ch: &DetectionChannel,
    duration_s: f64,
    seed: u64,
) -> Result<CountRecord> {
    let n = source.windows_in(duration_s)?;
    let probs = ClickProbabilities::split_arm(source, ch);
    let tag = match arm {
        Arm::Signal => 0x5147,
        Arm::Idler => 0x1d1e,
    };
    Ok(CountRecord {
        duration_ns: (duration_s * 1e9).round() as u64,
        ..sample_clicks(probs, n, derive_seed(seed, tag))
    })
}

pub fn hbt_auto_g2(
    source: &SourceModel,
    arm: Arm,
    ch: &DetectionChannel,
    duration_s: f64,
    seed: u64,
) -> Result<G2Estimate> {
    estimate_g2(&hbt_counts(source, arm, ch, duration_s, seed)?)
}

/// Cross-correlation, both auto-correlations and the Cauchy-Schwarz test
/// for one pair of channels.
#[derive(Debug)]
pub struct CorrelationMeasurement {
    pub channel_s: DetectionChannel,
    pub channel_i: DetectionChannel,
    pub cross_counts: CountRecord,
    pub g_si: Result<G2Estimate>,
    pub g_ss: Result<G2Estimate>,
    pub g_ii: Result<G2Estimate>,
}

impl CorrelationMeasurement {
    /// `None` unless all three estimates are defined.
    pub fn cauchy_schwarz(&self) -> Option<CauchySchwarzResult> {
        match (&self.g_si, &self.g_ss, &self.g_ii) {
            (Ok(si), Ok(ss), Ok(ii)) => Some(cauchy_schwarz(si, ss, ii)),
            _ => None,
        }
    }
}

pub fn measure_correlations(
    source: &SourceModel,
    ch_s: &DetectionChannel,
    ch_i: &DetectionChannel,
    duration_s: f64,
    seed: u64,
) -> Result<CorrelationMeasurement> {
    let cross_counts = simulate_counts(source, ch_s, ch_i, duration_s, seed)?;
    Ok(CorrelationMeasurement {
        channel_s: *ch_s,
        channel_i: *ch_i,
        cross_counts,
        g_si: estimate_g2(&cross_counts),
        g_ss: hbt_auto_g2(source, Arm::Signal, ch_s, duration_s, seed),
        g_ii: hbt_auto_g2(source, Arm::Idler, ch_i, duration_s, seed),
    })
}

/// Per-arm channels for photons injected at `a` (signal) and `b` (idler)
/// and both picked up at `site`: transmission is the base transmission
/// times the single-photon output probability at `site`.
pub fn site_channels(
    u: &Propagator,
    a: Site,
    b: Site,
    base: &DetectionChannel,
    site: Site,
) -> Result<(DetectionChannel, DetectionChannel)> {
    let q = site.index(u.n_sites())?;
    let pa = single_photon_distribution(u, a)?;
    let pb = single_photon_distribution(u, b)?;
    Ok((base.scaled(pa[q])?, base.scaled(pb[q])?))
}

#[derive(Debug)]
pub struct SiteG2 {
    pub site: Site,
    pub counts: CountRecord,
    pub estimate: Result<G2Estimate>,
}

/// Cross-correlation at each monitored site, one independent seeded run per
/// site. Undefined estimates are kept in place.
#[allow(clippy::too_many_arguments)]
pub fn site_g2_scan(
    u: &Propagator,
    input_a: Site,
    input_b: Site,
    source: &SourceModel,
    base: &DetectionChannel,
    sites: &[Site],
    duration_s: f64,
    seed: u64,
) -> Result<Vec<SiteG2>> {
    sites
        .iter()
        .map(|&site| {
            let (ch_s, ch_i) = site_channels(u, input_a, input_b, base, site)?;
            let counts = simulate_counts(
                source,
                &ch_s,
                &ch_i,
                duration_s,
                derive_seed(seed, site.0 as u64),
            )?;
            Ok(SiteG2 {
                site,
                counts,
                estimate: estimate_g2(&counts),
            })
        })
        .collect()
}

/// Full measurement at each monitored site.
#[allow(clippy::too_many_arguments)]
pub fn site_measurements(
    u: &Propagator,
    input_a: Site,
    input_b: Site,
    source: &SourceModel,
    base: &DetectionChannel,
    sites: &[Site],
    duration_s: f64,
    seed: u64,
) -> Result<Vec<(Site, CorrelationMeasurement)>> {
    sites
        .iter()
        .map(|&site| {
            let (ch_s, ch_i) = site_channels(u, input_a, input_b, base, site)?;
            let m = measure_correlations(
                source,
                &ch_s,
                &ch_i,
                duration_s,
                derive_seed(seed, site.0 as u64),
            )?;
            Ok((site, m))
        })
        .collect()
}

/// Expected relative uncertainty of the cross-correlation estimate after
/// `n_windows` windows, from expected counts.
pub fn expected_relative_sigma(
    source: &SourceModel,
    ch_s: &DetectionChannel,
    ch_i: &DetectionChannel,
    n_windows: u64,
) -> f64 {
    let p = ClickProbabilities::cross(source, ch_s, ch_i);
    let n = n_windows as f64;
    (1.0 / (n * p.both) + 1.0 / (n * p.click_a()) + 1.0 / (n * p.click_b())).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxMatch {
    pub transmission: f64,
    pub relative_sigma: f64,
}

/// Base transmission at which a site with output probabilities `(p_s, p_i)`
/// reaches `target` relative uncertainty after `duration_s`. Bisection on
/// the logarithm of the transmission over `[1e-12, 1]`.
pub fn match_flux(
    source: &SourceModel,
    site_probs: (f64, f64),
    dark_prob: f64,
    duration_s: f64,
    target: f64,
) -> Result<FluxMatch> {
    if !(target > 0.0) {
        return Err(Error::invalid(format!(
            "target relative sigma must be positive, got {target}"
        )));
    }
    let n = source.windows_in(duration_s)?;
    let rel = |ln_eta: f64| -> Result<f64> {
        let eta = ln_eta.exp();
        let ch_s = DetectionChannel::new((eta * site_probs.0).min(1.0), dark_prob)?;
        let ch_i = DetectionChannel::new((eta * site_probs.1).min(1.0), dark_prob)?;
        Ok(expected_relative_sigma(source, &ch_s, &ch_i, n))
    };
    let (mut lo, mut hi) = (1e-12_f64.ln(), 0.0_f64);
    let (r_lo, r_hi) = (rel(lo)?, rel(hi)?);
    if !(r_hi <= target && target <= r_lo) {
        return Err(Error::InvalidCalibration(format!(
            "relative sigma {target} outside reachable range [{r_hi:.3e}, {r_lo:.3e}]"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if rel(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    Ok(FluxMatch {
        transmission: hi.exp(),
        relative_sigma: rel(hi)?,
    })
}

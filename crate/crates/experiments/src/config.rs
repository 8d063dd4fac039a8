//! Run configuration: one TOML file drives every command, so the counting
//! run sees exactly the lattice used for the propagation figures.

use std::path::{Path, PathBuf};

use harper_core::statistics::{DetectionChannel, SourceModel};
use harper_core::{ClassifierSettings, LatticeParams, Site, GOLDEN_MEAN};
use serde::{Deserialize, Serialize};

use crate::calibrate::{calibrate_coupling, Calibration};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Required unless given on the command line; there is no implicit entropy.
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub lattice: LatticeSection,
    #[serde(default)]
    pub propagation: PropagationSection,
    #[serde(default)]
    pub bands: BandsSection,
    #[serde(default)]
    pub source: SourceSection,
    #[serde(default)]
    pub detection: DetectionSection,
    #[serde(default)]
    pub counts: CountsSection,
    #[serde(default)]
    pub disorder: DisorderSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LatticeSection {
    pub n_sites: usize,
    /// Mean coupling per mm. Replaced by the calibrated value when
    /// `propagation.calibrate` is set.
    pub t: f64,
    pub lambda: f64,
    pub b: f64,
    /// Phase in units of π.
    pub phi_over_pi: f64,
}

impl Default for LatticeSection {
    fn default() -> Self {
        Self {
            n_sites: 50,
            t: 1.0,
            lambda: 0.5,
            b: GOLDEN_MEAN,
            phi_over_pi: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagationSection {
    pub z_mm: f64,
    /// Each entry is one scenario with both photons launched into that site.
    pub injections: Vec<usize>,
    /// Site whose two-photon coincidence the calibration pins.
    pub boundary_site: usize,
    pub n_snapshots: usize,
    pub calibrate: bool,
    pub calibration_target: f64,
    /// Sites used for region-restricted normalization and confinement.
    pub region: Vec<usize>,
}

impl Default for PropagationSection {
    fn default() -> Self {
        Self {
            z_mm: 35.0,
            injections: vec![1, 26],
            boundary_site: 1,
            n_snapshots: 36,
            calibrate: true,
            calibration_target: 0.946,
            region: (1..=7).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BandsSection {
    pub n_phi: usize,
    pub gap_fraction: f64,
    pub edge_threshold: f64,
}

impl Default for BandsSection {
    fn default() -> Self {
        let c = ClassifierSettings::default();
        Self {
            n_phi: 512,
            gap_fraction: c.gap_fraction,
            edge_threshold: c.edge_threshold,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Spdc,
    Coherent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SourceSection {
    pub kind: SourceKind,
    /// Mean pairs per window. Mutually exclusive with `cross_g2`.
    pub mu: Option<f64>,
    /// Target input cross-correlation; the pair rate is derived from it.
    /// Used when neither field is given.
    pub cross_g2: Option<f64>,
    /// Schmidt number; `inf` for a Poissonian pair number.
    pub schmidt_k: f64,
    pub window_ns: f64,
}

pub const DEFAULT_INPUT_G2: f64 = 11.47;

impl Default for SourceSection {
    fn default() -> Self {
        Self {
            kind: SourceKind::Spdc,
            mu: None,
            cross_g2: None,
            schmidt_k: 1.0,
            window_ns: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectionSection {
    /// Per-arm transmission without the chip.
    pub transmission: f64,
    /// Dark-click probability per detector per window.
    pub dark_prob: f64,
}

impl Default for DetectionSection {
    fn default() -> Self {
        // 100 counts/s of darks in a 2 ns window
        Self {
            transmission: 0.05,
            dark_prob: 2e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CountsSection {
    pub duration_s: f64,
    /// Launch site of the bulk scenario.
    pub bulk_input: usize,
    pub bulk_sites: Vec<usize>,
    /// Pick transmissions so the input and boundary rows reach the relative
    /// uncertainties below; otherwise use `detection.transmission` for all rows.
    pub match_flux: bool,
    pub input_relative_sigma: f64,
    pub boundary_relative_sigma: f64,
}

impl Default for CountsSection {
    fn default() -> Self {
        Self {
            duration_s: 300.0,
            bulk_input: 26,
            bulk_sites: vec![30, 31, 36, 38],
            match_flux: true,
            input_relative_sigma: 0.02 / 11.47,
            boundary_relative_sigma: 0.25 / 10.70,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DisorderSection {
    pub strength: f64,
    pub ensemble: usize,
    /// Reported as the fraction of realizations above it.
    pub threshold: f64,
}

impl Default for DisorderSection {
    fn default() -> Self {
        Self {
            strength: 0.1,
            ensemble: 100,
            threshold: 0.8,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

fn config_err(e: harper_core::Error) -> CliError {
    CliError::Config(e.to_string())
}

fn sites(label: &str, raw: &[usize], n_sites: usize) -> CliResult<Vec<Site>> {
    if raw.is_empty() {
        return Err(CliError::Config(format!("{label} must not be empty")));
    }
    raw.iter()
        .map(|&s| {
            Site(s)
                .index(n_sites)
                .map(|_| Site(s))
                .map_err(|e| CliError::Config(format!("{label}: {e}")))
        })
        .collect()
}

/// A validated configuration with the coupling calibration applied.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: RunConfig,
    pub seed: u64,
    /// Lattice with the effective (possibly calibrated) mean coupling.
    pub lattice: LatticeParams,
    /// Lattice with the coupling as written in the config.
    pub nominal_lattice: LatticeParams,
    pub calibration: Option<Calibration>,
    pub z: f64,
    pub injections: Vec<Site>,
    pub boundary_site: Site,
    pub region: Vec<Site>,
    pub n_snapshots: usize,
    pub classifier: ClassifierSettings,
    pub source: SourceModel,
    pub detection: DetectionChannel,
    pub bulk_input: Site,
    pub bulk_sites: Vec<Site>,
}

impl Experiment {
    /// Validates `config`; `seed` overrides the config seed.
    pub fn prepare(config: RunConfig, seed: Option<u64>) -> CliResult<Self> {
        let seed = seed.or(config.seed).ok_or_else(|| {
            CliError::Config("no seed given in config or on the command line".into())
        })?;
        let l = &config.lattice;
        let nominal_lattice = LatticeParams::new(
            l.n_sites,
            l.t,
            l.lambda,
            l.b,
            l.phi_over_pi * std::f64::consts::PI,
        )
        .map_err(config_err)?;
        let n = l.n_sites;
        let p = &config.propagation;
        if !(p.z_mm.is_finite() && p.z_mm >= 0.0) {
            return Err(CliError::Config(format!(
                "z_mm must be >= 0, got {}",
                p.z_mm
            )));
        }
        if p.n_snapshots == 0 {
            return Err(CliError::Config("n_snapshots must be >= 1".into()));
        }
        let injections = sites("propagation.injections", &p.injections, n)?;
        let boundary_site = sites("propagation.boundary_site", &[p.boundary_site], n)?[0];
        let region = sites("propagation.region", &p.region, n)?;
        let bulk_input = sites("counts.bulk_input", &[config.counts.bulk_input], n)?[0];
        let bulk_sites = sites("counts.bulk_sites", &config.counts.bulk_sites, n)?;

        let classifier = ClassifierSettings {
            gap_fraction: config.bands.gap_fraction,
            edge_threshold: config.bands.edge_threshold,
        };
        classifier.validate().map_err(config_err)?;
        if config.bands.n_phi < 2 {
            return Err(CliError::Config(format!(
                "bands.n_phi must be >= 2, got {}",
                config.bands.n_phi
            )));
        }

        let s = &config.source;
        let source = match (s.kind, s.mu, s.cross_g2) {
            (_, Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "source.mu and source.cross_g2 are mutually exclusive".into(),
                ))
            }
            (SourceKind::Coherent, None, _) => {
                return Err(CliError::Config("a coherent source needs source.mu".into()))
            }
            (SourceKind::Coherent, Some(mu), None) => SourceModel::coherent(mu, s.window_ns),
            (SourceKind::Spdc, Some(mu), None) => SourceModel::spdc(mu, s.schmidt_k, s.window_ns),
            (SourceKind::Spdc, None, g) => {
                SourceModel::from_cross_g2(g.unwrap_or(DEFAULT_INPUT_G2), s.schmidt_k, s.window_ns)
            }
        }
        .map_err(config_err)?;
        let detection =
            DetectionChannel::new(config.detection.transmission, config.detection.dark_prob)
                .map_err(config_err)?;

        let c = &config.counts;
        if !(c.duration_s.is_finite() && c.duration_s > 0.0) {
            return Err(CliError::Config(format!(
                "counts.duration_s must be positive, got {}",
                c.duration_s
            )));
        }
        if c.match_flux && !(c.input_relative_sigma > 0.0 && c.boundary_relative_sigma > 0.0) {
            return Err(CliError::Config(
                "flux-matching targets must be positive".into(),
            ));
        }
        let d = &config.disorder;
        if d.ensemble == 0 {
            return Err(CliError::Config("disorder.ensemble must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&d.strength) {
            return Err(CliError::Config(format!(
                "disorder.strength must lie in [0, 1), got {}",
                d.strength
            )));
        }

        let (lattice, calibration) = if p.calibrate {
            if boundary_site != Site(1) {
                return Err(CliError::Config(
                    "calibration pins site 1; set propagation.boundary_site = 1".into(),
                ));
            }
            let cal = calibrate_coupling(&nominal_lattice, p.z_mm, p.calibration_target)?;
            (
                nominal_lattice.with_t(cal.t).map_err(config_err)?,
                Some(cal),
            )
        } else {
            (nominal_lattice, None)
        };

        Ok(Self {
            seed,
            lattice,
            nominal_lattice,
            calibration,
            z: p.z_mm,
            injections,
            boundary_site,
            region,
            n_snapshots: p.n_snapshots,
            classifier,
            source,
            detection,
            bulk_input,
            bulk_sites,
            config,
        })
    }

    /// `n_snapshots` evenly spaced propagation lengths ending at `z`.
    pub fn z_samples(&self) -> Vec<f64> {
        let m = self.n_snapshots;
        if m == 1 {
            return vec![self.z];
        }
        (0..m).map(|k| self.z * k as f64 / (m - 1) as f64).collect()
    }
}

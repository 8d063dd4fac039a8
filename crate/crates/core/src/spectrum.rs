//! Eigendecomposition of the lattice Hamiltonian, per-mode localization
//! metrics, boundary-mode classification and phase sweeps.

use std::f64::consts::TAU;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{build_hamiltonian, coupling_profile, Hamiltonian, LatticeParams};

/// Number of sites at each end counted into the edge weights.
pub const EDGE_SITES: usize = 2;

#[derive(Debug, Clone)]
pub struct SpectralData {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the normalized mode belonging to `eigenvalues[k]`.
    pub eigenvectors: DMatrix<f64>,
    pub ipr: Vec<f64>,
    pub edge_weight_left: Vec<f64>,
    pub edge_weight_right: Vec<f64>,
}

impl SpectralData {
    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn mode(&self, k: usize) -> nalgebra::DVectorView<'_, f64> {
        self.eigenvectors.column(k)
    }

    /// `max |VᵀV - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let v = &self.eigenvectors;
        let g = v.transpose() * v - DMatrix::identity(v.ncols(), v.ncols());
        g.amax()
    }

    /// `max |V Λ Vᵀ - H|`.
    pub fn reconstruction_residual(&self, h: &Hamiltonian) -> f64 {
        let v = &self.eigenvectors;
        let lambda =
            DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.eigenvalues));
        (v * lambda * v.transpose() - h.to_matrix()).amax()
    }

    /// Flags modes adjacent to a spacing wider than `gap_fraction` of the
    /// spectral span. The two extremal modes are never in a gap.
    pub fn in_gap(&self, gap_fraction: f64) -> Vec<bool> {
        let e = &self.eigenvalues;
        let n = e.len();
        let span = e[n - 1] - e[0];
        let threshold = gap_fraction * span;
        let wide: Vec<bool> = e.windows(2).map(|w| w[1] - w[0] > threshold).collect();
        (0..n)
            .map(|k| k > 0 && k + 1 < n && (wide[k - 1] || wide[k]))
            .collect()
    }
}

pub fn eigendecompose(h: &Hamiltonian) -> Result<SpectralData> {
    let n = h.dimension();
    let m = h.to_matrix();
    let max_abs = m.amax();
    let eig =
        SymmetricEigen::try_new(m, f64::EPSILON, 1000 * n).ok_or(Error::NumericalFailure {
            dimension: n,
            max_abs,
        })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).clone_owned();
        // sign convention: first non-negligible component positive
        if let Some(&x) = col.iter().find(|x| x.abs() > 1e-12) {
            if x < 0.0 {
                col.neg_mut();
            }
        }
        eigenvectors.set_column(dst, &col);
    }

    let edge = EDGE_SITES.min(n);
    let mut ipr = Vec::with_capacity(n);
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for col in eigenvectors.column_iter() {
        ipr.push(col.iter().map(|x| x.powi(4)).sum());
        left.push(col.iter().take(edge).map(|x| x * x).sum());
        right.push(col.iter().rev().take(edge).map(|x| x * x).sum());
    }

    Ok(SpectralData {
        eigenvalues,
        eigenvectors,
        ipr,
        edge_weight_left: left,
        edge_weight_right: right,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeLabel {
    Bulk,
    LeftBoundary,
    RightBoundary,
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModeLabel::Bulk => "bulk",
            ModeLabel::LeftBoundary => "left-boundary",
            ModeLabel::RightBoundary => "right-boundary",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassifierSettings {
    pub gap_fraction: f64,
    pub edge_threshold: f64,
}

impl Default for ClassifierSettings {
    fn default() -> Self {
        Self {
            gap_fraction: 0.05,
            edge_threshold: 0.9,
        }
    }
}

impl ClassifierSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.gap_fraction > 0.0 && self.gap_fraction < 1.0) {
            return Err(Error::invalid(format!(
                "gap_fraction must lie in (0, 1), got {}",
                self.gap_fraction
            )));
        }
        if !(self.edge_threshold >= 0.5 && self.edge_threshold < 1.0) {
            return Err(Error::invalid(format!(
                "edge_threshold must lie in [0.5, 1), got {}",
                self.edge_threshold
            )));
        }
        Ok(())
    }
}

/// Labels a mode as a boundary mode when it sits in a detected gap and more
/// than `edge_threshold` of its weight is on the first (last) two sites.
pub fn classify_modes(
    spectral: &SpectralData,
    settings: ClassifierSettings,
) -> Result<Vec<ModeLabel>> {
    settings.validate()?;
    let e = &spectral.eigenvalues;
    let n = e.len();
    if e[n - 1] - e[0] <= 0.0 {
        log::warn!("degenerate spectrum (zero span); all {n} modes labeled bulk");
        return Ok(vec![ModeLabel::Bulk; n]);
    }
    let in_gap = spectral.in_gap(settings.gap_fraction);
    Ok((0..n)
        .map(|k| {
            if !in_gap[k] {
                return ModeLabel::Bulk;
            }
            let l = spectral.edge_weight_left[k];
            let r = spectral.edge_weight_right[k];
            let th = settings.edge_threshold;
            match (l > th, r > th) {
                (true, true) if r > l => ModeLabel::RightBoundary,
                (true, _) => ModeLabel::LeftBoundary,
                (false, true) => ModeLabel::RightBoundary,
                (false, false) => ModeLabel::Bulk,
            }
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct BandStructure {
    pub phis: Vec<f64>,
    pub spectra: Vec<SpectralData>,
    pub labels: Vec<Vec<ModeLabel>>,
}

impl BandStructure {
    pub fn len(&self) -> usize {
        self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phis.is_empty()
    }
}

/// Spectra at `φ_k = 2πk / n_phi`, `k = 0..n_phi`, evaluated in parallel.
pub fn phase_sweep(
    params: &LatticeParams,
    n_phi: usize,
    settings: ClassifierSettings,
) -> Result<BandStructure> {
    if n_phi < 2 {
        return Err(Error::invalid(format!("n_phi must be >= 2, got {n_phi}")));
    }
    settings.validate()?;
    let phis: Vec<f64> = (0..n_phi).map(|k| TAU * k as f64 / n_phi as f64).collect();
    let rows: Vec<(SpectralData, Vec<ModeLabel>)> = phis
        .par_iter()
        .map(|&phi| {
            let p = params.with_phi(phi)?;
            let spectral = eigendecompose(&build_hamiltonian(coupling_profile(&p)))?;
            let labels = classify_modes(&spectral, settings)?;
            Ok((spectral, labels))
        })
        .collect::<Result<_>>()?;
    let (spectra, labels) = rows.into_iter().unzip();
    Ok(BandStructure {
        phis,
        spectra,
        labels,
    })
}

//! Coupled-mode evolution `U(z) = exp(-i H z)` and single-photon output
//! distributions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Hamiltonian, Site};
use crate::spectrum::{eigendecompose, SpectralData};

#[derive(Debug, Clone)]
pub struct Propagator {
    matrix: DMatrix<Complex64>,
    z: f64,
}

impl Propagator {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn n_sites(&self) -> usize {
        self.matrix.nrows()
    }

    /// Amplitude for a photon entering at column `input` and leaving at row `output` (0-based).
    pub fn amplitude(&self, output: usize, input: usize) -> Complex64 {
        self.matrix[(output, input)]
    }

    /// `max |U†U - I|`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.n_sites();
        let g = self.matrix.adjoint() * &self.matrix - DMatrix::<Complex64>::identity(n, n);
        g.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

/// Builds `U(z) = V exp(-iΛz) Vᵀ` from an existing eigendecomposition.
pub fn propagator_from_spectrum(spectral: &SpectralData, z: f64) -> Result<Propagator> {
    if !(z.is_finite() && z >= 0.0) {
        return Err(Error::invalid(format!(
            "propagation length must be >= 0, got {z}"
        )));
    }
    if z == 0.0 {
        let n = spectral.dimension();
        return Ok(Propagator {
            matrix: DMatrix::identity(n, n),
            z,
        });
    }
    let v = spectral.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let mut scaled = v.clone();
    for (k, &e) in spectral.eigenvalues.iter().enumerate() {
        let mut col = scaled.column_mut(k);
        col *= Complex64::from_polar(1.0, -e * z);
    }
    Ok(Propagator {
        matrix: scaled * v.transpose(),
        z,
    })
}

pub fn propagate(h: &Hamiltonian, z: f64) -> Result<Propagator> {
    propagator_from_spectrum(&eigendecompose(h)?, z)
}

/// `p_q = |U_{q,input}|²`.
pub fn single_photon_distribution(u: &Propagator, input: Site) -> Result<Vec<f64>> {
    let a = input.index(u.n_sites())?;
    Ok(u.matrix.column(a).iter().map(|x| x.norm_sqr()).collect())
}

/// Probability mass of `p` on `region`.
pub fn confinement(p: &[f64], region: &[Site]) -> Result<f64> {
    if region.is_empty() {
        return Err(Error::invalid("confinement region is empty"));
    }
    region.iter().map(|s| s.index(p.len()).map(|i| p[i])).sum()
}

/// One output distribution per entry of `z_samples`, in order.
pub fn evolution_snapshots(
    h: &Hamiltonian,
    input: Site,
    z_samples: &[f64],
) -> Result<Vec<Vec<f64>>> {
    input.index(h.dimension())?;
    if z_samples.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("z samples must be nondecreasing"));
    }
    let spectral = eigendecompose(h)?;
    z_samples
        .par_iter()
        .map(|&z| {
            let u = propagator_from_spectrum(&spectral, z)?;
            single_photon_distribution(&u, input)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_hamiltonian, coupling_profile, CouplingProfile, LatticeParams};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;
    use std::f64::consts::FRAC_PI_4;

    fn chain(c: &[f64]) -> Hamiltonian {
        build_hamiltonian(CouplingProfile::from_couplings(c.to_vec()).unwrap())
    }

    #[test]
    fn zero_length_is_identity() {
        let u = propagate(&chain(&[0.3, 1.2, 0.8]), 0.0).unwrap();
        let id = DMatrix::<Complex64>::identity(4, 4);
        assert!((u.matrix() - id).iter().all(|x| x.norm() < 1e-14));
    }

    #[test]
    fn two_site_rabi_transfer() {
        let c = 0.7;
        for z in [0.1, 0.9, 2.5] {
            let u = propagate(&chain(&[c]), z).unwrap();
            assert_abs_diff_eq!(
                u.amplitude(1, 0).norm_sqr(),
                (c * z).sin().powi(2),
                epsilon = 1e-13
            );
        }
        let u = propagate(&chain(&[c]), FRAC_PI_2 / c).unwrap();
        assert_abs_diff_eq!(u.amplitude(1, 0).norm_sqr(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn balanced_coupler_distribution() {
        let u = propagate(&chain(&[1.0]), FRAC_PI_4).unwrap();
        let p = single_photon_distribution(&u, Site(1)).unwrap();
        assert_abs_diff_eq!(p[0], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(p[1], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn default_lattice_unitarity_and_composition() {
        let h = build_hamiltonian(coupling_profile(&LatticeParams::default()));
        let u1 = propagate(&h, 3.0).unwrap();
        let u2 = propagate(&h, 4.5).unwrap();
        let u12 = propagate(&h, 7.5).unwrap();
        assert!(u12.unitarity_error() <= 1e-10);
        let prod = u2.matrix() * u1.matrix();
        let err = (prod - u12.matrix())
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-9, "composition error {err}");
    }

    #[test]
    fn distribution_starts_as_delta() {
        let h = build_hamiltonian(coupling_profile(&LatticeParams::default()));
        let u = propagate(&h, 0.0).unwrap();
        let p = single_photon_distribution(&u, Site(26)).unwrap();
        assert_eq!(confinement(&p, &[Site(26)]).unwrap(), 1.0);
        assert!(single_photon_distribution(&u, Site(51)).is_err());
        assert!(single_photon_distribution(&u, Site(0)).is_err());
    }

    #[test]
    fn confinement_over_all_sites_is_one() {
        let h = build_hamiltonian(coupling_profile(&LatticeParams::default()));
        let u = propagate(&h, 12.0).unwrap();
        let p = single_photon_distribution(&u, Site(1)).unwrap();
        let all: Vec<Site> = (1..=50).map(Site).collect();
        assert_abs_diff_eq!(confinement(&p, &all).unwrap(), 1.0, epsilon = 1e-10);
        assert!(confinement(&p, &[]).is_err());
        assert!(confinement(&p, &[Site(99)]).is_err());
    }

    #[test]
    fn snapshots_conserve_probability() {
        let h = build_hamiltonian(coupling_profile(&LatticeParams::default()));
        let zs: Vec<f64> = (0..20).map(|k| k as f64 * 1.75).collect();
        let snaps = evolution_snapshots(&h, Site(1), &zs).unwrap();
        assert_eq!(snaps.len(), 20);
        assert_eq!(snaps[0][0], 1.0);
        for row in &snaps {
            assert_abs_diff_eq!(row.iter().sum::<f64>(), 1.0, epsilon = 1e-10);
        }
        let twin = evolution_snapshots(&h, Site(3), &[2.0, 2.0]).unwrap();
        assert_eq!(twin[0], twin[1]);
        assert!(evolution_snapshots(&h, Site(1), &[1.0, 0.5]).is_err());
        assert!(propagate(&h, -1.0).is_err());
    }
}

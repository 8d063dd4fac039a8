//! Off-diagonal Harper (Aubry-André) chain: parameters, nearest-neighbour
//! couplings and the tridiagonal Hamiltonian built from them.
//!
//! Couplings are
//!
//! ```text
//! c_n = t (1 + λ cos(2π b n + φ)),    n = 1 .. N-1
//! ```
//!
//! with sites counted from 1. The offset matters: shifting `n` by one is a
//! phase shift of `2πb` and moves the whole spectrum along the φ axis.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Golden mean (1+√5)/2, the default modulation period.
pub const GOLDEN_MEAN: f64 = 1.618_033_988_749_895;

/// A 1-based lattice site index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Site(pub usize);

impl Site {
    /// Validates against a chain of `n_sites` and returns the 0-based offset.
    pub fn index(self, n_sites: usize) -> Result<usize> {
        if self.0 == 0 || self.0 > n_sites {
            return Err(Error::SiteOutOfRange {
                site: self.0,
                n_sites,
            });
        }
        Ok(self.0 - 1)
    }
}

impl std::fmt::Display for Site {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Model parameters. Construct with [`LatticeParams::new`]; the phase is
/// stored reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeParams {
    n_sites: usize,
    t: f64,
    lambda: f64,
    b: f64,
    phi: f64,
}

impl LatticeParams {
    pub fn new(n_sites: usize, t: f64, lambda: f64, b: f64, phi: f64) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::invalid(format!(
                "n_sites must be >= 2, got {n_sites}"
            )));
        }
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::invalid(format!("t must be positive, got {t}")));
        }
        if !(0.0..1.0).contains(&lambda) {
            return Err(Error::invalid(format!(
                "lambda must lie in [0, 1), got {lambda}"
            )));
        }
        if !b.is_finite() || !phi.is_finite() {
            return Err(Error::invalid("b and phi must be finite"));
        }
        Ok(Self {
            n_sites,
            t,
            lambda,
            b,
            phi: reduce_phase(phi),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn with_phi(self, phi: f64) -> Result<Self> {
        Self::new(self.n_sites, self.t, self.lambda, self.b, phi)
    }

    pub fn with_t(self, t: f64) -> Result<Self> {
        Self::new(self.n_sites, t, self.lambda, self.b, self.phi)
    }
}

impl Default for LatticeParams {
    /// N = 50, t = 1, λ = 0.5, b = golden mean, φ = 0.2π.
    fn default() -> Self {
        Self {
            n_sites: 50,
            t: 1.0,
            lambda: 0.5,
            b: GOLDEN_MEAN,
            phi: 0.2 * std::f64::consts::PI,
        }
    }
}

fn reduce_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Nearest-neighbour couplings `c_1 .. c_{N-1}`, all strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingProfile {
    couplings: Vec<f64>,
}

impl CouplingProfile {
    pub fn from_couplings(couplings: Vec<f64>) -> Result<Self> {
        if couplings.is_empty() {
            return Err(Error::invalid("coupling profile needs at least one bond"));
        }
        if let Some((i, c)) = couplings
            .iter()
            .enumerate()
            .find(|(_, c)| !(c.is_finite() && **c > 0.0))
        {
            return Err(Error::invalid(format!(
                "coupling c_{} = {c} is not positive",
                i + 1
            )));
        }
        Ok(Self { couplings })
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn n_sites(&self) -> usize {
        self.couplings.len() + 1
    }

    pub fn max_coupling(&self) -> f64 {
        self.couplings.iter().copied().fold(f64::MIN, f64::max)
    }

    /// Multiplies every coupling by `(1 + strength * u)` with `u ~ U[-1, 1]`
    /// drawn from a ChaCha8 stream seeded by `seed`.
    pub fn apply_disorder(&self, strength: f64, seed: u64) -> Result<Self> {
        if !(0.0..1.0).contains(&strength) {
            return Err(Error::invalid(format!(
                "disorder strength must lie in [0, 1), got {strength}"
            )));
        }
        if strength == 0.0 {
            return Ok(self.clone());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let couplings = self
            .couplings
            .iter()
            .map(|&c| c * (1.0 + strength * rng.random_range(-1.0..=1.0)))
            .collect();
        Self::from_couplings(couplings)
    }

    /// Waveguide separations under the exponential coupling law
    /// `c = kappa0 * exp(-d / d0)`, i.e. `d_n = d0 ln(kappa0 / c_n)`.
    pub fn separation_layout(&self, kappa0: f64, d0: f64) -> Result<Vec<f64>> {
        if !(d0.is_finite() && d0 > 0.0) {
            return Err(Error::InvalidCalibration(format!(
                "d0 must be positive, got {d0}"
            )));
        }
        if !(kappa0.is_finite() && kappa0 > self.max_coupling()) {
            return Err(Error::InvalidCalibration(format!(
                "kappa0 = {kappa0} must exceed the largest coupling {}",
                self.max_coupling()
            )));
        }
        Ok(self
            .couplings
            .iter()
            .map(|&c| d0 * (kappa0 / c).ln())
            .collect())
    }
}

/// `c_n = t(1 + λ cos(2π b n + φ))` for `n = 1..N-1`.
pub fn coupling_profile(params: &LatticeParams) -> CouplingProfile {
    let couplings = (1..params.n_sites)
        .map(|n| params.t * (1.0 + params.lambda * (TAU * params.b * n as f64 + params.phi).cos()))
        .collect();
    // λ < 1 and t > 0 keep every entry positive
    CouplingProfile { couplings }
}

/// Real symmetric tridiagonal Hamiltonian with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    profile: CouplingProfile,
}

impl Hamiltonian {
    pub fn new(profile: CouplingProfile) -> Self {
        Self { profile }
    }

    pub fn dimension(&self) -> usize {
        self.profile.n_sites()
    }

    pub fn profile(&self) -> &CouplingProfile {
        &self.profile
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.dimension();
        let mut m = DMatrix::zeros(n, n);
        for (i, &c) in self.profile.couplings.iter().enumerate() {
            m[(i, i + 1)] = c;
            m[(i + 1, i)] = c;
        }
        m
    }
}

pub fn build_hamiltonian(profile: CouplingProfile) -> Hamiltonian {
    Hamiltonian::new(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{E, PI};

    #[test]
    fn unmodulated_chain_is_uniform() {
        let p = LatticeParams::new(3, 1.0, 0.0, 0.37, 1.1).unwrap();
        assert_eq!(coupling_profile(&p).couplings(), &[1.0, 1.0]);
    }

    #[test]
    fn two_site_substitution() {
        let p = LatticeParams::new(2, 1.0, 0.5, 0.25, 0.0).unwrap();
        let c = coupling_profile(&p);
        assert_eq!(c.couplings().len(), 1);
        assert_relative_eq!(c.couplings()[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn default_profile_within_modulation_bounds() {
        let c = coupling_profile(&LatticeParams::default());
        assert_eq!(c.couplings().len(), 49);
        assert!(c.couplings().iter().all(|&x| x > 0.5 && x < 1.5));
        // first bond, evaluated by hand
        let expect = 1.0 + 0.5 * (TAU * GOLDEN_MEAN + 0.2 * PI).cos();
        assert_relative_eq!(c.couplings()[0], expect, epsilon = 1e-15);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(LatticeParams::new(1, 1.0, 0.5, 0.3, 0.0).is_err());
        assert!(LatticeParams::new(10, 1.0, 1.0, 0.3, 0.0).is_err());
        assert!(LatticeParams::new(10, 0.0, 0.5, 0.3, 0.0).is_err());
        assert!(LatticeParams::new(10, 1.0, -0.1, 0.3, 0.0).is_err());
        assert!(CouplingProfile::from_couplings(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn phase_reduced_into_period() {
        let p = LatticeParams::new(4, 1.0, 0.5, 0.3, -0.5 * PI).unwrap();
        assert_relative_eq!(p.phi(), 1.5 * PI, epsilon = 1e-15);
        let q = LatticeParams::new(4, 1.0, 0.5, 0.3, 5.0 * TAU + 0.25).unwrap();
        assert_relative_eq!(q.phi(), 0.25, epsilon = 1e-12);
        let r = LatticeParams::new(4, 1.0, 0.5, 0.3, -1e-300).unwrap();
        assert!(r.phi() >= 0.0 && r.phi() < TAU);
    }

    #[test]
    fn hamiltonian_matrix_layout() {
        let h = build_hamiltonian(CouplingProfile::from_couplings(vec![0.7]).unwrap());
        let m = h.to_matrix();
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[0.0, 0.7, 0.7, 0.0]));

        let h = build_hamiltonian(CouplingProfile::from_couplings(vec![1.0, 2.0, 3.0]).unwrap());
        let m = h.to_matrix();
        assert_eq!(m, m.transpose());
        assert!((0..4).all(|i| m[(i, i)] == 0.0));
        assert_eq!(m[(2, 3)], 3.0);
    }

    #[test]
    fn zero_disorder_is_identity() {
        let c = coupling_profile(&LatticeParams::default());
        assert_eq!(c.apply_disorder(0.0, 7).unwrap(), c);
    }

    #[test]
    fn disorder_is_seeded() {
        let c = coupling_profile(&LatticeParams::default());
        let a = c.apply_disorder(0.1, 42).unwrap();
        let b = c.apply_disorder(0.1, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c.apply_disorder(0.1, 43).unwrap());
        for (x, y) in a.couplings().iter().zip(c.couplings()) {
            assert!((x / y - 1.0).abs() <= 0.1 + 1e-15);
        }
        assert!(c.apply_disorder(1.0, 1).is_err());
    }

    #[test]
    fn layout_single_bond() {
        let c = CouplingProfile::from_couplings(vec![2.0 / E]).unwrap();
        let d = c.separation_layout(2.0, 10.0).unwrap();
        assert_relative_eq!(d[0], 10.0, epsilon = 1e-12);
    }

    #[test]
    fn layout_uniform_and_inverse_monotone() {
        let u = CouplingProfile::from_couplings(vec![0.8; 5]).unwrap();
        let d = u.separation_layout(2.0, 8.0).unwrap();
        assert!(d.iter().all(|&x| x == d[0]));

        let c = coupling_profile(&LatticeParams::default());
        let d = c.separation_layout(2.0, 8.0).unwrap();
        assert_eq!(d.len(), 49);
        assert!(d.iter().all(|&x| x > 0.0));
        for i in 0..49 {
            for j in 0..49 {
                if c.couplings()[i] > c.couplings()[j] {
                    assert!(d[i] < d[j]);
                }
            }
            let back = 2.0 * (-d[i] / 8.0).exp();
            assert_relative_eq!(back, c.couplings()[i], max_relative = 1e-12);
        }
    }

    #[test]
    fn layout_rejects_weak_kappa0() {
        let c = coupling_profile(&LatticeParams::default());
        assert!(matches!(
            c.separation_layout(1.0, 8.0),
            Err(Error::InvalidCalibration(_))
        ));
        assert!(c.separation_layout(2.0, 0.0).is_err());
    }

    #[test]
    fn site_bounds() {
        assert_eq!(Site(1).index(5).unwrap(), 0);
        assert_eq!(Site(5).index(5).unwrap(), 4);
        assert!(Site(0).index(5).is_err());
        assert!(Site(6).index(5).is_err());
    }
}

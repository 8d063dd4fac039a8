//! Two-photon dynamics in off-diagonal Harper photonic lattices.
//!
//! * [`lattice`]: parameters, couplings, Hamiltonian, disorder, waveguide layout
//! * [`spectrum`]: eigendecomposition, boundary-mode classification, phase sweeps
//! * [`propagation`]: `exp(-iHz)` and single-photon distributions
//! * [`correlation`]: joint two-photon output probabilities
//! * [`statistics`]: pair source, counting Monte Carlo, g² and Cauchy-Schwarz

pub mod correlation;
pub mod error;
pub mod lattice;
pub mod propagation;
pub mod spectrum;
pub mod statistics;

pub use correlation::{two_photon_correlation, TwoPhotonCorrelation};
pub use error::{Error, Result};
pub use lattice::{
    build_hamiltonian, coupling_profile, CouplingProfile, Hamiltonian, LatticeParams, Site,
    GOLDEN_MEAN,
};
pub use propagation::{
    confinement, evolution_snapshots, propagate, propagator_from_spectrum,
    single_photon_distribution, Propagator,
};
pub use spectrum::{
    classify_modes, eigendecompose, phase_sweep, BandStructure, ClassifierSettings, ModeLabel,
    SpectralData,
};

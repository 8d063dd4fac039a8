//! Choice of the mean coupling `t` that reproduces a measured boundary
//! coincidence after a fixed propagation length.

use harper_core::{
    build_hamiltonian, coupling_profile, eigendecompose, Error, LatticeParams, Result,
};
use num_complex::Complex64;
use serde::Serialize;

/// Smallest coupling (per mm) the search considers.
pub const T_FLOOR: f64 = 1e-6;
/// Largest coupling (per mm) the search considers.
pub const T_CEILING: f64 = 10.0;
/// Allowed deviation of the single-photon confinement from its target.
pub const TOLERANCE: f64 = 1e-4;
/// Largest phase advance of any mode between two scan points.
const SCAN_PHASE_STEP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Calibration {
    pub t: f64,
    pub z: f64,
    /// Two-photon coincidence at site 1 the calibration aimed for.
    pub target: f64,
    /// `|U_11(z)|²` at the calibrated coupling.
    pub single_confinement: f64,
}

impl Calibration {
    pub fn tz(&self) -> f64 {
        self.t * self.z
    }

    /// Same-site injection factorizes, so the coincidence is the square.
    pub fn two_photon(&self) -> f64 {
        self.single_confinement * self.single_confinement
    }
}

/// Site-1 return probability as a function of `t`, from one
/// eigendecomposition at unit coupling (the Hamiltonian is linear in `t`).
struct ReturnProbability {
    weights: Vec<f64>,
    energies: Vec<f64>,
    z: f64,
}

impl ReturnProbability {
    fn at(&self, t: f64) -> f64 {
        let tz = t * self.z;
        self.weights
            .iter()
            .zip(&self.energies)
            .map(|(&w, &e)| Complex64::from_polar(w, -e * tz))
            .sum::<Complex64>()
            .norm_sqr()
    }
}

/// Smallest `t` in `[T_FLOOR, T_CEILING]` at which a photon launched at site
/// 1 is found there after `z` with probability `sqrt(target)`, so that two
/// photons launched together coincide at site 1 with probability `target`.
///
/// Returns `T_FLOOR` if the floor already meets the target.
pub fn calibrate_coupling(params: &LatticeParams, z: f64, target: f64) -> Result<Calibration> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidCalibration(format!(
            "target must lie in (0, 1), got {target}"
        )));
    }
    if !(z.is_finite() && z >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "propagation length must be >= 0, got {z}"
        )));
    }
    let unit = params.with_t(1.0)?;
    let spectral = eigendecompose(&build_hamiltonian(coupling_profile(&unit)))?;
    let f = ReturnProbability {
        weights: spectral.eigenvectors.row(0).iter().map(|x| x * x).collect(),
        energies: spectral.eigenvalues.clone(),
        z,
    };
    let goal = target.sqrt();
    let done = |t: f64, p: f64| Calibration {
        t,
        z,
        target,
        single_confinement: p,
    };

    let p_floor = f.at(T_FLOOR);
    if (p_floor - goal).abs() <= TOLERANCE {
        return Ok(done(T_FLOOR, p_floor));
    }
    let e_max = f.energies.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    let failure = |lo: f64, hi: f64| Error::CalibrationFailure {
        target,
        t_min: T_FLOOR,
        t_max: T_CEILING,
        achieved_min: lo,
        achieved_max: hi,
    };
    if z == 0.0 || e_max == 0.0 {
        return Err(failure(p_floor, p_floor));
    }

    let dt = SCAN_PHASE_STEP / (z * e_max);
    let steps = ((T_CEILING - T_FLOOR) / dt).ceil() as usize;
    let (mut lo_seen, mut hi_seen) = (p_floor, p_floor);
    let mut prev = (T_FLOOR, p_floor);
    let above = p_floor > goal;
    for k in 1..=steps {
        let t = (T_FLOOR + k as f64 * dt).min(T_CEILING);
        let p = f.at(t);
        lo_seen = lo_seen.min(p);
        hi_seen = hi_seen.max(p);
        if (p > goal) != above {
            let (mut a, mut b) = (prev.0, t);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if (f.at(m) > goal) == above {
                    a = m;
                } else {
                    b = m;
                }
                if b - a <= 4.0 * f64::EPSILON * b {
                    break;
                }
            }
            let t_star = 0.5 * (a + b);
            let p_star = f.at(t_star);
            if (p_star - goal).abs() <= TOLERANCE {
                log::info!(
                    "calibrated t = {t_star:.9e} per mm (t z = {:.6})",
                    t_star * z
                );
                return Ok(done(t_star, p_star));
            }
        }
        prev = (t, p);
    }
    Err(failure(lo_seen, hi_seen))
}

//! Joint two-photon output statistics.
//!
//! `gamma[q][r]` is the probability that one photon leaves at `q` and the
//! other at `r`, counted once per unordered pair `{q, r}` and stored
//! symmetrically. With photons entering at `a` and `b`,
//!
//! ```text
//! indistinguishable:  |U_qa U_rb + U_qb U_ra|² / (n_a! n_b! n_q! n_r!)
//! distinguishable:    (|U_qa U_rb|² + |U_qb U_ra|²) / (1 + δ_qr)
//! ```
//!
//! where `n_x` are the occupations of the input and output modes, so that
//! the unordered-pair sum is one for unitary `U`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::Site;
use crate::propagation::Propagator;

#[derive(Debug, Clone)]
pub struct TwoPhotonCorrelation {
    gamma: DMatrix<f64>,
    input_sites: (Site, Site),
    indistinguishable: bool,
}

impl TwoPhotonCorrelation {
    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    /// Joint probability for the unordered output pair `{q, r}`.
    pub fn at(&self, q: Site, r: Site) -> Result<f64> {
        let n = self.gamma.nrows();
        Ok(self.gamma[(q.index(n)?, r.index(n)?)])
    }

    pub fn input_sites(&self) -> (Site, Site) {
        self.input_sites
    }

    pub fn indistinguishable(&self) -> bool {
        self.indistinguishable
    }

    pub fn n_sites(&self) -> usize {
        self.gamma.nrows()
    }

    /// Sum over unordered pairs `q <= r`.
    pub fn total(&self) -> f64 {
        unordered_sum(&self.gamma, None)
    }

    /// Largest entry over all site pairs.
    pub fn max_entry(&self) -> f64 {
        self.gamma.iter().copied().fold(0.0, f64::max)
    }

    /// Copy renormalized to unordered pairs lying inside `region`; entries
    /// outside the region are zero.
    pub fn restricted_to(&self, region: &[Site]) -> Result<Self> {
        let n = self.n_sites();
        if region.is_empty() {
            return Err(Error::invalid("correlation region is empty"));
        }
        let mut mask = vec![false; n];
        for s in region {
            mask[s.index(n)?] = true;
        }
        let norm = unordered_sum(&self.gamma, Some(&mask));
        if norm <= 0.0 {
            return Err(Error::invalid("no two-photon probability inside region"));
        }
        let gamma = DMatrix::from_fn(n, n, |q, r| {
            if mask[q] && mask[r] {
                self.gamma[(q, r)] / norm
            } else {
                0.0
            }
        });
        Ok(Self {
            gamma,
            ..self.clone()
        })
    }
}

fn unordered_sum(gamma: &DMatrix<f64>, mask: Option<&[bool]>) -> f64 {
    let n = gamma.nrows();
    let keep = |i: usize| mask.is_none_or(|m| m[i]);
    let mut s = 0.0;
    for q in 0..n {
        for r in q..n {
            if keep(q) && keep(r) {
                s += gamma[(q, r)];
            }
        }
    }
    s
}

pub fn two_photon_correlation(
    u: &Propagator,
    a: Site,
    b: Site,
    indistinguishable: bool,
) -> Result<TwoPhotonCorrelation> {
    let n = u.n_sites();
    let ia = a.index(n)?;
    let ib = b.index(n)?;
    let same_input = ia == ib;

    let mut gamma = DMatrix::zeros(n, n);
    for q in 0..n {
        for r in q..n {
            let (uqa, urb) = (u.amplitude(q, ia), u.amplitude(r, ib));
            let (uqb, ura) = (u.amplitude(q, ib), u.amplitude(r, ia));
            let same_output = q == r;
            let p = if indistinguishable {
                let mut w = (uqa * urb + uqb * ura).norm_sqr();
                if same_input {
                    w /= 2.0;
                }
                if same_output {
                    w /= 2.0;
                }
                w
            } else {
                let w = (uqa * urb).norm_sqr() + (uqb * ura).norm_sqr();
                if same_output {
                    w / 2.0
                } else {
                    w
                }
            };
            gamma[(q, r)] = p;
            gamma[(r, q)] = p;
        }
    }
    let total = unordered_sum(&gamma, None);
    gamma /= total;

    Ok(TwoPhotonCorrelation {
        gamma,
        input_sites: (a, b),
        indistinguishable,
    })
}

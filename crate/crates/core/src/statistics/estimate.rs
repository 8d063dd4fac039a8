//! g² estimation from raw counts and the Cauchy-Schwarz test.

use serde::Serialize;

use super::counting::CountRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct G2Estimate {
    pub value: f64,
    pub sigma: f64,
}

impl G2Estimate {
    pub fn new(value: f64, sigma: f64) -> Self {
        Self { value, sigma }
    }

    pub fn relative_sigma(&self) -> f64 {
        self.sigma / self.value
    }
}

/// `g = C n / (S_s S_i)`, with a first-order uncertainty that treats the
/// coincidences and both singles as independent Poisson counts.
pub fn estimate_g2(rec: &CountRecord) -> Result<G2Estimate> {
    if rec.singles_s == 0 || rec.singles_i == 0 {
        return Err(Error::UndefinedEstimate { record: *rec });
    }
    let n = rec.n_windows as f64;
    let c = rec.coincidences as f64;
    let ss = rec.singles_s as f64;
    let si = rec.singles_i as f64;
    let scale = n / (ss * si);
    let value = c * scale;
    let var = scale * scale * c + value * value * (1.0 / ss + 1.0 / si);
    Ok(G2Estimate {
        value,
        sigma: var.sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CauchySchwarzResult {
    /// `g_si² - g_ss g_ii`; positive means the classical bound is broken.
    pub violation: f64,
    pub sigma_v: f64,
    /// `violation / sigma_v`; infinite when `sigma_v` is zero and the
    /// violation is not.
    pub sds: f64,
    pub violated: bool,
    pub infinite_sds: bool,
}

pub fn cauchy_schwarz(gsi: &G2Estimate, gss: &G2Estimate, gii: &G2Estimate) -> CauchySchwarzResult {
    let violation = gsi.value * gsi.value - gss.value * gii.value;
    let cross = (2.0 * gsi.value * gsi.sigma).powi(2);
    // auto terms summed first so that swapping gss and gii is bit-exact
    let autos = (gii.value * gss.sigma).powi(2) + (gss.value * gii.sigma).powi(2);
    let sigma_v = (cross + autos).sqrt();
    let (sds, infinite_sds) = if sigma_v > 0.0 {
        (violation / sigma_v, false)
    } else if violation == 0.0 {
        (0.0, false)
    } else {
        (f64::INFINITY.copysign(violation), true)
    };
    CauchySchwarzResult {
        violation,
        sigma_v,
        sds,
        violated: violation > 0.0 && sds > 0.0,
        infinite_sds,
    }
}

//! Pair-source models and their ideal correlation functions.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairStatistics {
    /// Down-conversion pairs: signal and idler photon numbers are equal and
    /// follow a `K`-mode thermal (negative binomial) law with mean `mu`.
    /// `K = ∞` gives Poissonian pair numbers.
    Spdc,
    /// Classical control: two independent Poissonian arms of mean `mu`.
    Coherent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SourceModel {
    mu: f64,
    schmidt_k: f64,
    window_ns: f64,
    statistics: PairStatistics,
}

impl SourceModel {
    pub fn spdc(mu: f64, schmidt_k: f64, window_ns: f64) -> Result<Self> {
        if !(schmidt_k >= 1.0) {
            return Err(Error::invalid(format!(
                "schmidt_k must be >= 1, got {schmidt_k}"
            )));
        }
        Self::checked(mu, schmidt_k, window_ns, PairStatistics::Spdc)
    }

    pub fn coherent(mu: f64, window_ns: f64) -> Result<Self> {
        Self::checked(mu, f64::INFINITY, window_ns, PairStatistics::Coherent)
    }

    /// SPDC source whose ideal cross-correlation equals `g_si`:
    /// `mu = 1 / (g_si - 1 - 1/K)`.
    pub fn from_cross_g2(g_si: f64, schmidt_k: f64, window_ns: f64) -> Result<Self> {
        let excess = g_si - 1.0 - 1.0 / schmidt_k;
        if !(excess > 0.0) {
            return Err(Error::invalid(format!(
                "g_si = {g_si} not reachable with K = {schmidt_k}"
            )));
        }
        Self::spdc(1.0 / excess, schmidt_k, window_ns)
    }

    fn checked(
        mu: f64,
        schmidt_k: f64,
        window_ns: f64,
        statistics: PairStatistics,
    ) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::invalid(format!("mu must be positive, got {mu}")));
        }
        if !(window_ns.is_finite() && window_ns > 0.0) {
            return Err(Error::invalid(format!(
                "coincidence window must be positive, got {window_ns} ns"
            )));
        }
        Ok(Self {
            mu,
            schmidt_k,
            window_ns,
            statistics,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn schmidt_k(&self) -> f64 {
        self.schmidt_k
    }

    pub fn window_ns(&self) -> f64 {
        self.window_ns
    }

    pub fn statistics(&self) -> PairStatistics {
        self.statistics
    }

    pub fn with_mu(self, mu: f64) -> Result<Self> {
        Self::checked(mu, self.schmidt_k, self.window_ns, self.statistics)
    }

    /// Whole windows in `duration_s` seconds.
    pub fn windows_in(&self, duration_s: f64) -> Result<u64> {
        if !(duration_s.is_finite() && duration_s > 0.0) {
            return Err(Error::invalid(format!(
                "duration must be positive, got {duration_s}"
            )));
        }
        Ok((duration_s * 1e9 / self.window_ns).floor() as u64)
    }

    /// `ln E[s^n]` for the single-arm photon number, as a function of `1 - s`.
    pub(crate) fn arm_log_pgf(&self, one_minus_s: f64) -> f64 {
        match self.statistics {
            PairStatistics::Coherent => -self.mu * one_minus_s,
            PairStatistics::Spdc if self.schmidt_k.is_infinite() => -self.mu * one_minus_s,
            PairStatistics::Spdc => {
                -self.schmidt_k * (self.mu * one_minus_s / self.schmidt_k).ln_1p()
            }
        }
    }

    /// `ln E[x^{n_s} y^{n_i}]` at `x = 1 - eta_s`, `y = 1 - eta_i`.
    pub(crate) fn joint_log_pgf(&self, eta_s: f64, eta_i: f64) -> f64 {
        match self.statistics {
            // n_s = n_i, so the joint pgf is the pair pgf at x·y
            PairStatistics::Spdc => self.arm_log_pgf(eta_s + eta_i - eta_s * eta_i),
            PairStatistics::Coherent => self.arm_log_pgf(eta_s) + self.arm_log_pgf(eta_i),
        }
    }
}

/// Ideal (photon-number) correlation functions of a source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticG2 {
    pub g_si: f64,
    pub g_ss: f64,
    pub g_ii: f64,
}

/// `g_auto = 1 + 1/K`, `g_si = 1 + 1/K + 1/mu` for SPDC pairs; all ones for
/// independent coherent arms.
pub fn analytic_g2(source: &SourceModel) -> AnalyticG2 {
    match source.statistics {
        PairStatistics::Spdc => {
            let auto = 1.0 + 1.0 / source.schmidt_k;
            AnalyticG2 {
                g_si: auto + 1.0 / source.mu,
                g_ss: auto,
                g_ii: auto,
            }
        }
        PairStatistics::Coherent => AnalyticG2 {
            g_si: 1.0,
            g_ss: 1.0,
            g_ii: 1.0,
        },
    }
}

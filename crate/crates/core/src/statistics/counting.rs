//! Seeded Monte Carlo of two threshold detectors counting over many
//! coincidence windows.
//!
//! Each window carries a pair number drawn from the source statistics, each
//! photon survives to its detector with the channel transmission, dark
//! clicks are added independently, and a detector registers at most one
//! click. Windows are independent, so a block of `m` windows is a
//! multinomial draw over the four click outcomes; [`simulate_counts`] draws
//! that multinomial directly from the exact per-window outcome
//! probabilities, while [`simulate_counts_per_window`] walks the windows one
//! at a time. Both use one ChaCha stream per block, keyed by `(seed, block)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Gamma, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use super::source::{PairStatistics, SourceModel};
use crate::error::{Error, Result};

/// Windows per generator stream.
pub const BLOCK_WINDOWS: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectionChannel {
    transmission: f64,
    dark_prob: f64,
}

impl DetectionChannel {
    pub fn new(transmission: f64, dark_prob: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&transmission) {
            return Err(Error::invalid(format!(
                "transmission must lie in [0, 1], got {transmission}"
            )));
        }
        if !(0.0..1.0).contains(&dark_prob) {
            return Err(Error::invalid(format!(
                "dark-count probability must lie in [0, 1), got {dark_prob}"
            )));
        }
        Ok(Self {
            transmission,
            dark_prob,
        })
    }

    pub fn transmission(&self) -> f64 {
        self.transmission
    }

    pub fn dark_prob(&self) -> f64 {
        self.dark_prob
    }

    /// Same dark rate, transmission multiplied by `factor` (clamped to 1).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new((self.transmission * factor).min(1.0), self.dark_prob)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CountRecord {
    pub n_windows: u64,
    pub singles_s: u64,
    pub singles_i: u64,
    pub coincidences: u64,
    /// Seconds, stored as nanoseconds so the record stays `Eq`.
    pub duration_ns: u64,
}

impl CountRecord {
    pub fn duration_s(&self) -> f64 {
        self.duration_ns as f64 * 1e-9
    }

    fn add(self, other: Self) -> Self {
        Self {
            n_windows: self.n_windows + other.n_windows,
            singles_s: self.singles_s + other.singles_s,
            singles_i: self.singles_i + other.singles_i,
            coincidences: self.coincidences + other.coincidences,
            duration_ns: 0,
        }
    }
}

/// Per-window probabilities of the click patterns on detectors A and B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClickProbabilities {
    pub both: f64,
    pub a_only: f64,
    pub b_only: f64,
}

impl ClickProbabilities {
    /// From `ln P(A silent)`, `ln P(B silent)` and `ln P(both silent)`.
    fn from_log_silence(la: f64, lb: f64, lab: f64) -> Self {
        let qa = -la.exp_m1();
        let qb = -lb.exp_m1();
        let any = -lab.exp_m1();
        Self {
            both: (qa + qb - any).max(0.0),
            a_only: (any - qb).max(0.0),
            b_only: (any - qa).max(0.0),
        }
    }

    pub fn click_a(&self) -> f64 {
        self.both + self.a_only
    }

    pub fn click_b(&self) -> f64 {
        self.both + self.b_only
    }

    /// `P(both) / (P(A) P(B))`, the value a long run converges to.
    pub fn expected_g2(&self) -> f64 {
        self.both / (self.click_a() * self.click_b())
    }

    /// Signal/idler detectors behind channels `ch_s`, `ch_i`.
    pub fn cross(source: &SourceModel, ch_s: &DetectionChannel, ch_i: &DetectionChannel) -> Self {
        let (es, ei) = (ch_s.transmission, ch_i.transmission);
        let ds = (-ch_s.dark_prob).ln_1p();
        let di = (-ch_i.dark_prob).ln_1p();
        Self::from_log_silence(
            ds + source.joint_log_pgf(es, 0.0),
            di + source.joint_log_pgf(0.0, ei),
            ds + di + source.joint_log_pgf(es, ei),
        )
    }

    /// One arm behind `ch`, split 50:50 onto two detectors with the dark
    /// rate of `ch` each.
    pub fn split_arm(source: &SourceModel, ch: &DetectionChannel) -> Self {
        let eta = ch.transmission;
        let d = (-ch.dark_prob).ln_1p();
        let half = source.arm_log_pgf(0.5 * eta);
        Self::from_log_silence(d + half, d + half, 2.0 * d + source.arm_log_pgf(eta))
    }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn binomial<R: Rng>(rng: &mut R, n: u64, p: f64) -> u64 {
    if n == 0 || !(p > 0.0) {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n, p)
        .expect("probability in (0, 1)")
        .sample(rng)
}

fn blocks(n_windows: u64) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    let n_blocks = n_windows.div_ceil(BLOCK_WINDOWS) as usize;
    (0..n_blocks).into_par_iter().map(move |b| {
        let b = b as u64;
        let start = b * BLOCK_WINDOWS;
        (b, (n_windows - start).min(BLOCK_WINDOWS))
    })
}

/// Counts for `n_windows` windows with the given per-window click law.
pub fn sample_clicks(probs: ClickProbabilities, n_windows: u64, seed: u64) -> CountRecord {
    blocks(n_windows)
        .map(|(b, m)| {
            let mut rng = block_rng(seed, b);
            let both = binomial(&mut rng, m, probs.both);
            let rest = 1.0 - probs.both;
            let a = binomial(&mut rng, m - both, probs.a_only / rest);
            let rest_b = rest - probs.a_only;
            let bo = binomial(&mut rng, m - both - a, probs.b_only / rest_b);
            CountRecord {
                n_windows: m,
                singles_s: both + a,
                singles_i: both + bo,
                coincidences: both,
                duration_ns: 0,
            }
        })
        .reduce(CountRecord::default, CountRecord::add)
}

pub fn simulate_counts(
    source: &SourceModel,
    ch_s: &DetectionChannel,
    ch_i: &DetectionChannel,
    duration_s: f64,
    seed: u64,
) -> Result<CountRecord> {
    let n = source.windows_in(duration_s)?;
    let probs = ClickProbabilities::cross(source, ch_s, ch_i);
    Ok(CountRecord {
        duration_ns: (duration_s * 1e9).round() as u64,
        ..sample_clicks(probs, n, seed)
    })
}

/// Photon numbers `(n_s, n_i)` for one window.
fn draw_photons<R: Rng>(source: &SourceModel, rng: &mut R) -> (u64, u64) {
    let poisson = |rng: &mut R, mean: f64| -> u64 {
        if mean <= 0.0 {
            0
        } else {
            Poisson::new(mean).expect("positive mean").sample(rng) as u64
        }
    };
    match source.statistics() {
        PairStatistics::Spdc => {
            let k = source.schmidt_k();
            let mean = if k.is_infinite() {
                source.mu()
            } else {
                // negative binomial as a gamma-mixed Poisson
                Gamma::new(k, source.mu() / k)
                    .expect("valid gamma")
                    .sample(rng)
            };
            let n = poisson(rng, mean);
            (n, n)
        }
        PairStatistics::Coherent => (poisson(rng, source.mu()), poisson(rng, source.mu())),
    }
}

/// Literal window-by-window simulation. Statistically identical to
/// [`simulate_counts`] but linear in the number of windows.
pub fn simulate_counts_per_window(
    source: &SourceModel,
    ch_s: &DetectionChannel,
    ch_i: &DetectionChannel,
    duration_s: f64,
    seed: u64,
) -> Result<CountRecord> {
    let n = source.windows_in(duration_s)?;
    let rec = blocks(n)
        .map(|(b, m)| {
            let mut rng = block_rng(seed, b);
            let mut rec = CountRecord {
                n_windows: m,
                ..CountRecord::default()
            };
            for _ in 0..m {
                let (ns, ni) = draw_photons(source, &mut rng);
                let s = (binomial(&mut rng, ns, ch_s.transmission) > 0)
                    | rng.random_bool(ch_s.dark_prob);
                let i = (binomial(&mut rng, ni, ch_i.transmission) > 0)
                    | rng.random_bool(ch_i.dark_prob);
                rec.singles_s += s as u64;
                rec.singles_i += i as u64;
                rec.coincidences += (s && i) as u64;
            }
            rec
        })
        .reduce(CountRecord::default, CountRecord::add);
    Ok(CountRecord {
        duration_ns: (duration_s * 1e9).round() as u64,
        ..rec
    })
}

/// Literal window-by-window HBT simulation of one arm split onto two
/// detectors.
pub fn simulate_split_arm_per_window(
    source: &SourceModel,
    arm: Arm,
    ch: &DetectionChannel,
    duration_s: f64,
    seed: u64,
) -> Result<CountRecord> {
    let n = source.windows_in(duration_s)?;
    let rec = blocks(n)
        .map(|(b, m)| {
            let mut rng = block_rng(seed, b);
            let mut rec = CountRecord {
                n_windows: m,
                ..CountRecord::default()
            };
            for _ in 0..m {
                let (ns, ni) = draw_photons(source, &mut rng);
                let photons = match arm {
                    Arm::Signal => ns,
                    Arm::Idler => ni,
                };
                let kept = binomial(&mut rng, photons, ch.transmission);
                let to_a = binomial(&mut rng, kept, 0.5);
                let a = (to_a > 0) | rng.random_bool(ch.dark_prob);
                let b = (kept - to_a > 0) | rng.random_bool(ch.dark_prob);
                rec.singles_s += a as u64;
                rec.singles_i += b as u64;
                rec.coincidences += (a && b) as u64;
            }
            rec
        })
        .reduce(CountRecord::default, CountRecord::add);
    Ok(CountRecord {
        duration_ns: (duration_s * 1e9).round() as u64,
        ..rec
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arm {
    Signal,
    Idler,
}

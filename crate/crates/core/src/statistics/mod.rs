//! Pair source, threshold-detector counting, g² estimation and the
//! Cauchy-Schwarz test.

mod counting;
mod estimate;
mod scan;
mod source;

pub use counting::{
    sample_clicks, simulate_counts, simulate_counts_per_window, simulate_split_arm_per_window, Arm,
    ClickProbabilities, CountRecord, DetectionChannel, BLOCK_WINDOWS,
};
pub use estimate::{cauchy_schwarz, estimate_g2, CauchySchwarzResult, G2Estimate};
pub use scan::{
    expected_relative_sigma, hbt_auto_g2, hbt_counts, match_flux, measure_correlations,
    site_channels, site_g2_scan, site_measurements, CorrelationMeasurement, FluxMatch, SiteG2,
};
pub use source::{analytic_g2, AnalyticG2, PairStatistics, SourceModel};

/// Decorrelated child seed for a `(seed, tag)` pair (splitmix64 finalizer).
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

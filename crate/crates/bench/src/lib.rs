//! Shared fixtures for the benchmarks.

use snapmesh::{bundled, GenerationConfig, MethodConfig};

/// Bundled pieces and matching rules with the given method and seed.
pub fn bundled_config(method: MethodConfig, seed: i64) -> GenerationConfig {
    let mut c = GenerationConfig::new(bundled::piece_ids(), method);
    c.matching_rules = bundled::matching_rules();
    c.seed = seed;
    c
}

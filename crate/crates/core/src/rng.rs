//! Deterministic random-stream derivation.
//!
//! Every random decision in an experiment comes from one master seed. To keep
//! results independent of evaluation order (and safe to parallelize), each
//! consumer gets its own stream, derived from `(master, domain, index)`. The
//! derivation is a fixed splitmix64 chain, so the mapping is stable across
//! runs and platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream label for graph generation.
pub const DOMAIN_GRAPH: u64 = 0x01;
/// Stream label for load-balancer designation.
pub const DOMAIN_LOAD_BALANCERS: u64 = 0x02;
/// Stream label for monitor/destination selection.
pub const DOMAIN_ENDPOINTS: u64 = 0x03;
/// Stream label for inter-round rewiring (indexed by round).
pub const DOMAIN_REWIRE: u64 = 0x04;
/// Stream label for route tracing (indexed by round and destination).
pub const DOMAIN_TRACE: u64 = 0x05;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed of substream `(domain, index)` of `master`.
pub fn derive_seed(master: u64, domain: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ domain) ^ index)
}

/// Seeded generator for substream `(domain, index)` of `master`.
pub fn stream(master: u64, domain: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, domain, index))
}

/// Index for per-(round, destination) trace streams.
pub fn trace_index(round: u32, destination: u32) -> u64 {
    ((round as u64) << 32) | destination as u64
}

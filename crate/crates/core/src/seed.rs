//! Counter-based seed derivation.
//!
//! Every random stream in a run is keyed by a path of small integers below
//! the master seed, e.g. `[density_index, topology_index, replication]` for a
//! sweep replication and `[STREAM_CELL_TRAFFIC, cell_id]` inside it. The key
//! is folded with splitmix64, so a stream never depends on how many values
//! another stream consumed or on the order replications execute in.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One splitmix64 output step.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `path` into `base`: `h = sm(base); h = sm(h ^ sm(w)) for w in path`.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(base), |h, &w| splitmix64(h ^ splitmix64(w)))
}

pub fn rng_for(base: u64, path: &[u64]) -> SimRng {
    SimRng::seed_from_u64(derive_seed(base, path))
}

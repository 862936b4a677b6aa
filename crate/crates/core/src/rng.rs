//! Seed splitting.
//!
//! Every randomized operation derives its generator from a root seed and a
//! stream index, so a sample's randomness depends only on its position in the
//! work list and never on scheduling order.

use rand::rngs::StdRng;
use rand::SeedableRng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// One round of the splitmix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for `stream` under `seed`.
pub fn split_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_mul(GOLDEN)))
}

pub fn stream_rng(seed: u64, stream: u64) -> StdRng {
    StdRng::seed_from_u64(split_seed(seed, stream))
}

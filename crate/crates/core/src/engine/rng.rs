//! Label-keyed deterministic RNG streams.
//!
//! Every consumer of randomness derives its own stream from the master seed
//! and a stable label, so adding a new consumer never perturbs existing
//! streams and parallel execution matches serial execution.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// FNV-1a, stable across platforms and releases.
fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in bytes {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// An independent, reproducible stream for `(master_seed, stream_label)`.
pub fn derive_rng(master_seed: u64, stream_label: &str) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&fnv1a64(stream_label.as_bytes()).to_le_bytes());
    seed[16..24].copy_from_slice(&master_seed.rotate_left(17).to_le_bytes());
    seed[24..32].copy_from_slice(&(stream_label.len() as u64).to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}

//! Deterministic seed derivation.
//!
//! Every stage of a run draws its randomness from a `ChaCha12` stream whose
//! seed is derived from one master seed plus a stage label and an index.
//! Re-running with the same master seed reproduces every draw bit-exactly,
//! and stages cannot perturb each other's streams.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// FNV-1a over a byte slice, the 64-bit variant.
fn fnv1a(bytes: &[u8], mut state: u64) -> u64 {
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    for &b in bytes {
        state ^= u64::from(b);
        state = state.wrapping_mul(PRIME);
    }
    state
}

/// splitmix64 finalizer; spreads low-entropy inputs over the full word.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from `(master, stage, index)`.
pub fn derive_seed(master: u64, stage: &str, index: u64) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    let mut h = fnv1a(&master.to_le_bytes(), OFFSET);
    h = fnv1a(stage.as_bytes(), h);
    h = fnv1a(&index.to_le_bytes(), h);
    mix(h)
}

/// RNG for one stage of a run.
pub fn stage_rng(master: u64, stage: &str, index: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(derive_seed(master, stage, index))
}

/// RNG straight from a seed, for call sites that already hold a derived seed.
pub fn seeded_rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

//! Keyed random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 generator whose seed
//! and stream number are derived from a master seed and a key. Two callers
//! that ask for the same `(seed, key)` pair see the same numbers, no matter
//! which thread they run on or in what order the keys are visited.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// Stream number `key` of the generator seeded with `seed`.
pub fn substream(seed: u64, key: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(key);
    rng
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Seed for one replication of one experiment cell.
///
/// Stable across platforms and releases: only FNV-1a over the labels and
/// SplitMix64 over the integers are involved.
pub fn replication_seed(master: u64, kind: &str, cell: &str, replication: u64) -> u64 {
    let mut h = mix64(master);
    h = mix64(h ^ fnv1a(kind.as_bytes()));
    h = mix64(h ^ fnv1a(cell.as_bytes()));
    mix64(h ^ replication)
}

//! Keyed random streams.
//!
//! Every random quantity in a simulation is drawn from a stream whose seed is
//! a hash of its identity: (seed, replica, vertex) for initial frog counts and
//! (seed, replica, vertex, frog index) for a frog's lifetime and jumps. The
//! realization is therefore independent of execution order and of `p`.

use rand::SeedableRng;
use rand_pcg::Pcg64Mcg;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive combination of two keys.
pub fn combine(a: u64, b: u64) -> u64 {
    mix64(a ^ mix64(b).rotate_left(17))
}

pub fn replica_key(seed: u64, replica: u64) -> u64 {
    combine(mix64(seed), replica)
}

/// Stream for the `frog`-th frog at the vertex with key `vertex_key`.
pub fn frog_stream(vertex_key: u64, frog: u64) -> Pcg64Mcg {
    Pcg64Mcg::seed_from_u64(combine(vertex_key, frog.wrapping_add(1)))
}

/// Stream for the initial frog count at a vertex.
pub fn vertex_stream(vertex_key: u64) -> Pcg64Mcg {
    Pcg64Mcg::seed_from_u64(combine(vertex_key, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn keys_spread() {
        let mut seen = HashSet::new();
        for seed in 0..20 {
            for replica in 0..500 {
                assert!(seen.insert(replica_key(seed, replica)));
            }
        }
        assert_ne!(combine(1, 2), combine(2, 1));
    }
}

//! Seed derivation and the crate-wide deterministic random source.
//!
//! All randomness flows from a single user-facing seed. Component seeds are
//! derived by hashing `(seed, label)` so that adding a consumer never shifts
//! the stream seen by existing ones. The generator itself is ChaCha8: a
//! specified, portable stream whose output is identical on every platform.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// FNV-1a over the label, then a splitmix64 finalizer to spread the bits.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in label.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    splitmix64(seed ^ h)
}

/// One step of the splitmix64 mixer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic generator for a component, derived from the run seed.
pub fn rng_for(seed: u64, label: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, label))
}

/// Deterministic generator seeded directly.
pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn derive_is_label_sensitive() {
        let a = derive_seed(7, "synth");
        let b = derive_seed(7, "folds");
        let c = derive_seed(8, "synth");
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive_seed(7, "synth"));
    }

    #[test]
    fn streams_are_reproducible() {
        let xs: Vec<u64> = (0..4).map(|_| 0).scan(rng_for(1, "x"), |r, _| Some(r.gen())).collect();
        let ys: Vec<u64> = (0..4).map(|_| 0).scan(rng_for(1, "x"), |r, _| Some(r.gen())).collect();
        assert_eq!(xs, ys);
    }
}

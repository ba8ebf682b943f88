//! Deterministic seed derivation.
//!
//! Every randomized stage draws from its own `ChaCha8Rng` seeded by a value
//! derived here, so repeated runs and parallel schedules reproduce each other
//! exactly. There is never a generator shared between tasks.

/// Streams reserved for deriving per-repeat child seeds.
const CHILD_STREAM_BASE: u64 = 1 << 32;

/// Mix a master seed with a stream index into a new 64-bit seed.
///
/// Uses a SplitMix64 finalizer, so distinct `(master, stream)` pairs map to
/// well-scattered outputs.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for one repeat of a repeated-run protocol.
///
/// A pure function of the master seed and the repeat index; grid cells that
/// share a repeat index share its child seed, which is what makes caching the
/// hidden-view extraction across `(beta, eta)` cells exact.
pub fn child_seed(master: u64, repeat: usize) -> u64 {
    derive_seed(master, CHILD_STREAM_BASE + repeat as u64)
}

/// Split one pipeline seed into the factorization-stage and clustering-stage
/// seeds.
pub fn stage_seeds(seed: u64) -> (u64, u64) {
    (derive_seed(seed, 1), derive_seed(seed, 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_is_pure() {
        assert_eq!(derive_seed(42, 7), derive_seed(42, 7));
        assert_ne!(derive_seed(42, 7), derive_seed(42, 8));
        assert_ne!(derive_seed(42, 7), derive_seed(43, 7));
    }

    #[test]
    fn streams_do_not_collide_in_practice() {
        let mut seen = std::collections::HashSet::new();
        for master in [0u64, 1, 42, u64::MAX] {
            let (a, b) = stage_seeds(master);
            seen.insert(a);
            seen.insert(b);
            for rep in 0..64 {
                seen.insert(child_seed(master, rep));
            }
        }
        assert_eq!(seen.len(), 4 * 66);
    }
}

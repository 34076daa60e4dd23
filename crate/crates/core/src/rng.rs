//! Seeded random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 generator keyed by
//! a 64-bit seed and a stream index. Work item `i` of an experiment always reads
//! stream `i`, so results do not depend on how the items are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gf2::BitVector;

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniformly random vector in `{0,1}^n`.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> BitVector {
    let words = (0..n.div_ceil(64)).map(|_| rng.random::<u64>()).collect();
    BitVector::from_words(n, words)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| stream_rng(7, 3).random()).collect();
        let b: Vec<u64> = (0..4).map(|_| stream_rng(7, 3).random()).collect();
        assert_eq!(a, b);
        let mut s0 = stream_rng(7, 0);
        let mut s1 = stream_rng(7, 1);
        assert_ne!(s0.random::<u64>(), s1.random::<u64>());
    }

    #[test]
    fn random_vector_respects_length() {
        let mut rng = stream_rng(1, 0);
        for n in [1, 63, 64, 65, 200] {
            let v = random_vector(&mut rng, n);
            assert_eq!(v.len(), n);
            assert_eq!(v, BitVector::from_words(n, v.words().to_vec()));
        }
    }
}

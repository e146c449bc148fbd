//! Seeded randomness.
//!
//! Every randomized routine takes a [`SeededRng`]. The stream is ChaCha20
//! keyed from a 64-bit seed, which is portable and stable across platforms.
//! Workers never share a stream; derive independent ones with
//! [`SeededRng::derive`].

use rand::{CryptoRng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent stream for sub-task `index` of this seed. Does not
    /// advance `self`.
    pub fn derive(&self, index: u64) -> SeededRng {
        let mut inner = ChaCha20Rng::seed_from_u64(self.seed);
        inner.set_stream(index.wrapping_add(1));
        SeededRng {
            seed: self.seed,
            inner,
        }
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

impl CryptoRng for SeededRng {}

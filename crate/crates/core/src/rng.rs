//! Deterministic, splittable random streams.
//!
//! A [`SeededStream`] is a ChaCha8 keystream. The 256-bit key is expanded from
//! the master seed with SplitMix64 and the stream index selects one of the
//! 2^64 disjoint ChaCha streams under that key, so two streams with the same
//! seed and different indices never share keystream blocks.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::scalar::Real;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn expand_key(master_seed: u64) -> [u8; 32] {
    let mut state = master_seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

/// Random stream identified by `(master_seed, stream_index)`.
#[derive(Clone, Debug)]
pub struct SeededStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

/// Returns the stream `index` under `master_seed`.
///
/// Identical arguments yield bit-identical streams on every platform.
pub fn derive_stream(master_seed: u64, index: u64) -> SeededStream {
    let mut rng = ChaCha8Rng::from_seed(expand_key(master_seed));
    rng.set_stream(index);
    SeededStream {
        master_seed,
        stream_index: index,
        rng,
    }
}

impl SeededStream {
    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Child stream `k` of this stream.
    ///
    /// Depends only on `(master_seed, stream_index, k)`, never on how many
    /// variates have been drawn from `self`, so replicate `k` of a parallel
    /// loop sees the same numbers regardless of scheduling.
    pub fn child(&self, k: u64) -> SeededStream {
        let mut state = self.master_seed;
        let a = splitmix64(&mut state);
        let mut state = a ^ self.stream_index.wrapping_mul(GOLDEN_GAMMA);
        let child_seed = splitmix64(&mut state);
        derive_stream(child_seed, k)
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform on `(0, 1]`; safe to feed into `ln`.
    #[inline]
    pub fn uniform_open0(&mut self) -> f64 {
        1.0 - self.rng.random::<f64>()
    }

    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Standard exponential by inversion, `-ln(1 - U)`.
    #[inline]
    pub fn standard_exponential(&mut self) -> f64 {
        -self.uniform_open0().ln()
    }

    /// Unbiased integer in `0..bound` (Lemire's method inside `rand`).
    #[inline]
    pub fn below(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }

    #[inline]
    pub fn coin(&mut self) -> bool {
        self.rng.next_u32() & 1 == 1
    }

    #[inline]
    pub fn uniform_as<F: Real>(&mut self) -> F {
        F::lit(self.uniform())
    }

    #[inline]
    pub fn normal_as<F: Real>(&mut self) -> F {
        F::lit(self.standard_normal())
    }
}

impl RngCore for SeededStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

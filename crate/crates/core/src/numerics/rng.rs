//! Seeded, splittable random streams.
//!
//! The generator is ChaCha8. A stream is identified by `(master_seed,
//! stream_index)`: the 256-bit key is the first four outputs of SplitMix64
//! started at `master_seed`, and `stream_index` selects the ChaCha stream
//! (nonce). Distinct indices therefore give disjoint keystreams under one key,
//! which makes [`derive_stream`] injective over the index.
//!
//! Transforms, all fixed as part of the output contract:
//! - uniform: `(k + ½)·2⁻⁵²` with `k` the top 52 bits of one `u64`, so draws lie
//!   strictly inside (0, 1);
//! - normal: Box–Muller cosine branch, two uniforms per draw, no caching;
//! - exponential: `−mean·ln(u)`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function (Stafford variant 13).
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for a child experiment nested under `(master_seed, index)`.
///
/// Used when a replicate needs its own family of streams (for example one
/// Monte Carlo table per coverage replicate).
pub fn child_seed(master_seed: u64, index: u64) -> u64 {
    mix64(master_seed ^ mix64(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

fn key_from_seed(master_seed: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    let mut state = master_seed;
    for chunk in key.chunks_exact_mut(8) {
        state = state.wrapping_add(GOLDEN_GAMMA);
        chunk.copy_from_slice(&mix64(state).to_le_bytes());
    }
    key
}

/// A random stream. Pass it by `&mut`; never share one between threads.
#[derive(Debug, Clone)]
pub struct RngState {
    rng: ChaCha8Rng,
    master_seed: u64,
    stream_index: u64,
}

/// The stream `stream_index` under `master_seed`.
pub fn derive_stream(master_seed: u64, stream_index: u64) -> RngState {
    let mut rng = ChaCha8Rng::from_seed(key_from_seed(master_seed));
    rng.set_stream(stream_index);
    RngState { rng, master_seed, stream_index }
}

/// Maps a word to `(k + ½)·2⁻⁵²` with `k` its top 52 bits. `k + ½` fits in
/// 53 bits, so the product is exact and never reaches 0 or 1.
fn open_unit(word: u64) -> f64 {
    ((word >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

impl RngState {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        derive_stream(master_seed, stream_index)
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw strictly inside (0, 1).
    pub fn uniform(&mut self) -> f64 {
        open_unit(self.next_u64())
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn exponential(&mut self, mean: f64) -> f64 {
        -mean * self.uniform().ln()
    }

    /// Fills `out` with independent uniforms.
    pub fn fill_uniform(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.uniform();
        }
    }
}

//! Deterministic, splittable random number streams.
//!
//! A stream is identified by `(seed, stream id)`; the same pair produces the
//! same draw sequence on every platform. Child streams get fresh ids derived
//! from the parent id and a tag, and distinct ids select disjoint keystreams
//! of the underlying counter-based generator, so children never overlap.

use crate::tensor::Tensor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Well-known child tags used by the samplers so that toggling one consumer
/// (e.g. adaptation) cannot shift the draws of another.
pub mod tags {
    pub const INIT_NOISE: u64 = 1;
    pub const DDIM_NOISE: u64 = 2;
    pub const LORA_INIT: u64 = 3;
    pub const MEASUREMENT: u64 = 4;
    pub const DATASET: u64 = 5;
    pub const TRAINING: u64 = 6;
}

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut key = [0u8; 32];
        for (chunk, _) in key.chunks_exact_mut(8).zip(0..4) {
            chunk.copy_from_slice(&seed.to_le_bytes());
        }
        let mut inner = ChaCha8Rng::from_seed(key);
        inner.set_stream(stream);
        RngStream {
            seed,
            stream,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Derive a child stream. The child's id mixes the parent id and the tag;
    /// its draw position starts at zero independent of the parent's position.
    pub fn child(&self, tag: u64) -> RngStream {
        let id = splitmix64(self.stream ^ splitmix64(tag.wrapping_add(1)));
        Self::with_stream(self.seed, id)
    }

    pub fn normal_f32(&mut self) -> f32 {
        self.inner.sample(StandardNormal)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform_f32(&mut self) -> f32 {
        self.inner.gen::<f32>()
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn int_range(&mut self, lo: usize, hi: usize) -> usize {
        self.inner.gen_range(lo..=hi)
    }

    /// Uniform float in `[lo, hi)`.
    pub fn range_f32(&mut self, lo: f32, hi: f32) -> f32 {
        lo + (hi - lo) * self.uniform_f32()
    }

    pub fn fill_normal(&mut self, out: &mut [f32]) {
        for v in out {
            *v = self.normal_f32();
        }
    }

    pub fn normal_tensor(&mut self, shape: &[usize]) -> Tensor {
        let mut t = Tensor::zeros(shape);
        self.fill_normal(t.data_mut());
        t
    }
}

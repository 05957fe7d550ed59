//! Reproducible randomness.
//!
//! All randomness comes from ChaCha8 (`rand_chacha`), which produces the
//! same stream on every platform. Independent streams are obtained either by
//! ChaCha's 64-bit stream selector or by mixing tags into a seed with
//! SplitMix64, so no two consumers ever share generator state.
//!
//! Normal variates use the Box–Muller transform on two uniforms in (0, 1],
//! returning both outputs of each pair in order.

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type MdsRng = ChaCha8Rng;

/// Generator for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> MdsRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `tags` into `master` one at a time with SplitMix64.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    tags.iter()
        .fold(splitmix64(master), |acc, &t| splitmix64(acc ^ splitmix64(t)))
}

/// Box–Muller standard normal sampler.
#[derive(Debug, Default, Clone)]
pub struct NormalSampler {
    spare: Option<f64>,
}

impl NormalSampler {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sample<R: RngCore + ?Sized>(&mut self, rng: &mut R) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 53-bit uniform in (0, 1]; the shift keeps ln() finite.
        let u1 = ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

/// Uniform random permutation of `0..n`.
pub fn permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    idx
}

/// `count` distinct elements of `items`, drawn uniformly, in draw order.
pub fn sample_without_replacement<R: Rng + ?Sized>(
    items: &[usize],
    count: usize,
    rng: &mut R,
) -> Vec<usize> {
    let count = count.min(items.len());
    rand::seq::index::sample(rng, items.len(), count)
        .into_iter()
        .map(|k| items[k])
        .collect()
}

//! Reproducible random streams.
//!
//! Every random quantity in the crate comes from ChaCha8 (`rand_chacha`),
//! keyed by `seed` through `SeedableRng::seed_from_u64` and positioned on the
//! 64-bit stream given by the draw or query index. The stream for index `i`
//! is therefore fixed by `(seed, i)` alone and does not depend on how work is
//! split across threads.
//!
//! Uniforms take the top 53 bits of `next_u64`. Normals use the Marsaglia
//! polar method, both variates of each accepted pair consumed in order.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Separates hash-draw streams from other consumers sharing one user seed.
pub(crate) const DOMAIN_HASH: u64 = 0;
pub(crate) const DOMAIN_TIES: u64 = 0x7469_6573; // "ties"
pub(crate) const DOMAIN_SAMPLE: u64 = 0x7361_6d70; // "samp"
pub(crate) const DOMAIN_SYNTH: u64 = 0x7379_6e74; // "synt"
pub(crate) const DOMAIN_SVD: u64 = 0x7376_6400; // "svd"

pub struct Stream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Stream {
    pub fn new(seed: u64, domain: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ domain.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        rng.set_stream(index);
        Self { rng, spare: None }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }

    pub fn normals(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.normal()).collect()
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        // Lemire's multiply-shift with rejection keeps this unbiased.
        let n = n as u64;
        let threshold = n.wrapping_neg() % n;
        loop {
            let x = self.rng.next_u64();
            let m = (x as u128) * (n as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as usize;
            }
        }
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = {
            let mut s = Stream::new(7, DOMAIN_HASH, 3);
            (0..8).map(|_| s.uniform()).collect()
        };
        let b: Vec<f64> = {
            let mut s = Stream::new(7, DOMAIN_HASH, 3);
            (0..8).map(|_| s.uniform()).collect()
        };
        let c: Vec<f64> = {
            let mut s = Stream::new(7, DOMAIN_HASH, 4);
            (0..8).map(|_| s.uniform()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().all(|u| (0.0..1.0).contains(u)));
    }

    #[test]
    fn normal_moments() {
        let mut s = Stream::new(1, DOMAIN_HASH, 0);
        let n = 200_000;
        let xs = s.normals(n);
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.01, "var {var}");
    }

    #[test]
    fn shuffle_is_permutation() {
        let mut s = Stream::new(3, DOMAIN_TIES, 9);
        let mut v: Vec<usize> = (0..100).collect();
        s.shuffle(&mut v);
        let mut sorted = v.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..100).collect::<Vec<_>>());
        assert_ne!(v, sorted);
    }
}

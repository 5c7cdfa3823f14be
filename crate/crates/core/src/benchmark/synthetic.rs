use super::ratings::RatingsMatrix;
use super::svd::{pure_svd, Factorization, SvdOptions};
use crate::error::{invalid, Result};
use crate::rng::{Stream, DOMAIN_SYNTH};

/// Shape of a synthetic ratings matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub n_users: usize,
    pub n_items: usize,
    /// Rank of the latent signal.
    pub rank: usize,
    /// Probability that a given (user, item) rating is observed.
    pub density: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_users: 500,
            n_items: 1000,
            rank: 50,
            density: 0.2,
        }
    }
}

/// Ratings `3.5 + 1.5·⟨u, v⟩ + 0.3·ε` on a random subset of cells.
///
/// User vectors are `N(0, I/rank)`; item vectors are `N(0, I/rank)` scaled by
/// a log-normal popularity factor, so item norms spread out the way they do
/// in real rating data and maximum inner product differs from maximum cosine.
pub fn synthetic_ratings(spec: &SyntheticSpec, seed: u64) -> Result<RatingsMatrix> {
    if spec.n_users == 0 || spec.n_items == 0 || spec.rank == 0 {
        return Err(invalid(
            "synthetic matrix needs positive users, items and rank",
        ));
    }
    if !(spec.density > 0.0 && spec.density <= 1.0) {
        return Err(invalid(format!(
            "density must lie in (0, 1], got {}",
            spec.density
        )));
    }
    let scale = 1.0 / (spec.rank as f64).sqrt();
    let mut s = Stream::new(seed, DOMAIN_SYNTH, 0);
    let users: Vec<Vec<f64>> = (0..spec.n_users)
        .map(|_| (0..spec.rank).map(|_| s.normal() * scale).collect())
        .collect();
    let items: Vec<Vec<f64>> = (0..spec.n_items)
        .map(|_| {
            let popularity = (0.5 * s.normal()).exp();
            (0..spec.rank)
                .map(|_| s.normal() * scale * popularity)
                .collect()
        })
        .collect();
    let mut triples = Vec::new();
    for (u, uv) in users.iter().enumerate() {
        for (i, iv) in items.iter().enumerate() {
            if s.uniform() < spec.density {
                let signal: f64 = uv.iter().zip(iv).map(|(a, b)| a * b).sum();
                triples.push((u, i, 3.5 + 1.5 * signal + 0.3 * s.normal()));
            }
        }
    }
    RatingsMatrix::from_triples(spec.n_users, spec.n_items, triples)
}

/// pureSVD factors of [`synthetic_ratings`] at rank `spec.rank`.
pub fn synthetic_factors(spec: &SyntheticSpec, seed: u64) -> Result<Factorization> {
    let z = synthetic_ratings(spec, seed)?;
    pure_svd(
        &z,
        spec.rank,
        &SvdOptions {
            seed,
            ..SvdOptions::default()
        },
    )
}

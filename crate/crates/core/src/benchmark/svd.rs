//! Truncated SVD by randomized subspace iteration, and the pureSVD
//! factorization built on it.
//!
//! The range of `A` is tracked with an `n × l` block (`l = f + oversample`,
//! capped at `min(rows, cols)`), started from a seeded Gaussian sketch and
//! refined by alternating multiplications with `A` and `Aᵀ`, re-orthonormalized
//! by QR at every step. Each round projects `A` onto the block and takes a
//! small dense SVD; iteration stops once the top `f` singular values move by
//! less than `tol · σ₁` between rounds.

use nalgebra::DMatrix;

use super::ratings::RatingsMatrix;
use crate::error::{invalid, Error, Result};
use crate::rng::{Stream, DOMAIN_SVD};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvdOptions {
    pub oversample: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SvdOptions {
    fn default() -> Self {
        Self {
            oversample: 10,
            max_iters: 300,
            tol: 1e-13,
            seed: 0,
        }
    }
}

/// `A ≈ U·diag(σ)·Vᵀ` with singular values in descending order.
#[derive(Debug, Clone)]
pub struct TruncatedSvd {
    pub u: DMatrix<f64>,
    pub singular_values: Vec<f64>,
    pub v: DMatrix<f64>,
}

impl TruncatedSvd {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut us = self.u.clone();
        for (j, s) in self.singular_values.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * self.v.transpose()
    }
}

fn orthonormalize(m: DMatrix<f64>) -> DMatrix<f64> {
    m.qr().q()
}

fn project(a: &DMatrix<f64>, q: &DMatrix<f64>, f: usize) -> TruncatedSvd {
    let b = q.transpose() * a;
    let svd = b.svd(true, true);
    let (bu, bvt) = (svd.u.expect("u requested"), svd.v_t.expect("v_t requested"));
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    order.truncate(f);
    let u_small = DMatrix::from_fn(bu.nrows(), f, |r, c| bu[(r, order[c])]);
    let v = DMatrix::from_fn(bvt.ncols(), f, |r, c| bvt[(order[c], r)]);
    TruncatedSvd {
        u: q * u_small,
        singular_values: order.iter().map(|&i| svd.singular_values[i]).collect(),
        v,
    }
}

/// Top-`f` singular triplets of `a`.
pub fn truncated_svd(a: &DMatrix<f64>, f: usize, opts: &SvdOptions) -> Result<TruncatedSvd> {
    let (rows, cols) = a.shape();
    let rank_cap = rows.min(cols);
    if f == 0 || f > rank_cap {
        return Err(invalid(format!("rank f = {f} must lie in 1..={rank_cap}")));
    }
    let l = (f + opts.oversample).min(rank_cap);
    let mut stream = Stream::new(opts.seed, DOMAIN_SVD, 0);
    let omega = DMatrix::from_fn(cols, l, |_, _| stream.normal());
    let mut q = orthonormalize(a * omega);
    let mut prev: Option<Vec<f64>> = None;
    for _ in 0..opts.max_iters {
        let current = project(a, &q, f);
        let scale = current.singular_values[0];
        if let Some(p) = &prev {
            let moved = p
                .iter()
                .zip(&current.singular_values)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            if moved <= opts.tol * scale || scale == 0.0 {
                return Ok(current);
            }
        }
        prev = Some(current.singular_values);
        let z = orthonormalize(a.transpose() * &q);
        q = orthonormalize(a * z);
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iters,
    })
}

/// User factors `L = WΣ` and item factors `R` of a rank-`f` approximation `Y = L·Rᵀ`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub users: DMatrix<f64>,
    pub items: DMatrix<f64>,
}

impl Factorization {
    pub fn new(users: DMatrix<f64>, items: DMatrix<f64>) -> Result<Self> {
        if users.ncols() != items.ncols() || users.ncols() == 0 {
            return Err(invalid("user and item factors need the same positive rank"));
        }
        if users.iter().chain(items.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("factors must be finite"));
        }
        Ok(Self { users, items })
    }

    pub fn rank(&self) -> usize {
        self.users.ncols()
    }

    pub fn user_rows(&self) -> Vec<Vec<f64>> {
        rows(&self.users)
    }

    pub fn item_rows(&self) -> Vec<Vec<f64>> {
        rows(&self.items)
    }
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Mean-centered, zero-filled rating matrix: observed entries minus the global mean.
pub fn centered_matrix(z: &RatingsMatrix) -> DMatrix<f64> {
    let mean = z.mean_rating();
    let mut m = DMatrix::zeros(z.n_users(), z.n_items());
    for &(u, i, r) in z.entries() {
        m[(u, i)] = r - mean;
    }
    m
}

/// pureSVD: subtract the global mean from every observed rating, zero-fill the
/// rest, and keep the top `f` singular components. `L = WΣ`, `R = V`.
pub fn pure_svd(z: &RatingsMatrix, f: usize, opts: &SvdOptions) -> Result<Factorization> {
    let a = centered_matrix(z);
    let svd = truncated_svd(&a, f, opts)?;
    let mut users = svd.u.clone();
    for (j, s) in svd.singular_values.iter().enumerate() {
        users.column_mut(j).scale_mut(*s);
    }
    Factorization::new(users, svd.v)
}

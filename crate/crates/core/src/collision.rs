//! Collision probabilities of the hash families, analytic and sampled.

use std::f64::consts::{PI, SQRT_2};

use libm::{erf, erfc};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::hashers::HashDraw;
use crate::model::{dot, norm, NORM_TOL};
use crate::transforms::{Scheme, Side};

/// A value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(invalid(format!("probability {value} outside [0, 1]")));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Standard normal CDF, `Φ(x) = erfc(−x/√2)/2`.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Collision probability of a random hyperplane for two vectors at cosine `cos_sim`:
/// `1 − arccos(cos_sim)/π`.
pub fn sign_collision(cos_sim: f64) -> Result<Probability> {
    if !(-1.0 - NORM_TOL..=1.0 + NORM_TOL).contains(&cos_sim) {
        return Err(invalid(format!("cosine {cos_sim} outside [-1, 1]")));
    }
    Ok(Probability(1.0 - cos_sim.clamp(-1.0, 1.0).acos() / PI))
}

/// Collision probability `F_r(δ)` of the quantized L2 hash with width `r` for
/// two points at distance `δ`:
///
/// `F_r(δ) = 1 − 2Φ(−r/δ) − 2/(√(2π)·(r/δ))·(1 − exp(−(r/δ)²/2))`,
///
/// evaluated as `erf(s/√2) + 2/(√(2π)s)·expm1(−s²/2)` with `s = r/δ`.
pub fn l2_collision(delta: f64, r: f64) -> Result<Probability> {
    if delta.is_nan() || delta < 0.0 {
        return Err(invalid(format!(
            "distance must be nonnegative, got {delta}"
        )));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(invalid(format!("r must be positive, got {r}")));
    }
    if delta == 0.0 {
        return Ok(Probability(1.0));
    }
    if delta.is_infinite() {
        return Ok(Probability(0.0));
    }
    let s = r / delta;
    if s.is_infinite() {
        return Ok(Probability(1.0));
    }
    let f = erf(s / SQRT_2) + 2.0 / ((2.0 * PI).sqrt() * s) * (-0.5 * s * s).exp_m1();
    Ok(Probability(f.clamp(0.0, 1.0)))
}

/// Sign-hash collision probability of two arbitrary vectors.
///
/// A zero vector always hashes to `+1`, so it collides with a nonzero vector
/// half the time and with another zero vector always.
pub fn angular_collision(a: &[f64], b: &[f64]) -> Result<Probability> {
    let (na, nb) = (norm(a), norm(b));
    match (na == 0.0, nb == 0.0) {
        (true, true) => Ok(Probability(1.0)),
        (true, false) | (false, true) => Ok(Probability(0.5)),
        (false, false) => sign_collision((dot(a, b) / (na * nb)).clamp(-1.0, 1.0)),
    }
}

/// Exact probability that database point `x` and query `q` collide under one
/// hash draw of `scheme`.
pub fn analytic_collision(scheme: &Scheme, x: &[f64], q: &[f64]) -> Result<Probability> {
    if x.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: q.len(),
        });
    }
    let px = scheme.transform(x, Side::Data)?;
    let qq = scheme.transform(q, Side::Query)?;
    match scheme {
        Scheme::L2Alsh(p) => {
            let dist_sq: f64 = px.iter().zip(&qq).map(|(a, b)| (a - b) * (a - b)).sum();
            l2_collision(dist_sq.sqrt(), p.r())
        }
        _ => angular_collision(&px, &qq),
    }
}

/// Empirical collision rate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub p: f64,
    pub stderr: f64,
    pub n: u64,
}

impl McEstimate {
    fn from_counts(hits: u64, n: u64) -> Self {
        let p = hits as f64 / n as f64;
        Self {
            p,
            stderr: (p * (1.0 - p) / n as f64).sqrt(),
            n,
        }
    }
}

/// Fraction of `n` independent draws (indices `0..n` under `seed`) on which
/// `x` and `q` receive the same symbol.
pub fn monte_carlo_collision(
    scheme: &Scheme,
    x: &[f64],
    q: &[f64],
    n: u64,
    seed: u64,
) -> Result<McEstimate> {
    if n == 0 {
        return Err(invalid("sample count must be at least 1"));
    }
    if x.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: q.len(),
        });
    }
    let px = scheme.transform(x, Side::Data)?;
    let qq = scheme.transform(q, Side::Query)?;
    let hits = (0..n)
        .into_par_iter()
        .map(|i| -> Result<u64> {
            let draw = HashDraw::generate(scheme, px.len(), seed, i);
            Ok(u64::from(draw.symbol(&px)? == draw.symbol(&qq)?))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(McEstimate::from_counts(hits, n))
}

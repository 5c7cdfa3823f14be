//! Domain types shared by every scheme, plus the preprocessing that puts a
//! MIPS instance into hashable form: queries on the unit sphere, database
//! vectors inside the unit ball.

use crate::error::{invalid, Error, Result};

/// Slack allowed on "unit norm" and "inside the ball" checks.
pub const NORM_TOL: f64 = 1e-12;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

pub(crate) fn check_finite(points: &[Vec<f64>]) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
    }
    Ok(())
}

fn check_uniform(points: &[Vec<f64>]) -> Result<usize> {
    let first = points.first().ok_or(Error::Empty("point set"))?;
    let dim = first.len();
    if dim == 0 {
        return Err(invalid("points must have dimension >= 1"));
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
    }
    check_finite(points)?;
    Ok(dim)
}

/// Database vectors. Nonempty, uniform dimension, finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Vec<Vec<f64>>,
    dim: usize,
}

impl Dataset {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = check_uniform(&points)?;
        Ok(Self { points, dim })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Vec<f64>> {
        self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_norm(&self) -> f64 {
        self.points.iter().map(|p| norm(p)).fold(0.0, f64::max)
    }

    /// Every point satisfies `‖x‖ ≤ 1 + NORM_TOL`.
    pub fn norm_bound_ok(&self) -> bool {
        self.max_norm() <= 1.0 + NORM_TOL
    }
}

/// Query vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct QuerySet {
    points: Vec<Vec<f64>>,
    dim: usize,
}

impl QuerySet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = check_uniform(&points)?;
        Ok(Self { points, dim })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Vec<f64>> {
        self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Every query has `‖q‖ = 1 ± NORM_TOL`.
    pub fn normalized(&self) -> bool {
        self.points
            .iter()
            .all(|q| (norm(q) - 1.0).abs() <= NORM_TOL)
    }
}

/// Scales every query to unit length. Zero queries are rejected with their index.
pub fn normalize_queries(qs: &QuerySet) -> Result<QuerySet> {
    let mut out = Vec::with_capacity(qs.len());
    for (index, q) in qs.points().iter().enumerate() {
        let n = norm(q);
        if n == 0.0 {
            return Err(Error::ZeroNorm { index });
        }
        out.push(q.iter().map(|v| v / n).collect());
    }
    Ok(QuerySet {
        points: out,
        dim: qs.dim,
    })
}

/// Divides every point by the maximum norm when that norm exceeds one.
///
/// A single global scale leaves `argmax_x q·x` unchanged for every query.
/// Returns the scale that was divided out (1 when nothing changed).
pub fn rescale_dataset(ds: &Dataset) -> (Dataset, f64) {
    let m = ds.max_norm();
    if m <= 1.0 {
        return (ds.clone(), 1.0);
    }
    let points = ds
        .points()
        .iter()
        .map(|p| p.iter().map(|v| v / m).collect())
        .collect();
    (
        Dataset {
            points,
            dim: ds.dim,
        },
        m,
    )
}

/// The `(S, cS)` gap of an LSH instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdPair {
    s: f64,
    c: f64,
}

impl ThresholdPair {
    pub fn new(s: f64, c: f64) -> Result<Self> {
        if !(s > 0.0 && s <= 1.0) {
            return Err(invalid(format!("S must lie in (0, 1], got {s}")));
        }
        if !(c > 0.0 && c < 1.0) {
            return Err(invalid(format!("c must lie in (0, 1), got {c}")));
        }
        Ok(Self { s, c })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// The low-similarity threshold `cS`.
    pub fn cs(&self) -> f64 {
        self.c * self.s
    }
}

/// Collision probabilities `(p1, p2)` of an `(S, cS, p1, p2)` hash.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionPair {
    pub p1: f64,
    pub p2: f64,
}

/// `ρ = log p1 / log p2`. Requires `0 < p2 < p1 < 1`.
pub fn hashing_quality(pair: CollisionPair) -> Result<f64> {
    let CollisionPair { p1, p2 } = pair;
    if !(p1.is_finite() && p2.is_finite()) {
        return Err(invalid("collision probabilities must be finite"));
    }
    if p1 <= p2 {
        return Err(invalid(format!(
            "p1 = {p1} must exceed p2 = {p2} for a valid LSH"
        )));
    }
    if p1 >= 1.0 || p2 <= 0.0 {
        return Err(invalid(format!(
            "degenerate collision probabilities p1 = {p1}, p2 = {p2}"
        )));
    }
    Ok(p1.ln() / p2.ln())
}

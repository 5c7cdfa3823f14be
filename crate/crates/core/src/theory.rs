//! Explicit counterexamples for the parameterized asymmetric schemes, and for
//! symmetric hashing with bounded queries.
//!
//! Each constructor builds a "far" pair (similarity at least `S`) and a
//! "near" pair (similarity at most `cS`) such that, after the scheme's
//! transforms, the near pair is at least as likely to collide as the far
//! pair. That rules out `p1 > p2`. Constructions live in a 2-D subspace and
//! can be zero-padded to any larger dimension with [`Witness::embed`].

use serde::Serialize;

use crate::collision::{analytic_collision, monte_carlo_collision, McEstimate};
use crate::error::{Error, Result};
use crate::model::{dot, norm, ThresholdPair};
use crate::transforms::{pow_two_pow, L2AlshParams, Scheme, Side, SignAlshParams};

/// Margins within this distance of zero are reported as zero.
pub const MARGIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaId {
    /// L2-ALSH is not an ALSH for `c` close enough to 1 (normalized queries).
    L2Nonuniversal,
    /// No symmetric hash works when queries are only bounded.
    NoSymmetricLsh,
    /// L2-ALSH fails for bounded queries whenever `S < (c+1)/2`.
    L2Bounded,
    /// SIGN-ALSH is not an ALSH for `c` close enough to 1 (normalized queries).
    SignNonuniversal,
    /// SIGN-ALSH fails for bounded queries for every `(S, c)`.
    SignBounded,
}

impl LemmaId {
    pub const ALL: [LemmaId; 5] = [
        LemmaId::L2Nonuniversal,
        LemmaId::NoSymmetricLsh,
        LemmaId::L2Bounded,
        LemmaId::SignNonuniversal,
        LemmaId::SignBounded,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            LemmaId::L2Nonuniversal => "l2-nonuniversal",
            LemmaId::NoSymmetricLsh => "no-symmetric-lsh",
            LemmaId::L2Bounded => "l2-bounded",
            LemmaId::SignNonuniversal => "sign-nonuniversal",
            LemmaId::SignBounded => "sign-bounded",
        }
    }
}

impl std::str::FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown lemma '{s}'")))
    }
}

/// What the margin measures. Positive always means "the near pair wins".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarginKind {
    /// `‖P(x_far) − Q(q_far)‖² − ‖P(x_near) − Q(q_near)‖²`.
    DistanceSq,
    /// `cos(P(x_near), Q(q_near)) − cos(P(x_far), Q(q_far))`.
    Cosine,
    /// `Pr[near collides] − Pr[far collides]`.
    Collision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MarginOutcome {
    Positive,
    Zero,
    Negative,
}

/// A query and a database point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityPair {
    pub query: Vec<f64>,
    pub point: Vec<f64>,
}

impl SimilarityPair {
    fn new(query: Vec<f64>, point: Vec<f64>) -> Self {
        Self { query, point }
    }

    pub fn similarity(&self) -> f64 {
        dot(&self.query, &self.point)
    }

    fn padded(&self, dim: usize) -> Self {
        let pad = |v: &[f64]| {
            let mut out = v.to_vec();
            out.resize(dim, 0.0);
            out
        };
        Self::new(pad(&self.query), pad(&self.point))
    }

    fn transformed(&self, scheme: &Scheme) -> Result<(Vec<f64>, Vec<f64>)> {
        Ok((
            scheme.transform(&self.point, Side::Data)?,
            scheme.transform(&self.query, Side::Query)?,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub lemma: LemmaId,
    pub scheme: Scheme,
    pub s: f64,
    pub c: f64,
    /// Pair meant to satisfy `q·x ≥ S`.
    pub far: SimilarityPair,
    /// Pair meant to satisfy `q·x ≤ cS`.
    pub near: SimilarityPair,
    pub kind: MarginKind,
    pub margin: f64,
    /// Which of two alternative constructions was used, when a lemma has two.
    pub branch: Option<u8>,
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b) / (norm(a) * norm(b))
}

fn distance_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl Witness {
    fn build(
        lemma: LemmaId,
        scheme: Scheme,
        t: ThresholdPair,
        far: SimilarityPair,
        near: SimilarityPair,
        kind: MarginKind,
        branch: Option<u8>,
    ) -> Result<Self> {
        let mut w = Self {
            lemma,
            scheme,
            s: t.s(),
            c: t.c(),
            far,
            near,
            kind,
            margin: 0.0,
            branch,
        };
        w.margin = w.evaluate_margin()?;
        Ok(w)
    }

    /// Margin recomputed from the stored vectors.
    pub fn evaluate_margin(&self) -> Result<f64> {
        Ok(match self.kind {
            MarginKind::DistanceSq => {
                let (pf, qf) = self.far.transformed(&self.scheme)?;
                let (pn, qn) = self.near.transformed(&self.scheme)?;
                distance_sq(&pf, &qf) - distance_sq(&pn, &qn)
            }
            MarginKind::Cosine => {
                let (pf, qf) = self.far.transformed(&self.scheme)?;
                let (pn, qn) = self.near.transformed(&self.scheme)?;
                cosine(&pn, &qn) - cosine(&pf, &qf)
            }
            MarginKind::Collision => {
                analytic_collision(&self.scheme, &self.near.point, &self.near.query)?.value()
                    - analytic_collision(&self.scheme, &self.far.point, &self.far.query)?.value()
            }
        })
    }

    pub fn outcome(&self) -> MarginOutcome {
        if self.margin > MARGIN_TOL {
            MarginOutcome::Positive
        } else if self.margin >= -MARGIN_TOL {
            MarginOutcome::Zero
        } else {
            MarginOutcome::Negative
        }
    }

    /// `q·x_far ≥ S` and `q·y_near ≤ cS`, each within `1e-12`.
    pub fn similarity_constraints_hold(&self) -> bool {
        self.far.similarity() >= self.s - 1e-12 && self.near.similarity() <= self.c * self.s + 1e-12
    }

    /// The same construction zero-padded to `dim` coordinates.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        let current = self.far.query.len();
        if dim < current {
            return Err(Error::InvalidParameter(format!(
                "cannot embed a {current}-D witness in {dim} dimensions"
            )));
        }
        let mut w = self.clone();
        w.far = self.far.padded(dim);
        w.near = self.near.padded(dim);
        w.margin = w.evaluate_margin()?;
        Ok(w)
    }

    /// Sampled collision rates of both pairs, from independent streams.
    pub fn monte_carlo_check(&self, n: u64, seed: u64) -> Result<McComparison> {
        let near =
            monte_carlo_collision(&self.scheme, &self.near.point, &self.near.query, n, seed)?;
        let far = monte_carlo_collision(
            &self.scheme,
            &self.far.point,
            &self.far.query,
            n,
            seed ^ 0x5555_5555_5555_5555,
        )?;
        Ok(McComparison { near, far })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McComparison {
    pub near: McEstimate,
    pub far: McEstimate,
}

impl McComparison {
    pub fn stderr(&self) -> f64 {
        (self.near.stderr.powi(2) + self.far.stderr.powi(2)).sqrt()
    }

    /// `p̂(near) ≥ p̂(far) − 3·stderr`.
    pub fn near_not_less_likely(&self) -> bool {
        self.near.p >= self.far.p - 3.0 * self.stderr()
    }
}

fn unit_at_angle(s: f64) -> Vec<f64> {
    vec![s, (1.0 - s * s).max(0.0).sqrt()]
}

/// `1 − U^(2^(m+1)−1)·(1 − S^(2^(m+1)))/(2S)`: L2-ALSH breaks for every `c` at or above this.
pub fn l2_nonuniversal_threshold(m: u32, u: f64, s: f64) -> f64 {
    let n_pow = pow_two_pow(u * u, m + 1);
    1.0 - (n_pow / u) * (1.0 - pow_two_pow(s * s, m + 1)) / (2.0 * s)
}

/// Normalized query `q`, unit `x` with `q·x = S`, and `y = cS·q`.
/// After the L2-ALSH transforms `y` is strictly closer to `q` than `x` is.
pub fn lemma1_witness(p: L2AlshParams, t: ThresholdPair) -> Result<Witness> {
    if t.s() >= 1.0 {
        return Err(Error::Precondition("requires S < 1".into()));
    }
    let threshold = l2_nonuniversal_threshold(p.m(), p.u(), t.s());
    if t.c() < threshold {
        return Err(Error::Precondition(format!(
            "c = {} is below the threshold {threshold}",
            t.c()
        )));
    }
    let q = vec![1.0, 0.0];
    Witness::build(
        LemmaId::L2Nonuniversal,
        Scheme::L2Alsh(p),
        t,
        SimilarityPair::new(q.clone(), unit_at_angle(t.s())),
        SimilarityPair::new(q, vec![t.cs(), 0.0]),
        MarginKind::DistanceSq,
        None,
    )
}

/// Bounded queries admit no symmetric hash: with `q = x` the pair collides
/// with probability 1, so no other pair can collide more often.
///
/// The construction takes `‖x‖ = cS`, `q = x`, `y = x/c`. This gives
/// `q·x = c²S² ≤ cS`, but `q·y = cS²`, which is below `S`; the far pair does
/// not reach the upper threshold, and `similarity_constraints_hold` is false.
/// The margin compares SIMPLE-LSH collision rates on the two pairs.
pub fn thm3_witness(t: ThresholdPair) -> Result<Witness> {
    let x = vec![t.cs(), 0.0];
    let y = vec![t.s(), 0.0];
    Witness::build(
        LemmaId::NoSymmetricLsh,
        Scheme::SimpleLsh,
        t,
        SimilarityPair::new(x.clone(), y),
        SimilarityPair::new(x.clone(), x),
        MarginKind::Collision,
        None,
    )
}

/// Unit `q1`, `x1` with `q1·x1 = S`; unit `x2` with `q2 = cS·x2`. When
/// `S < (c+1)/2` the low-similarity pair is no farther apart after the
/// L2-ALSH transforms, for any `m` and `U`.
pub fn thm4_witness(p: L2AlshParams, t: ThresholdPair) -> Result<Witness> {
    if t.s() >= (t.c() + 1.0) / 2.0 {
        return Err(Error::Precondition(format!(
            "requires S < (c+1)/2 = {}",
            (t.c() + 1.0) / 2.0
        )));
    }
    Witness::build(
        LemmaId::L2Bounded,
        Scheme::L2Alsh(p),
        t,
        SimilarityPair::new(vec![1.0, 0.0], unit_at_angle(t.s())),
        SimilarityPair::new(vec![t.cs(), 0.0], vec![1.0, 0.0]),
        MarginKind::DistanceSq,
        None,
    )
}

/// The two lower bounds on `c` above which SIGN-ALSH breaks:
/// `√(1 − U^N(1 − S^N)/(U^N + m/4))` and `α_m/(SU)` with
/// `α_m = ((m/2)/(N − 2))^(1/N)`, `N = 2^(m+1)`.
pub fn sign_nonuniversal_bounds(m: u32, u: f64, s: f64) -> (f64, f64) {
    let un = pow_two_pow(u * u, m + 1);
    let sn = pow_two_pow(s * s, m + 1);
    let b1 = (1.0 - un * (1.0 - sn) / (un + m as f64 / 4.0)).sqrt();
    (b1, sign_alpha(m) / (s * u))
}

/// Maximizer of `t²/(m/4 + t^(2^(m+1)))`.
pub fn sign_alpha(m: u32) -> f64 {
    let n = 2f64.powi(m as i32 + 1);
    ((m as f64 / 2.0) / (n - 2.0)).powf(1.0 / n)
}

/// Normalized query `q`, unit `x` with `q·x = S`, and either `y = cS·q`
/// (branch 1) or `y = (α_m/U)·q` (branch 2). Branch 1 is used whenever `c`
/// clears its bound.
pub fn signalsh_nonuniversal_witness(p: SignAlshParams, t: ThresholdPair) -> Result<Witness> {
    if t.s() >= 1.0 {
        return Err(Error::Precondition("requires S < 1".into()));
    }
    let (b1, b2) = sign_nonuniversal_bounds(p.m(), p.u(), t.s());
    let (y, branch) = if t.c() >= b1 {
        (vec![t.cs(), 0.0], 1)
    } else if t.c() >= b2 {
        (vec![sign_alpha(p.m()) / p.u(), 0.0], 2)
    } else {
        return Err(Error::Precondition(format!(
            "c = {} is below both bounds ({b1}, {b2})",
            t.c()
        )));
    };
    let q = vec![1.0, 0.0];
    Witness::build(
        LemmaId::SignNonuniversal,
        Scheme::SignAlsh(p),
        t,
        SimilarityPair::new(q.clone(), unit_at_angle(t.s())),
        SimilarityPair::new(q, y),
        MarginKind::Cosine,
        Some(branch),
    )
}

/// Same pairs as [`thm4_witness`] under SIGN-ALSH. The normalized cosines are
/// `U/√(m/4 + U^N)` (near) and `SU/√(m/4 + U^N)` (far), so the margin is
/// `(1 − S)·U/√(m/4 + U^N) ≥ 0` for every `(S, c)`, and zero at `S = 1`.
pub fn signalsh_bounded_witness(p: SignAlshParams, t: ThresholdPair) -> Result<Witness> {
    Witness::build(
        LemmaId::SignBounded,
        Scheme::SignAlsh(p),
        t,
        SimilarityPair::new(vec![1.0, 0.0], unit_at_angle(t.s())),
        SimilarityPair::new(vec![t.cs(), 0.0], vec![1.0, 0.0]),
        MarginKind::Cosine,
        None,
    )
}

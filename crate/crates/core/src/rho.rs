//! Hashing quality `ρ = log p1 / log p2` for each scheme.
//!
//! SIMPLE-LSH has a closed form. The two parameterized asymmetric schemes are
//! optimized by exhaustive search over a grid of `(m, U[, r])`, with `p1` and
//! `p2` taken at the worst-case pairs of the `(S, cS)` problem:
//!
//! * `p1` is the smallest collision probability over pairs with `q·x ≥ S`
//!   (`‖q‖ = 1`, `‖x‖ ≤ 1`). Both schemes are worst at `q·x = S`, `‖x‖ = 1`.
//! * `p2` is the largest collision probability over pairs with `q·x ≤ cS`.
//!   Writing `t = q·x` and `s = U‖x‖ ≥ Ut`, L2-ALSH's squared distance is
//!   `1 + m/4 + s^N − 2Ut` and SIGN-ALSH's cosine is `Ut/√(m/4 + s^N)` with
//!   `N = 2^(m+1)`. Both are optimized at `s = Ut`, where `s^N − 2s` is
//!   minimal at `β = (2/N)^(1/(N−1))` and `s/√(m/4 + s^N)` is maximal at
//!   `α = ((m/2)/(N−2))^(1/N)`. The worst case is therefore at
//!   `s = min(cSU, β)` resp. `s = min(cSU, α)`, not always at `s = cSU`.
//!
//! The default grid is a reconstruction: `m ∈ 1..=6`, `U ∈ {0.01, …, 0.99}`,
//! `r ∈ {0.1, …, 5.0}`. It contains the commonly quoted operating points
//! (e.g. `m = 3, U = 0.83, r = 2.5`); the original grid was never published.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::collision::{l2_collision, sign_collision};
use crate::error::{invalid, Error, Result};
use crate::fmt::sig10;
use crate::model::{hashing_quality, CollisionPair, ThresholdPair};
use crate::transforms::{pow_two_pow, L2AlshParams, Scheme, SignAlshParams};

/// Search grid for the parameterized schemes. SIGN-ALSH ignores `r_values`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub m_values: Vec<u32>,
    pub u_values: Vec<f64>,
    pub r_values: Vec<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            m_values: (1..=6).collect(),
            u_values: (1..=99).map(|i| i as f64 / 100.0).collect(),
            r_values: (1..=50).map(|i| i as f64 / 10.0).collect(),
        }
    }
}

impl GridSpec {
    pub fn new(m_values: Vec<u32>, u_values: Vec<f64>, r_values: Vec<f64>) -> Result<Self> {
        let grid = Self {
            m_values,
            u_values,
            r_values,
        };
        grid.validate(true)?;
        Ok(grid)
    }

    fn validate(&self, need_r: bool) -> Result<()> {
        if self.m_values.is_empty() || self.u_values.is_empty() {
            return Err(invalid("grid needs at least one m and one U value"));
        }
        if need_r && self.r_values.is_empty() {
            return Err(invalid("grid needs at least one r value"));
        }
        for &m in &self.m_values {
            SignAlshParams::new(m, 0.5)?;
        }
        for &u in &self.u_values {
            SignAlshParams::new(1, u)?;
        }
        for &r in &self.r_values {
            L2AlshParams::new(1, 0.5, r)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoResult {
    pub rho: f64,
    /// Minimizing parameters; `None` for the parameter-free scheme.
    pub argmin: Option<Scheme>,
    pub p1: f64,
    pub p2: f64,
}

/// A grid search either finds a valid hash or none of its points separates `S` from `cS`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RhoOutcome {
    Feasible(RhoResult),
    Infeasible,
}

impl RhoOutcome {
    pub fn rho(&self) -> Option<f64> {
        match self {
            RhoOutcome::Feasible(r) => Some(r.rho),
            RhoOutcome::Infeasible => None,
        }
    }

    pub fn result(&self) -> Option<&RhoResult> {
        match self {
            RhoOutcome::Feasible(r) => Some(r),
            RhoOutcome::Infeasible => None,
        }
    }
}

/// `ρ = log(1 − arccos(S)/π) / log(1 − arccos(cS)/π)`.
pub fn rho_simple(t: ThresholdPair) -> Result<RhoResult> {
    if t.s() >= 1.0 {
        return Err(invalid("rho_simple needs S < 1"));
    }
    let p1 = sign_collision(t.s())?.value();
    let p2 = sign_collision(t.cs())?.value();
    Ok(RhoResult {
        rho: hashing_quality(CollisionPair { p1, p2 })?,
        argmin: None,
        p1,
        p2,
    })
}

fn big_n(m: u32) -> f64 {
    2f64.powi(m as i32 + 1)
}

/// Largest `‖P(x) − Q(q)‖²` over `q·x ≥ S`: `1 + m/4 + U^N − 2SU`.
pub fn l2alsh_far_distance_sq(m: u32, u: f64, s: f64) -> f64 {
    1.0 + m as f64 / 4.0 + pow_two_pow(u * u, m + 1) - 2.0 * s * u
}

/// Smallest `‖P(x) − Q(q)‖²` over `q·x ≤ cS`.
pub fn l2alsh_near_distance_sq(m: u32, u: f64, cs: f64) -> f64 {
    let n = big_n(m);
    let beta = (2.0 / n).powf(1.0 / (n - 1.0));
    let t = (cs * u).min(beta);
    1.0 + m as f64 / 4.0 + pow_two_pow(t * t, m + 1) - 2.0 * t
}

fn sign_cos_at(m: u32, s: f64) -> f64 {
    s / (m as f64 / 4.0 + pow_two_pow(s * s, m + 1)).sqrt()
}

/// Smallest cosine between `P(x)` and `Q(q)` over `q·x ≥ S`: `SU/√(m/4 + U^N)`.
pub fn signalsh_far_cosine(m: u32, u: f64, s: f64) -> f64 {
    s * u / (m as f64 / 4.0 + pow_two_pow(u * u, m + 1)).sqrt()
}

/// Largest cosine between `P(x)` and `Q(q)` over `q·x ≤ cS`.
pub fn signalsh_near_cosine(m: u32, u: f64, cs: f64) -> f64 {
    let n = big_n(m);
    let alpha = ((m as f64 / 2.0) / (n - 2.0)).powf(1.0 / n);
    sign_cos_at(m, (cs * u).min(alpha))
}

struct Candidate {
    rho: f64,
    p1: f64,
    p2: f64,
    scheme: Scheme,
}

fn pick_min(candidates: impl IntoIterator<Item = Option<Candidate>>) -> Result<RhoOutcome> {
    let mut best: Option<Candidate> = None;
    for c in candidates.into_iter().flatten() {
        if best.as_ref().is_none_or(|b| c.rho < b.rho) {
            best = Some(c);
        }
    }
    Ok(match best {
        Some(b) => RhoOutcome::Feasible(RhoResult {
            rho: b.rho,
            argmin: Some(b.scheme),
            p1: b.p1,
            p2: b.p2,
        }),
        None => RhoOutcome::Infeasible,
    })
}

fn quality(p1: f64, p2: f64) -> Option<f64> {
    hashing_quality(CollisionPair { p1, p2 }).ok()
}

/// Best L2-ALSH hashing quality over `grid`. Grid points with `p1 ≤ p2` are skipped.
pub fn rho_l2alsh(t: ThresholdPair, grid: &GridSpec) -> Result<RhoOutcome> {
    grid.validate(true)?;
    let pairs: Vec<(u32, f64)> = grid
        .m_values
        .iter()
        .flat_map(|&m| grid.u_values.iter().map(move |&u| (m, u)))
        .collect();
    let per_pair: Vec<Option<Candidate>> = pairs
        .par_iter()
        .map(|&(m, u)| -> Result<Option<Candidate>> {
            let far = l2alsh_far_distance_sq(m, u, t.s()).max(0.0).sqrt();
            let near = l2alsh_near_distance_sq(m, u, t.cs()).max(0.0).sqrt();
            if far >= near {
                return Ok(None);
            }
            let mut best: Option<Candidate> = None;
            for &r in &grid.r_values {
                let p1 = l2_collision(far, r)?.value();
                let p2 = l2_collision(near, r)?.value();
                if let Some(rho) = quality(p1, p2) {
                    if best.as_ref().is_none_or(|b| rho < b.rho) {
                        best = Some(Candidate {
                            rho,
                            p1,
                            p2,
                            scheme: Scheme::L2Alsh(L2AlshParams::new(m, u, r)?),
                        });
                    }
                }
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;
    pick_min(per_pair)
}

/// Best SIGN-ALSH hashing quality over the `(m, U)` part of `grid`.
pub fn rho_signalsh(t: ThresholdPair, grid: &GridSpec) -> Result<RhoOutcome> {
    grid.validate(false)?;
    let mut candidates = Vec::new();
    for &m in &grid.m_values {
        for &u in &grid.u_values {
            let scheme = Scheme::SignAlsh(SignAlshParams::new(m, u)?);
            let p1 = sign_collision(signalsh_far_cosine(m, u, t.s()))?.value();
            let p2 = sign_collision(signalsh_near_cosine(m, u, t.cs()))?.value();
            candidates.push(quality(p1, p2).map(|rho| Candidate {
                rho,
                p1,
                p2,
                scheme,
            }));
        }
    }
    pick_min(candidates)
}

/// One `(S, c)` row of the comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoRow {
    pub s: f64,
    pub c: f64,
    pub simple: RhoResult,
    pub l2alsh: RhoOutcome,
    pub signalsh: RhoOutcome,
}

pub const RHO_CSV_HEADER: &str =
    "S,c,rho_simple,rho_l2alsh,m_l2,U_l2,r_l2,rho_signalsh,m_sign,U_sign";

/// All three hashing qualities for each `(S, c)` in `S_values × c_values`, in row-major order.
pub fn rho_table(s_values: &[f64], c_values: &[f64], grid: &GridSpec) -> Result<Vec<RhoRow>> {
    if s_values.is_empty() {
        return Err(Error::Empty("S values"));
    }
    if c_values.is_empty() {
        return Err(Error::Empty("c values"));
    }
    let cells: Vec<(f64, f64)> = s_values
        .iter()
        .flat_map(|&s| c_values.iter().map(move |&c| (s, c)))
        .collect();
    cells
        .par_iter()
        .map(|&(s, c)| {
            let t = ThresholdPair::new(s, c)?;
            Ok(RhoRow {
                s,
                c,
                simple: rho_simple(t)?,
                l2alsh: rho_l2alsh(t, grid)?,
                signalsh: rho_signalsh(t, grid)?,
            })
        })
        .collect()
}

/// Writes the table as CSV (header [`RHO_CSV_HEADER`]); infeasible cells are left empty.
pub fn write_rho_csv<W: Write>(rows: &[RhoRow], mut out: W) -> Result<()> {
    writeln!(out, "{RHO_CSV_HEADER}")?;
    for row in rows {
        let l2 = match row.l2alsh.result() {
            Some(RhoResult {
                rho,
                argmin: Some(Scheme::L2Alsh(p)),
                ..
            }) => format!(
                "{},{},{},{}",
                sig10(*rho),
                p.m(),
                sig10(p.u()),
                sig10(p.r())
            ),
            _ => ",,,".into(),
        };
        let sign = match row.signalsh.result() {
            Some(RhoResult {
                rho,
                argmin: Some(Scheme::SignAlsh(p)),
                ..
            }) => format!("{},{},{}", sig10(*rho), p.m(), sig10(p.u())),
            _ => ",,".into(),
        };
        writeln!(
            out,
            "{},{},{},{},{}",
            sig10(row.s),
            sig10(row.c),
            sig10(row.simple.rho),
            l2,
            sign
        )?;
    }
    Ok(())
}

/// Computes the table and writes it as CSV.
pub fn emit_rho_curves<W: Write>(
    s_values: &[f64],
    c_values: &[f64],
    grid: &GridSpec,
    out: W,
) -> Result<Vec<RhoRow>> {
    let rows = rho_table(s_values, c_values, grid)?;
    write_rho_csv(&rows, out)?;
    Ok(rows)
}

//! Hamming-ranking retrieval and precision-recall evaluation.
//!
//! For every sampled user, items are ranked by Hamming distance between the
//! user's query code and each item's data code. Ties are broken by a seeded
//! per-user shuffle: item order is permuted first, then stably sorted on
//! distance. Against the exact top-T items by inner product, the curve has
//! one point per recall level `k/T` (k = 1..T), with precision `k / rank_k`
//! where `rank_k` is the position at which the k-th relevant item appears.
//! Curves are averaged level by level over users.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::svd::Factorization;
use crate::error::{invalid, Error, Result};
use crate::fmt::sig10;
use crate::hashers::{hamming, HashCode, HashFamily};
use crate::model::{dot, normalize_queries, rescale_dataset, Dataset, QuerySet};
use crate::rng::{Stream, DOMAIN_SAMPLE, DOMAIN_TIES};
use crate::transforms::{Scheme, Side};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrCurve {
    pub scheme: String,
    pub t: usize,
    pub k: usize,
    /// `(recall, precision)` with recall nondecreasing.
    pub points: Vec<(f64, f64)>,
}

impl PrCurve {
    /// Mean precision over the recall levels (area under the step curve).
    pub fn area(&self) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        self.points.iter().map(|p| p.1).sum::<f64>() / self.points.len() as f64
    }
}

/// Exact top-`t` items by `⟨L_i, R_j⟩` for each query index; ties go to the lower item index.
pub fn ground_truth_top_t(
    users: &[Vec<f64>],
    items: &[Vec<f64>],
    t: usize,
    query_indices: &[usize],
) -> Result<Vec<Vec<usize>>> {
    if t == 0 || t > items.len() {
        return Err(invalid(format!("T = {t} must lie in 1..={}", items.len())));
    }
    query_indices
        .par_iter()
        .map(|&qi| {
            let user = users
                .get(qi)
                .ok_or_else(|| invalid(format!("query index {qi} out of range")))?;
            let scores: Vec<f64> = items.iter().map(|item| dot(user, item)).collect();
            let mut order: Vec<usize> = (0..items.len()).collect();
            order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
            order.truncate(t);
            Ok(order)
        })
        .collect()
}

fn relevance_mask(ranking: &[usize], relevant: &[usize]) -> Vec<bool> {
    let size = ranking.iter().chain(relevant).max().map_or(0, |m| m + 1);
    let mut mask = vec![false; size];
    for &r in relevant {
        mask[r] = true;
    }
    mask
}

/// `(recall, precision)` after each rank position of `ranking`.
pub fn precision_recall_by_rank(ranking: &[usize], relevant: &[usize]) -> Vec<(f64, f64)> {
    let is_relevant = relevance_mask(ranking, relevant);
    let mut hits = 0usize;
    ranking
        .iter()
        .enumerate()
        .map(|(pos, &item)| {
            if is_relevant[item] {
                hits += 1;
            }
            (
                hits as f64 / relevant.len() as f64,
                hits as f64 / (pos + 1) as f64,
            )
        })
        .collect()
}

/// One point per recall level `k/T`: precision at the rank of the k-th relevant item.
pub fn precision_at_recall_levels(ranking: &[usize], relevant: &[usize]) -> Vec<(f64, f64)> {
    let is_relevant = relevance_mask(ranking, relevant);
    let t = relevant.len() as f64;
    let mut out = Vec::with_capacity(relevant.len());
    for (pos, &item) in ranking.iter().enumerate() {
        if is_relevant[item] {
            let k = out.len() + 1;
            out.push((k as f64 / t, k as f64 / (pos + 1) as f64));
        }
    }
    out
}

/// Items ordered by Hamming distance to `query`, ties in `tie_order`.
pub fn hamming_ranking(
    query: &HashCode,
    items: &[HashCode],
    tie_order: &[usize],
) -> Result<Vec<usize>> {
    let mut keyed: Vec<(usize, usize)> = Vec::with_capacity(items.len());
    for &i in tie_order {
        keyed.push((hamming(query, &items[i])?, i));
    }
    keyed.sort_by_key(|&(d, _)| d);
    Ok(keyed.into_iter().map(|(_, i)| i).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetrievalConfig {
    pub t_values: Vec<usize>,
    pub k_values: Vec<usize>,
    /// Number of users sampled as queries; `None` uses every user.
    pub n_queries: Option<usize>,
    pub seed: u64,
}

impl RetrievalConfig {
    fn validate(&self, n_items: usize, n_users: usize) -> Result<()> {
        if self.t_values.is_empty() || self.k_values.is_empty() {
            return Err(invalid("need at least one T and one K"));
        }
        if let Some(&t) = self.t_values.iter().find(|&&t| t == 0 || t > n_items) {
            return Err(invalid(format!("T = {t} must lie in 1..={n_items}")));
        }
        if self.k_values.contains(&0) {
            return Err(invalid("K must be at least 1"));
        }
        if let Some(n) = self.n_queries {
            if n == 0 || n > n_users {
                return Err(invalid(format!(
                    "query sample {n} must lie in 1..={n_users}"
                )));
            }
        }
        Ok(())
    }
}

/// Users drawn as queries, in ascending index order.
pub fn sample_queries(n_users: usize, n_queries: Option<usize>, seed: u64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n_users).collect();
    if let Some(n) = n_queries {
        if n < n_users {
            Stream::new(seed, DOMAIN_SAMPLE, 0).shuffle(&mut idx);
            idx.truncate(n);
            idx.sort_unstable();
        }
    }
    idx
}

/// Item rows and user rows, ready to hash.
pub type PreparedPoints = (Vec<Vec<f64>>, Vec<Vec<f64>>);

/// Items rescaled into the unit ball; users normalized to the sphere, or for
/// SIMPLE-ALSH rescaled into the ball by their own maximum norm.
pub fn prepare_points(scheme: &Scheme, fac: &Factorization) -> Result<PreparedPoints> {
    let (items, _) = rescale_dataset(&Dataset::new(fac.item_rows())?);
    let users = if scheme.wants_unit_queries() {
        normalize_queries(&QuerySet::new(fac.user_rows())?)?.into_points()
    } else {
        rescale_dataset(&Dataset::new(fac.user_rows())?)
            .0
            .into_points()
    };
    Ok((items.into_points(), users))
}

/// Precision-recall curves of `scheme` for every `(T, K)` pair, ordered by T then K.
pub fn run_retrieval(
    scheme: Scheme,
    fac: &Factorization,
    cfg: &RetrievalConfig,
) -> Result<Vec<PrCurve>> {
    let n_items = fac.items.nrows();
    let n_users = fac.users.nrows();
    cfg.validate(n_items, n_users)?;
    let (items, users) = prepare_points(&scheme, fac)?;
    let queries = sample_queries(n_users, cfg.n_queries, cfg.seed);

    let t_max = *cfg.t_values.iter().max().expect("validated");
    let k_max = *cfg.k_values.iter().max().expect("validated");
    let truth = ground_truth_top_t(&fac.user_rows(), &fac.item_rows(), t_max, &queries)?;

    let family = HashFamily::new(scheme, fac.rank(), k_max, cfg.seed)?;
    let item_codes = family.encode_all(&items, Side::Data)?;
    let item_codes_by_k: Vec<Vec<HashCode>> = cfg
        .k_values
        .iter()
        .map(|&k| item_codes.iter().map(|c| c.prefix(k)).collect())
        .collect();

    // per query: per (T, K) in output order, the recall-level points
    let per_query: Vec<Vec<Vec<(f64, f64)>>> = queries
        .par_iter()
        .zip(truth.par_iter())
        .map(|(&qi, top)| {
            let code = family.encode(&users[qi], Side::Query)?;
            let mut ties: Vec<usize> = (0..n_items).collect();
            Stream::new(cfg.seed, DOMAIN_TIES, qi as u64).shuffle(&mut ties);
            let rankings = cfg
                .k_values
                .iter()
                .zip(&item_codes_by_k)
                .map(|(&k, codes)| hamming_ranking(&code.prefix(k), codes, &ties))
                .collect::<Result<Vec<_>>>()?;
            let mut out = Vec::with_capacity(cfg.t_values.len() * cfg.k_values.len());
            for &t in &cfg.t_values {
                for ranking in &rankings {
                    out.push(precision_at_recall_levels(ranking, &top[..t]));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let label = scheme.label();
    let mut curves = Vec::new();
    let mut slot = 0;
    for &t in &cfg.t_values {
        for &k in &cfg.k_values {
            let mut sums = vec![0.0; t];
            for q in &per_query {
                for (s, p) in sums.iter_mut().zip(&q[slot]) {
                    *s += p.1;
                }
            }
            let n = per_query.len() as f64;
            curves.push(PrCurve {
                scheme: label.clone(),
                t,
                k,
                points: sums
                    .iter()
                    .enumerate()
                    .map(|(i, s)| ((i + 1) as f64 / t as f64, s / n))
                    .collect(),
            });
            slot += 1;
        }
    }
    Ok(curves)
}

pub const PR_CSV_HEADER: &str = "scheme,T,K,recall,precision";

pub fn emit_pr_csv<W: Write>(curves: &[PrCurve], mut out: W) -> Result<()> {
    if curves.is_empty() {
        return Err(Error::Empty("precision-recall curves"));
    }
    writeln!(out, "{PR_CSV_HEADER}")?;
    for c in curves {
        for &(recall, precision) in &c.points {
            writeln!(
                out,
                "{},{},{},{},{}",
                c.scheme,
                c.t,
                c.k,
                sig10(recall),
                sig10(precision)
            )?;
        }
    }
    Ok(())
}

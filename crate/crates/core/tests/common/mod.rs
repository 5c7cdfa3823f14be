//! Independent reference implementations shared by the integration tests.

#![allow(dead_code)]

use nalgebra::DMatrix;

/// Singular values of `a` (descending) by one-sided Jacobi rotations on the
/// columns, iterated until every column pair is orthogonal to 1e-15.
pub fn jacobi_singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let mut w = if a.nrows() >= a.ncols() {
        a.clone()
    } else {
        a.transpose()
    };
    let n = w.ncols();
    for _sweep in 0..100 {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = w.column(i).norm_squared();
                let beta = w.column(j).norm_squared();
                let gamma = w.column(i).dot(&w.column(j));
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..w.nrows() {
                    let (wi, wj) = (w[(r, i)], w[(r, j)]);
                    w[(r, i)] = c * wi - s * wj;
                    w[(r, j)] = s * wi + c * wj;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// `‖A − A_f‖_F` for the best rank-`f` approximation, from the full spectrum.
pub fn truncation_error(singular_values: &[f64], f: usize) -> f64 {
    singular_values[f..]
        .iter()
        .map(|s| s * s)
        .sum::<f64>()
        .sqrt()
}

/// Minimum of `g` over `[lo, hi]` by repeated grid refinement around the best point.
pub fn zoom_min(lo: f64, hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    let mut best = f64::INFINITY;
    for _ in 0..40 {
        let steps = 200;
        let h = (hi - lo) / steps as f64;
        let mut arg = lo;
        for i in 0..=steps {
            let t = lo + i as f64 * h;
            let v = g(t);
            if v < best {
                best = v;
                arg = t;
            }
        }
        let (nlo, nhi) = ((arg - 2.0 * h).max(lo), (arg + 2.0 * h).min(hi));
        if nhi - nlo < 1e-15 {
            break;
        }
        lo = nlo;
        hi = nhi;
    }
    best
}

pub fn zoom_max(lo: f64, hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    -zoom_min(lo, hi, |t| -g(t))
}

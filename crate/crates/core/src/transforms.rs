//! The deterministic maps `P` (database side) and `Q` (query side) that turn
//! inner-product search into a Euclidean or angular problem.
//!
//! | scheme        | `P(x)`                                         | `Q(q)`                  |
//! |---------------|------------------------------------------------|-------------------------|
//! | L2-ALSH       | `[Ux; ‖Ux‖²; ‖Ux‖⁴; …; ‖Ux‖^(2^m)]`           | `[q; ½; …; ½]`          |
//! | SIGN-ALSH     | `[Ux; ½−‖Ux‖²; …; ½−‖Ux‖^(2^m)]`              | `[q; 0; …; 0]`          |
//! | SIMPLE-LSH    | `[x; √(1−‖x‖²)]`                               | same as `P`             |
//! | SIMPLE-ALSH   | `[x; √(1−‖x‖²); 0]`                            | `[q; 0; √(1−‖q‖²)]`     |
//!
//! All inputs must lie in the unit ball. Norms in `(1, 1 + NORM_TOL]` are
//! treated as exactly 1 so that rounding upstream never feeds a negative
//! number to the square root.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{dot, norm, norm_sq, NORM_TOL};

/// Parameters of L2-ALSH: `m` appended norm powers, pre-scaling `U`, bucket width `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L2AlshParams {
    m: u32,
    u: f64,
    r: f64,
}

impl L2AlshParams {
    pub fn new(m: u32, u: f64, r: f64) -> Result<Self> {
        check_m_u(m, u)?;
        if !(r > 0.0 && r.is_finite()) {
            return Err(invalid(format!("r must be positive, got {r}")));
        }
        Ok(Self { m, u, r })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

/// Parameters of SIGN-ALSH: `m` appended terms and pre-scaling `U`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignAlshParams {
    m: u32,
    u: f64,
}

impl SignAlshParams {
    pub fn new(m: u32, u: f64) -> Result<Self> {
        check_m_u(m, u)?;
        Ok(Self { m, u })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn u(&self) -> f64 {
        self.u
    }
}

fn check_m_u(m: u32, u: f64) -> Result<()> {
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    // 2^(m+1) must stay a sane exponent.
    if m > 30 {
        return Err(invalid(format!("m = {m} is too large")));
    }
    if !(u > 0.0 && u < 1.0) {
        return Err(invalid(format!("U must lie in (0, 1), got {u}")));
    }
    Ok(())
}

/// `t^(2^k)` given `t²`, by repeated squaring.
pub fn pow_two_pow(t_sq: f64, k: u32) -> f64 {
    let mut v = t_sq;
    for _ in 1..k {
        v *= v;
    }
    v
}

/// Norm of a point that must be inside the unit ball, clamped to 1 within tolerance.
pub fn ball_norm(x: &[f64]) -> Result<f64> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index: 0 });
    }
    let n = norm(x);
    if n > 1.0 + NORM_TOL {
        return Err(Error::OutsideBall { norm: n });
    }
    Ok(n.min(1.0))
}

fn pad_height(n: f64) -> f64 {
    (1.0 - n * n).max(0.0).sqrt()
}

pub fn l2alsh_p(x: &[f64], p: &L2AlshParams) -> Result<Vec<f64>> {
    let n = ball_norm(x)?;
    let mut out = Vec::with_capacity(x.len() + p.m as usize);
    out.extend(x.iter().map(|v| p.u * v));
    let mut t = (p.u * n) * (p.u * n);
    for _ in 0..p.m {
        out.push(t);
        t *= t;
    }
    Ok(out)
}

pub fn l2alsh_q(q: &[f64], p: &L2AlshParams) -> Result<Vec<f64>> {
    ball_norm(q)?;
    let mut out = q.to_vec();
    out.extend(std::iter::repeat_n(0.5, p.m as usize));
    Ok(out)
}

/// Closed form of `‖P(x) − Q(q)‖²`: `‖q‖² + m/4 + ‖Ux‖^(2^(m+1)) − 2U q·x`.
pub fn l2alsh_distance_sq(x: &[f64], q: &[f64], p: &L2AlshParams) -> Result<f64> {
    let n = ball_norm(x)?;
    ball_norm(q)?;
    if x.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: q.len(),
        });
    }
    let ux_sq = (p.u * n) * (p.u * n);
    Ok(norm_sq(q) + p.m as f64 / 4.0 + pow_two_pow(ux_sq, p.m + 1) - 2.0 * p.u * dot(q, x))
}

pub fn signalsh_p(x: &[f64], p: &SignAlshParams) -> Result<Vec<f64>> {
    let n = ball_norm(x)?;
    let mut out = Vec::with_capacity(x.len() + p.m as usize);
    out.extend(x.iter().map(|v| p.u * v));
    let mut t = (p.u * n) * (p.u * n);
    for _ in 0..p.m {
        out.push(0.5 - t);
        t *= t;
    }
    Ok(out)
}

pub fn signalsh_q(q: &[f64], p: &SignAlshParams) -> Result<Vec<f64>> {
    ball_norm(q)?;
    let mut out = q.to_vec();
    out.extend(std::iter::repeat_n(0.0, p.m as usize));
    Ok(out)
}

/// Closed form of `‖P(x)‖²` for SIGN-ALSH: `m/4 + ‖Ux‖^(2^(m+1))`.
pub fn signalsh_p_norm_sq(x: &[f64], p: &SignAlshParams) -> Result<f64> {
    let n = ball_norm(x)?;
    let ux_sq = (p.u * n) * (p.u * n);
    Ok(p.m as f64 / 4.0 + pow_two_pow(ux_sq, p.m + 1))
}

pub fn simple_p(x: &[f64]) -> Result<Vec<f64>> {
    let n = ball_norm(x)?;
    let mut out = Vec::with_capacity(x.len() + 1);
    out.extend_from_slice(x);
    out.push(pad_height(n));
    Ok(out)
}

pub fn simplealsh_p(x: &[f64]) -> Result<Vec<f64>> {
    let n = ball_norm(x)?;
    let mut out = Vec::with_capacity(x.len() + 2);
    out.extend_from_slice(x);
    out.push(pad_height(n));
    out.push(0.0);
    Ok(out)
}

pub fn simplealsh_q(y: &[f64]) -> Result<Vec<f64>> {
    let n = ball_norm(y)?;
    let mut out = Vec::with_capacity(y.len() + 2);
    out.extend_from_slice(y);
    out.push(0.0);
    out.push(pad_height(n));
    Ok(out)
}

/// Which side of an asymmetric pair a point is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Data,
    Query,
}

/// Binary for random-projection hashes, integers for the quantized L2 hash.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alphabet {
    Integer,
    Binary,
}

/// A transform pair together with the hash family applied after it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "kebab-case")]
pub enum Scheme {
    L2Alsh(L2AlshParams),
    SignAlsh(SignAlshParams),
    SimpleLsh,
    SimpleAlsh,
}

impl Scheme {
    pub fn transform(&self, x: &[f64], side: Side) -> Result<Vec<f64>> {
        match (self, side) {
            (Scheme::L2Alsh(p), Side::Data) => l2alsh_p(x, p),
            (Scheme::L2Alsh(p), Side::Query) => l2alsh_q(x, p),
            (Scheme::SignAlsh(p), Side::Data) => signalsh_p(x, p),
            (Scheme::SignAlsh(p), Side::Query) => signalsh_q(x, p),
            (Scheme::SimpleLsh, _) => simple_p(x),
            (Scheme::SimpleAlsh, Side::Data) => simplealsh_p(x),
            (Scheme::SimpleAlsh, Side::Query) => simplealsh_q(x),
        }
    }

    pub fn transformed_dim(&self, dim: usize) -> usize {
        match self {
            Scheme::L2Alsh(p) => dim + p.m as usize,
            Scheme::SignAlsh(p) => dim + p.m as usize,
            Scheme::SimpleLsh => dim + 1,
            Scheme::SimpleAlsh => dim + 2,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            Scheme::L2Alsh(_) => Alphabet::Integer,
            _ => Alphabet::Binary,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self, Scheme::SimpleLsh)
    }

    /// Queries must be unit vectors (as opposed to merely bounded).
    pub fn wants_unit_queries(&self) -> bool {
        !matches!(self, Scheme::SimpleAlsh)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::L2Alsh(_) => "l2-alsh",
            Scheme::SignAlsh(_) => "sign-alsh",
            Scheme::SimpleLsh => "simple-lsh",
            Scheme::SimpleAlsh => "simple-alsh",
        }
    }

    /// Name plus parameters, free of commas so it can sit in a CSV cell.
    pub fn label(&self) -> String {
        match self {
            Scheme::L2Alsh(p) => format!("l2-alsh(m={} U={} r={})", p.m, p.u, p.r),
            Scheme::SignAlsh(p) => format!("sign-alsh(m={} U={})", p.m, p.u),
            other => other.name().to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn l2alsh_examples() {
        let p = L2AlshParams::new(2, 0.8, 2.5).unwrap();
        assert_eq!(l2alsh_p(&[0.0, 0.0, 0.0], &p).unwrap(), vec![0.0; 5]);

        let p3 = L2AlshParams::new(3, 0.8, 2.5).unwrap();
        let q = l2alsh_q(&[0.6, 0.8], &p3).unwrap();
        assert_abs_diff_eq!(norm_sq(&q), 1.75, epsilon = 1e-15);

        // m=1, U=0.5, |x|=1, q.x=0.9
        let p = L2AlshParams::new(1, 0.5, 2.5).unwrap();
        let q = [1.0, 0.0];
        let x = [0.9, (1.0f64 - 0.81).sqrt()];
        let px = l2alsh_p(&x, &p).unwrap();
        let qq = l2alsh_q(&q, &p).unwrap();
        let direct: f64 = px.iter().zip(&qq).map(|(a, b)| (a - b) * (a - b)).sum();
        assert_abs_diff_eq!(direct, 0.4125, epsilon = 1e-14);
        assert_abs_diff_eq!(
            l2alsh_distance_sq(&x, &q, &p).unwrap(),
            0.4125,
            epsilon = 1e-14
        );
    }

    #[test]
    fn signalsh_examples() {
        let p = SignAlshParams::new(2, 0.8).unwrap();
        let px = signalsh_p(&[0.0, 0.0], &p).unwrap();
        assert_eq!(px, vec![0.0, 0.0, 0.5, 0.5]);
        assert_abs_diff_eq!(norm_sq(&px), 0.5, epsilon = 1e-15);

        let p = SignAlshParams::new(1, 0.5).unwrap();
        let x = [0.6, 0.8];
        assert_abs_diff_eq!(
            norm_sq(&signalsh_p(&x, &p).unwrap()),
            0.3125,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(signalsh_p_norm_sq(&x, &p).unwrap(), 0.3125, epsilon = 1e-15);

        let px = signalsh_p(&[0.6, 0.0], &p).unwrap();
        let qq = signalsh_q(&[1.0, 0.0], &p).unwrap();
        assert_abs_diff_eq!(dot(&px, &qq), 0.3, epsilon = 1e-15);
    }

    #[test]
    fn simple_examples() {
        assert_eq!(simple_p(&[1.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0]);
        assert_eq!(simple_p(&[0.0, 0.0]).unwrap(), vec![0.0, 0.0, 1.0]);
        let pq = simple_p(&[1.0, 0.0]).unwrap();
        let px = simple_p(&[0.6, 0.0]).unwrap();
        assert_abs_diff_eq!(dot(&pq, &px), 0.6, epsilon = 1e-15);

        let p = simplealsh_p(&[0.0, 0.0]).unwrap();
        let q = simplealsh_q(&[0.0, 0.0]).unwrap();
        assert_eq!(p, vec![0.0, 0.0, 1.0, 0.0]);
        assert_eq!(q, vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(dot(&p, &q), 0.0);

        let p = simplealsh_p(&[0.5, 0.0]).unwrap();
        let q = simplealsh_q(&[0.5, 0.0]).unwrap();
        assert_abs_diff_eq!(dot(&p, &q), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn domain_errors() {
        let p = L2AlshParams::new(2, 0.8, 2.5).unwrap();
        assert!(matches!(
            l2alsh_p(&[1.1, 0.0], &p),
            Err(Error::OutsideBall { .. })
        ));
        assert!(matches!(
            simple_p(&[0.8, 0.8]),
            Err(Error::OutsideBall { .. })
        ));
        assert!(simplealsh_q(&[2.0]).is_err());
        assert!(L2AlshParams::new(0, 0.5, 1.0).is_err());
        assert!(L2AlshParams::new(1, 1.0, 1.0).is_err());
        assert!(L2AlshParams::new(1, 0.5, 0.0).is_err());
        assert!(SignAlshParams::new(1, 0.0).is_err());
    }

    #[test]
    fn slightly_outside_is_clamped() {
        let x = [1.0 + 5e-13, 0.0];
        let p = simple_p(&x).unwrap();
        assert_eq!(p[2], 0.0);
        assert!(simple_p(&[1.0 + 1e-9, 0.0]).is_err());
    }

    #[test]
    fn scheme_dims_match_transforms() {
        let x = [0.3, -0.2, 0.1];
        for scheme in [
            Scheme::L2Alsh(L2AlshParams::new(3, 0.83, 2.5).unwrap()),
            Scheme::SignAlsh(SignAlshParams::new(2, 0.75).unwrap()),
            Scheme::SimpleLsh,
            Scheme::SimpleAlsh,
        ] {
            for side in [Side::Data, Side::Query] {
                assert_eq!(
                    scheme.transform(&x, side).unwrap().len(),
                    scheme.transformed_dim(3)
                );
            }
        }
    }

    fn ball_point(d: usize) -> impl Strategy<Value = Vec<f64>> {
        (prop::collection::vec(-1.0f64..1.0, d), 0.0f64..=1.0).prop_map(|(v, radius)| {
            let n = norm(&v);
            if n == 0.0 {
                v
            } else {
                v.iter().map(|c| c / n * radius).collect()
            }
        })
    }

    proptest! {
        #[test]
        fn simplealsh_preserves_inner_products(x in ball_point(10), y in ball_point(10)) {
            let p = simplealsh_p(&x).unwrap();
            let q = simplealsh_q(&y).unwrap();
            prop_assert!((dot(&p, &q) - dot(&x, &y)).abs() <= 1e-12);
            prop_assert!((norm(&p) - 1.0).abs() <= 1e-12);
            prop_assert!((norm(&q) - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn l2alsh_identity_holds(x in ball_point(6), q in ball_point(6), m in 1u32..=6, u in 0.01f64..0.99) {
            let p = L2AlshParams::new(m, u, 2.5).unwrap();
            let px = l2alsh_p(&x, &p).unwrap();
            let qq = l2alsh_q(&q, &p).unwrap();
            let direct: f64 = px.iter().zip(&qq).map(|(a, b)| (a - b) * (a - b)).sum();
            prop_assert!((direct - l2alsh_distance_sq(&x, &q, &p).unwrap()).abs() <= 1e-10);
        }
    }
}

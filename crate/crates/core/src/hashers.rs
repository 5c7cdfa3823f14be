//! Random hash draws and K-symbol codes.
//!
//! Draw `i` of a family is generated from the stream `(seed, i)` (see
//! [`crate::rng`]): first the Gaussian direction `a`, then, for the L2 hash,
//! the offset `b = r·u`. A code of length K uses draws `0..K`, so shorter
//! codes are prefixes of longer ones for the same seed.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::dot;
use crate::rng::{Stream, DOMAIN_HASH};
use crate::transforms::{Alphabet, Scheme, Side};

/// Quantized projection `⌊(a·z + b)/r⌋` with `a ~ N(0, I)`, `b ~ U[0, r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct L2HashDraw {
    pub a: Vec<f64>,
    pub b: f64,
    pub r: f64,
}

/// Random hyperplane `sign(a·z)` with `a ~ N(0, I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignHashDraw {
    pub a: Vec<f64>,
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Exact multiples of `r` land in the upper cell.
pub fn l2_symbol(z: &[f64], draw: &L2HashDraw) -> Result<i64> {
    check_dim(draw.a.len(), z.len())?;
    Ok(((dot(&draw.a, z) + draw.b) / draw.r).floor() as i64)
}

/// `+1` when `a·z ≥ 0`, otherwise `−1`; `sign(0) = +1`.
pub fn sign_bit(z: &[f64], draw: &SignHashDraw) -> Result<i8> {
    check_dim(draw.a.len(), z.len())?;
    Ok(if dot(&draw.a, z) >= 0.0 { 1 } else { -1 })
}

#[derive(Debug, Clone, PartialEq)]
pub enum HashDraw {
    L2(L2HashDraw),
    Sign(SignHashDraw),
}

impl HashDraw {
    /// Draw number `index` for `scheme` acting on `transformed_dim`-vectors.
    pub fn generate(scheme: &Scheme, transformed_dim: usize, seed: u64, index: u64) -> Self {
        let mut stream = Stream::new(seed, DOMAIN_HASH, index);
        let a = stream.normals(transformed_dim);
        match scheme {
            Scheme::L2Alsh(p) => {
                let r = p.r();
                HashDraw::L2(L2HashDraw {
                    a,
                    b: r * stream.uniform(),
                    r,
                })
            }
            _ => HashDraw::Sign(SignHashDraw { a }),
        }
    }

    /// Symbol as an integer; sign hashes give `±1`.
    pub fn symbol(&self, z: &[f64]) -> Result<i64> {
        match self {
            HashDraw::L2(d) => l2_symbol(z, d),
            HashDraw::Sign(d) => sign_bit(z, d).map(i64::from),
        }
    }
}

/// A length-K code. Binary codes are bit-packed, bit set meaning `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HashCode {
    Integer(Vec<i64>),
    Binary { words: Vec<u64>, len: usize },
}

impl HashCode {
    pub fn from_signs(signs: &[i8]) -> Self {
        let mut words = vec![0u64; signs.len().div_ceil(64)];
        for (i, &s) in signs.iter().enumerate() {
            if s > 0 {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        HashCode::Binary {
            words,
            len: signs.len(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            HashCode::Integer(v) => v.len(),
            HashCode::Binary { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            HashCode::Integer(_) => Alphabet::Integer,
            HashCode::Binary { .. } => Alphabet::Binary,
        }
    }

    /// Symbol `i` as an integer (`±1` for binary codes).
    pub fn symbol(&self, i: usize) -> i64 {
        match self {
            HashCode::Integer(v) => v[i],
            HashCode::Binary { words, .. } => {
                if words[i / 64] >> (i % 64) & 1 == 1 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// The code made of the first `k` symbols.
    pub fn prefix(&self, k: usize) -> HashCode {
        let k = k.min(self.len());
        match self {
            HashCode::Integer(v) => HashCode::Integer(v[..k].to_vec()),
            HashCode::Binary { words, .. } => {
                let mut w = words[..k.div_ceil(64)].to_vec();
                if !k.is_multiple_of(64) {
                    if let Some(last) = w.last_mut() {
                        *last &= (1u64 << (k % 64)) - 1;
                    }
                }
                HashCode::Binary { words: w, len: k }
            }
        }
    }
}

/// Number of positions whose symbols differ.
pub fn hamming(c1: &HashCode, c2: &HashCode) -> Result<usize> {
    match (c1, c2) {
        (HashCode::Integer(a), HashCode::Integer(b)) => {
            if a.len() != b.len() {
                return Err(Error::CodeMismatch(format!(
                    "lengths {} and {}",
                    a.len(),
                    b.len()
                )));
            }
            Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
        }
        (HashCode::Binary { words: a, len: la }, HashCode::Binary { words: b, len: lb }) => {
            if la != lb {
                return Err(Error::CodeMismatch(format!("lengths {la} and {lb}")));
            }
            Ok(a.iter()
                .zip(b)
                .map(|(x, y)| (x ^ y).count_ones() as usize)
                .sum())
        }
        _ => Err(Error::CodeMismatch("integer vs binary alphabet".into())),
    }
}

/// K hash draws shared by both sides of a scheme.
#[derive(Debug, Clone)]
pub struct HashFamily {
    scheme: Scheme,
    input_dim: usize,
    draws: Vec<HashDraw>,
}

impl HashFamily {
    pub fn new(scheme: Scheme, input_dim: usize, k: usize, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(crate::error::invalid("code length K must be at least 1"));
        }
        if input_dim == 0 {
            return Err(crate::error::invalid("input dimension must be at least 1"));
        }
        let tdim = scheme.transformed_dim(input_dim);
        let draws = (0..k as u64)
            .into_par_iter()
            .map(|i| HashDraw::generate(&scheme, tdim, seed, i))
            .collect();
        Ok(Self {
            scheme,
            input_dim,
            draws,
        })
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn k(&self) -> usize {
        self.draws.len()
    }

    pub fn draws(&self) -> &[HashDraw] {
        &self.draws
    }

    pub fn encode(&self, x: &[f64], side: Side) -> Result<HashCode> {
        check_dim(self.input_dim, x.len())?;
        let z = self.scheme.transform(x, side)?;
        Ok(match self.scheme.alphabet() {
            Alphabet::Integer => HashCode::Integer(
                self.draws
                    .iter()
                    .map(|d| d.symbol(&z))
                    .collect::<Result<_>>()?,
            ),
            Alphabet::Binary => {
                let signs = self
                    .draws
                    .iter()
                    .map(|d| d.symbol(&z).map(|s| s as i8))
                    .collect::<Result<Vec<_>>>()?;
                HashCode::from_signs(&signs)
            }
        })
    }

    pub fn encode_all(&self, points: &[Vec<f64>], side: Side) -> Result<Vec<HashCode>> {
        points.par_iter().map(|x| self.encode(x, side)).collect()
    }
}

/// Codes of length `k` for `points` on one side of `scheme`.
///
/// Data and query codes built from the same seed share their draws, so they
/// can be compared position by position.
pub fn build_codes(
    scheme: Scheme,
    points: &[Vec<f64>],
    side: Side,
    k: usize,
    seed: u64,
) -> Result<Vec<HashCode>> {
    let dim = points.first().ok_or(Error::Empty("points"))?.len();
    HashFamily::new(scheme, dim, k, seed)?.encode_all(points, side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::{L2AlshParams, SignAlshParams};

    #[test]
    fn l2_symbol_examples() {
        let z = [1.0];
        let draw = |dot: f64, b: f64, r: f64| L2HashDraw { a: vec![dot], b, r };
        assert_eq!(l2_symbol(&z, &draw(0.0, 0.3, 1.0)).unwrap(), 0);
        assert_eq!(l2_symbol(&z, &draw(2.5, 0.0, 2.5)).unwrap(), 1);
        assert_eq!(l2_symbol(&z, &draw(-0.1, 0.0, 1.0)).unwrap(), -1);
        assert!(l2_symbol(&[1.0, 2.0], &draw(1.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn sign_bit_examples() {
        let z = [1.0];
        assert_eq!(sign_bit(&z, &SignHashDraw { a: vec![3.2] }).unwrap(), 1);
        assert_eq!(sign_bit(&z, &SignHashDraw { a: vec![-0.001] }).unwrap(), -1);
        assert_eq!(sign_bit(&z, &SignHashDraw { a: vec![0.0] }).unwrap(), 1);
        assert!(sign_bit(&[1.0, 1.0], &SignHashDraw { a: vec![1.0] }).is_err());
    }

    #[test]
    fn hamming_examples() {
        let a = HashCode::from_signs(&[1, 1, -1, -1]);
        let b = HashCode::from_signs(&[1, -1, -1, 1]);
        assert_eq!(hamming(&a, &a).unwrap(), 0);
        assert_eq!(hamming(&a, &b).unwrap(), 2);
        let x = HashCode::Integer(vec![0, 1, 2]);
        let y = HashCode::Integer(vec![0, 1, 3]);
        assert_eq!(hamming(&x, &y).unwrap(), 1);
        assert!(hamming(&a, &x).is_err());
        assert!(hamming(&x, &HashCode::Integer(vec![0])).is_err());
        assert!(hamming(&a, &HashCode::from_signs(&[1])).is_err());
    }

    #[test]
    fn binary_code_symbols_and_prefix() {
        let signs: Vec<i8> = (0..130).map(|i| if i % 3 == 0 { 1 } else { -1 }).collect();
        let code = HashCode::from_signs(&signs);
        for (i, &s) in signs.iter().enumerate() {
            assert_eq!(code.symbol(i), s as i64);
        }
        let p = code.prefix(70);
        assert_eq!(p, HashCode::from_signs(&signs[..70]));
        assert_eq!(p.len(), 70);
    }

    #[test]
    fn simple_lsh_equal_points_share_codes() {
        let q = vec![vec![0.6, 0.8]];
        let data = build_codes(Scheme::SimpleLsh, &q, Side::Data, 100, 5).unwrap();
        let query = build_codes(Scheme::SimpleLsh, &q, Side::Query, 100, 5).unwrap();
        assert_eq!(hamming(&data[0], &query[0]).unwrap(), 0);
    }

    #[test]
    fn codes_are_deterministic_and_prefix_stable() {
        let pts = vec![vec![0.1, 0.2, 0.3], vec![-0.5, 0.1, 0.0]];
        for scheme in [
            Scheme::L2Alsh(L2AlshParams::new(3, 0.83, 2.5).unwrap()),
            Scheme::SignAlsh(SignAlshParams::new(2, 0.75).unwrap()),
            Scheme::SimpleLsh,
            Scheme::SimpleAlsh,
        ] {
            let a = build_codes(scheme, &pts, Side::Data, 64, 11).unwrap();
            let b = build_codes(scheme, &pts, Side::Data, 64, 11).unwrap();
            assert_eq!(a, b);
            let short = build_codes(scheme, &pts, Side::Data, 20, 11).unwrap();
            assert_eq!(short[1], a[1].prefix(20));
            let other = build_codes(scheme, &pts, Side::Data, 64, 12).unwrap();
            assert_ne!(a, other);
        }
    }

    #[test]
    fn simple_alsh_orthogonal_pads_agree_half_the_time() {
        // P(0)·Q(0) = 0, so each bit agrees with probability 1/2.
        let zero = vec![vec![0.0, 0.0]];
        let k = 8;
        let trials = 2000u64;
        let mut agree = 0usize;
        for seed in 0..trials {
            let p = build_codes(Scheme::SimpleAlsh, &zero, Side::Data, k, seed).unwrap();
            let q = build_codes(Scheme::SimpleAlsh, &zero, Side::Query, k, seed).unwrap();
            agree += k - hamming(&p[0], &q[0]).unwrap();
        }
        let n = (trials as usize * k) as f64;
        let rate = agree as f64 / n;
        let sd = (0.25 / n).sqrt();
        assert!((rate - 0.5).abs() < 4.0 * sd, "agreement {rate}");
    }

    #[test]
    fn rejects_zero_k_and_domain_violations() {
        assert!(build_codes(Scheme::SimpleLsh, &[vec![0.1]], Side::Data, 0, 0).is_err());
        assert!(build_codes(Scheme::SimpleLsh, &[vec![1.5]], Side::Data, 4, 0).is_err());
    }
}

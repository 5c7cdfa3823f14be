//! Locality-sensitive hashing for maximum inner product search.
//!
//! Four schemes are implemented behind one [`transforms::Scheme`] enum:
//! the symmetric, parameter-free SIMPLE-LSH; its asymmetric variant
//! SIMPLE-ALSH for bounded (unnormalized) queries; and the parameterized
//! asymmetric L2-ALSH and SIGN-ALSH. Around them sit analytic and sampled
//! collision probabilities, a hashing-quality (`ρ`) grid search, constructive
//! counterexamples for the parameterized schemes, and a precision-recall
//! retrieval benchmark on pureSVD factors.

pub mod benchmark;
pub mod cli;
pub mod collision;
pub mod error;
pub mod fmt;
pub mod hashers;
pub mod model;
pub mod rho;
pub mod rng;
pub mod theory;
pub mod transforms;

pub use error::{Error, Result};
pub use model::{ThresholdPair, NORM_TOL};
pub use transforms::{L2AlshParams, Scheme, Side, SignAlshParams};

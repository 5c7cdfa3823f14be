//! End-to-end retrieval evaluation: ratings → pureSVD factors → hash codes →
//! Hamming ranking → precision-recall curves.

pub mod ratings;
pub mod retrieval;
pub mod svd;
pub mod synthetic;

pub use ratings::{ingest_ratings, IngestSummary, RatingsMatrix};
pub use retrieval::{
    emit_pr_csv, ground_truth_top_t, run_retrieval, PrCurve, RetrievalConfig, PR_CSV_HEADER,
};
pub use svd::{pure_svd, truncated_svd, Factorization, SvdOptions, TruncatedSvd};
pub use synthetic::{synthetic_factors, synthetic_ratings, SyntheticSpec};

//! Ratings ingestion and the pureSVD factorization.
//!
//!     cargo run --release --example pure_svd [ratings.tsv]

use std::fs::File;
use std::io::BufReader;

use mips_lsh::benchmark::svd::centered_matrix;
use mips_lsh::benchmark::{
    ingest_ratings, pure_svd, synthetic_ratings, RatingsMatrix, SvdOptions, SyntheticSpec,
};

fn main() -> mips_lsh::Result<()> {
    let ratings: RatingsMatrix = match std::env::args().nth(1) {
        Some(path) => ingest_ratings(BufReader::new(File::open(path)?), "\t")?.0,
        None => synthetic_ratings(
            &SyntheticSpec {
                n_users: 200,
                n_items: 300,
                rank: 10,
                density: 0.3,
            },
            0,
        )?,
    };
    println!(
        "{} users x {} items, {} ratings, mean {:.3}",
        ratings.n_users(),
        ratings.n_items(),
        ratings.entries().len(),
        ratings.mean_rating()
    );

    let z = centered_matrix(&ratings);
    for f in [1, 5, 10, 20] {
        let fac = pure_svd(&ratings, f, &SvdOptions::default())?;
        let residual = (&z - &fac.users * fac.items.transpose()).norm();
        println!(
            "f = {f:>2}: |Z − LRᵀ|_F / |Z|_F = {:.4}",
            residual / z.norm()
        );
    }
    Ok(())
}

//! Precision-recall of Hamming ranking on synthetic pureSVD factors.
//!
//!     cargo run --release --example retrieval

use mips_lsh::benchmark::{run_retrieval, synthetic_factors, RetrievalConfig, SyntheticSpec};
use mips_lsh::{L2AlshParams, Scheme, SignAlshParams};

fn main() -> mips_lsh::Result<()> {
    let fac = synthetic_factors(&SyntheticSpec::default(), 0)?;
    let cfg = RetrievalConfig {
        t_values: vec![10],
        k_values: vec![16, 64, 256],
        n_queries: Some(200),
        seed: 0,
    };
    let schemes = [
        Scheme::SimpleLsh,
        Scheme::SimpleAlsh,
        Scheme::L2Alsh(L2AlshParams::new(3, 0.83, 2.5)?),
        Scheme::SignAlsh(SignAlshParams::new(2, 0.75)?),
    ];
    println!(
        "{:<30} {:>4} {:>4} {:>8} {:>10}",
        "scheme", "T", "K", "area", "P@R=0.5"
    );
    for scheme in schemes {
        for curve in run_retrieval(scheme, &fac, &cfg)? {
            println!(
                "{:<30} {:>4} {:>4} {:>8.4} {:>10.4}",
                curve.scheme,
                curve.t,
                curve.k,
                curve.area(),
                curve.points[curve.t / 2 - 1].1
            );
        }
    }
    Ok(())
}

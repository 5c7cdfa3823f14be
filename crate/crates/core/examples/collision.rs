//! Analytic collision probability against a Monte-Carlo estimate, per scheme.
//!
//!     cargo run --release --example collision

use mips_lsh::collision::{analytic_collision, monte_carlo_collision};
use mips_lsh::{L2AlshParams, Scheme, SignAlshParams};

fn main() -> mips_lsh::Result<()> {
    let x = [0.45, 0.35, -0.2];
    let q = [0.6, 0.8, 0.0];
    let n = 100_000;
    let schemes = [
        Scheme::L2Alsh(L2AlshParams::new(3, 0.83, 2.5)?),
        Scheme::SignAlsh(SignAlshParams::new(2, 0.75)?),
        Scheme::SimpleLsh,
        Scheme::SimpleAlsh,
    ];
    println!(
        "{:<30} {:>9} {:>9} {:>8} {:>6}",
        "scheme", "analytic", "sampled", "stderr", "z"
    );
    for scheme in schemes {
        let p = analytic_collision(&scheme, &x, &q)?.value();
        let mc = monte_carlo_collision(&scheme, &x, &q, n, 42)?;
        println!(
            "{:<30} {:>9.5} {:>9.5} {:>8.5} {:>6.2}",
            scheme.label(),
            p,
            mc.p,
            mc.stderr,
            (mc.p - p) / mc.stderr
        );
    }
    Ok(())
}

//! Counterexamples: pairs where the dissimilar pair is at least as likely to
//! collide as the similar one.
//!
//!     cargo run --release --example witnesses

use mips_lsh::theory::{
    lemma1_witness, signalsh_bounded_witness, signalsh_nonuniversal_witness, thm3_witness,
    thm4_witness, Witness,
};
use mips_lsh::{L2AlshParams, SignAlshParams, ThresholdPair};

fn report(w: &Witness) -> mips_lsh::Result<()> {
    let mc = w.monte_carlo_check(100_000, 1)?;
    println!(
        "{:<18} {:<28} margin {:+.6} ({:?})  p̂ near {:.4} far {:.4}",
        w.lemma.as_str(),
        w.scheme.label(),
        w.margin,
        w.outcome(),
        mc.near.p,
        mc.far.p
    );
    println!(
        "{:<18} far  q={:.4?} x={:.4?}\n{:<18} near q={:.4?} y={:.4?}",
        "", w.far.query, w.far.point, "", w.near.query, w.near.point
    );
    Ok(())
}

fn main() -> mips_lsh::Result<()> {
    let l2 = L2AlshParams::new(3, 0.83, 2.5)?;
    let sign = SignAlshParams::new(2, 0.75)?;
    let t = ThresholdPair::new(0.9, 0.98)?;

    report(&lemma1_witness(l2, t)?)?;
    report(&thm3_witness(t)?)?;
    report(&thm4_witness(l2, ThresholdPair::new(0.5, 0.5)?)?)?;
    report(&signalsh_nonuniversal_witness(sign, t)?)?;
    report(&signalsh_bounded_witness(sign, ThresholdPair::new(0.5, 0.5)?)?.embed(5)?)?;
    Ok(())
}

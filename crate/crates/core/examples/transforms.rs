//! The four transform pairs on one (x, q), and the identities they satisfy.
//!
//!     cargo run --example transforms

use mips_lsh::model::{dot, norm};
use mips_lsh::transforms::{l2alsh_distance_sq, signalsh_p_norm_sq};
use mips_lsh::{L2AlshParams, Scheme, Side, SignAlshParams};

fn main() -> mips_lsh::Result<()> {
    let x = [0.3, -0.5, 0.6];
    let q = {
        let raw = [0.8, 0.1, 0.4];
        let n = norm(&raw);
        raw.map(|v| v / n)
    };
    println!(
        "x = {x:?} (|x| = {:.4}), q·x = {:.6}\n",
        norm(&x),
        dot(&q, &x)
    );

    let l2 = L2AlshParams::new(3, 0.83, 2.5)?;
    let sign = SignAlshParams::new(2, 0.75)?;
    for scheme in [
        Scheme::L2Alsh(l2),
        Scheme::SignAlsh(sign),
        Scheme::SimpleLsh,
        Scheme::SimpleAlsh,
    ] {
        let p = scheme.transform(&x, Side::Data)?;
        let tq = scheme.transform(&q, Side::Query)?;
        println!("{}", scheme.label());
        println!("  P(x) = {p:.4?}");
        println!("  Q(q) = {tq:.4?}");
        println!("  P·Q = {:.6}, |P| = {:.6}", dot(&p, &tq), norm(&p));
    }

    // L2-ALSH: |P−Q|² = |q|² + m/4 + |Ux|^(2^(m+1)) − 2U q·x
    let n_pow = (l2.u() * norm(&x)).powi(1 << (l2.m() + 1));
    let predicted = 1.0 + l2.m() as f64 / 4.0 + n_pow - 2.0 * l2.u() * dot(&q, &x);
    println!(
        "\nL2-ALSH distance² {:.12} vs identity {:.12}",
        l2alsh_distance_sq(&x, &q, &l2)?,
        predicted
    );

    // SIGN-ALSH: |P|² = m/4 + |Ux|^(2^(m+1))
    let n_pow = (sign.u() * norm(&x)).powi(1 << (sign.m() + 1));
    println!(
        "SIGN-ALSH |P|²    {:.12} vs identity {:.12}",
        signalsh_p_norm_sq(&x, &sign)?,
        sign.m() as f64 / 4.0 + n_pow
    );
    Ok(())
}

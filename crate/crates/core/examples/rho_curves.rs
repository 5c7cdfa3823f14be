//! Hashing quality ρ of each scheme across c for a fixed S.
//!
//!     cargo run --release --example rho_curves [S]

use mips_lsh::rho::{rho_table, GridSpec};

fn main() -> mips_lsh::Result<()> {
    let s: f64 = std::env::args()
        .nth(1)
        .map(|v| v.parse().expect("S must be a number"))
        .unwrap_or(0.9);
    let c_values: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let rows = rho_table(&[s], &c_values, &GridSpec::default())?;

    println!("S = {s}");
    println!(
        "{:>4} {:>11} {:>11} {:>11}  best L2-ALSH / SIGN-ALSH",
        "c", "simple-lsh", "l2-alsh", "sign-alsh"
    );
    let show =
        |o: &mips_lsh::rho::RhoOutcome| o.rho().map_or("-".to_string(), |r| format!("{r:.5}"));
    for row in rows {
        let label = |o: &mips_lsh::rho::RhoOutcome| {
            o.result()
                .and_then(|r| r.argmin)
                .map_or("infeasible".to_string(), |s| s.label())
        };
        println!(
            "{:>4} {:>11.5} {:>11} {:>11}  {} / {}",
            row.c,
            row.simple.rho,
            show(&row.l2alsh),
            show(&row.signalsh),
            label(&row.l2alsh),
            label(&row.signalsh)
        );
    }
    Ok(())
}

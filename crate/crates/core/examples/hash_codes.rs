//! K-symbol hash codes and Hamming ranking of a small database.
//!
//!     cargo run --example hash_codes

use mips_lsh::hashers::{hamming, HashFamily};
use mips_lsh::model::dot;
use mips_lsh::rng::Stream;
use mips_lsh::{Scheme, Side};

fn main() -> mips_lsh::Result<()> {
    let dim = 16;
    let mut rng = Stream::new(7, 99, 0);
    let items: Vec<Vec<f64>> = (0..200)
        .map(|_| {
            let v = rng.normals(dim);
            let scale = rng.uniform() / mips_lsh::model::norm(&v);
            v.into_iter().map(|c| c * scale).collect()
        })
        .collect();
    let query = {
        let v = rng.normals(dim);
        let n = mips_lsh::model::norm(&v);
        v.into_iter().map(|c| c / n).collect::<Vec<_>>()
    };

    let family = HashFamily::new(Scheme::SimpleLsh, dim, 128, 0)?;
    let codes = family.encode_all(&items, Side::Data)?;
    let qcode = family.encode(&query, Side::Query)?;

    let mut by_hamming: Vec<(usize, usize)> = codes
        .iter()
        .enumerate()
        .map(|(i, c)| Ok((hamming(&qcode, c)?, i)))
        .collect::<mips_lsh::Result<_>>()?;
    by_hamming.sort();
    let mut by_ip: Vec<usize> = (0..items.len()).collect();
    by_ip.sort_by(|&a, &b| dot(&query, &items[b]).total_cmp(&dot(&query, &items[a])));

    println!(
        "K = {} bits; best items by inner product: {:?}",
        family.k(),
        &by_ip[..5]
    );
    println!("{:>6} {:>8} {:>10}", "item", "hamming", "q·x");
    for &(d, i) in by_hamming.iter().take(10) {
        println!("{i:>6} {d:>8} {:>10.4}", dot(&query, &items[i]));
    }

    // Shorter codes are prefixes of longer ones under the same seed.
    let short = HashFamily::new(Scheme::SimpleLsh, dim, 32, 0)?.encode(&query, Side::Query)?;
    assert_eq!(short, qcode.prefix(32));
    Ok(())
}

//! Retrieval pipeline properties on small factorizations.

use nalgebra::DMatrix;

use mips_lsh::benchmark::{run_retrieval, Factorization, RetrievalConfig};
use mips_lsh::rng::Stream;
use mips_lsh::{Scheme, SignAlshParams};

fn random_factors(users: usize, items: usize, rank: usize, seed: u64) -> Factorization {
    let mut s = Stream::new(seed, 0xBE, 0);
    let l = DMatrix::from_fn(users, rank, |_, _| s.normal());
    let r = DMatrix::from_fn(items, rank, |_, _| s.normal() * (0.2 + s.uniform()));
    Factorization::new(l, r).unwrap()
}

fn config(t: Vec<usize>, k: Vec<usize>, n_queries: Option<usize>, seed: u64) -> RetrievalConfig {
    RetrievalConfig {
        t_values: t,
        k_values: k,
        n_queries,
        seed,
    }
}

#[test]
fn long_codes_approach_exact_ranking() {
    // Under SIMPLE-LSH the collision probability is monotone in q·x, so with
    // enough bits the Hamming order recovers the inner-product order.
    let fac = random_factors(10, 40, 4, 1);
    let curves = run_retrieval(
        Scheme::SimpleLsh,
        &fac,
        &config(vec![5], vec![64, 1 << 14], None, 0),
    )
    .unwrap();
    let (short, long) = (curves[0].area(), curves[1].area());
    assert!(long > 0.95, "area with 2^14 bits: {long}");
    assert!(long >= short);
}

#[test]
fn single_item_found_first_gives_unit_precision() {
    let users = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
    let items = DMatrix::from_row_slice(3, 2, &[0.9, 0.1, -0.5, 0.5, 0.1, -0.9]);
    let fac = Factorization::new(users, items).unwrap();
    let curves = run_retrieval(
        Scheme::SimpleLsh,
        &fac,
        &config(vec![1], vec![4096], None, 0),
    )
    .unwrap();
    assert_eq!(curves[0].points, vec![(1.0, 1.0)]);
}

#[test]
fn curves_are_reproducible_and_well_formed() {
    let fac = random_factors(30, 60, 6, 2);
    let scheme = Scheme::SignAlsh(SignAlshParams::new(2, 0.75).unwrap());
    let cfg = config(vec![3, 10], vec![8, 32], Some(20), 5);
    let a = run_retrieval(scheme, &fac, &cfg).unwrap();
    let b = run_retrieval(scheme, &fac, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 4);
    assert_eq!((a[0].t, a[0].k, a[3].t, a[3].k), (3, 8, 10, 32));
    for c in &a {
        assert_eq!(c.points.len(), c.t);
        assert!(c.points.windows(2).all(|w| w[0].0 < w[1].0));
        assert!(c
            .points
            .iter()
            .all(|&(r, p)| (0.0..=1.0).contains(&r) && (0.0..=1.0).contains(&p)));
        assert_eq!(c.points.last().unwrap().0, 1.0);
    }

    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    assert_eq!(
        serial.install(|| run_retrieval(scheme, &fac, &cfg).unwrap()),
        a
    );
}

#[test]
fn shorter_codes_match_a_separate_run() {
    // Curves for K=16 computed alongside K=64 equal those from a K=16-only run.
    let fac = random_factors(20, 50, 5, 3);
    let both = run_retrieval(
        Scheme::SimpleAlsh,
        &fac,
        &config(vec![5], vec![16, 64], None, 9),
    )
    .unwrap();
    let alone = run_retrieval(
        Scheme::SimpleAlsh,
        &fac,
        &config(vec![5], vec![16], None, 9),
    )
    .unwrap();
    assert_eq!(both[0], alone[0]);
}

#[test]
fn invalid_configurations() {
    let fac = random_factors(5, 8, 3, 4);
    for cfg in [
        config(vec![9], vec![8], None, 0),
        config(vec![0], vec![8], None, 0),
        config(vec![3], vec![0], None, 0),
        config(vec![3], vec![8], Some(6), 0),
        config(vec![], vec![8], None, 0),
    ] {
        assert!(
            run_retrieval(Scheme::SimpleLsh, &fac, &cfg).is_err(),
            "{cfg:?}"
        );
    }
}

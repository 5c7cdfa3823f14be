//! Subcommand plumbing: outputs, manifests, reports and error paths.

use std::path::Path;

use mips_lsh::cli::run;

fn mips(args: &[&str]) -> anyhow::Result<String> {
    let mut out = Vec::new();
    run(
        std::iter::once("mips-lsh").chain(args.iter().copied()),
        &mut out,
    )?;
    Ok(String::from_utf8(out).unwrap())
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn rho_curves_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "rho.csv");
    mips(&[
        "rho-curves",
        "--S",
        "0.5",
        "--c-grid",
        "0.1:0.9:0.1",
        "--out",
        &out,
    ])
    .unwrap();
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 10);
    assert!(csv.starts_with("S,c,rho_simple,"));
    assert!(csv.contains("\n0.5,0.5,0.7453608285,"));

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{out}.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"][0], "rho-curves");
    assert_eq!(
        manifest["config"]["command"]["rho-curves"]["c_grid"]
            .as_array()
            .unwrap()
            .len(),
        9
    );
    assert_eq!(manifest["outputs"][0], out.as_str());
}

#[test]
fn verify_reports_positive_margin() {
    let report = mips(&[
        "verify",
        "--lemma",
        "l2-nonuniversal",
        "--m",
        "3",
        "--U",
        "0.83",
        "--S",
        "0.9",
        "--c",
        "0.98",
    ])
    .unwrap();
    let lines: Vec<serde_json::Value> = report
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 1);
    let line = &lines[0];
    assert_eq!(line["lemma"], "l2-nonuniversal");
    assert_eq!(line["outcome"], "positive");
    assert!(line["margin"].as_f64().unwrap() > 0.0);
    assert_eq!(line["params"]["m"], 3);
    assert_eq!(line["pass"], true);
}

#[test]
fn verify_all_skips_lemmas_whose_range_excludes_the_pair() {
    // c = 0.5 is below the L2-ALSH threshold at S = 0.9 but fine for the bounded lemmas.
    let report = mips(&["verify", "--S", "0.6", "--c", "0.5", "--n", "0"]).unwrap();
    let lines: Vec<serde_json::Value> = report
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0]["skipped"].is_string());
    assert_eq!(lines[2]["lemma"], "l2-bounded");
    assert_eq!(lines[2]["pass"], true);
    // asking for that lemma alone is an error
    assert!(mips(&[
        "verify",
        "--lemma",
        "l2-nonuniversal",
        "--S",
        "0.6",
        "--c",
        "0.5"
    ])
    .is_err());
}

#[test]
fn benchmark_writes_pr_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "pr.csv");
    mips(&[
        "benchmark",
        "--scheme",
        "simple-lsh",
        "--K",
        "256",
        "--T",
        "10",
        "--synthetic",
        "--users",
        "80",
        "--items",
        "150",
        "--f",
        "10",
        "--out",
        &out,
    ])
    .unwrap();
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "scheme,T,K,recall,precision");
    assert_eq!(csv.lines().count(), 11);
    assert!(csv
        .lines()
        .nth(10)
        .unwrap()
        .starts_with("simple-lsh,10,256,1,"));
}

#[test]
fn benchmark_reads_ratings_files() {
    let dir = tempfile::tempdir().unwrap();
    let ratings = p(dir.path(), "ratings.dat");
    let mut text = String::new();
    for u in 0..12 {
        for i in 0..9 {
            if (u * 7 + i * 3) % 4 != 0 {
                text.push_str(&format!("u{u}::i{i}::{}::0\n", 1 + (u * i) % 5));
            }
        }
    }
    std::fs::write(&ratings, text).unwrap();
    let out = p(dir.path(), "pr.csv");
    mips(&[
        "benchmark",
        "--scheme",
        "sign-alsh,simple-alsh",
        "--K",
        "8,32",
        "--T",
        "3",
        "--ratings",
        &ratings,
        "--delimiter",
        "::",
        "--f",
        "4",
        "--out",
        &out,
    ])
    .unwrap();
    assert_eq!(
        std::fs::read_to_string(&out).unwrap().lines().count(),
        1 + 2 * 2 * 3
    );
}

#[test]
fn collision_table_has_one_row_per_pair() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "c.csv");
    mips(&[
        "collision",
        "--scheme",
        "l2-alsh",
        "--m",
        "2",
        "--pairs",
        "4",
        "--n",
        "5000",
        "--out",
        &out,
    ])
    .unwrap();
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.starts_with("pair,q_dot_x,analytic,monte_carlo,stderr,z\n"));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (p(dir.path(), "a.csv"), p(dir.path(), "b.csv"));
    let args = [
        "collision",
        "--scheme",
        "simple-alsh",
        "--pairs",
        "3",
        "--n",
        "20000",
        "--out",
    ];
    let run_with = |threads: &str, out: &str| {
        let mut v = vec!["--threads", threads];
        v.extend(args);
        v.push(out);
        mips(&v).unwrap();
    };
    run_with("1", &a);
    run_with("3", &b);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn invalid_input_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "x.csv");
    let missing = p(dir.path(), "missing.tsv");
    let cases: Vec<Vec<&str>> = vec![
        vec!["frobnicate"],
        vec![
            "rho-curves",
            "--S",
            "0.5",
            "--c-grid",
            "0.9:0.1:0.1",
            "--out",
            &out,
        ],
        vec!["rho-curves", "--S", "1.5", "--c", "0.5", "--out", &out],
        vec![
            "rho-curves",
            "--S",
            "0.5",
            "--c",
            "0.5",
            "--U-grid",
            "0.5:1.5:0.5",
            "--out",
            &out,
        ],
        vec!["verify", "--lemma", "l2-bounded", "--U", "1.2"],
        vec!["verify", "--dim", "1"],
        vec![
            "benchmark",
            "--scheme",
            "simple-lsh",
            "--ratings",
            &missing,
            "--out",
            &out,
        ],
        vec![
            "benchmark",
            "--scheme",
            "simple-lsh",
            "--synthetic",
            "--K",
            "0",
            "--out",
            &out,
        ],
        vec![
            "benchmark",
            "--scheme",
            "simple-lsh",
            "--synthetic",
            "--T",
            "5000",
            "--out",
            &out,
        ],
        vec![
            "collision",
            "--scheme",
            "l2-alsh",
            "--r",
            "-1",
            "--out",
            &out,
        ],
        vec!["--threads", "0", "verify"],
    ];
    for args in cases {
        assert!(mips(&args).is_err(), "{args:?} should fail");
    }
}

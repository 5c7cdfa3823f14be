//! Command-line front end: `rho-curves`, `collision`, `verify`, `benchmark`.
//!
//! Every subcommand that writes a file also writes `<out>.manifest.json` next
//! to it, holding the parsed configuration and the exact argument vector.
//! Replaying that argument vector reproduces the output byte for byte: all
//! randomness is keyed by `--seed`, parallel work is reduced in a fixed
//! order, and nothing time- or host-dependent is recorded.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::benchmark::{
    emit_pr_csv, ingest_ratings, pure_svd, run_retrieval, synthetic_ratings, RetrievalConfig,
    SvdOptions, SyntheticSpec,
};
use crate::collision::{analytic_collision, monte_carlo_collision};
use crate::fmt::sig10;
use crate::model::{norm, ThresholdPair};
use crate::rho::{emit_rho_curves, GridSpec};
use crate::rng::{Stream, DOMAIN_SAMPLE};
use crate::theory::{
    lemma1_witness, signalsh_bounded_witness, signalsh_nonuniversal_witness, thm3_witness,
    thm4_witness, LemmaId, MarginOutcome, Witness,
};
use crate::transforms::{L2AlshParams, Scheme, SignAlshParams};

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "mips-lsh",
    version,
    about = "LSH schemes for maximum inner product search"
)]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Hashing quality of every scheme over an (S, c) grid, as CSV.
    RhoCurves(RhoArgs),
    /// Analytic vs sampled collision probability on random (x, q) pairs, as CSV.
    Collision(CollisionArgs),
    /// Build counterexample witnesses and report them as JSON lines.
    Verify(VerifyArgs),
    /// Precision-recall of Hamming ranking on pureSVD factors, as CSV.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeName {
    L2Alsh,
    SignAlsh,
    SimpleLsh,
    SimpleAlsh,
}

/// Scheme parameters; unset values take the per-scheme defaults
/// (L2-ALSH m=3 U=0.83 r=2.5, SIGN-ALSH m=2 U=0.75).
#[derive(Debug, Clone, Args, Serialize)]
pub struct SchemeArgs {
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long = "U")]
    #[serde(rename = "U")]
    pub u: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
}

impl SchemeArgs {
    pub fn l2(&self) -> crate::Result<L2AlshParams> {
        L2AlshParams::new(
            self.m.unwrap_or(3),
            self.u.unwrap_or(0.83),
            self.r.unwrap_or(2.5),
        )
    }

    pub fn sign(&self) -> crate::Result<SignAlshParams> {
        SignAlshParams::new(self.m.unwrap_or(2), self.u.unwrap_or(0.75))
    }

    pub fn scheme(&self, name: SchemeName) -> crate::Result<Scheme> {
        Ok(match name {
            SchemeName::L2Alsh => Scheme::L2Alsh(self.l2()?),
            SchemeName::SignAlsh => Scheme::SignAlsh(self.sign()?),
            SchemeName::SimpleLsh => Scheme::SimpleLsh,
            SchemeName::SimpleAlsh => Scheme::SimpleAlsh,
        })
    }
}

#[derive(Debug, Args, Serialize)]
pub struct RhoArgs {
    /// Similarity thresholds S (comma-separated).
    #[arg(long = "S", value_delimiter = ',', required = true)]
    #[serde(rename = "S")]
    pub s: Vec<f64>,
    /// Approximation ratios c (comma-separated).
    #[arg(long, value_delimiter = ',', conflicts_with = "c_grid")]
    pub c: Vec<f64>,
    /// Ratios c as `start:stop:step`, inclusive.
    #[arg(long, value_parser = parse_range_arg)]
    pub c_grid: Option<Range>,
    /// Candidate m values (comma-separated, default 1..6).
    #[arg(long, value_delimiter = ',')]
    pub m_grid: Vec<u32>,
    /// Candidate U values as `start:stop:step` (default 0.01:0.99:0.01).
    #[arg(long = "U-grid", value_parser = parse_range_arg)]
    #[serde(rename = "U_grid")]
    pub u_grid: Option<Range>,
    /// Candidate r values as `start:stop:step` (default 0.1:5:0.1).
    #[arg(long, value_parser = parse_range_arg)]
    pub r_grid: Option<Range>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct CollisionArgs {
    #[arg(long, value_enum)]
    pub scheme: SchemeName,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: SchemeArgs,
    /// Number of random (x, q) pairs.
    #[arg(long, default_value_t = 100)]
    pub pairs: usize,
    /// Hash draws per pair.
    #[arg(long, default_value_t = 100_000)]
    pub n: u64,
    #[arg(long, default_value_t = 8)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Lemma id, or `all`.
    #[arg(long, default_value = "all")]
    pub lemma: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: SchemeArgs,
    #[arg(long = "S", default_value_t = 0.9)]
    #[serde(rename = "S")]
    pub s: f64,
    #[arg(long, default_value_t = 0.98)]
    pub c: f64,
    /// Embed witnesses in this many dimensions (at least 2).
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Hash draws for the sampled comparison; 0 skips it.
    #[arg(long, default_value_t = 100_000)]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["synthetic", "ratings"])))]
pub struct BenchmarkArgs {
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub scheme: Vec<SchemeName>,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: SchemeArgs,
    /// Hash code lengths (comma-separated).
    #[arg(long = "K", value_delimiter = ',', default_value = "16,64,256")]
    #[serde(rename = "K")]
    pub k: Vec<usize>,
    /// Top-T relevance cutoffs (comma-separated).
    #[arg(long = "T", value_delimiter = ',', default_value = "10")]
    #[serde(rename = "T")]
    pub t: Vec<usize>,
    /// Use generated low-rank ratings.
    #[arg(long)]
    pub synthetic: bool,
    /// Ratings file: `user<delim>item<delim>rating` per line.
    #[arg(long)]
    pub ratings: Option<PathBuf>,
    #[arg(long, default_value = "\t")]
    pub delimiter: String,
    #[arg(long, default_value_t = 500)]
    pub users: usize,
    #[arg(long, default_value_t = 1000)]
    pub items: usize,
    /// Factorization rank (also the synthetic signal rank).
    #[arg(long, default_value_t = 50)]
    pub f: usize,
    /// Users sampled as queries (default: all).
    #[arg(long)]
    pub queries: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Values of a parsed `start:stop:step` flag.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Range(pub Vec<f64>);

fn parse_range_arg(spec: &str) -> Result<Range, String> {
    parse_range(spec).map(Range)
}

/// Inclusive `start:stop:step`, each value rounded to 12 decimals.
pub fn parse_range(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, step] = parts[..] else {
        return Err(format!("expected start:stop:step, got '{spec}'"));
    };
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| format!("'{v}' is not a number"))
    };
    let (a, b, step) = (parse(a)?, parse(b)?, parse(step)?);
    if !(a.is_finite() && b.is_finite() && step.is_finite()) {
        return Err("range bounds must be finite".into());
    }
    if step <= 0.0 || b < a {
        return Err(format!("need step > 0 and stop >= start in '{spec}'"));
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a [String],
    config: &'a Cli,
    outputs: Vec<String>,
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn write_manifest(cli: &Cli, argv: &[String], out: &Path) -> anyhow::Result<()> {
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: argv,
        config: cli,
        outputs: vec![out.display().to_string()],
    };
    let path = manifest_path(out);
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

/// Parses `argv` (including the program name) and runs it, sending reports to `stdout`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write) -> anyhow::Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        ensure!(n > 0, "--threads must be at least 1");
        pool = pool.num_threads(n);
    }
    let pool = pool.build().context("starting worker pool")?;
    let args = argv.get(1..).unwrap_or_default();
    let report = pool.install(|| dispatch(&cli, args))?;
    stdout.write_all(report.text.as_bytes())?;
    ensure!(report.ok, "at least one witness failed its check");
    Ok(())
}

/// Text for stdout, and whether every check in it passed.
struct Report {
    text: String,
    ok: bool,
}

impl Report {
    fn quiet() -> Self {
        Self {
            text: String::new(),
            ok: true,
        }
    }
}

fn dispatch(cli: &Cli, argv: &[String]) -> anyhow::Result<Report> {
    match &cli.command {
        Command::RhoCurves(a) => {
            rho_curves(a)?;
            write_manifest(cli, argv, &a.out)?;
            Ok(Report::quiet())
        }
        Command::Collision(a) => {
            collision(a)?;
            write_manifest(cli, argv, &a.out)?;
            Ok(Report::quiet())
        }
        Command::Verify(a) => {
            let report = verify(a)?;
            if let Some(out) = &a.out {
                write_manifest(cli, argv, out)?;
            }
            Ok(report)
        }
        Command::Benchmark(a) => {
            benchmark(a)?;
            write_manifest(cli, argv, &a.out)?;
            Ok(Report::quiet())
        }
    }
}

fn rho_curves(a: &RhoArgs) -> anyhow::Result<()> {
    let c_values = match (&a.c_grid, a.c.is_empty()) {
        (Some(g), _) => g.0.clone(),
        (None, false) => a.c.clone(),
        (None, true) => bail!("give --c or --c-grid"),
    };
    let default = GridSpec::default();
    let grid = GridSpec::new(
        if a.m_grid.is_empty() {
            default.m_values
        } else {
            a.m_grid.clone()
        },
        a.u_grid.as_ref().map_or(default.u_values, |g| g.0.clone()),
        a.r_grid.as_ref().map_or(default.r_values, |g| g.0.clone()),
    )?;
    let mut out = create(&a.out)?;
    let rows = emit_rho_curves(&a.s, &c_values, &grid, &mut out)?;
    out.flush()?;
    log::info!("wrote {} rows to {}", rows.len(), a.out.display());
    Ok(())
}

/// A unit query and a database point of norm ≤ 1, uniformly oriented.
fn random_pair(stream: &mut Stream, dim: usize, unit_query: bool) -> (Vec<f64>, Vec<f64>) {
    let direction = |s: &mut Stream| {
        let v = s.normals(dim);
        let n = norm(&v);
        v.into_iter().map(|c| c / n).collect::<Vec<f64>>()
    };
    let radius = stream.uniform();
    let x: Vec<f64> = direction(stream).into_iter().map(|c| c * radius).collect();
    let q_radius = if unit_query { 1.0 } else { stream.uniform() };
    let q = direction(stream)
        .into_iter()
        .map(|c| c * q_radius)
        .collect();
    (x, q)
}

pub const COLLISION_CSV_HEADER: &str = "pair,q_dot_x,analytic,monte_carlo,stderr,z";

fn collision(a: &CollisionArgs) -> anyhow::Result<()> {
    ensure!(a.dim >= 1, "--dim must be at least 1");
    ensure!(a.pairs >= 1, "--pairs must be at least 1");
    let scheme = a.params.scheme(a.scheme)?;
    let mut out = create(&a.out)?;
    writeln!(out, "{COLLISION_CSV_HEADER}")?;
    let mut outside = 0;
    for i in 0..a.pairs {
        let mut stream = Stream::new(a.seed, DOMAIN_SAMPLE, i as u64);
        let (x, q) = random_pair(&mut stream, a.dim, scheme.wants_unit_queries());
        let p = analytic_collision(&scheme, &x, &q)?.value();
        let mc = monte_carlo_collision(&scheme, &x, &q, a.n, a.seed.wrapping_add(1 + i as u64))?;
        let z = if mc.stderr > 0.0 {
            (mc.p - p) / mc.stderr
        } else if mc.p == p {
            0.0
        } else {
            f64::INFINITY
        };
        if z.abs() > 3.0 {
            outside += 1;
        }
        writeln!(
            out,
            "{i},{},{},{},{},{}",
            sig10(crate::model::dot(&q, &x)),
            sig10(p),
            sig10(mc.p),
            sig10(mc.stderr),
            sig10(z)
        )?;
    }
    out.flush()?;
    log::info!("{outside} of {} pairs outside 3 standard errors", a.pairs);
    Ok(())
}

fn witness_for(lemma: LemmaId, a: &VerifyArgs) -> crate::Result<Witness> {
    let t = ThresholdPair::new(a.s, a.c)?;
    match lemma {
        LemmaId::L2Nonuniversal => lemma1_witness(a.params.l2()?, t),
        LemmaId::NoSymmetricLsh => thm3_witness(t),
        LemmaId::L2Bounded => thm4_witness(a.params.l2()?, t),
        LemmaId::SignNonuniversal => signalsh_nonuniversal_witness(a.params.sign()?, t),
        LemmaId::SignBounded => signalsh_bounded_witness(a.params.sign()?, t),
    }
}

fn scheme_params(scheme: &Scheme) -> serde_json::Value {
    match scheme {
        Scheme::L2Alsh(p) => json!({"scheme": "l2-alsh", "m": p.m(), "U": p.u(), "r": p.r()}),
        Scheme::SignAlsh(p) => json!({"scheme": "sign-alsh", "m": p.m(), "U": p.u()}),
        other => json!({"scheme": other.name()}),
    }
}

/// One JSON line per lemma.
fn verify(a: &VerifyArgs) -> anyhow::Result<Report> {
    ensure!(a.dim >= 2, "--dim must be at least 2");
    let lemmas: Vec<LemmaId> = if a.lemma == "all" {
        LemmaId::ALL.to_vec()
    } else {
        vec![a.lemma.parse()?]
    };
    let mut lines = Vec::new();
    let mut all_ok = true;
    for (i, &lemma) in lemmas.iter().enumerate() {
        let w = match witness_for(lemma, a) {
            Ok(w) => w.embed(a.dim)?,
            Err(e @ (crate::Error::Precondition(_) | crate::Error::InvalidParameter(_)))
                if lemmas.len() > 1 =>
            {
                lines.push(json!({
                    "lemma": lemma.as_str(),
                    "S": a.s,
                    "c": a.c,
                    "skipped": e.to_string(),
                }));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let margin_ok = w.outcome() != MarginOutcome::Negative;
        let mc = if a.n > 0 {
            Some(w.monte_carlo_check(a.n, a.seed.wrapping_add(i as u64))?)
        } else {
            None
        };
        let pass = margin_ok && mc.is_none_or(|m| m.near_not_less_likely());
        all_ok &= pass;
        lines.push(json!({
            "lemma": lemma.as_str(),
            "params": scheme_params(&w.scheme),
            "S": w.s,
            "c": w.c,
            "margin_kind": w.kind,
            "margin": w.margin,
            "outcome": w.outcome(),
            "branch": w.branch,
            "constraints_hold": w.similarity_constraints_hold(),
            "mc_near": mc.map(|m| m.near.p),
            "mc_far": mc.map(|m| m.far.p),
            "mc_stderr": mc.map(|m| m.stderr()),
            "pass": pass,
        }));
    }
    let mut text = String::new();
    for line in &lines {
        text.push_str(&serde_json::to_string(line)?);
        text.push('\n');
    }
    if let Some(out) = &a.out {
        let mut f = create(out)?;
        f.write_all(text.as_bytes())?;
        f.flush()?;
    }
    Ok(Report { text, ok: all_ok })
}

fn benchmark(a: &BenchmarkArgs) -> anyhow::Result<()> {
    let ratings = match &a.ratings {
        Some(path) => {
            let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            ingest_ratings(BufReader::new(f), &a.delimiter)?.0
        }
        None => synthetic_ratings(
            &SyntheticSpec {
                n_users: a.users,
                n_items: a.items,
                rank: a.f,
                ..SyntheticSpec::default()
            },
            a.seed,
        )?,
    };
    let fac = pure_svd(
        &ratings,
        a.f,
        &SvdOptions {
            seed: a.seed,
            ..SvdOptions::default()
        },
    )?;
    let cfg = RetrievalConfig {
        t_values: a.t.clone(),
        k_values: a.k.clone(),
        n_queries: a.queries,
        seed: a.seed,
    };
    let mut curves = Vec::new();
    for &name in &a.scheme {
        let scheme = a.params.scheme(name)?;
        let found = run_retrieval(scheme, &fac, &cfg)?;
        for c in &found {
            log::info!("{} T={} K={}: area {:.4}", c.scheme, c.t, c.k, c.area());
        }
        curves.extend(found);
    }
    let mut out = create(&a.out)?;
    emit_pr_csv(&curves, &mut out)?;
    out.flush()?;
    Ok(())
}

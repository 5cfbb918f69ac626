//! Command-line driver: searches, constructions, record checks, degeneracy
//! probes and a function-field spot check. Tuple records go to --out (or
//! stdout) as JSON lines; human-readable summaries go to stderr.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use abctk::constructions::{
    construct_general_with, construct_n4_with, double_triple, family_2k_with, Constructed,
    ConstructionPlan, DEFAULT_DIGIT_BUDGET,
};
use abctk::counting::{ExcessForm, TuplePoint};
use abctk::search::{
    search_quadruples, search_triples, top_k_merge, CoprimalityMode, SearchHit,
};
use abctk::toolkit::{
    self, find_degeneracy, load_records, polyfield_verify, save_records, write_records,
    CheckConfig, RecordOutcome, Source, TupleRecord,
};
use abctk::{Error, Result};

#[derive(Parser)]
#[command(
    name = "abctk",
    version,
    about = "Heights, radicals and quality statistics for zero-sum integer tuples"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate high-quality tuples up to a coordinate bound.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Generate tuples from the extremal constructions.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Evaluate a record file against the height inequality.
    Check(CheckArgs),
    /// Look for exact polynomial relations among recorded points.
    Degeneracy(DegeneracyArgs),
    /// Checks over polynomial triples, where the inequality is a theorem.
    #[command(subcommand)]
    Polyfield(PolyfieldCmd),
    /// Summarize a record file.
    Stats(StatsArgs),
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Coprime triples a + b = c ranked by quality.
    Triples(TriplesArgs),
    /// Zero-sum quadruples ranked by quality.
    Quadruples(QuadruplesArgs),
}

#[derive(Args)]
struct TriplesArgs {
    /// Largest allowed value of c.
    #[arg(long = "max-c")]
    max_c: u64,
    /// Strict lower bound on reported quality.
    #[arg(long = "min-quality", default_value_t = 1.0)]
    min_quality: f64,
    /// Keep only the best K hits.
    #[arg(long)]
    top: Option<usize>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Write records here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QuadruplesArgs {
    /// Largest allowed coordinate in absolute value.
    #[arg(long = "max-c")]
    max_c: u64,
    #[arg(long = "min-quality", default_value_t = 1.0)]
    min_quality: f64,
    /// Which coprimality the tuples must satisfy.
    #[arg(long, value_enum, default_value_t = Coprimality::Overall)]
    coprimality: Coprimality,
    #[arg(long)]
    top: Option<usize>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coprimality {
    Overall,
    Pairwise,
}

impl From<Coprimality> for CoprimalityMode {
    fn from(c: Coprimality) -> CoprimalityMode {
        match c {
            Coprimality::Overall => CoprimalityMode::Overall,
            Coprimality::Pairwise => CoprimalityMode::Pairwise,
        }
    }
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Square recorded triples onto the quadric x1^2 = 4 x0 x2.
    #[command(name = "double")]
    Double(DoubleArgs),
    /// The family (1, 3^(2^k) - 1, -3^(2^k)).
    #[command(name = "family2k")]
    Family2k(FamilyArgs),
    /// Quadruples (x0, -9^e1, 25^e2, 1) with x0 below max^eps.
    #[command(name = "p26-n4")]
    P26N4(N4Args),
    /// Length-n tuples from prime powers with a small leading coordinate.
    #[command(name = "p26-general")]
    P26General(GeneralArgs),
}

#[derive(Args)]
struct DoubleArgs {
    /// Record file holding the triples to square.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyArgs {
    /// Single family index.
    #[arg(long)]
    k: Option<u32>,
    /// Emit members k = 1..=COUNT instead.
    #[arg(long)]
    count: Option<u32>,
    #[arg(long = "digit-budget")]
    digit_budget: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct N4Args {
    /// Rational bound exponent, written as num/den.
    #[arg(long, value_parser = parse_ratio)]
    epsilon: BigRational,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long = "digit-budget")]
    digit_budget: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GeneralArgs {
    /// Tuple length, at least 5.
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, value_parser = parse_ratio)]
    epsilon: BigRational,
    /// Comma-separated primes above n, one per coordinate past the first.
    #[arg(long, value_delimiter = ',')]
    primes: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "digit-budget")]
    digit_budget: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = parse_ratio, default_value = "0")]
    epsilon: BigRational,
    #[arg(long, value_enum, default_value_t = FormArg::Masser)]
    form: FormArg,
    /// Excesses above this count as violations.
    #[arg(long = "c-log", default_value_t = 0.0)]
    c_log: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Masser,
    Vojta,
}

impl From<FormArg> for ExcessForm {
    fn from(f: FormArg) -> ExcessForm {
        match f {
            FormArg::Masser => ExcessForm::Masser,
            FormArg::Vojta => ExcessForm::Vojta,
        }
    }
}

#[derive(Args)]
struct DegeneracyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Degree of the forms to test.
    #[arg(long, default_value_t = 2)]
    degree: u32,
}

#[derive(Subcommand)]
enum PolyfieldCmd {
    /// Sample random coprime triples and test the degree inequality.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long = "max-deg", default_value_t = 30)]
    max_deg: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long = "in")]
    input: PathBuf,
}

fn parse_ratio(s: &str) -> std::result::Result<BigRational, String> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| format!("{:?} is not an integer", num))?;
    let d = BigInt::from_str(den).map_err(|_| format!("{:?} is not an integer", den))?;
    if d.is_zero() {
        return Err("denominator is zero".to_string());
    }
    Ok(BigRational::new(n, d))
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e);
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Search(SearchCmd::Triples(a)) => {
            let hits = search_triples(a.max_c, a.min_quality, a.threads)?;
            let hits = match a.top {
                Some(k) => top_k_merge(&[hits], k),
                None => hits,
            };
            let records: Vec<TupleRecord> = hits.iter().map(hit_record).collect();
            emit_records(&a.out, &records)?;
            eprintln!(
                "{} triple{} with quality > {} and c <= {}",
                records.len(),
                plural(records.len()),
                a.min_quality,
                a.max_c
            );
            Ok(())
        }
        Cmd::Search(SearchCmd::Quadruples(a)) => {
            let hits = search_quadruples(a.max_c, a.min_quality, a.coprimality.into(), a.threads)?;
            let hits = match a.top {
                Some(k) => top_k_merge(&[hits], k),
                None => hits,
            };
            let records: Vec<TupleRecord> = hits.iter().map(hit_record).collect();
            emit_records(&a.out, &records)?;
            eprintln!(
                "{} quadruple{} with quality > {} and coordinates up to {}",
                records.len(),
                plural(records.len()),
                a.min_quality,
                a.max_c
            );
            Ok(())
        }
        Cmd::Construct(ConstructCmd::Double(a)) => {
            let recs = load_records(&a.input)?;
            let mut out = Vec::with_capacity(recs.len());
            for rec in &recs {
                let doubled = double_triple(&rec.to_point()?)?;
                let mut r = TupleRecord::from_point(&doubled, Source::Double);
                r.meta.insert(
                    "parent".to_string(),
                    Value::Array(rec.x.iter().cloned().map(Value::String).collect()),
                );
                out.push(r);
            }
            emit_records(&a.out, &out)?;
            eprintln!("doubled {} triple{}", out.len(), plural(out.len()));
            Ok(())
        }
        Cmd::Construct(ConstructCmd::Family2k(a)) => {
            let ks: Vec<u32> = match (a.k, a.count) {
                (Some(k), None) => vec![k],
                (None, Some(c)) if c >= 1 => (1..=c).collect(),
                _ => {
                    return Err(Error::validation(
                        "family2k: give exactly one of --k or --count",
                    ))
                }
            };
            let budget = a.digit_budget.unwrap_or(DEFAULT_DIGIT_BUDGET);
            let mut recs = Vec::with_capacity(ks.len());
            for k in ks {
                let p = family_2k_with(k, budget)?;
                let mut r = TupleRecord::from_point(&p, Source::Family2k);
                r.meta.insert("k".to_string(), Value::from(k));
                recs.push(r);
            }
            emit_records(&a.out, &recs)?;
            eprintln!("{} family member{}", recs.len(), plural(recs.len()));
            Ok(())
        }
        Cmd::Construct(ConstructCmd::P26N4(a)) => {
            let budget = a.digit_budget.unwrap_or(DEFAULT_DIGIT_BUDGET);
            let results = construct_n4_with(&a.epsilon, a.count, budget)?;
            emit_constructed(&a.out, &results, Source::P26N4)
        }
        Cmd::Construct(ConstructCmd::P26General(a)) => {
            let budget = a.digit_budget.unwrap_or(DEFAULT_DIGIT_BUDGET);
            let primes = if a.primes.is_empty() {
                None
            } else {
                Some(a.primes.as_slice())
            };
            let results =
                construct_general_with(a.n, &a.epsilon, primes, a.count, a.seed, budget)?;
            emit_constructed(&a.out, &results, Source::P26General)
        }
        Cmd::Check(a) => {
            let recs = load_records(&a.input)?;
            let cfg = CheckConfig {
                eps: a.epsilon.clone(),
                form: a.form.into(),
                c_log: a.c_log,
            };
            let report = toolkit::check(&recs, &cfg)?;
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            for entry in &report.entries {
                match entry {
                    RecordOutcome::Evaluated {
                        index,
                        quality,
                        excess,
                        height,
                        counting_trunc,
                        infinite_quality,
                    } => writeln!(
                        w,
                        "record {}: quality={}{} excess={:.12} height={:.12} n1={:.12}",
                        index + 1,
                        format_quality(*quality),
                        if *infinite_quality { " (infinite)" } else { "" },
                        excess,
                        height,
                        counting_trunc
                    )?,
                    RecordOutcome::Failed { index, message } => {
                        writeln!(w, "record {}: failed: {}", index + 1, message)?
                    }
                }
            }
            let s = &report.summary;
            writeln!(
                w,
                "summary: evaluated={} failed={} infinite={} violations={} max_excess={}",
                s.evaluated,
                s.failed,
                s.infinite,
                s.violations,
                s.max_excess
                    .map_or("none".to_string(), |m| format!("{:.12}", m))
            )?;
            for (bin, count) in &s.histogram {
                let lo = *bin as f64 * 0.25;
                writeln!(w, "histogram [{:.2}, {:.2}): {}", lo, lo + 0.25, count)?;
            }
            w.flush()?;
            Ok(())
        }
        Cmd::Degeneracy(a) => {
            let recs = load_records(&a.input)?;
            let points: Vec<TuplePoint> =
                recs.iter().map(|r| r.to_point()).collect::<Result<_>>()?;
            let report = find_degeneracy(&points, a.degree)?;
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            writeln!(
                w,
                "n={} points={} degree={} monomials={} underdetermined={}",
                report.n,
                report.n_points,
                report.degree,
                report.monomial_basis.len(),
                report.underdetermined
            )?;
            writeln!(
                w,
                "basis: {}",
                report
                    .monomial_basis
                    .iter()
                    .map(|e| format_monomial(e))
                    .collect::<Vec<_>>()
                    .join(" ")
            )?;
            writeln!(w, "kernel dimension {}", report.kernel_basis.len())?;
            for v in &report.kernel_basis {
                writeln!(
                    w,
                    "[{}]",
                    v.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                )?;
            }
            w.flush()?;
            Ok(())
        }
        Cmd::Polyfield(PolyfieldCmd::Verify(a)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let (passes, trials) = polyfield_verify(&mut rng, a.trials, a.max_deg)?;
            println!("{}/{} pass", passes, trials);
            if passes != trials {
                return Err(Error::validation("degree inequality failed on a triple"));
            }
            Ok(())
        }
        Cmd::Stats(a) => {
            let recs = load_records(&a.input)?;
            let mut by_source: BTreeMap<String, usize> = BTreeMap::new();
            let mut n_min = usize::MAX;
            let mut n_max = 0usize;
            let mut max_digits = 0usize;
            for r in &recs {
                *by_source.entry(r.source.to_string()).or_insert(0) += 1;
                n_min = n_min.min(r.n);
                n_max = n_max.max(r.n);
                for x in &r.x {
                    max_digits = max_digits.max(x.trim_start_matches('-').len());
                }
            }
            println!("records: {}", recs.len());
            for (s, c) in &by_source {
                println!("source {}: {}", s, c);
            }
            if !recs.is_empty() {
                println!("n range: {}..{}", n_min, n_max);
                println!("largest coordinate: {} digits", max_digits);
            }
            Ok(())
        }
    }
}

fn plural(n: usize) -> &'static str {
    if n == 1 {
        ""
    } else {
        "s"
    }
}

fn format_quality(q: f64) -> String {
    if q.is_infinite() {
        "inf".to_string()
    } else {
        format!("{:.12}", q)
    }
}

fn format_monomial(expo: &[u32]) -> String {
    let parts: Vec<String> = expo
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{}", i)
            } else {
                format!("x{}^{}", i, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn hit_record(h: &SearchHit) -> TupleRecord {
    let mut rec = TupleRecord::from_point(&h.point, Source::Search);
    rec.meta.insert(
        "quality".to_string(),
        Value::String(format_quality(h.quality)),
    );
    rec.meta.insert("c_max".to_string(), Value::from(h.c_max));
    rec
}

fn emit_records(out: &Option<PathBuf>, records: &[TupleRecord]) -> Result<()> {
    match out {
        Some(path) => save_records(path, records),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_records(&mut lock, records)?;
            lock.flush()?;
            Ok(())
        }
    }
}

fn plan_line(plan: &ConstructionPlan) -> String {
    let mut s = format!("kind={} n={}", plan.kind, plan.n);
    if let Some(eps) = &plan.eps {
        s.push_str(&format!(" epsilon={}/{}", eps.numer(), eps.denom()));
    }
    if let Some(e1) = plan.e1 {
        s.push_str(&format!(" e1={}", e1));
    }
    if let Some(e2) = plan.e2 {
        s.push_str(&format!(" e2={}", e2));
    }
    if let Some(k) = plan.k {
        s.push_str(&format!(" k={}", k));
    }
    if !plan.primes.is_empty() {
        s.push_str(&format!(" primes={:?}", plan.primes));
    }
    s
}

fn plan_meta(meta: &mut BTreeMap<String, Value>, plan: &ConstructionPlan) {
    if let Some(eps) = &plan.eps {
        meta.insert(
            "epsilon".to_string(),
            Value::String(format!("{}/{}", eps.numer(), eps.denom())),
        );
    }
    if let Some(e1) = plan.e1 {
        meta.insert("e1".to_string(), Value::from(e1));
    }
    if let Some(e2) = plan.e2 {
        meta.insert("e2".to_string(), Value::from(e2));
    }
    if let Some(k) = plan.k {
        meta.insert("k".to_string(), Value::from(k));
    }
    if !plan.primes.is_empty() {
        meta.insert(
            "primes".to_string(),
            Value::Array(plan.primes.iter().map(|&p| Value::from(p)).collect()),
        );
    }
    if !plan.orders.is_empty() {
        meta.insert(
            "orders".to_string(),
            Value::Array(plan.orders.iter().map(|&r| Value::from(r)).collect()),
        );
    }
    if !plan.extra_exponents.is_empty() {
        meta.insert(
            "extra_exponents".to_string(),
            Value::Array(
                plan.extra_exponents
                    .iter()
                    .map(|&e| Value::from(e))
                    .collect(),
            ),
        );
    }
    if let Some(seed) = plan.seed {
        meta.insert("seed".to_string(), Value::from(seed));
    }
}

/// Write realized tuples as records; if a plan could not be materialized
/// under the digit budget, report it and fail with a resource error so the
/// exit code distinguishes "too big" from "wrong".
fn emit_constructed(
    out: &Option<PathBuf>,
    results: &[Constructed],
    source: Source,
) -> Result<()> {
    let mut recs = Vec::new();
    let mut plan_only: Option<(&ConstructionPlan, &str)> = None;
    for c in results {
        match c {
            Constructed::Realized { point, plan } => {
                let mut r = TupleRecord::from_point(point, source);
                plan_meta(&mut r.meta, plan);
                recs.push(r);
            }
            Constructed::PlanOnly { plan, reason } => {
                plan_only = Some((plan, reason.as_str()));
            }
        }
    }
    emit_records(out, &recs)?;
    eprintln!("{} tuple{} realized", recs.len(), plural(recs.len()));
    if let Some((plan, reason)) = plan_only {
        eprintln!("plan only: {}", plan_line(plan));
        return Err(Error::resource(reason.to_string()));
    }
    Ok(())
}

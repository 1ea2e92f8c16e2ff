//! Command-line runner: builds the task list for a command, evaluates it on a
//! bounded worker pool, and emits records in a fixed order.

use std::fmt;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;

use supercong::congruence::{
    check_lemma_sun3, check_ratio_expansion, lemma_f_sum, lemma_g_sum, Table1,
};
use supercong::conjecture::{discover_constant, verify_constant_at, ConjFamily, VariantSelection};
use supercong::report::{serialize_records, IdentityRecord, TableRow};
use supercong::series::{boundary_closed_form, telescoped_sides, wz_f, wz_g, WzPoint};
use supercong::special::{check_morley, check_wolstenholme};
use supercong::{check_with, primes_in_range, CheckId, Error, Format, Record};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURES: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "supercong",
    version,
    about = "Exact verification of truncated hypergeometric supercongruences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,

    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0, global = true)]
    pub jobs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Congruence checks over a prime range.
    Verify(VerifyArgs),
    /// Exact summation identities with the tabulated closed forms.
    Lemma(LemmaArgs),
    /// WZ relation grid, telescoped identity and boundary closed form.
    Wz(WzArgs),
    /// Recover conjectured constants by CRT over per-prime residues.
    Discover(DiscoverArgs),
    /// Tabulate the closed forms f_m(n), g_m(n) next to their sums.
    Table(LemmaArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated check ids. Besides the congruence ids this accepts
    /// lemma_sun3, ratio_expansion, wolstenholme, morley, conj_c and conj_d.
    #[arg(long, value_delimiter = ',')]
    pub checks: Option<Vec<String>>,
    /// Primes as `lo..hi` (inclusive) and/or a comma list.
    #[arg(long, default_value = "5..199")]
    pub primes: String,
    /// Emit informational rows at p = 3 for checks proven only for p > 3.
    #[arg(long)]
    pub include_p3: bool,
    /// Weights for conj_c / conj_d (default: every tabulated weight).
    #[arg(long, value_delimiter = ',')]
    pub m: Option<Vec<u32>>,
    /// Exponent r for conj_c / conj_d.
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long, value_enum, default_value_t = VariantArg::Both)]
    pub variant: VariantArg,
    /// Constant for conj_c / conj_d; by default it is discovered from primes 5..199 at r = 1.
    #[arg(long, allow_hyphen_values = true)]
    pub constant: Option<i64>,
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    pub m: Vec<u32>,
    /// Values of n as `lo..hi` and/or a comma list.
    #[arg(long, default_value = "2..50")]
    pub n: String,
}

#[derive(Debug, Args)]
pub struct WzArgs {
    /// Check the WZ relation for 1 <= k <= n <= n_max.
    #[arg(long, default_value_t = 60)]
    pub n_max: u64,
    /// Primes for the telescoped identity.
    #[arg(long, default_value = "3..97")]
    pub primes: String,
    /// Largest odd p for the boundary closed form.
    #[arg(long, default_value_t = 199)]
    pub boundary_max: u64,
}

#[derive(Debug, Args)]
pub struct DiscoverArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<u32>,
    #[arg(long, default_value = "5..199")]
    pub primes: String,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long, value_enum, default_value_t = VariantArg::Both)]
    pub variant: VariantArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Half,
    Full,
    Both,
}

impl From<VariantArg> for VariantSelection {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Half => VariantSelection::Half,
            VariantArg::Full => VariantSelection::Full,
            VariantArg::Both => VariantSelection::Both,
        }
    }
}

/// Errors that map to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

/// Parses `5..199`, `5,7,11` or a mix such as `3,5..13`.
pub fn parse_int_set(spec: &str) -> Result<Vec<u64>, UsageError> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let num = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| usage(format!("bad number {s:?} in {spec:?}")))
        };
        match part.split_once("..") {
            Some((lo, hi)) => {
                let hi = hi.strip_prefix('=').unwrap_or(hi);
                let (lo, hi) = (num(lo)?, num(hi)?);
                if lo > hi {
                    return Err(usage(format!("empty range {part:?}")));
                }
                out.extend(lo..=hi);
            }
            None => out.push(num(part)?),
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(usage(format!("no values in {spec:?}")));
    }
    Ok(out)
}

/// Primes within the set described by `spec`.
pub fn parse_primes(spec: &str) -> Result<Vec<u64>, UsageError> {
    let values = parse_int_set(spec)?;
    let hi = *values.last().expect("nonempty");
    let primes: Vec<u64> = primes_in_range(3, hi)
        .into_iter()
        .filter(|p| values.binary_search(p).is_ok())
        .collect();
    if primes.is_empty() {
        return Err(usage(format!("no odd primes in {spec:?}")));
    }
    Ok(primes)
}

fn odd_weights(m: &[u32]) -> Result<(), UsageError> {
    match m.iter().find(|&&m| m % 2 == 0) {
        Some(m) => Err(usage(format!("weights must be odd, got {m}"))),
        None => Ok(()),
    }
}

/// Output of one run.
#[derive(Debug)]
pub struct RunOutput {
    pub exit_code: i32,
    pub stdout: String,
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<RunOutput, UsageError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| usage(format!("cannot start workers: {e}")))?;
    let mut records = pool.install(|| collect(&cli.command))?;
    records.sort_by_key(Record::sort_key);
    let exit_code = if records.iter().any(Record::is_failure) {
        EXIT_FAILURES
    } else {
        EXIT_OK
    };
    Ok(RunOutput {
        exit_code,
        stdout: serialize_records(&records, cli.format.into()),
    })
}

fn collect(command: &Command) -> Result<Vec<Record>, UsageError> {
    match command {
        Command::Verify(a) => verify(a),
        Command::Lemma(a) => lemma(a),
        Command::Wz(a) => wz(a),
        Command::Discover(a) => discover(a),
        Command::Table(a) => table(a),
    }
}

enum VerifyTask {
    Check(CheckId, u64),
    Sun3(u64, u64),
    Ratio(u64, u64, u32),
    Wolstenholme(u64),
    Morley(u64),
}

fn verify(a: &VerifyArgs) -> Result<Vec<Record>, UsageError> {
    if a.r == 0 {
        return Err(usage("r must be at least 1"));
    }
    let primes = parse_primes(&a.primes)?;
    let names: Vec<String> = match &a.checks {
        Some(c) => c.clone(),
        None => CheckId::defaults()
            .iter()
            .map(|c| c.as_str().to_string())
            .collect(),
    };
    let mut tasks = Vec::new();
    let mut conj = Vec::new();
    for name in &names {
        match name.as_str() {
            "lemma_sun3" => {
                for &p in primes.iter().filter(|&&p| p >= 5) {
                    tasks.extend((1..=(p - 1) / 2).map(|k| VerifyTask::Sun3(p, k)));
                }
            }
            "ratio_expansion" => {
                for &p in &primes {
                    for k in 0..=p.div_ceil(2) {
                        tasks.push(VerifyTask::Ratio(p, k, 2));
                        tasks.push(VerifyTask::Ratio(p, k, 4));
                    }
                }
            }
            "wolstenholme" => tasks.extend(
                primes
                    .iter()
                    .filter(|&&p| p > 3)
                    .map(|&p| VerifyTask::Wolstenholme(p)),
            ),
            "morley" => tasks.extend(
                primes
                    .iter()
                    .filter(|&&p| p > 3)
                    .map(|&p| VerifyTask::Morley(p)),
            ),
            "conj_c" => conj.push(ConjFamily::C),
            "conj_d" => conj.push(ConjFamily::D),
            other => {
                let id: CheckId = other.parse().map_err(usage)?;
                for &p in &primes {
                    if p >= id.min_prime() || a.include_p3 {
                        tasks.push(VerifyTask::Check(id, p));
                    }
                }
            }
        }
    }

    let mut records: Vec<Record> = tasks
        .par_iter()
        .map(|t| {
            let r = match *t {
                VerifyTask::Check(id, p) => check_with(id, p, true)?,
                VerifyTask::Sun3(p, k) => check_lemma_sun3(p, k)?,
                VerifyTask::Ratio(p, k, o) => check_ratio_expansion(p, k, o)?,
                VerifyTask::Wolstenholme(p) => check_wolstenholme(p)?,
                VerifyTask::Morley(p) => check_morley(p)?,
            };
            Ok(Record::Congruence(r))
        })
        .collect::<Result<_, Error>>()?;

    for family in conj {
        let weights: Vec<u32> = match &a.m {
            Some(m) => m.clone(),
            None => family.published().iter().map(|&(m, _)| m).collect(),
        };
        odd_weights(&weights)?;
        for m in weights {
            let constant = match a.constant {
                Some(c) => c.into(),
                None => discovered_constant(family, m)?,
            };
            let reports = verify_constant_at(family, m, &primes, a.r, &constant, a.variant.into())?;
            records.extend(reports.into_iter().map(|r| {
                let info = r.p == 3;
                Record::Congruence(if info { r.into_informational() } else { r })
            }));
        }
    }
    Ok(records)
}

fn discovered_constant(family: ConjFamily, m: u32) -> Result<BigInt, UsageError> {
    let d = discover_constant(
        family,
        m,
        &primes_in_range(5, 199),
        1,
        VariantSelection::Half,
    )?;
    if d.consistent {
        Ok(d.constant)
    } else if let Some(c) = d.constant_without_outliers {
        eprintln!(
            "warning: {family}_{m} residues are inconsistent at {:?}; using {c}, which every other prime reproduces",
            d.outliers
        );
        Ok(c)
    } else {
        Err(usage(format!(
            "no consistent constant for {family}_{m}; pass --constant"
        )))
    }
}

fn lemma(a: &LemmaArgs) -> Result<Vec<Record>, UsageError> {
    let ns = lemma_range(a)?;
    let jobs: Vec<(u32, u64)> =
        a.m.iter()
            .flat_map(|&m| ns.iter().map(move |&n| (m, n)))
            .collect();
    Ok(jobs
        .par_iter()
        .flat_map_iter(|&(m, n)| {
            let table = Table1::new(m).expect("validated");
            let mut f = IdentityRecord::new("lemma_f", lemma_f_sum(m, n), table.f(n));
            let mut g = IdentityRecord::new("lemma_g", lemma_g_sum(m, n), table.g(n));
            for r in [&mut f, &mut g] {
                r.m = Some(m);
                r.n = Some(n);
            }
            [Record::Identity(f), Record::Identity(g)]
        })
        .collect())
}

fn lemma_range(a: &LemmaArgs) -> Result<Vec<u64>, UsageError> {
    for &m in &a.m {
        Table1::new(m)?;
    }
    let ns = parse_int_set(&a.n)?;
    if ns[0] < 2 {
        return Err(usage("n must be at least 2"));
    }
    Ok(ns)
}

fn table(a: &LemmaArgs) -> Result<Vec<Record>, UsageError> {
    let ns = lemma_range(a)?;
    let jobs: Vec<(u32, u64)> =
        a.m.iter()
            .flat_map(|&m| ns.iter().map(move |&n| (m, n)))
            .collect();
    Ok(jobs
        .par_iter()
        .map(|&(m, n)| {
            let t = Table1::new(m).expect("validated");
            Record::Table(TableRow {
                m,
                n,
                f: t.f(n),
                g: t.g(n),
                f_sum: lemma_f_sum(m, n),
                g_sum: lemma_g_sum(m, n),
            })
        })
        .collect())
}

fn wz(a: &WzArgs) -> Result<Vec<Record>, UsageError> {
    let primes = parse_primes(&a.primes)?;
    let grid: Vec<(u64, u64)> = (1..=a.n_max)
        .flat_map(|n| (1..=n).map(move |k| (n, k)))
        .collect();
    let mut records: Vec<Record> = grid
        .par_iter()
        .map(|&(n, k)| {
            let left = wz_f(WzPoint::new(n, k - 1)) - wz_f(WzPoint::new(n, k));
            let right = wz_g(WzPoint::new(n + 1, k)) - wz_g(WzPoint::new(n, k));
            let mut r = IdentityRecord::new("wz_relation", left, right);
            r.n = Some(n);
            r.k = Some(k);
            Record::Identity(r)
        })
        .collect();
    let telescoped: Vec<Record> = primes
        .par_iter()
        .map(|&p| {
            let (l, r) = telescoped_sides(p)?;
            let mut rec = IdentityRecord::new("telescoped", l, r);
            rec.p = Some(p);
            Ok(Record::Identity(rec))
        })
        .collect::<Result<_, Error>>()?;
    records.extend(telescoped);
    let odd: Vec<u64> = (3..=a.boundary_max).step_by(2).collect();
    let boundary: Vec<Record> = odd
        .par_iter()
        .map(|&p| {
            let (l, r) = boundary_closed_form(p)?;
            let mut rec = IdentityRecord::new("boundary_closed_form", l, r);
            rec.p = Some(p);
            Ok(Record::Identity(rec))
        })
        .collect::<Result<_, Error>>()?;
    records.extend(boundary);
    Ok(records)
}

fn discover(a: &DiscoverArgs) -> Result<Vec<Record>, UsageError> {
    let family: ConjFamily = a.family.parse().map_err(usage)?;
    if a.m.is_empty() {
        return Err(usage("--m is required"));
    }
    odd_weights(&a.m)?;
    if a.r == 0 {
        return Err(usage("r must be at least 1"));
    }
    let primes = parse_primes(&a.primes)?;
    a.m.iter()
        .map(|&m| {
            Ok(Record::Discovery(discover_constant(
                family,
                m,
                &primes,
                a.r,
                a.variant.into(),
            )?))
        })
        .collect()
}

//! The `primseq` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 infeasible optimization, 4 conjecture finding, 5 resource limit.

use std::ffi::OsString;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cache::{self, TableCache};
use crate::error::{Error, Result};
use crate::optimizer::{self, SearchConfig};
use crate::primes::{self, OmegaTable, PrimeTable, DEFAULT_SIEVE_LIMIT};
use crate::report::SweepReport;
use crate::sequences::{read_sequence, PrimitiveSequence};
use crate::series::{self, EnclosureRecord, SeriesKind, SeriesTarget};
use crate::witness::{self, ChainEntry, ConjectureCheck, EntryMode, EntryRole, WitnessParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_FINDING: i32 = 4;
pub const EXIT_RESOURCE: i32 = 5;

pub const SIEVE_LIMIT_ENV: &str = "PRIMSEQ_SIEVE_LIMIT";

/// Upper bound on the complete Erdős sum Σ 1/(a log a) over any primitive set.
pub const ERDOS_ZHANG_BOUND: f64 = 1.84;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Infeasible(_) => EXIT_INFEASIBLE,
        Error::ResourceLimit(_) | Error::Overflow(_) => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

/// Parses counts written as `100000`, `1e8`, `10^8` or `1_000_000`.
pub fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim().replace('_', "");
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let bad = || format!("'{s}' is not a non-negative integer");
    if let Some((b, e)) = t.split_once('^') {
        let b: u64 = b.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return b.checked_pow(e).ok_or_else(|| format!("'{s}' overflows"));
    }
    if let Some((m, e)) = t.split_once(['e', 'E']) {
        let m: u64 = m.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return 10u64
            .checked_pow(e)
            .and_then(|p| p.checked_mul(m))
            .ok_or_else(|| format!("'{s}' overflows"));
    }
    Err(bad())
}

#[derive(Debug, Parser)]
#[command(name = "primseq", version, about = "Series over primitive sequences")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sieve primes (and optionally Ω) and cache the tables.
    Sieve(SieveArgs),
    /// Print a JSON enclosure of S(A, x).
    Sum(SumArgs),
    /// Compare truncated S(P_k, x) with S(P, x) over a grid.
    Scan(ScanArgs),
    /// Re-derive the witness constants.
    Optimize(OptimizeArgs),
    /// Check the witness chain or the explicit prime bounds.
    Verify(VerifyArgs),
    /// Test a sequence against one of the conjectured inequalities.
    Conjecture(ConjectureArgs),
}

#[derive(Debug, Args)]
pub struct SieveArgs {
    #[arg(long, value_parser = parse_count)]
    pub limit: Option<u64>,
    /// Cache file for the prime table.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also sieve Ω(n).
    #[arg(long)]
    pub omega: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SumTarget {
    Primes,
    Pk,
    File,
}

#[derive(Debug, Args)]
pub struct SumArgs {
    #[arg(long, value_enum)]
    pub target: SumTarget,
    #[arg(long)]
    pub k: Option<u8>,
    #[arg(long, default_value_t = 0.0)]
    pub x: f64,
    #[arg(long, value_parser = parse_count)]
    pub limit: Option<u64>,
    /// Sequence file for `--target file`.
    #[arg(long)]
    pub seq: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// START:STOP:STEP, inclusive of STOP.
    #[arg(long)]
    pub x_grid: String,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
    pub k_list: Vec<u8>,
    #[arg(long, value_parser = parse_count)]
    pub limit: Option<u64>,
    /// Write rows here instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OptimizeMode {
    Theorem1,
    Theorem2,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long, value_enum)]
    pub mode: OptimizeMode,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("what").required(true).args(["chain", "bounds"]))]
pub struct VerifyArgs {
    #[arg(long)]
    pub chain: bool,
    #[arg(long)]
    pub bounds: bool,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, conflicts_with = "d")]
    pub beta: Option<f64>,
    #[arg(long)]
    pub d: Option<u32>,
    /// Override the default c = ⌈(e^t + log 2)/α⌉.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, value_parser = parse_count)]
    pub n_max: Option<u64>,
    #[arg(long, value_parser = parse_count)]
    pub limit: Option<u64>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Ps,
    Card,
    Ez,
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    #[arg(long, value_enum)]
    pub check: CheckKind,
    #[arg(long)]
    pub seq: PathBuf,
    #[arg(long, value_parser = parse_count)]
    pub n: Option<u64>,
    #[arg(long, value_parser = parse_count)]
    pub limit: Option<u64>,
}

/// Verdict of one scan row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ScanVerdict {
    /// pk_lower > prime_upper: P_k certainly beats the primes at x.
    PkExceedsP,
    Undetermined,
    /// S(P, x) beats even the largest value S(P_k, x) can take given the
    /// truncated sum and the a priori bound on any primitive Erdős sum. Says
    /// nothing about other primitive sets.
    PExceedsTruncation,
}

impl ScanVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanVerdict::PkExceedsP => "PK_EXCEEDS_P",
            ScanVerdict::Undetermined => "UNDETERMINED",
            ScanVerdict::PExceedsTruncation => "P_EXCEEDS_TRUNCATION",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub x: f64,
    pub k: u8,
    pub pk_lower: f64,
    pub prime_lower: f64,
    pub prime_upper: f64,
    pub verdict: ScanVerdict,
}

pub const SCAN_HEADER: [&str; 6] = ["x", "k", "pk_lower", "prime_lower", "prime_upper", "verdict"];

/// Parses START:STOP:STEP into the grid points START, START+STEP, … ≤ STOP.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Parse(format!("grid '{s}' is not START:STOP:STEP"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let (start, stop, step) = (v[0], v[1], v[2]);
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || start > stop || start < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "grid '{s}' needs 0 <= START <= STOP and STEP > 0"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as u64;
    if n > 1_000_000 {
        return Err(Error::ResourceLimit(format!("grid '{s}' has more than 10^6 points")));
    }
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}

/// Scan rows for every (x, k), k-major within each x.
pub fn scan_rows(table: &PrimeTable, omega: &OmegaTable, xs: &[f64], ks: &[u8]) -> Result<Vec<ScanRow>> {
    let mut cols = xs.to_vec();
    cols.push(0.0);
    let pk = series::pk_series_grid(omega, ks, &cols)?;
    let primes = series::prime_series_grid(table, xs)?;
    let mut rows = Vec::with_capacity(xs.len() * ks.len());
    for (xi, &x) in xs.iter().enumerate() {
        for (ki, &k) in ks.iter().enumerate() {
            let pk_lower = pk[ki][xi].lower;
            // For n past the table, 1/(n(log n + x)) ≤ 1/(n log n), so the
            // untruncated S(P_k, x) is at most pk_lower plus the room left
            // under the bound by the truncated x = 0 sum.
            let room = (ERDOS_ZHANG_BOUND - pk[ki][xs.len()].lower).max(0.0);
            let cell = &pk[ki][xi];
            let pk_upper = cell.upper.min(cell.partial_sum() + cell.rounding_budget + room);
            let p = &primes[xi];
            let verdict = if pk_lower > p.upper {
                ScanVerdict::PkExceedsP
            } else if p.lower > pk_upper {
                ScanVerdict::PExceedsTruncation
            } else {
                ScanVerdict::Undetermined
            };
            rows.push(ScanRow {
                x,
                k,
                pk_lower,
                prime_lower: p.lower,
                prime_upper: p.upper,
                verdict,
            });
        }
    }
    Ok(rows)
}

pub fn write_scan_csv(w: impl Write, rows: &[ScanRow]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    wr.write_record(SCAN_HEADER).map_err(csv_err)?;
    for r in rows {
        wr.write_record([
            r.x.to_string(),
            r.k.to_string(),
            r.pk_lower.to_string(),
            r.prime_lower.to_string(),
            r.prime_upper.to_string(),
            r.verdict.as_str().to_string(),
        ])
        .map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

struct Env {
    cache: Option<TableCache>,
    default_limit: u64,
}

impl Env {
    fn from_process() -> Result<Self> {
        let default_limit = match std::env::var(SIEVE_LIMIT_ENV) {
            Ok(v) => parse_count(&v).map_err(|e| Error::InvalidArgument(format!("{SIEVE_LIMIT_ENV}: {e}")))?,
            Err(_) => DEFAULT_SIEVE_LIMIT,
        };
        Ok(Self {
            cache: TableCache::from_env(),
            default_limit,
        })
    }

    fn limit(&self, given: Option<u64>) -> u64 {
        given.unwrap_or(self.default_limit)
    }

    fn primes(&self, limit: u64) -> Result<PrimeTable> {
        match &self.cache {
            Some(c) => c.primes(limit).map(|(t, _)| t),
            None => primes::sieve_primes(limit),
        }
    }

    fn omega(&self, limit: u64) -> Result<OmegaTable> {
        match &self.cache {
            Some(c) => c.omega(limit).map(|(t, _)| t),
            None => primes::sieve_omega(limit),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    if let Some(n) = cli.workers {
        // Fails only if the global pool already exists, e.g. under a test harness.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let env = Env::from_process()?;
    match cmd {
        Command::Sieve(a) => cmd_sieve(&env, a, out, err),
        Command::Sum(a) => cmd_sum(&env, a, out),
        Command::Scan(a) => cmd_scan(&env, a, out),
        Command::Optimize(a) => cmd_optimize(a, out),
        Command::Verify(a) => cmd_verify(&env, a, out),
        Command::Conjecture(a) => cmd_conjecture(&env, a, out),
    }
}

fn check_limit(limit: u64) -> Result<()> {
    if limit < 2 {
        return Err(Error::InvalidArgument(format!("sieve limit must be at least 2, got {limit}")));
    }
    Ok(())
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.into()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

fn print_json(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.into()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn cmd_sieve(env: &Env, a: SieveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let limit = env.limit(a.limit);
    check_limit(limit)?;
    let (table, hit) = match &a.out {
        Some(path) => {
            let cached = fs::File::open(path)
                .ok()
                .and_then(|f| cache::read_primes(BufReader::new(f)).ok())
                .filter(|t| t.limit() == limit);
            match cached {
                Some(t) => (t, true),
                None => {
                    let t = primes::sieve_primes(limit)?;
                    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                        fs::create_dir_all(dir)?;
                    }
                    cache::write_primes(std::io::BufWriter::new(fs::File::create(path)?), &t)?;
                    (t, false)
                }
            }
        }
        None => match &env.cache {
            Some(c) => c.primes(limit)?,
            None => (primes::sieve_primes(limit)?, false),
        },
    };
    if hit {
        writeln!(err, "loaded prime table from cache")?;
    }
    writeln!(out, "limit {limit}: {} primes", table.count())?;
    if a.omega {
        let (omega, hit) = match &a.out {
            Some(path) => {
                let opath = path.with_extension("omega");
                let cached = fs::File::open(&opath)
                    .ok()
                    .and_then(|f| cache::read_omega(BufReader::new(f)).ok())
                    .filter(|t| t.limit() == limit);
                match cached {
                    Some(t) => (t, true),
                    None => {
                        let t = primes::sieve_omega(limit)?;
                        cache::write_omega(std::io::BufWriter::new(fs::File::create(&opath)?), &t)?;
                        (t, false)
                    }
                }
            }
            None => match &env.cache {
                Some(c) => c.omega(limit)?,
                None => (primes::sieve_omega(limit)?, false),
            },
        };
        if hit {
            writeln!(err, "loaded omega table from cache")?;
        }
        let max = omega.as_slice().iter().copied().max().unwrap_or(0);
        let mut counts = vec![0u64; max as usize + 1];
        for &w in &omega.as_slice()[2..] {
            counts[w as usize] += 1;
        }
        let summary: Vec<String> = counts
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| format!("P_{k}: {c}"))
            .collect();
        writeln!(out, "omega classes: {}", summary.join(", "))?;
    }
    Ok(EXIT_OK)
}

fn cmd_sum(env: &Env, a: SumArgs, out: &mut dyn Write) -> Result<i32> {
    if a.k.is_some() != (a.target == SumTarget::Pk) {
        return Err(Error::InvalidArgument("--k is required with, and only with, --target pk".into()));
    }
    if a.seq.is_some() != (a.target == SumTarget::File) {
        return Err(Error::InvalidArgument("--seq is required with, and only with, --target file".into()));
    }
    let limit = env.limit(a.limit);
    let record = match a.target {
        SumTarget::Primes => {
            check_limit(limit)?;
            let target = SeriesTarget::new(SeriesKind::Primes, a.x, limit)?;
            let t = env.primes(limit)?;
            EnclosureRecord::new(&target, &series::prime_series_enclosure(&t, a.x)?)
        }
        SumTarget::Pk => {
            check_limit(limit)?;
            let k = a.k.unwrap_or_default();
            let target = SeriesTarget::new(SeriesKind::OmegaClass(k), a.x, limit)?;
            let o = env.omega(limit)?;
            EnclosureRecord::new(&target, &series::pk_series_lower(&o, k, a.x)?)
        }
        SumTarget::File => {
            let seq = load_sequence(a.seq.as_deref().unwrap_or(Path::new("")))?;
            let target = SeriesTarget::new(SeriesKind::ExplicitSequence, a.x, seq.max().max(2))?;
            EnclosureRecord::new(&target, &series::sum_finite(&seq, a.x)?)
        }
    };
    print_json(out, &record)?;
    Ok(EXIT_OK)
}

fn load_sequence(path: &Path) -> Result<PrimitiveSequence> {
    let f = fs::File::open(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    let values = read_sequence(BufReader::new(f))?;
    PrimitiveSequence::new(&values)
}

fn cmd_scan(env: &Env, a: ScanArgs, out: &mut dyn Write) -> Result<i32> {
    let xs = parse_grid(&a.x_grid)?;
    if a.k_list.is_empty() {
        return Err(Error::InvalidArgument("--k-list is empty".into()));
    }
    let limit = env.limit(a.limit);
    check_limit(limit)?;
    let table = env.primes(limit)?;
    let omega = env.omega(limit)?;
    let rows = scan_rows(&table, &omega, &xs, &a.k_list)?;
    match &a.csv {
        Some(path) => write_scan_csv(std::io::BufWriter::new(fs::File::create(path)?), &rows)?,
        None => write_scan_csv(&mut *out, &rows)?,
    }
    let first = rows.iter().find(|r| r.verdict == ScanVerdict::PkExceedsP);
    let undetermined = rows.iter().filter(|r| r.verdict == ScanVerdict::Undetermined).count();
    match first {
        Some(r) => writeln!(
            out,
            "smallest x with a certified crossing: x = {} (k = {})",
            r.x, r.k
        )?,
        None => writeln!(
            out,
            "no certified crossing at limit {limit}; {undetermined} of {} rows undetermined",
            rows.len()
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_optimize(a: OptimizeArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = SearchConfig::default();
    let result = match a.mode {
        OptimizeMode::Theorem1 => optimizer::optimize_theorem1(&cfg)?,
        OptimizeMode::Theorem2 => optimizer::optimize_theorem2(&cfg)?,
    };
    let cert = optimizer::certify(&result, None)?;
    match (result.beta, result.d) {
        (Some(beta), _) => writeln!(
            out,
            "theorem1: alpha={:.8} beta={:.6} c={:.5} constraint={:.10}",
            result.alpha, beta, result.c, result.constraint_value
        )?,
        (_, Some(d)) => writeln!(
            out,
            "theorem2: d={d} alpha={:.8} c={:.5} constraint={:.10}",
            result.alpha, result.c, result.constraint_value
        )?,
        _ => {}
    }
    writeln!(
        out,
        "certification: {}",
        if cert.certified() { "certified" } else { "FAILED" }
    )?;
    if let Some(path) = &a.json {
        write_json(path, &cert)?;
    }
    Ok(if cert.certified() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

#[derive(Debug, Serialize)]
struct BoundsParams {
    n_max: u64,
    limit: u64,
}

#[derive(Debug, Serialize)]
struct BoundsReport {
    params: BoundsParams,
    entries: Vec<ChainEntry>,
    verdict: &'static str,
}

fn sweep_entry(r: &SweepReport) -> ChainEntry {
    let (lhs, rhs) = r.tightest.as_ref().map_or((f64::NAN, f64::NAN), |v| (v.lhs, v.rhs));
    ChainEntry {
        name: format!("{} ({} violations over {} values)", r.name, r.violations.len(), r.checked),
        lhs,
        rhs,
        pass: r.passed(),
        mode: EntryMode::VerifiedNumerically,
        role: EntryRole::Chain,
    }
}

fn cmd_verify(env: &Env, a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    if a.bounds {
        let n_max = a.n_max.unwrap_or(1_000_000);
        if n_max < 2 {
            return Err(Error::InvalidArgument("--n-max must be at least 2".into()));
        }
        // p_n < 1.3 n log n + 20 comfortably covers the range.
        let need = (1.3 * n_max as f64 * (n_max as f64).ln()) as u64 + 20;
        let limit = a.limit.unwrap_or(need).max(need.min(primes::MAX_SIEVE_LIMIT));
        let table = env.primes(limit)?;
        let n_max = n_max.min(table.count());
        let mut entries = vec![
            sweep_entry(&primes::check_pn_lower(&table, n_max)?),
            sweep_entry(&primes::check_pn_upper(&table, n_max)?),
            sweep_entry(&primes::check_log_pn(&table, n_max)?),
            sweep_entry(&primes::check_bertrand(&table)),
            sweep_entry(&witness::lemma2_check(n_max)?),
        ];
        for x in [2.0, 10.0, 1e3, 1e6] {
            if x <= table.limit() as f64 {
                let c = primes::check_mertens_lower(&table, x)?;
                entries.push(ChainEntry {
                    name: format!("sum 1/p for p <= {x} > log log {x}"),
                    lhs: c.lhs,
                    rhs: c.rhs,
                    pass: c.holds,
                    mode: EntryMode::VerifiedNumerically,
                    role: EntryRole::Chain,
                });
            }
        }
        let ok = entries.iter().all(|e| e.pass);
        let report = BoundsReport {
            params: BoundsParams { n_max, limit },
            entries,
            verdict: if ok { "verified" } else { "chain-failed" },
        };
        emit_report(out, a.json.as_deref(), &report)?;
        return Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED });
    }

    let (Some(x), Some(alpha)) = (a.x, a.alpha) else {
        return Err(Error::InvalidArgument("--chain needs --x and --alpha".into()));
    };
    let params = match (a.beta, a.d) {
        (Some(beta), None) => WitnessParams::theorem1(a.lambda.unwrap_or(1.0), x, alpha, beta)?,
        (None, Some(d)) => {
            if a.lambda.is_some_and(|l| l != 1.0) {
                return Err(Error::InvalidArgument("with --d the construction fixes lambda = 1".into()));
            }
            WitnessParams::theorem2(x, alpha, d)?
        }
        _ => return Err(Error::InvalidArgument("--chain needs exactly one of --beta or --d".into())),
    };
    let params = match a.c {
        Some(c) => params.with_c(c)?,
        None => params,
    };
    let limit = env.limit(a.limit);
    check_limit(limit)?;
    let table = env.primes(limit)?;
    let report = witness::verify_chain(&params, &table)?;
    emit_report(out, a.json.as_deref(), &report)?;
    Ok(if report.verdict.is_hard_failure() {
        EXIT_VERIFY_FAILED
    } else {
        EXIT_OK
    })
}

fn emit_report(out: &mut dyn Write, json: Option<&Path>, report: &impl Serialize) -> Result<()> {
    print_json(out, report)?;
    if let Some(path) = json {
        write_json(path, report)?;
    }
    Ok(())
}

fn cmd_conjecture(env: &Env, a: ConjectureArgs, out: &mut dyn Write) -> Result<i32> {
    let seq = load_sequence(&a.seq)?;
    let check: ConjectureCheck = match a.check {
        CheckKind::Ps => {
            // Factoring needs primes up to √max; a prime cofactor is found by division.
            let need = (primes::isqrt(seq.max()) + 1).max(1000);
            let table = env.primes(a.limit.unwrap_or(need).max(need))?;
            witness::conjecture_ps_check(&seq, &table)?
        }
        CheckKind::Card => {
            let m = seq.len() as f64;
            let need = ((1.3 * m * m.max(2.0).ln()) as u64 + 20).max(1000);
            let table = env.primes(a.limit.unwrap_or(need).max(need))?;
            witness::conjecture_card_check(&seq, &table)?
        }
        CheckKind::Ez => {
            let n = a.n.ok_or_else(|| Error::InvalidArgument("--check ez needs --n".into()))?;
            let table = env.primes(a.limit.unwrap_or(n.max(2)).max(n.max(2)))?;
            witness::erdos_zhang_partial_check(&seq, n, &table)?
        }
    };
    writeln!(
        out,
        "{}: lhs={} rhs={} verdict={}",
        check.name,
        check.lhs,
        check.rhs,
        serde_json::to_value(check.verdict).map_err(|e| Error::Io(e.into()))?.as_str().unwrap_or("")
    )?;
    Ok(if check.pass() { EXIT_OK } else { EXIT_FINDING })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e8"), Ok(100_000_000));
        assert_eq!(parse_count("10^8"), Ok(100_000_000));
        assert_eq!(parse_count("2_500"), Ok(2500));
        assert_eq!(parse_count("3e2"), Ok(300));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("10^30").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1:2:0.5").unwrap(), vec![1.0, 1.5, 2.0]);
        assert_eq!(parse_grid("363:363:1").unwrap(), vec![363.0]);
        assert!(parse_grid("1:2:0").is_err());
        assert!(parse_grid("2:1:1").is_err());
        assert!(parse_grid("1:2").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["primseq", "optimize", "--mode", "theorem3"], &mut o, &mut e), EXIT_USAGE);
        assert_eq!(run(["primseq", "sieve", "--limit", "1"], &mut o, &mut e), EXIT_USAGE);
        assert_eq!(run(["primseq", "sum", "--target", "pk"], &mut o, &mut e), EXIT_USAGE);
    }

    #[test]
    fn sieve_summary() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["primseq", "sieve", "--limit", "100"], &mut o, &mut e), EXIT_OK);
        assert!(String::from_utf8(o).unwrap().contains("25 primes"));
    }

    #[test]
    fn small_scan_rows() {
        let t = primes::sieve_primes(10_000).unwrap();
        let o = primes::sieve_omega(10_000).unwrap();
        let rows = scan_rows(&t, &o, &[0.0, 1.0, 5.0], &[1, 2, 3]).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(rows.iter().filter(|r| r.k == 1).all(|r| r.verdict != ScanVerdict::PkExceedsP));
        let mut buf = Vec::new();
        write_scan_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,k,pk_lower,prime_lower,prime_upper,verdict\n"));
        assert_eq!(text.lines().count(), 10);
    }
}

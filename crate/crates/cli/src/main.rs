//! `cherednik`: Hilbert series runs, membership checks, grid sweeps and
//! self-tests from the command line.
//!
//! Exit codes: 0 success, 1 internal failure or cap reached, 2 usage error,
//! 3 computed series disagrees with the chosen conjecture variant or a theorem.

mod check;
mod record;
mod selftest;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use cherednik_core::{export_kernel, CMode, ConjectureVariant, Error, FastEval, HilbertRequest, Series};
use clap::{Args, Parser, Subcommand, ValueEnum};

use record::{compute_record, default_cache_dir, Cache, RunKey, RunRecord};

pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;
const MAX_N: usize = cherednik_core::stability::MAX_N;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidParameter(_) | Error::Unsupported(_) | Error::SlotMismatch { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

pub type CmdResult = Result<u8, Failure>;

/// Pretty JSON on stdout; a closed pipe is not an error.
pub fn emit<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    use std::io::Write;
    let text = serde_json::to_string_pretty(value)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

#[derive(Parser)]
#[command(name = "cherednik", version, about = "Exact computations for rational Cherednik algebras in characteristic p")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert series of L_{t,c} with conjecture and theorem comparisons.
    Hilbert(HilbertArgs),
    /// Kernel bases of the contravariant form, degree by degree.
    Kernel(CellArgs),
    /// Verdicts on a single polynomial.
    Check {
        #[command(subcommand)]
        what: check::CheckCmd,
    },
    /// Certifies one member of a known family of singular polynomials.
    Catalog(check::CatalogArgs),
    /// Runs a (p, n) grid and writes summary.csv.
    Sweep(sweep::SweepArgs),
    /// Commutator relations, oracle agreement, catalog and cache checks.
    Selftest(selftest::SelftestArgs),
}

/// Treatment of `c`: `generic` or an integer reduced mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CArg {
    Generic,
    Int(i64),
}

impl std::str::FromStr for CArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "generic" {
            return Ok(CArg::Generic);
        }
        s.parse::<i64>()
            .map(CArg::Int)
            .map_err(|_| format!("expected `generic` or an integer, got `{s}`"))
    }
}

impl CArg {
    pub fn mode(self, p: u64) -> CMode {
        match self {
            CArg::Generic => CMode::Generic,
            CArg::Int(v) => CMode::Value(v.rem_euclid(p as i64) as u64),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    #[value(name = "as_printed")]
    AsPrinted,
    #[default]
    #[value(name = "remark_consistent")]
    RemarkConsistent,
}

impl From<VariantArg> for ConjectureVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::AsPrinted => ConjectureVariant::AsPrinted,
            VariantArg::RemarkConsistent => ConjectureVariant::RemarkConsistent,
        }
    }
}

#[derive(Args, Clone, Debug)]
pub struct CellArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    t: u8,
    #[arg(long, default_value = "generic")]
    c: CArg,
    /// Highest degree to compute before giving up.
    #[arg(long)]
    max_degree: Option<usize>,
}

impl CellArgs {
    fn request(&self) -> Result<HilbertRequest, Failure> {
        check_cell(self.p, self.n)?;
        let mut req = HilbertRequest::new(self.p, self.n, self.t);
        req.c = self.c.mode(self.p);
        req.max_degree = self.max_degree;
        Ok(req)
    }
}

pub fn check_cell(p: u64, n: usize) -> Result<(), Failure> {
    cherednik_core::PrimeField::new(p)?;
    if !(2..=MAX_N).contains(&n) {
        return Err(Failure::Usage(format!("n = {n} must lie in 2..={MAX_N}")));
    }
    Ok(())
}

#[derive(Args)]
struct HilbertArgs {
    #[command(flatten)]
    cell: CellArgs,
    /// Replace generic c by random elements of large extension fields (t = 1).
    #[arg(long)]
    fast_eval: bool,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Conjecture variant whose disagreement sets exit code 3.
    #[arg(long, value_enum, default_value_t)]
    variant: VariantArg,
    /// Neither read nor write the result cache.
    #[arg(long)]
    no_cache: bool,
}

fn open_cache(no_cache: bool) -> Option<Cache> {
    if no_cache {
        return None;
    }
    let dir: PathBuf = default_cache_dir()?;
    match Cache::open(&dir) {
        Ok(c) => Some(c),
        Err(e) => {
            eprintln!("warning: cache at {} unavailable: {e}", dir.display());
            None
        }
    }
}

fn describe(rec: &RunRecord) -> String {
    let k = &rec.key;
    let mut out = format!("p={} n={} t={} c={} (r={})\n", k.p, k.n, k.t, k.c_mode, rec.r);
    if rec.complete() {
        out += &format!("series: {}  {:?}\n", rec.formatted, rec.series);
        if let Some(f) = &rec.factored {
            out += &format!("factored: {f}\n");
        }
    } else {
        out += &format!("cap {} reached; partial series {:?}\n", k.cap, rec.series);
    }
    let verdict = |label: &str, pred: &record::Prediction| {
        let what = match (&pred.comparison, &pred.note) {
            (Some(c), _) if c.equal => "agrees".to_string(),
            (Some(c), _) => match c.first_mismatch {
                Some((d, a, b)) => format!("disagrees at z^{d}: computed {a}, predicted {b}"),
                None => "disagrees".to_string(),
            },
            (None, Some(note)) => note.clone(),
            (None, None) if !rec.complete() => "not compared, run incomplete".to_string(),
            (None, None) => "not compared".to_string(),
        };
        let series = pred
            .series
            .as_ref()
            .map(|s| format!(" [{}]", Series::new(s.clone(), cherednik_core::Provenance::Formula).format()))
            .unwrap_or_default();
        format!("{label}: {what}{series}\n")
    };
    out += &verdict(&format!("theorem {}", rec.theorem.source), &rec.theorem);
    out += &verdict("conjecture as_printed", &rec.conjectures.as_printed);
    out += &verdict("conjecture remark_consistent", &rec.conjectures.remark_consistent);
    if let Some(s) = &rec.shape {
        out += &format!("shape [p]^(n-1) g(z^p): {}\n", if s.ok { "holds" } else { "fails" });
    }
    if let Some(fe) = &rec.fast_eval {
        out += &format!("fast evaluation: {} trials, agree = {}\n", fe.trials.len(), fe.agree);
    }
    if rec.timing.cache_hit {
        out += "(from cache)\n";
    }
    out
}

fn cmd_hilbert(a: &HilbertArgs) -> CmdResult {
    let mut req = a.cell.request()?;
    if a.fast_eval {
        req.fast_eval = Some(FastEval {
            trials: a.trials,
            seed: a.seed,
        });
    }
    let cache = open_cache(a.no_cache);
    let rec = match cache.as_ref().and_then(|c| c.get(&RunKey::of(&req))) {
        Some(rec) => rec,
        None => {
            let rec = compute_record(&req)?;
            if let Some(c) = &cache {
                if let Err(e) = c.writer().and_then(|mut w| w.append(&rec)) {
                    eprintln!("warning: could not write cache: {e}");
                }
            }
            rec
        }
    };
    crate::emit(&rec)?;
    eprint!("{}", describe(&rec));
    if !rec.complete() {
        return Ok(EXIT_INTERNAL);
    }
    Ok(if rec.mismatch(a.variant.into()) { EXIT_MISMATCH } else { 0 })
}

fn cmd_kernel(a: &CellArgs) -> CmdResult {
    let export = export_kernel(&a.request()?)?;
    crate::emit(&export)?;
    eprintln!(
        "dim L: {:?}",
        export.degrees.iter().map(|d| d.dim_l).collect::<Vec<_>>()
    );
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let out = match &cli.cmd {
        Command::Hilbert(a) => cmd_hilbert(a),
        Command::Kernel(a) => cmd_kernel(a),
        Command::Check { what } => check::run(what),
        Command::Catalog(a) => check::catalog(a),
        Command::Sweep(a) => sweep::run(a),
        Command::Selftest(a) => selftest::run(a),
    };
    match out {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `cherednik --help` for usage");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

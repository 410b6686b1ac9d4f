//! Grid sweeps over `(p, n)` with a shared cache and a CSV summary.

use std::fs;
use std::path::PathBuf;
use std::sync::mpsc;
use std::thread;

use cherednik_core::{CongruenceData, ConjectureVariant, HilbertRequest};
use clap::Args;
use rayon::prelude::*;

use crate::record::{compute_record, RunKey, RunRecord};
use crate::{check_cell, open_cache, CArg, CmdResult, Failure, VariantArg, EXIT_INTERNAL, EXIT_MISMATCH};

#[derive(Args)]
pub struct SweepArgs {
    /// Comma-separated primes; may be empty.
    #[arg(long, default_value = "")]
    p_list: String,
    /// Comma-separated values of n; may be empty.
    #[arg(long, default_value = "")]
    n_list: String,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    t: u8,
    #[arg(long, default_value = "generic")]
    c: CArg,
    /// Keep only cells with n = 1 mod p.
    #[arg(long)]
    congruent_only: bool,
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    /// Conjecture variant whose disagreement sets exit code 3.
    #[arg(long, value_enum, default_value_t)]
    variant: VariantArg,
    #[arg(long)]
    no_cache: bool,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| Failure::Usage(format!("bad entry `{x}` in {what}"))))
        .collect()
}

enum Cell {
    Done(RunRecord),
    Failed { p: u64, n: usize, error: String },
}

fn flag(b: Option<bool>) -> String {
    b.map_or_else(|| "n/a".to_string(), |b| b.to_string())
}

pub fn run(a: &SweepArgs) -> CmdResult {
    let ps: Vec<u64> = parse_list(&a.p_list, "--p-list")?;
    let ns: Vec<usize> = parse_list(&a.n_list, "--n-list")?;
    let mut grid = Vec::new();
    for &p in &ps {
        for &n in &ns {
            check_cell(p, n)?;
            if !a.congruent_only || n as u64 % p == 1 {
                grid.push((p, n));
            }
        }
    }
    fs::create_dir_all(&a.out)?;
    let cache = open_cache(a.no_cache);

    // one thread owns the cache file; workers send it finished records
    let (tx, rx) = mpsc::channel::<RunRecord>();
    let writer = cache.as_ref().map(|c| c.writer()).transpose()?;
    let handle = thread::spawn(move || {
        let mut writer = writer;
        for rec in rx {
            if let Some(w) = writer.as_mut() {
                if let Err(e) = w.append(&rec) {
                    eprintln!("warning: could not write cache: {e}");
                }
            }
        }
    });
    let cells: Vec<Cell> = grid
        .par_iter()
        .map_with(tx, |tx, &(p, n)| {
            let mut req = HilbertRequest::new(p, n, a.t);
            req.c = a.c.mode(p);
            req.max_degree = a.max_degree;
            if let Some(rec) = cache.as_ref().and_then(|c| c.get(&RunKey::of(&req))) {
                return Cell::Done(rec);
            }
            match compute_record(&req) {
                Ok(rec) => {
                    let _ = tx.send(rec.clone());
                    eprintln!("p={p} n={n}: {}", rec.formatted);
                    Cell::Done(rec)
                }
                Err(e) => {
                    eprintln!("p={p} n={n}: error: {e}");
                    Cell::Failed { p, n, error: e.to_string() }
                }
            }
        })
        .collect();
    handle.join().map_err(|_| Failure::Internal("cache writer panicked".into()))?;

    let variant: ConjectureVariant = a.variant.into();
    let mut csv = csv::Writer::from_path(a.out.join("summary.csv")).map_err(|e| Failure::Internal(e.to_string()))?;
    csv.write_record(["p", "n", "r", "series", "variant_a_match", "variant_b_match", "theorem_match", "status"])
        .map_err(|e| Failure::Internal(e.to_string()))?;
    let mut records = String::new();
    let (mut failed, mut mismatched) = (false, false);
    for cell in &cells {
        let row = match cell {
            Cell::Done(rec) => {
                records += &serde_json::to_string(rec)?;
                records.push('\n');
                let status = if rec.complete() { "ok" } else { "cap_reached" };
                failed |= !rec.complete();
                mismatched |= rec.mismatch(variant);
                let series = rec.series.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
                [
                    rec.key.p.to_string(),
                    rec.key.n.to_string(),
                    rec.r.to_string(),
                    series,
                    flag(rec.conjectures.as_printed.agrees()),
                    flag(rec.conjectures.remark_consistent.agrees()),
                    flag(rec.theorem.agrees()),
                    status.to_string(),
                ]
            }
            Cell::Failed { p, n, error } => {
                failed = true;
                let r = CongruenceData::new(*n, *p as usize).r;
                [p.to_string(), n.to_string(), r.to_string(), String::new(), "n/a".into(), "n/a".into(), "n/a".into(), format!("error: {error}")]
            }
        };
        csv.write_record(&row).map_err(|e| Failure::Internal(e.to_string()))?;
    }
    csv.flush()?;
    fs::write(a.out.join("records.jsonl"), records)?;
    eprintln!("{} cells written to {}", cells.len(), a.out.display());
    Ok(if failed {
        EXIT_INTERNAL
    } else if mismatched {
        EXIT_MISMATCH
    } else {
        0
    })
}

//! Built-in property suites: commutator relations, recursive kernel against
//! the Gram oracle, catalog certification, and cache robustness.

use std::fs;

use cherednik_core::dunkl::{check_commutators_with, CommutatorFailure};
use cherednik_core::{
    certify, gram_oracle_kernel, DunklContext, Family, GradedKernel, HilbertRequest, KernelStatus, Ring,
};
use clap::Args;
use serde::Serialize;

use crate::record::{compute_record, Cache, RunKey};
use crate::{CmdResult, EXIT_INTERNAL};

#[derive(Args)]
pub struct SelftestArgs {
    /// Swap in a deliberately wrong Dunkl operator; the run must fail.
    #[arg(long)]
    mutate_dunkl: bool,
}

#[derive(Serialize, Default)]
struct Report {
    commutator_instances: usize,
    oracle_degrees: usize,
    catalog_members: usize,
    cache_ok: bool,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<String>,
}

fn describe_failure(p: u64, n: usize, t: u8, f: &CommutatorFailure) -> String {
    format!(
        "p={p} n={n} t={t}: [D_(y{}-y{}), x{}] applied to {} gives {} but the relation requires {}",
        f.i, f.j, f.a, f.f, f.lhs, f.rhs
    )
}

fn commutators<R: Ring>(ctx: &DunklContext<R>, mutate: bool, seed: u64, report: &mut Report) -> Result<(), String> {
    for d in [2, 3] {
        let r = check_commutators_with(ctx, d, 2, seed + d as u64, |f, i, j| {
            if mutate {
                ctx.dunkl_difference_corrupted(f, i, j)
            } else {
                ctx.dunkl_difference(f, i, j).expect("valid indices")
            }
        });
        report.commutator_instances += r.checked;
        if let Some(f) = r.failures.first() {
            return Err(describe_failure(ctx.p(), ctx.n(), ctx.t(), f));
        }
    }
    Ok(())
}

fn oracle<R: Ring>(ctx: DunklContext<R>, top: usize, report: &mut Report) -> Result<(), String> {
    let mut k = GradedKernel::new(ctx.clone());
    let status = k.run(top, 2).map_err(|e| e.to_string())?;
    let last = match status {
        KernelStatus::Complete { vanishing_degree } => vanishing_degree,
        KernelStatus::CapReached { cap } => cap,
    };
    for d in 0..=last {
        let oracle = gram_oracle_kernel(&ctx, d).map_err(|e| e.to_string())?;
        let level = k.level(d).expect("computed");
        if oracle.rows() != level.kernel_basis(ctx.ring()).rows() {
            return Err(format!(
                "p={} n={} t={} degree {d}: recursive kernel differs from the Gram oracle",
                ctx.p(),
                ctx.n(),
                ctx.t()
            ));
        }
        report.oracle_degrees += 1;
    }
    Ok(())
}

fn catalog(report: &mut Report) -> Result<(), String> {
    let cells: [(Family, u64, usize, u8); 7] = [
        (Family::TriangleSum, 2, 5, 0),
        (Family::LinearProduct, 3, 4, 0),
        (Family::SkewCubic, 3, 4, 0),
        (Family::CubicChar3, 3, 4, 0),
        (Family::PowerP, 3, 4, 0),
        (Family::QuarticChar2, 2, 5, 1),
        (Family::BinomialSeries, 2, 4, 1),
    ];
    for (family, p, n, t) in cells {
        let check = if t == 0 {
            certify(family, &family.default_indices(), &DunklContext::rational(p, n).map_err(|e| e.to_string())?)
        } else {
            certify(family, &family.default_indices(), &DunklContext::generic(p, n).map_err(|e| e.to_string())?)
        }
        .map_err(|e| e.to_string())?;
        if !check.certified {
            return Err(format!("{family} p={p} n={n}: {} not certified", check.polynomial));
        }
        report.catalog_members += 1;
    }
    Ok(())
}

/// A cache holding garbage and a stale-version record with a wrong series
/// must be ignored and the cell recomputed.
fn cache_poisoning() -> Result<(), String> {
    let dir = std::env::temp_dir().join(format!("cherednik-selftest-{}", std::process::id()));
    let req = HilbertRequest::new(2, 3, 0);
    let fresh = compute_record(&req).map_err(|e| e.to_string())?;
    let mut stale = fresh.clone();
    stale.key.format_version = 0;
    stale.series = vec![9, 9, 9];
    let body = format!("{{truncated\n{}\n", serde_json::to_string(&stale).map_err(|e| e.to_string())?);
    let result = (|| {
        fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        fs::write(dir.join("runs.jsonl"), body).map_err(|e| e.to_string())?;
        let cache = Cache::open(&dir).map_err(|e| e.to_string())?;
        if cache.get(&RunKey::of(&req)).is_some() {
            return Err("stale cache entry was served".to_string());
        }
        let again = compute_record(&req).map_err(|e| e.to_string())?;
        if again.untimed() != fresh.untimed() {
            return Err("recomputation differs from the first run".to_string());
        }
        Ok(())
    })();
    let _ = fs::remove_dir_all(&dir);
    result
}

fn suites(mutate: bool, report: &mut Report) -> Result<(), String> {
    for p in [2u64, 3, 5] {
        for n in [3usize, 4, 5] {
            let seed = p * 100 + n as u64;
            commutators(&DunklContext::rational(p, n).map_err(|e| e.to_string())?, mutate, seed, report)?;
            commutators(&DunklContext::generic(p, n).map_err(|e| e.to_string())?, mutate, seed, report)?;
        }
    }
    if report.commutator_instances < 500 {
        return Err(format!("only {} commutator instances", report.commutator_instances));
    }
    for (p, n) in [(2u64, 3usize), (2, 5), (3, 4)] {
        oracle(DunklContext::rational(p, n).map_err(|e| e.to_string())?, n + 10, report)?;
    }
    oracle(DunklContext::generic(2, 3).map_err(|e| e.to_string())?, 5, report)?;
    catalog(report)?;
    cache_poisoning()?;
    report.cache_ok = true;
    Ok(())
}

pub fn run(a: &SelftestArgs) -> CmdResult {
    let mut report = Report::default();
    let outcome = suites(a.mutate_dunkl, &mut report);
    report.passed = outcome.is_ok();
    report.counterexample = outcome.err();
    crate::emit(&report)?;
    match &report.counterexample {
        None => {
            eprintln!(
                "selftest passed: {} commutator instances, {} oracle degrees, {} catalog members, cache ok",
                report.commutator_instances, report.oracle_degrees, report.catalog_members
            );
            Ok(0)
        }
        Some(c) => {
            eprintln!("selftest failed: {c}");
            Ok(EXIT_INTERNAL)
        }
    }
}

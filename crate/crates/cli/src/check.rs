//! `check` and `catalog`: verdicts on single polynomials.

use cherednik_core::{
    certify, is_in_kernel, is_singular, is_stably_in_kernel, parse_poly, verify_top_generator, CMode, DunklContext,
    Family, Poly, PolyRing, PrimeField, RatFuncField, Ring, StabilityInstance, StabilityOptions,
};
use clap::{Args, Subcommand};
use serde::Serialize;

use crate::{check_cell, CArg, CmdResult, Failure};

#[derive(Subcommand)]
pub enum CheckCmd {
    /// Is the polynomial killed by every Dunkl operator?
    Singular(PolyArgs),
    /// Is the polynomial in the kernel of the contravariant form?
    Kernel(PolyArgs),
    /// Is the polynomial in the kernel for every odd n?
    Stable(StableArgs),
    /// Certifies the top-degree generator and its companions for every odd n.
    Generator {
        /// Odd n above the bound to check as well.
        #[arg(long, default_value_t = 0)]
        extra_above: usize,
    },
}

#[derive(Args)]
pub struct PolyArgs {
    /// Polynomial in x1..x(n-1) with coefficients in F_p(c), e.g. `x1^2+(c+1)*x1*x2`.
    #[arg(long)]
    poly: String,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    t: u8,
    #[arg(long, default_value = "generic")]
    c: CArg,
}

#[derive(Args)]
pub struct StableArgs {
    #[arg(long)]
    poly: String,
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    t: u8,
    /// Run the sweep outside p = 2, t = 1; the verdict is then non-certifying.
    #[arg(long)]
    experimental: bool,
    #[arg(long, default_value_t = 0)]
    extra_above: usize,
}

#[derive(Args)]
pub struct CatalogArgs {
    #[arg(long)]
    family: Family,
    /// Comma-separated 1-based indices; index n stands for minus the sum of the others.
    #[arg(long, value_delimiter = ',')]
    indices: Vec<usize>,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    t: u8,
    #[arg(long, default_value = "generic")]
    c: CArg,
}

#[derive(Serialize)]
struct PolyVerdict {
    check: &'static str,
    polynomial: String,
    p: u64,
    n: usize,
    t: u8,
    c: CMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    singular: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    in_kernel: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pairing: Option<String>,
}

fn verdict<R: Ring>(kernel: bool, ctx: &DunklContext<R>, f: &Poly<R>, c: CMode) -> Result<PolyVerdict, Failure> {
    let mut v = PolyVerdict {
        check: if kernel { "kernel" } else { "singular" },
        polynomial: f.format(ctx.ring()),
        p: ctx.p(),
        n: ctx.n(),
        t: ctx.t(),
        c,
        singular: None,
        in_kernel: None,
        witness: None,
        pairing: None,
    };
    if kernel {
        let m = is_in_kernel(ctx, f)?;
        v.in_kernel = Some(m.in_kernel);
        v.witness = m.witness;
        v.pairing = m.pairing;
    } else {
        v.singular = Some(is_singular(ctx, f)?);
    }
    Ok(v)
}

fn poly_check(a: &PolyArgs, kernel: bool) -> Result<PolyVerdict, Failure> {
    check_cell(a.p, a.n)?;
    let c = a.c.mode(a.p);
    match c {
        CMode::Value(v) => {
            let field = PrimeField::with_param(a.p, v as i64)?;
            let f = parse_poly(&a.poly, a.n - 1, &field)?;
            verdict(kernel, &DunklContext::new(a.n, a.t, field)?, &f, c)
        }
        CMode::Generic => {
            let q = RatFuncField::new(a.p)?;
            let f = parse_poly(&a.poly, a.n - 1, &q)?;
            if f.terms().all(|(_, x)| x.is_polynomial()) {
                // polynomial coefficients keep elimination fraction-free
                let ring = PolyRing::new(a.p)?;
                let g = f.map_coeffs(&ring, |x| x.num.clone());
                verdict(kernel, &DunklContext::new(a.n, a.t, ring)?, &g, c)
            } else {
                verdict(kernel, &DunklContext::new(a.n, a.t, q)?, &f, c)
            }
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn run(cmd: &CheckCmd) -> CmdResult {
    match cmd {
        CheckCmd::Singular(a) | CheckCmd::Kernel(a) => {
            let kernel = matches!(cmd, CheckCmd::Kernel(_));
            let v = poly_check(a, kernel)?;
            crate::emit(&v)?;
            let answer = v.singular.or(v.in_kernel).unwrap_or(false);
            eprintln!("{} {} at p={} n={} t={}: {}", v.check, v.polynomial, v.p, v.n, v.t, yes(answer));
            if let Some(w) = &v.witness {
                eprintln!("witness multiplicities {w:?}, pairing {}", v.pairing.as_deref().unwrap_or("?"));
            }
        }
        CheckCmd::Stable(a) => {
            let inst = StabilityInstance::parse(&a.poly, a.p)?;
            let opts = StabilityOptions {
                p: a.p,
                t: a.t,
                experimental: a.experimental,
                extra_above: a.extra_above,
            };
            let v = is_stably_in_kernel(&inst, &opts)?;
            crate::emit(&v)?;
            eprintln!(
                "{}: stable = {} (bound {}, checked n = {:?}){}",
                v.polynomial,
                v.stable,
                v.bound,
                v.per_n.iter().map(|e| e.n).collect::<Vec<_>>(),
                if v.certifying { "" } else { "; experimental, not a proof" }
            );
            if let Some(n) = v.first_failure {
                eprintln!("first failure at n = {n}");
            }
        }
        CheckCmd::Generator { extra_above } => {
            let r = verify_top_generator(*extra_above)?;
            crate::emit(&r)?;
            eprintln!("top generator verified: {}", r.verified);
        }
    }
    Ok(0)
}

pub fn catalog(a: &CatalogArgs) -> CmdResult {
    check_cell(a.p, a.n)?;
    let indices = if a.indices.is_empty() {
        a.family.default_indices()
    } else {
        a.indices.clone()
    };
    let check = match (a.t, a.c.mode(a.p)) {
        (_, CMode::Value(v)) => certify(a.family, &indices, &DunklContext::new(a.n, a.t, PrimeField::with_param(a.p, v as i64)?)?)?,
        (0, CMode::Generic) => certify(a.family, &indices, &DunklContext::rational(a.p, a.n)?)?,
        _ => certify(a.family, &indices, &DunklContext::generic(a.p, a.n)?)?,
    };
    crate::emit(&check)?;
    eprintln!(
        "{} {:?}: {} (singular {}, in kernel {})",
        check.family,
        check.indices,
        if check.certified { "certified" } else { "NOT certified" },
        yes(check.singular),
        yes(check.in_kernel)
    );
    Ok(0)
}

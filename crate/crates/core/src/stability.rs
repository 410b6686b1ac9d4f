//! Deciding kernel membership for every odd `n` at once (`p = 2`, `t = 1`,
//! generic `c`) by checking finitely many `n`.
//!
//! A polynomial `f` in `k` variables of degree `G` whose largest single
//! exponent is `S` lies in the kernel for all odd `n` as soon as it does for
//! all odd `n <= S + k + G - 2`.

use rayon::prelude::*;
use serde::Serialize;

use crate::dunkl::DunklContext;
use crate::error::{Error, Result};
use crate::kernel::is_in_kernel;
use crate::poly::{parse_poly, Poly};
use crate::scalar::{PolyRing, PrimeField, Ring};

/// Largest `n` the engine supports.
pub const MAX_N: usize = 16;

/// A polynomial over `F_p[c]` in variables renamed to `x_1..x_k`, with the
/// quantities controlling the bound.
#[derive(Clone, Debug)]
pub struct StabilityInstance {
    ring: PolyRing,
    f: Poly<PolyRing>,
    k: usize,
    degree: usize,
    max_exponent: usize,
}

impl StabilityInstance {
    pub fn new(ring: PolyRing, f: &Poly<PolyRing>) -> Result<Self> {
        let support = f.support_vars();
        let k = support.len();
        let mut perm = vec![0; f.nvars()];
        for (new, &old) in support.iter().enumerate() {
            perm[old] = new;
        }
        let g = f.permute_slots(&perm, k.max(1));
        let degree = if f.is_zero() {
            0
        } else {
            g.homogeneous_degree()
                .ok_or_else(|| Error::InvalidParameter("stability needs a homogeneous polynomial".into()))?
        };
        let max_exponent = g
            .terms()
            .flat_map(|(m, _)| m.exps().iter().map(|&e| e as usize))
            .max()
            .unwrap_or(0);
        Ok(Self {
            ring,
            f: g,
            k,
            degree,
            max_exponent,
        })
    }

    /// Parses text such as `x1^3*x2^3*x3^2+(c)*x2^3*x3^5` over `F_p[c]`.
    pub fn parse(text: &str, p: u64) -> Result<Self> {
        let ring = PolyRing::new(p)?;
        let nvars = max_variable_index(text).max(1);
        let f = parse_poly(text, nvars, &ring)?;
        Self::new(ring, &f)
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    /// The renamed polynomial, in `max(k, 1)` slots.
    pub fn poly(&self) -> &Poly<PolyRing> {
        &self.f
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn max_exponent(&self) -> usize {
        self.max_exponent
    }

    /// `S + k + G - 2`, the bound of the theorem statement.
    pub fn bound(&self) -> usize {
        (self.max_exponent + self.k + self.degree).saturating_sub(2)
    }

    /// `S + k + G - 3`, the bound the argument itself produces.
    pub fn proof_bound(&self) -> usize {
        (self.max_exponent + self.k + self.degree).saturating_sub(3)
    }

    /// Smallest `n` with room for every variable of `f` plus `x_n`.
    pub fn min_n(&self) -> usize {
        3.max(self.k + 1)
    }

    pub fn format(&self) -> String {
        self.f.format(&self.ring)
    }

    /// `f` as a reduced polynomial for `n`.
    pub fn embed(&self, n: usize) -> Result<Poly<PolyRing>> {
        if n < self.k + 1 {
            return Err(Error::InvalidParameter(format!(
                "n = {n} leaves no room for {} variables",
                self.k
            )));
        }
        self.f.with_nvars(n - 1)
    }
}

fn max_variable_index(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let start = i + 1;
            let mut end = start;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            if let Ok(v) = text[start..end].parse::<usize>() {
                best = best.max(v);
            }
            i = end;
        } else {
            i += 1;
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StabilityOptions {
    pub p: u64,
    pub t: u8,
    /// Allows regimes other than `p = 2`, `t = 1`; the verdict is then marked
    /// non-certifying.
    pub experimental: bool,
    /// Number of odd `n` above the bound to check as well.
    pub extra_above: usize,
}

impl Default for StabilityOptions {
    fn default() -> Self {
        Self {
            p: 2,
            t: 1,
            experimental: false,
            extra_above: 0,
        }
    }
}

impl StabilityOptions {
    pub fn is_certifying(&self) -> bool {
        self.p == 2 && self.t == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NEvidence {
    pub n: usize,
    pub in_kernel: bool,
    /// Operator multiplicities `a_i` of `D_{y_i - y_n}` with `B(a, f) != 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairing: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityVerdict {
    pub polynomial: String,
    pub p: u64,
    pub t: u8,
    pub k: usize,
    pub degree: usize,
    pub max_exponent: usize,
    pub bound: usize,
    pub proof_bound: usize,
    pub per_n: Vec<NEvidence>,
    pub stable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<usize>,
    /// Extra checks above the bound; not needed for the verdict.
    pub above_bound: Vec<NEvidence>,
    /// `n` above the bound that were requested but exceed the supported range.
    pub above_bound_skipped: Vec<usize>,
    pub certifying: bool,
}

/// Kernel membership of the instance for one `n`.
pub fn membership_at(inst: &StabilityInstance, n: usize, opts: &StabilityOptions) -> Result<NEvidence> {
    check_regime(opts)?;
    if n % 2 == 0 && !opts.experimental {
        return Err(Error::Unsupported(format!("n = {n} is even; only odd n are covered")));
    }
    if inst.ring.p() != opts.p {
        return Err(Error::InvalidParameter(format!(
            "polynomial is over p = {}, options ask for p = {}",
            inst.ring.p(),
            opts.p
        )));
    }
    let f = inst.embed(n)?;
    let m = if opts.t == 1 {
        is_in_kernel(&DunklContext::generic(opts.p, n)?, &f)?
    } else {
        // the value of c only rescales the operators when t = 0
        let field = PrimeField::with_param(opts.p, 1)?;
        let g = f.map_coeffs(&field, |a| inst.ring.specialize(a, 1));
        is_in_kernel(&DunklContext::new(n, 0, field)?, &g)?
    };
    Ok(NEvidence {
        n,
        in_kernel: m.in_kernel,
        witness: m.witness,
        pairing: m.pairing,
    })
}

fn check_regime(opts: &StabilityOptions) -> Result<()> {
    if !opts.is_certifying() && !opts.experimental {
        return Err(Error::Unsupported(format!(
            "stability is established for p = 2 and t = 1 only (got p = {}, t = {}); pass the experimental flag to sweep anyway",
            opts.p, opts.t
        )));
    }
    Ok(())
}

fn odd_from(start: usize) -> usize {
    start | 1
}

/// Checks every odd `n` from `max(3, k + 1)` through the bound in parallel.
pub fn is_stably_in_kernel(inst: &StabilityInstance, opts: &StabilityOptions) -> Result<StabilityVerdict> {
    check_regime(opts)?;
    let bound = inst.bound();
    let ns: Vec<usize> = if inst.f.is_zero() {
        Vec::new()
    } else {
        (odd_from(inst.min_n())..=bound).step_by(2).collect()
    };
    if let Some(&n) = ns.iter().find(|&&n| n > MAX_N) {
        return Err(Error::Unsupported(format!(
            "bound {bound} needs n = {n}, beyond the supported {MAX_N}"
        )));
    }
    let extra: Vec<usize> = if inst.f.is_zero() {
        Vec::new()
    } else {
        (odd_from(bound.max(inst.min_n()) + 1)..)
            .step_by(2)
            .take(opts.extra_above)
            .collect()
    };
    let (extra_ok, skipped): (Vec<usize>, Vec<usize>) = extra.into_iter().partition(|&n| n <= MAX_N);
    let run = |ns: &[usize]| -> Result<Vec<NEvidence>> {
        ns.par_iter().map(|&n| membership_at(inst, n, opts)).collect()
    };
    let per_n = run(&ns)?;
    let above_bound = run(&extra_ok)?;
    let first_failure = per_n.iter().find(|e| !e.in_kernel).map(|e| e.n);
    Ok(StabilityVerdict {
        polynomial: inst.format(),
        p: opts.p,
        t: opts.t,
        k: inst.k,
        degree: inst.degree,
        max_exponent: inst.max_exponent,
        bound,
        proof_bound: inst.proof_bound(),
        stable: first_failure.is_none(),
        first_failure,
        per_n,
        above_bound,
        above_bound_skipped: skipped,
        certifying: opts.is_certifying(),
    })
}

/// `(D_{y_i - y_j})^times f`, indices 0-based.
pub fn iterated_difference<R: Ring>(
    ctx: &DunklContext<R>,
    f: &Poly<R>,
    i: usize,
    j: usize,
    times: usize,
) -> Result<Poly<R>> {
    let mut g = f.clone();
    for _ in 0..times {
        g = ctx.dunkl_difference(&g, i, j)?;
    }
    Ok(g)
}

/// The degree-`n + 5` generator and the member derived from it.
pub const TOP_GENERATOR: &str = "x1^3*x2^3*x3^2+(c)*x2^3*x3^5+(c)*x1*x2^2*x3^5";
pub const TOP_GENERATOR_SHIFTED: &str = "x1^4*x2^3*x3^2+(c)*x1*x2^3*x3^5";
/// Subtracted (times `c`) from `x_1` times the generator.
pub const TOP_GENERATOR_HELPER: &str = "x1^2*x2^2*x3^5";

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorReport {
    pub generator: StabilityVerdict,
    pub helper: StabilityVerdict,
    pub shifted: StabilityVerdict,
    /// `x_1 * generator - c * helper` equals the shifted polynomial.
    pub identity_holds: bool,
    pub verified: bool,
}

/// Certifies the top-degree generator, the helper monomial, and their
/// combination, each stably in the kernel.
pub fn verify_top_generator(extra_above: usize) -> Result<GeneratorReport> {
    let opts = StabilityOptions {
        extra_above,
        ..Default::default()
    };
    let ring = PolyRing::new(2)?;
    let gen = parse_poly(TOP_GENERATOR, 3, &ring)?;
    let helper = parse_poly(TOP_GENERATOR_HELPER, 3, &ring)?;
    let shifted = parse_poly(TOP_GENERATOR_SHIFTED, 3, &ring)?;
    let combo = Poly::var(&ring, 3, 0)
        .mul(&ring, &gen)?
        .sub(&ring, &helper.scale(&ring, &ring.param()))?;
    let identity_holds = combo == shifted;
    let verdicts: Vec<Result<StabilityVerdict>> = [&gen, &helper, &shifted]
        .into_par_iter()
        .map(|f| is_stably_in_kernel(&StabilityInstance::new(ring.clone(), f)?, &opts))
        .collect();
    let mut it = verdicts.into_iter();
    let (generator, helper, shifted) = (it.next().unwrap()?, it.next().unwrap()?, it.next().unwrap()?);
    let verified = identity_holds && generator.stable && helper.stable && shifted.stable;
    Ok(GeneratorReport {
        generator,
        helper,
        shifted,
        identity_holds,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        let a = StabilityInstance::parse("x1^5*x2", 2).unwrap();
        assert_eq!((a.max_exponent(), a.k(), a.degree(), a.bound()), (5, 2, 6, 11));
        assert_eq!(a.proof_bound(), 10);
        // S + k + G - 2 = 6 + 1 + 6 - 2
        assert_eq!(StabilityInstance::parse("x1^6", 2).unwrap().bound(), 11);
        let b = StabilityInstance::parse("x1^2*x2^2*x3^2*x4^2", 2).unwrap();
        assert_eq!(b.bound(), 12);
    }

    #[test]
    fn renaming_is_canonical() {
        let a = StabilityInstance::parse("x4^2*x7", 2).unwrap();
        let b = StabilityInstance::parse("x1^2*x2", 2).unwrap();
        assert_eq!(a.format(), b.format());
        assert_eq!(a.k(), 2);
    }

    #[test]
    fn regime_errors() {
        let a = StabilityInstance::parse("x1^6", 3).unwrap();
        let opts = StabilityOptions {
            p: 3,
            ..Default::default()
        };
        assert!(matches!(is_stably_in_kernel(&a, &opts), Err(Error::Unsupported(_))));
        let b = StabilityInstance::parse("x1^6", 2).unwrap();
        assert!(matches!(
            membership_at(&b, 6, &StabilityOptions::default()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn zero_is_stable() {
        let z = StabilityInstance::parse("0", 2).unwrap();
        let v = is_stably_in_kernel(&z, &StabilityOptions::default()).unwrap();
        assert!(v.stable);
        assert!(v.per_n.is_empty());
    }

    #[test]
    fn sixth_power_is_stable() {
        let a = StabilityInstance::parse("x1^6", 2).unwrap();
        let v = is_stably_in_kernel(&a, &StabilityOptions::default()).unwrap();
        assert!(v.stable, "{v:?}");
        assert_eq!(v.per_n.iter().map(|e| e.n).collect::<Vec<_>>(), vec![3, 5, 7, 9, 11]);
    }

    #[test]
    fn x1_fifth_x2_fails_with_witness() {
        let a = StabilityInstance::parse("x1^5*x2", 2).unwrap();
        let v = is_stably_in_kernel(&a, &StabilityOptions::default()).unwrap();
        assert!(!v.stable);
        let first = v.per_n.iter().find(|e| !e.in_kernel).unwrap();
        assert!(first.witness.is_some());
        assert_eq!(v.first_failure, Some(first.n));
    }

    #[test]
    fn cubed_difference_residual() {
        for n in [3, 5, 7, 9, 11] {
            let ctx = DunklContext::generic(2, n).unwrap();
            let ring = ctx.ring();
            let f = parse_poly("x1^5*x2", n - 1, ring).unwrap();
            let r = iterated_difference(&ctx, &f, 0, 1, 3).unwrap();
            let want = parse_poly("(c)*x1*x2^2+(c)*x2^3", n - 1, ring).unwrap();
            assert_eq!(r, want, "n = {n}");
        }
    }
}

//! One entry point for Hilbert series runs over any supported treatment of `c`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dunkl::DunklContext;
use crate::error::{Error, Result};
use crate::hilbert::{computed_hilbert, default_degree_cap, Series};
use crate::kernel::{GradedKernel, KernelExport, KernelStatus};
use crate::scalar::{CMode, ExtField, PolyRing, PrimeField, Ring};

/// Degrees confirmed after `dim L` first vanishes.
pub const VERIFY_DEGREES: usize = 2;
/// Minimum size, in bits, of the extension field used by fast evaluation.
pub const FAST_EVAL_BITS: u32 = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FastEval {
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HilbertRequest {
    pub p: u64,
    pub n: usize,
    pub t: u8,
    pub c: CMode,
    pub max_degree: Option<usize>,
    /// Replace generic `c` by random elements of large extension fields.
    pub fast_eval: Option<FastEval>,
}

impl HilbertRequest {
    pub fn new(p: u64, n: usize, t: u8) -> Self {
        Self {
            p,
            n,
            t,
            c: CMode::Generic,
            max_degree: None,
            fast_eval: None,
        }
    }

    pub fn cap(&self) -> usize {
        self.max_degree
            .unwrap_or_else(|| default_degree_cap(self.n, self.p as usize, self.t))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FastEvalTrial {
    /// Minimal polynomial of the generator `u`.
    pub modulus: String,
    /// The value substituted for `c`, in powers of `u`.
    pub c: String,
    pub dims_l: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FastEvalReport {
    pub trials: Vec<FastEvalTrial>,
    /// All trials produced the same dimensions.
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertRun {
    pub p: u64,
    pub n: usize,
    pub t: u8,
    pub c_mode: CMode,
    pub cap: usize,
    pub status: KernelStatus,
    pub dims_l: Vec<usize>,
    pub dims_m: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fast_eval: Option<FastEvalReport>,
}

impl HilbertRun {
    pub fn is_complete(&self) -> bool {
        matches!(self.status, KernelStatus::Complete { .. })
    }

    /// The computed series; fails with the partial series when the cap was hit.
    pub fn series(&self) -> Result<Series> {
        let dims: Vec<u64> = self.dims_l.iter().map(|&d| d as u64).collect();
        if !self.is_complete() {
            return Err(Error::Incomplete { partial: dims });
        }
        Ok(Series::new(dims, crate::hilbert::Provenance::Computed))
    }
}

fn validate(req: &HilbertRequest) -> Result<()> {
    if req.t > 1 {
        return Err(Error::InvalidParameter(format!("t = {} must be 0 or 1", req.t)));
    }
    if req.fast_eval.is_some() && (req.t != 1 || req.c != CMode::Generic) {
        return Err(Error::InvalidParameter(
            "fast evaluation replaces generic c and needs t = 1".into(),
        ));
    }
    if let Some(fe) = req.fast_eval {
        if fe.trials == 0 {
            return Err(Error::InvalidParameter("fast evaluation needs at least one trial".into()));
        }
    }
    Ok(())
}

fn run_kernel<R: Ring>(ctx: DunklContext<R>, cap: usize) -> Result<(KernelStatus, GradedKernel<R>)> {
    let mut k = GradedKernel::new(ctx);
    let status = k.run(cap, VERIFY_DEGREES)?;
    Ok((status, k))
}

/// Runs `f` on a kernel built over the ring the request calls for. With
/// `t = 0` a nonzero `c` only rescales the operators, so generic `c` is
/// computed at `c = 1`.
macro_rules! with_exact_kernel {
    ($req:expr, $cap:expr, |$st:ident, $k:ident| $body:expr) => {{
        let req = $req;
        match (req.t, req.c) {
            (0, CMode::Generic) => {
                let ($st, $k) = run_kernel(DunklContext::new(req.n, 0, PrimeField::with_param(req.p, 1)?)?, $cap)?;
                $body
            }
            (_, CMode::Value(v)) => {
                let field = PrimeField::with_param(req.p, v as i64)?;
                let ($st, $k) = run_kernel(DunklContext::new(req.n, req.t, field)?, $cap)?;
                $body
            }
            _ => {
                let ($st, $k) = run_kernel(DunklContext::new(req.n, 1, PolyRing::new(req.p)?)?, $cap)?;
                $body
            }
        }
    }};
}

pub fn compute_hilbert(req: &HilbertRequest) -> Result<HilbertRun> {
    validate(req)?;
    let cap = req.cap();
    let make = |status: KernelStatus, dims_l: Vec<usize>, dims_m: Vec<usize>, fast_eval| HilbertRun {
        p: req.p,
        n: req.n,
        t: req.t,
        c_mode: req.c,
        cap,
        status,
        dims_l,
        dims_m,
        fast_eval,
    };
    if let Some(fe) = req.fast_eval {
        let mut trials = Vec::with_capacity(fe.trials);
        let mut dims_m = Vec::new();
        let mut status = KernelStatus::Complete { vanishing_degree: 0 };
        for i in 0..fe.trials {
            let mut rng = ChaCha8Rng::seed_from_u64(fe.seed.wrapping_add(i as u64));
            let field = ExtField::random(req.p, FAST_EVAL_BITS, &mut rng)?;
            let modulus = field.modulus().format().replace('c', "u");
            let c = field.format_elem(&field.param());
            let (st, k) = run_kernel(DunklContext::new(req.n, 1, field)?, cap)?;
            status = match (status, st) {
                (KernelStatus::Complete { vanishing_degree: a }, KernelStatus::Complete { vanishing_degree: b }) => {
                    KernelStatus::Complete { vanishing_degree: a.max(b) }
                }
                _ => KernelStatus::CapReached { cap },
            };
            if k.dims_m().len() > dims_m.len() {
                dims_m = k.dims_m();
            }
            trials.push(FastEvalTrial {
                modulus,
                c,
                dims_l: k.dims_l(),
            });
        }
        // a specialisation can only lose rank, so the generic value is the maximum
        let len = trials.iter().map(|t| t.dims_l.len()).max().unwrap_or(0);
        let dims_l: Vec<usize> = (0..len)
            .map(|d| trials.iter().map(|t| t.dims_l.get(d).copied().unwrap_or(0)).max().unwrap_or(0))
            .collect();
        let agree = trials.iter().all(|t| t.dims_l == trials[0].dims_l);
        return Ok(make(status, dims_l, dims_m, Some(FastEvalReport { trials, agree })));
    }
    with_exact_kernel!(req, cap, |status, k| Ok(make(status, k.dims_l(), k.dims_m(), None)))
}

/// Kernel bases of every computed degree, exactly.
pub fn export_kernel(req: &HilbertRequest) -> Result<KernelExport> {
    validate(req)?;
    if req.fast_eval.is_some() {
        return Err(Error::InvalidParameter("kernel export is exact only".into()));
    }
    with_exact_kernel!(req, req.cap(), |_status, k| Ok(k.export()))
}

/// The computed series of an exact run, or the partial series on failure.
pub fn exact_series(p: u64, n: usize, t: u8) -> Result<Series> {
    with_exact_kernel!(&HilbertRequest::new(p, n, t), default_degree_cap(n, p as usize, t), |_s, k| {
        computed_hilbert(&k)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_cell() {
        let run = compute_hilbert(&HilbertRequest::new(2, 5, 0)).unwrap();
        assert_eq!(run.series().unwrap().coeffs(), &[1, 4, 4, 1]);
        assert_eq!(run.status, KernelStatus::Complete { vanishing_degree: 4 });
    }

    #[test]
    fn fast_eval_matches_exact() {
        let exact = compute_hilbert(&HilbertRequest::new(2, 3, 1)).unwrap();
        let mut req = HilbertRequest::new(2, 3, 1);
        req.fast_eval = Some(FastEval { trials: 3, seed: 7 });
        let fast = compute_hilbert(&req).unwrap();
        assert!(fast.fast_eval.as_ref().unwrap().agree);
        assert_eq!(fast.series().unwrap(), exact.series().unwrap());
    }

    #[test]
    fn cap_reached_gives_partial_series() {
        let mut req = HilbertRequest::new(2, 5, 1);
        req.max_degree = Some(3);
        let run = compute_hilbert(&req).unwrap();
        assert_eq!(run.status, KernelStatus::CapReached { cap: 3 });
        assert!(matches!(run.series(), Err(Error::Incomplete { .. })));
    }

    #[test]
    fn special_value_drops_rank() {
        // c = 0 at t = 1 leaves only derivatives, which kill p-th powers
        let mut req = HilbertRequest::new(2, 3, 1);
        req.c = CMode::Value(0);
        let run = compute_hilbert(&req).unwrap();
        let generic = compute_hilbert(&HilbertRequest::new(2, 3, 1)).unwrap();
        assert!(run.series().unwrap().dominated_by(&generic.series().unwrap()));
    }

    #[test]
    fn fast_eval_needs_t1() {
        let mut req = HilbertRequest::new(2, 3, 0);
        req.fast_eval = Some(FastEval { trials: 1, seed: 0 });
        assert!(compute_hilbert(&req).is_err());
    }
}

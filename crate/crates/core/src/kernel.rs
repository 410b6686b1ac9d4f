//! The contravariant form `B` and its kernel, degree by degree.
//!
//! `f` of degree `d` lies in `ker B` iff `D_{y_i - y_n} f` lies in `ker B` for
//! every `i < n`. Each computed degree keeps the echelon form of a matrix
//! `pi_d` whose kernel is `ker B[d]`: `pi_0 = [1]` and `pi_d` is the row
//! reduction of the stacked products `pi_{d-1} A_i`, with `A_i` the matrix of
//! `D_{y_i - y_n}` from degree `d` to `d - 1`. Its rank is `dim L[d]`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dunkl::DunklContext;
use crate::error::{Error, Result};
use crate::group::lift;
use crate::linalg::RowEchelon;
use crate::poly::{Monomial, MonomialBasis, Poly};
use crate::scalar::Ring;

/// Pairings beyond this many matrix entries are refused by the Gram oracle.
pub const GRAM_LIMIT: usize = 20_000_000;

/// Version tag of the exported kernel format.
pub const KERNEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug)]
pub struct Level<R: Ring> {
    degree: usize,
    basis: Arc<MonomialBasis>,
    quotient: RowEchelon<R>,
    kernel: OnceLock<RowEchelon<R>>,
}

impl<R: Ring> Level<R> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn dim_m(&self) -> usize {
        self.basis.len()
    }

    /// `dim L[d]`.
    pub fn dim_l(&self) -> usize {
        self.quotient.rank()
    }

    pub fn dim_kernel(&self) -> usize {
        self.dim_m() - self.dim_l()
    }

    /// `ker B[d] = M[d]`.
    pub fn is_complete(&self) -> bool {
        self.dim_l() == 0
    }

    /// The echelon form whose kernel is `ker B[d]`.
    pub fn quotient(&self) -> &RowEchelon<R> {
        &self.quotient
    }

    /// Canonical echelon basis of `ker B[d]`, computed on first use.
    pub fn kernel_basis(&self, ring: &R) -> &RowEchelon<R> {
        self.kernel.get_or_init(|| self.quotient.kernel(ring))
    }

    /// Pivot monomials of the kernel basis.
    pub fn kernel_pivots(&self, ring: &R) -> Vec<Monomial> {
        self.kernel_basis(ring)
            .pivots()
            .iter()
            .map(|&c| self.basis.monomials()[c].clone())
            .collect()
    }

    pub fn kernel_polys(&self, ring: &R) -> Vec<Poly<R>> {
        self.kernel_basis(ring)
            .rows()
            .iter()
            .map(|row| self.basis.to_poly(ring, row))
            .collect()
    }
}

/// Why a kernel run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelStatus {
    /// `dim L` reached zero and stayed zero for the verification degrees.
    Complete { vanishing_degree: usize },
    /// The degree cap was reached first.
    CapReached { cap: usize },
}

#[derive(Debug)]
pub struct GradedKernel<R: Ring> {
    ctx: DunklContext<R>,
    levels: Vec<Level<R>>,
}

/// Membership verdict; `witness` is a multiplicity vector `a` (0-based over
/// the operators `D_{y_i - y_n}`, `i < n`) with `B(a, f) != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub in_kernel: bool,
    pub witness: Option<Vec<usize>>,
    pub pairing: Option<String>,
}

impl<R: Ring> GradedKernel<R> {
    pub fn new(ctx: DunklContext<R>) -> Self {
        let ring = ctx.ring().clone();
        let basis = Arc::new(MonomialBasis::new(ctx.nvars(), 0));
        let mut quotient = RowEchelon::new(1);
        // B(1, 1) = 1
        quotient.insert(&ring, vec![ring.one()]);
        Self {
            ctx,
            levels: vec![Level {
                degree: 0,
                basis,
                quotient,
                kernel: OnceLock::new(),
            }],
        }
    }

    pub fn ctx(&self) -> &DunklContext<R> {
        &self.ctx
    }

    pub fn levels(&self) -> &[Level<R>] {
        &self.levels
    }

    pub fn level(&self, d: usize) -> Option<&Level<R>> {
        self.levels.get(d)
    }

    /// Highest degree computed so far.
    pub fn top_degree(&self) -> usize {
        self.levels.len() - 1
    }

    /// Computes the next degree.
    pub fn extend(&mut self) -> &Level<R> {
        let ring = self.ctx.ring().clone();
        let prev = self.levels.last().expect("degree 0 exists");
        let d = prev.degree + 1;
        let basis = Arc::new(MonomialBasis::new(self.ctx.nvars(), d));
        let mut quotient = RowEchelon::new(basis.len());
        if prev.dim_l() > 0 {
            let mats = self.ctx.operator_matrices(&basis, &prev.basis);
            let prev_rows = prev.quotient.rows();
            let products: Vec<Vec<R::Elem>> = mats
                .par_iter()
                .flat_map_iter(|mat| prev_rows.iter().map(|row| mat.left_mul(&ring, row)))
                .collect();
            for v in products {
                quotient.insert(&ring, v);
                if quotient.is_full() {
                    break;
                }
            }
        }
        self.levels.push(Level {
            degree: d,
            basis,
            quotient,
            kernel: OnceLock::new(),
        });
        self.levels.last().expect("just pushed")
    }

    pub fn compute_through(&mut self, d: usize) {
        while self.top_degree() < d {
            self.extend();
        }
    }

    /// Runs the stopping rule: stop at the first degree with `dim L = 0`, then
    /// confirm `verify` further degrees, never going past `cap`.
    pub fn run(&mut self, cap: usize, verify: usize) -> Result<KernelStatus> {
        loop {
            if let Some(first) = self.levels.iter().position(Level::is_complete) {
                if self.top_degree() >= first + verify {
                    if let Some(bad) = self.levels[first..].iter().find(|l| !l.is_complete()) {
                        return Err(Error::InvalidParameter(format!(
                            "dim L[{}] = {} after vanishing at degree {first}",
                            bad.degree,
                            bad.dim_l()
                        )));
                    }
                    return Ok(KernelStatus::Complete {
                        vanishing_degree: first,
                    });
                }
            }
            if self.top_degree() >= cap {
                return Ok(KernelStatus::CapReached { cap });
            }
            self.extend();
        }
    }

    pub fn dims_l(&self) -> Vec<usize> {
        self.levels.iter().map(Level::dim_l).collect()
    }

    pub fn dims_m(&self) -> Vec<usize> {
        self.levels.iter().map(Level::dim_m).collect()
    }

    /// Kernel membership through the stored quotient maps, with a witness
    /// chain when `f` is not in the kernel.
    pub fn contains(&mut self, f: &Poly<R>) -> Result<Membership> {
        if f.is_zero() {
            return Ok(Membership {
                in_kernel: true,
                witness: None,
                pairing: None,
            });
        }
        let d = f.homogeneous_degree().ok_or_else(|| {
            Error::InvalidParameter("kernel membership needs a homogeneous polynomial".into())
        })?;
        self.compute_through(d);
        let ring = self.ctx.ring().clone();
        let nonzero = |k: &Self, g: &Poly<R>, e: usize| -> Result<bool> {
            let lv = &k.levels[e];
            let v = lv.basis.coords(&ring, g)?;
            Ok(lv.quotient.project(&ring, &v).iter().any(|x| !ring.is_zero(x)))
        };
        if !nonzero(self, f, d)? {
            return Ok(Membership {
                in_kernel: true,
                witness: None,
                pairing: None,
            });
        }
        let n = self.ctx.n();
        let mut a = vec![0usize; n - 1];
        let mut g = f.clone();
        for e in (1..=d).rev() {
            let mut next = None;
            for i in 0..n - 1 {
                let h = self.ctx.dunkl_difference(&g, i, n - 1)?;
                if !h.is_zero() && nonzero(self, &h, e - 1)? {
                    next = Some((i, h));
                    break;
                }
            }
            let (i, h) = next.expect("some operator leaves the kernel");
            a[i] += 1;
            g = h;
        }
        let value = g
            .coeff(&Monomial::one(n - 1))
            .cloned()
            .unwrap_or_else(|| ring.zero());
        Ok(Membership {
            in_kernel: false,
            witness: Some(a),
            pairing: Some(ring.format_elem(&value)),
        })
    }

    /// Kernel bases as formatted polynomials, one array per degree.
    pub fn export(&self) -> KernelExport {
        let ring = self.ctx.ring();
        KernelExport {
            format_version: KERNEL_FORMAT_VERSION,
            p: self.ctx.p(),
            n: self.ctx.n(),
            t: self.ctx.t(),
            degrees: self
                .levels
                .iter()
                .map(|lv| DegreeExport {
                    degree: lv.degree,
                    dim_m: lv.dim_m(),
                    dim_l: lv.dim_l(),
                    kernel: lv.kernel_polys(ring).iter().map(|f| f.format(ring)).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeExport {
    pub degree: usize,
    pub dim_m: usize,
    pub dim_l: usize,
    pub kernel: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelExport {
    pub format_version: u32,
    pub p: u64,
    pub n: usize,
    pub t: u8,
    pub degrees: Vec<DegreeExport>,
}

/// `B(a, f)`: the constant term of `prod_i D_{y_i - y_n}^{a_i} f`.
pub fn contravariant_pairing<R: Ring>(ctx: &DunklContext<R>, a: &[usize], f: &Poly<R>) -> Result<R::Elem> {
    let ring = ctx.ring();
    let total: usize = a.iter().sum();
    if let Some(d) = f.homogeneous_degree() {
        if d != total {
            return Err(Error::InvalidParameter(format!(
                "y-monomial of degree {total} paired with a polynomial of degree {d}"
            )));
        }
    } else if !f.is_zero() {
        return Err(Error::InvalidParameter("pairing needs a homogeneous polynomial".into()));
    }
    let g = ctx.apply_y_monomial(f, a)?;
    Ok(g.coeff(&Monomial::one(ctx.nvars())).cloned().unwrap_or_else(|| ring.zero()))
}

/// All multiplicity vectors of total `d` over `m` slots.
fn multisets(m: usize, d: usize) -> Vec<Vec<u8>> {
    crate::poly::monomials_of_degree(m, d)
        .into_iter()
        .map(|mono| mono.exps().to_vec())
        .collect()
}

/// Row space of the full Gram matrix `G[a][f] = B(a, f)` in degree `d`, whose
/// kernel is `ker B[d]`. Independent of [`GradedKernel`]: rows are built
/// directly from products of operator matrices.
pub fn gram_oracle<R: Ring>(ctx: &DunklContext<R>, d: usize) -> Result<RowEchelon<R>> {
    let ring = ctx.ring();
    let m = ctx.nvars();
    let target = MonomialBasis::new(m, d);
    let nrows = multisets(m, d).len();
    if nrows.saturating_mul(target.len()) > GRAM_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "Gram matrix of size {nrows} x {} is beyond the oracle's limit; use the recursive kernel",
            target.len()
        )));
    }
    let mut prev_basis = MonomialBasis::new(m, 0);
    let mut rows: HashMap<Vec<u8>, Vec<R::Elem>> = HashMap::new();
    rows.insert(vec![0; m], vec![ring.one()]);
    for e in 1..=d {
        let basis = MonomialBasis::new(m, e);
        let mats = ctx.operator_matrices(&basis, &prev_basis);
        let next: HashMap<Vec<u8>, Vec<R::Elem>> = multisets(m, e)
            .into_par_iter()
            .map(|a| {
                let i = (0..m).rev().find(|&i| a[i] > 0).expect("nonempty multiset");
                let mut parent = a.clone();
                parent[i] -= 1;
                let row = mats[i].left_mul(ring, &rows[&parent]);
                (a, row)
            })
            .collect();
        rows = next;
        prev_basis = basis;
    }
    let mut keys: Vec<&Vec<u8>> = rows.keys().collect();
    keys.sort();
    let mut ech = RowEchelon::new(prev_basis.len());
    for k in keys {
        ech.insert(ring, rows[k].clone());
        if ech.is_full() {
            break;
        }
    }
    Ok(ech)
}

/// `ker B[d]` from the Gram oracle, in canonical echelon form.
pub fn gram_oracle_kernel<R: Ring>(ctx: &DunklContext<R>, d: usize) -> Result<RowEchelon<R>> {
    Ok(gram_oracle(ctx, d)?.kernel(ctx.ring()))
}

/// Kernel membership for any `n` by pairing `f` against y-monomials.
///
/// `f` only involves the variables in its support `V`, so `B(a, f)` is
/// invariant under permutations of the remaining indices `W`. Only
/// multiplicity vectors that are non-increasing along `W` are visited, in a
/// depth-first sweep sharing prefixes, on lifted polynomials (no
/// substitution). The first nonzero pairing in sweep order is the witness.
pub fn is_in_kernel<R: Ring>(ctx: &DunklContext<R>, f: &Poly<R>) -> Result<Membership> {
    let n = ctx.n();
    if f.nvars() != n - 1 {
        return Err(Error::SlotMismatch {
            expected: n - 1,
            found: f.nvars(),
        });
    }
    if f.is_zero() {
        return Ok(Membership {
            in_kernel: true,
            witness: None,
            pairing: None,
        });
    }
    let d = f.homogeneous_degree().ok_or_else(|| {
        Error::InvalidParameter("kernel membership needs a homogeneous polynomial".into())
    })?;
    let support = f.support_vars();
    let mut prev_w = vec![None; n - 1];
    let mut last = None;
    for i in 0..n - 1 {
        if !support.contains(&i) {
            prev_w[i] = Some(last);
            last = Some(i);
        }
    }
    let sweep = Sweep { ctx, prev_w };
    let g = lift(f);
    let a = vec![0usize; n - 1];
    let found = if d == 0 {
        sweep.constant(&g).map(|v| (a.clone(), v))
    } else {
        // branch on the first operator in parallel
        (0..n - 1)
            .into_par_iter()
            .filter(|&i| sweep.allowed(&a, i))
            .map(|i| {
                let mut a = vec![0usize; n - 1];
                a[i] = 1;
                let h = ctx.dunkl_difference_lifted(&g, i, n - 1);
                sweep.dfs(&h, i, d - 1, &mut a)
            })
            .find_map_first(|x| x)
    };
    Ok(match found {
        None => Membership {
            in_kernel: true,
            witness: None,
            pairing: None,
        },
        Some((w, v)) => Membership {
            in_kernel: false,
            witness: Some(w),
            pairing: Some(ctx.ring().format_elem(&v)),
        },
    })
}

struct Sweep<'a, R: Ring> {
    ctx: &'a DunklContext<R>,
    /// For an index outside the support: the previous such index, if any.
    prev_w: Vec<Option<Option<usize>>>,
}

impl<R: Ring> Sweep<'_, R> {
    fn allowed(&self, a: &[usize], i: usize) -> bool {
        match self.prev_w[i] {
            None | Some(None) => true,
            Some(Some(prev)) => a[i] < a[prev],
        }
    }

    fn constant(&self, g: &Poly<R>) -> Option<R::Elem> {
        g.coeff(&Monomial::one(g.nvars())).cloned()
    }

    fn dfs(&self, g: &Poly<R>, min: usize, left: usize, a: &mut Vec<usize>) -> Option<(Vec<usize>, R::Elem)> {
        if g.is_zero() {
            return None;
        }
        if left == 0 {
            return self.constant(g).map(|v| (a.clone(), v));
        }
        let n = self.ctx.n();
        for i in min..n - 1 {
            if !self.allowed(a, i) {
                continue;
            }
            let h = self.ctx.dunkl_difference_lifted(g, i, n - 1);
            a[i] += 1;
            let r = self.dfs(&h, i, left - 1, a);
            a[i] -= 1;
            if r.is_some() {
                return r;
            }
        }
        None
    }
}

/// `D_{y_i - y_n} f = 0` for every `i < n`.
pub fn is_singular<R: Ring>(ctx: &DunklContext<R>, f: &Poly<R>) -> Result<bool> {
    let n = ctx.n();
    for i in 0..n - 1 {
        if !ctx.dunkl_difference(f, i, n - 1)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn low_degree_pairings() {
        let ctx = DunklContext::rational(2, 3).unwrap();
        let ring = ctx.ring();
        let one = Poly::one(ring, 2);
        assert_eq!(contravariant_pairing(&ctx, &[0, 0], &one).unwrap(), 1);
        let x1 = parse_poly("x1", 2, ring).unwrap();
        let x2 = parse_poly("x2", 2, ring).unwrap();
        assert_eq!(contravariant_pairing(&ctx, &[1, 0], &x1).unwrap(), 1);
        assert_eq!(contravariant_pairing(&ctx, &[1, 0], &x2).unwrap(), 0);
        assert!(contravariant_pairing(&ctx, &[0, 0], &x1).is_err());
    }

    #[test]
    fn rational_char_two_dims() {
        let ctx = DunklContext::rational(2, 5).unwrap();
        let mut k = GradedKernel::new(ctx);
        let status = k.run(15, 2).unwrap();
        assert_eq!(status, KernelStatus::Complete { vanishing_degree: 4 });
        assert_eq!(k.dims_l(), vec![1, 4, 4, 1, 0, 0, 0]);
        assert_eq!(k.level(2).unwrap().dim_kernel(), 6);
    }

    #[test]
    fn oracle_agrees_in_small_case() {
        let ctx = DunklContext::generic(2, 3).unwrap();
        let mut k = GradedKernel::new(ctx.clone());
        k.compute_through(4);
        for d in 0..=4 {
            let g = gram_oracle(&ctx, d).unwrap();
            assert_eq!(g.rows(), k.level(d).unwrap().quotient().rows(), "degree {d}");
        }
    }

    #[test]
    fn membership_paths_agree() {
        let ctx = DunklContext::rational(2, 5).unwrap();
        let ring = ctx.ring().clone();
        let mut k = GradedKernel::new(ctx.clone());
        for text in ["x1*x2*x3", "x1^2+x1*x2+x2^2", "x1*x2", "x1^3", "x1^2*x2"] {
            let f = parse_poly(text, 4, &ring).unwrap();
            let a = is_in_kernel(&ctx, &f).unwrap();
            let b = k.contains(&f).unwrap();
            assert_eq!(a.in_kernel, b.in_kernel, "{text}");
            for w in [a.witness, b.witness].into_iter().flatten() {
                let v = contravariant_pairing(&ctx, &w, &f).unwrap();
                assert_ne!(v, 0);
            }
        }
    }
}

//! Dunkl operators `D_{y_i} = t d/dx_i - c sum_{k != i} (x_i - x_k)^{-1} (1 - sigma_{ik})`.
//!
//! Every operator is evaluated on the lifted representative (an extra, empty
//! `x_n` slot) and the result is reduced once. This is sound because
//! `[D_{y_i - y_j}, x_1 + ... + x_n] = 0`, so the ideal generated by
//! `x_1 + ... + x_n` is preserved.

use std::sync::Arc;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::group::{accumulate_reduced, divided_difference_monomial, lift, Reducer};
use crate::poly::{Exponents, Monomial, MonomialBasis, Poly};
use crate::scalar::{PolyRing, PrimeField, Ring};

/// `n`, `t`, and the coefficient ring (which fixes `p` and `c`).
#[derive(Clone, Debug)]
pub struct DunklContext<R: Ring> {
    n: usize,
    t: u8,
    ring: R,
    reducer: Arc<Reducer>,
}

impl DunklContext<PrimeField> {
    /// `t = 0` with `c = 1`; the value of a nonzero `c` only rescales the
    /// operators when `t = 0`.
    pub fn rational(p: u64, n: usize) -> Result<Self> {
        Self::new(n, 0, PrimeField::with_param(p, 1)?)
    }
}

impl DunklContext<PolyRing> {
    /// `t = 1` with `c` an indeterminate.
    pub fn generic(p: u64, n: usize) -> Result<Self> {
        Self::new(n, 1, PolyRing::new(p)?)
    }
}

impl<R: Ring> DunklContext<R> {
    pub fn new(n: usize, t: u8, ring: R) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("n = {n} must be at least 2")));
        }
        if n > 16 {
            return Err(Error::InvalidParameter(format!("n = {n} exceeds the supported 16")));
        }
        if t > 1 {
            return Err(Error::InvalidParameter(format!("t = {t} must be 0 or 1")));
        }
        let reducer = Reducer::shared(n - 1, ring.characteristic());
        Ok(Self { n, t, ring, reducer })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> u8 {
        self.t
    }

    pub fn p(&self) -> u64 {
        self.ring.characteristic()
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// `(k, r)` with `n = k p + r`.
    pub fn congruence(&self) -> (usize, usize) {
        let p = self.p() as usize;
        (self.n / p, self.n % p)
    }

    /// Number of reduced variables, `n - 1`.
    pub fn nvars(&self) -> usize {
        self.n - 1
    }

    pub fn reducer(&self) -> &Reducer {
        &self.reducer
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::InvalidParameter(format!(
                "index {} outside 1..={}",
                i + 1,
                self.n
            )));
        }
        Ok(())
    }

    fn check_poly(&self, f: &Poly<R>) -> Result<()> {
        if f.nvars() != self.n - 1 {
            return Err(Error::SlotMismatch {
                expected: self.n - 1,
                found: f.nvars(),
            });
        }
        Ok(())
    }

    pub fn reduce(&self, f: &Poly<R>) -> Poly<R> {
        self.reducer.reduce(&self.ring, f)
    }

    /// `x_a` as a reduced polynomial; `x_n` becomes `-(x_1 + ... + x_{n-1})`.
    pub fn x(&self, a: usize) -> Poly<R> {
        let m = self.n - 1;
        if a < m {
            return Poly::var(&self.ring, m, a);
        }
        let minus_one = self.ring.neg(&self.ring.one());
        Poly::from_terms(&self.ring, m, (0..m).map(|k| (Monomial::var(m, k), minus_one.clone())))
    }

    /// `(d/dx_i f, sum_{k != i} Delta_{ik} f)` on an `n`-slot polynomial, with
    /// `skip` naming one `k` to leave out of the sum.
    fn lifted_parts(&self, f: &Poly<R>, i: usize, skip: Option<usize>) -> (Poly<R>, Poly<R>) {
        let ring = &self.ring;
        let mut deriv = Poly::zero(self.n);
        let mut dsum = Poly::zero(self.n);
        for (m, c) in f.terms() {
            let e = m.exps()[i];
            if e > 0 {
                let mut ex: Exponents = SmallVec::from_slice(m.exps());
                ex[i] -= 1;
                deriv.add_term(ring, Monomial::from_exponents(ex), ring.mul(c, &ring.from_int(e as i64)));
            }
            let neg = ring.neg(c);
            for k in (0..self.n).filter(|&k| k != i && Some(k) != skip) {
                divided_difference_monomial(m.exps(), i, k, |ex, negative| {
                    dsum.add_term(
                        ring,
                        Monomial::from_exponents(ex),
                        if negative { neg.clone() } else { c.clone() },
                    );
                });
            }
        }
        (deriv, dsum)
    }

    fn combine(&self, deriv: &Poly<R>, dsum: &Poly<R>) -> Poly<R> {
        let ring = &self.ring;
        let mut out = if self.t == 1 {
            deriv.clone()
        } else {
            Poly::zero(self.n)
        };
        let mc = ring.neg(&ring.param());
        for (m, c) in dsum.terms() {
            out.add_term(ring, m.clone(), ring.mul(c, &mc));
        }
        out
    }

    /// `D_{y_i}` on an `n`-slot (lifted) polynomial, without reducing.
    pub fn dunkl_lifted(&self, f: &Poly<R>, i: usize) -> Poly<R> {
        let (d, s) = self.lifted_parts(f, i, None);
        self.combine(&d, &s)
    }

    /// `D_{y_i - y_j}` on an `n`-slot polynomial, without reducing.
    pub fn dunkl_difference_lifted(&self, f: &Poly<R>, i: usize, j: usize) -> Poly<R> {
        self.dunkl_lifted(f, i)
            .sub(&self.ring, &self.dunkl_lifted(f, j))
            .expect("same slots")
    }

    /// `D_{y_i} f` for a reduced `f` (0-based `i < n`).
    pub fn dunkl(&self, f: &Poly<R>, i: usize) -> Result<Poly<R>> {
        self.check_poly(f)?;
        self.check_index(i)?;
        Ok(self.reduce(&self.dunkl_lifted(&lift(f), i)))
    }

    /// `D_{y_i - y_j} f` for a reduced `f`. Equal indices give zero.
    pub fn dunkl_difference(&self, f: &Poly<R>, i: usize, j: usize) -> Result<Poly<R>> {
        self.check_poly(f)?;
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Ok(Poly::zero(self.n - 1));
        }
        Ok(self.reduce(&self.dunkl_difference_lifted(&lift(f), i, j)))
    }

    /// A deliberately wrong `D_{y_i - y_j}` that omits one divided difference
    /// from `D_{y_i}`. Only used to show that the relation checks catch it.
    pub fn dunkl_difference_corrupted(&self, f: &Poly<R>, i: usize, j: usize) -> Poly<R> {
        let lifted = lift(f);
        let skip = (i + 1) % self.n;
        let (d, s) = self.lifted_parts(&lifted, i, Some(skip));
        let di = self.combine(&d, &s);
        let dj = self.dunkl_lifted(&lifted, j);
        self.reduce(&di.sub(&self.ring, &dj).expect("same slots"))
    }

    /// Applies `D_{y_i - y_j}` to many polynomials in parallel.
    pub fn dunkl_difference_batch(&self, fs: &[Poly<R>], i: usize, j: usize) -> Result<Vec<Poly<R>>> {
        fs.par_iter().map(|f| self.dunkl_difference(f, i, j)).collect()
    }

    /// `(alpha, beta)` with `D_{y_i - y_j} f = alpha + c beta`, where `alpha`
    /// is the derivative part and `beta` the divided-difference part.
    pub fn dunkl_parts(&self, f: &Poly<R>, i: usize, j: usize) -> Result<(Poly<R>, Poly<R>)> {
        if self.t != 1 {
            return Err(Error::Unsupported(
                "the derivative/divided-difference split needs t = 1".into(),
            ));
        }
        self.check_poly(f)?;
        self.check_index(i)?;
        self.check_index(j)?;
        let lifted = lift(f);
        let (di, si) = self.lifted_parts(&lifted, i, None);
        let (dj, sj) = self.lifted_parts(&lifted, j, None);
        let ring = &self.ring;
        let alpha = self.reduce(&di.sub(ring, &dj).expect("same slots"));
        let beta = self.reduce(&sj.sub(ring, &si).expect("same slots"));
        Ok((alpha, beta))
    }

    /// `prod_i D_{y_i - y_n}^{a_i} f` for a multiplicity vector `a` of length `n - 1`.
    pub fn apply_y_monomial(&self, f: &Poly<R>, a: &[usize]) -> Result<Poly<R>> {
        self.check_poly(f)?;
        if a.len() != self.n - 1 {
            return Err(Error::InvalidParameter(format!(
                "y-monomial has {} entries, expected {}",
                a.len(),
                self.n - 1
            )));
        }
        let mut g = lift(f);
        for (i, &k) in a.iter().enumerate() {
            for _ in 0..k {
                g = self.dunkl_difference_lifted(&g, i, self.n - 1);
                if g.is_zero() {
                    return Ok(Poly::zero(self.n - 1));
                }
            }
        }
        Ok(self.reduce(&g))
    }

    /// Matrices of `D_{y_i - y_n}` (`i < n - 1`) from degree `src.degree()` to
    /// `dst.degree() = src.degree() - 1` in the monomial bases.
    pub fn operator_matrices(&self, src: &MonomialBasis, dst: &MonomialBasis) -> Vec<OperatorMatrix<R>> {
        assert_eq!(src.nvars(), self.n - 1);
        assert_eq!(dst.nvars(), self.n - 1);
        assert_eq!(src.degree(), dst.degree() + 1);
        let m = self.n - 1;
        let columns: Vec<Vec<Vec<(u32, R::Elem)>>> = src
            .monomials()
            .par_iter()
            .map(|mono| self.operator_column(mono, dst))
            .collect();
        let mut mats: Vec<OperatorMatrix<R>> = (0..m)
            .map(|_| OperatorMatrix {
                rows: dst.len(),
                columns: Vec::with_capacity(src.len()),
            })
            .collect();
        for col in columns {
            for (i, entries) in col.into_iter().enumerate() {
                mats[i].columns.push(entries);
            }
        }
        mats
    }

    /// Column of every `D_{y_i - y_n}` at one source monomial.
    fn operator_column(&self, mono: &Monomial, dst: &MonomialBasis) -> Vec<Vec<(u32, R::Elem)>> {
        let n = self.n;
        let m = n - 1;
        let p = self.p();
        let red = &*self.reducer;
        let mut lifted: Exponents = SmallVec::from_slice(mono.exps());
        lifted.push(0);

        let scatter = |acc: &mut Vec<u64>, e: &[u8], negative: bool| {
            let coeff = if negative { p - 1 } else { 1 };
            accumulate_reduced(red, e, coeff, |ex, k| {
                let idx = dst.index_of_exps(ex).expect("degree drops by one");
                acc[idx] = (acc[idx] + k) % p;
            });
        };

        // sum_{k != n} Delta_{nk}, shared by every i
        let mut shared = vec![0u64; dst.len()];
        for k in 0..m {
            divided_difference_monomial(&lifted, m, k, |e, neg| scatter(&mut shared, &e, neg));
        }

        let c = self.ring.param();
        (0..m)
            .map(|i| {
                let mut own = vec![0u64; dst.len()];
                for k in (0..n).filter(|&k| k != i) {
                    divided_difference_monomial(&lifted, i, k, |e, neg| scatter(&mut own, &e, neg));
                }
                let mut deriv = vec![0u64; dst.len()];
                if self.t == 1 && lifted[i] > 0 {
                    let mut e = lifted.clone();
                    e[i] -= 1;
                    let idx = dst.index_of_exps(&e[..m]).expect("degree drops by one");
                    deriv[idx] = lifted[i] as u64 % p;
                }
                // D_{y_i - y_n} = t (d_i - d_n) - c (own - shared), and d_n vanishes
                (0..dst.len())
                    .filter_map(|r| {
                        let cpart = (shared[r] + p - own[r]) % p;
                        if cpart == 0 && deriv[r] == 0 {
                            return None;
                        }
                        let v = self.ring.add(
                            &self.ring.from_int(deriv[r] as i64),
                            &self.ring.mul(&c, &self.ring.from_int(cpart as i64)),
                        );
                        (!self.ring.is_zero(&v)).then_some((r as u32, v))
                    })
                    .collect()
            })
            .collect()
    }

    /// A random homogeneous reduced polynomial of degree `d`.
    pub fn random_poly(&self, d: usize, rng: &mut dyn rand::RngCore) -> Poly<R> {
        let basis = crate::poly::monomials_of_degree(self.n - 1, d);
        let mut f = Poly::zero(self.n - 1);
        for m in basis {
            if rng.gen_bool(0.5) {
                f.add_term(&self.ring, m, self.ring.random_elem(rng));
            }
        }
        f
    }
}

/// A sparse matrix stored by columns.
#[derive(Clone, Debug)]
pub struct OperatorMatrix<R: Ring> {
    pub rows: usize,
    pub columns: Vec<Vec<(u32, R::Elem)>>,
}

impl<R: Ring> OperatorMatrix<R> {
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    /// `row * self`.
    pub fn left_mul(&self, ring: &R, row: &[R::Elem]) -> Vec<R::Elem> {
        debug_assert_eq!(row.len(), self.rows);
        self.columns
            .iter()
            .map(|col| {
                let mut acc = ring.zero();
                for (r, e) in col {
                    let x = &row[*r as usize];
                    if !ring.is_zero(x) {
                        acc = ring.add(&acc, &ring.mul(x, e));
                    }
                }
                acc
            })
            .collect()
    }

    /// `self * v`.
    pub fn apply(&self, ring: &R, v: &[R::Elem]) -> Vec<R::Elem> {
        let mut out = vec![ring.zero(); self.rows];
        for (col, x) in self.columns.iter().zip(v) {
            if ring.is_zero(x) {
                continue;
            }
            for (r, e) in col {
                out[*r as usize] = ring.add(&out[*r as usize], &ring.mul(x, e));
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorFailure {
    /// 1-based indices.
    pub i: usize,
    pub j: usize,
    pub a: usize,
    pub f: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CommutatorReport {
    pub checked: usize,
    pub failures: Vec<CommutatorFailure>,
}

impl CommutatorReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: CommutatorReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }
}

/// Checks `[D_{y_i - y_j}, x_a]` against its group-algebra value on random
/// polynomials of degree `d`, for every `(i, j, a)`.
pub fn check_commutators<R: Ring>(ctx: &DunklContext<R>, d: usize, trials: usize, seed: u64) -> CommutatorReport {
    check_commutators_with(ctx, d, trials, seed, |f, i, j| {
        ctx.dunkl_difference(f, i, j).expect("valid indices")
    })
}

/// As [`check_commutators`] with a caller-supplied `D_{y_i - y_j}`.
pub fn check_commutators_with<R: Ring>(
    ctx: &DunklContext<R>,
    d: usize,
    trials: usize,
    seed: u64,
    op: impl Fn(&Poly<R>, usize, usize) -> Poly<R>,
) -> CommutatorReport {
    let ring = ctx.ring();
    let n = ctx.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CommutatorReport::default();
    let t = ring.from_int(ctx.t() as i64);
    let c = ring.param();
    let sigma = |f: &Poly<R>, a: usize, b: usize| {
        crate::group::apply_transposition(ring, f, crate::group::Transposition { i: a, j: b }, n)
            .expect("valid transposition")
    };
    for _ in 0..trials {
        let f = ctx.random_poly(d, &mut rng);
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                let df = op(&f, i, j);
                for a in 0..n {
                    let xa = ctx.x(a);
                    let lhs = op(&xa.mul(ring, &f).expect("slots"), i, j)
                        .sub(ring, &xa.mul(ring, &df).expect("slots"))
                        .expect("slots");
                    let rhs = if a == i || a == j {
                        // [y_i - y_j, x_i] = t - c s_ij - c sum_{k != i} s_ik
                        let (u, v) = if a == i { (i, j) } else { (j, i) };
                        let mut acc = f.scale(ring, &t);
                        let mut group = sigma(&f, u, v);
                        for k in (0..n).filter(|&k| k != u) {
                            group = group.add(ring, &sigma(&f, u, k)).expect("slots");
                        }
                        acc = acc.sub(ring, &group.scale(ring, &c)).expect("slots");
                        if a == j {
                            acc.neg(ring)
                        } else {
                            acc
                        }
                    } else {
                        sigma(&f, i, a)
                            .sub(ring, &sigma(&f, j, a))
                            .expect("slots")
                            .scale(ring, &c)
                    };
                    report.checked += 1;
                    if lhs != rhs {
                        report.failures.push(CommutatorFailure {
                            i: i + 1,
                            j: j + 1,
                            a: a + 1,
                            f: f.format(ring),
                            lhs: lhs.format(ring),
                            rhs: rhs.format(ring),
                        });
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn degree_one_values() {
        let ctx = DunklContext::rational(2, 5).unwrap();
        let x1 = parse_poly("x1", 4, ctx.ring()).unwrap();
        assert_eq!(ctx.dunkl_difference(&x1, 0, 1).unwrap().format(ctx.ring()), "1");
        let x1x2 = parse_poly("x1*x2", 4, ctx.ring()).unwrap();
        assert_eq!(ctx.dunkl_difference(&x1x2, 0, 1).unwrap().format(ctx.ring()), "x1+x2");
    }

    #[test]
    fn generic_degree_one() {
        // 1 - c n = 1 + c at p = 2, n = 3
        let ctx = DunklContext::generic(2, 3).unwrap();
        let x1 = parse_poly("x1", 2, ctx.ring()).unwrap();
        assert_eq!(ctx.dunkl_difference(&x1, 0, 1).unwrap().format(ctx.ring()), "(c+1)");
    }

    #[test]
    fn triangle_sum_is_singular() {
        let ctx = DunklContext::rational(2, 5).unwrap();
        let f = parse_poly("x1^2+x1*x2+x2^2", 4, ctx.ring()).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!(ctx.dunkl_difference(&f, i, j).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn operators_commute() {
        let ctx = DunklContext::generic(3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let f = lift(&ctx.random_poly(3, &mut rng));
            let a = ctx.dunkl_difference_lifted(&ctx.dunkl_difference_lifted(&f, 0, 3), 1, 3);
            let b = ctx.dunkl_difference_lifted(&ctx.dunkl_difference_lifted(&f, 1, 3), 0, 3);
            assert_eq!(ctx.reduce(&a), ctx.reduce(&b));
        }
    }

    #[test]
    fn parts_recombine() {
        let ctx = DunklContext::generic(2, 3).unwrap();
        let ring = ctx.ring();
        let f = parse_poly("x1^2", 2, ring).unwrap();
        let (alpha, _) = ctx.dunkl_parts(&f, 0, 1).unwrap();
        assert!(alpha.is_zero());
        let one = Poly::one(ring, 2);
        let (a, b) = ctx.dunkl_parts(&one, 0, 1).unwrap();
        assert!(a.is_zero() && b.is_zero());
        let t0 = DunklContext::rational(2, 3).unwrap();
        assert!(t0.dunkl_parts(&Poly::one(t0.ring(), 2), 0, 1).is_err());
    }

    #[test]
    fn operator_matrix_matches_polynomial_action() {
        let ctx = DunklContext::generic(3, 4).unwrap();
        let ring = ctx.ring();
        let src = MonomialBasis::new(3, 3);
        let dst = MonomialBasis::new(3, 2);
        let mats = ctx.operator_matrices(&src, &dst);
        for (col, mono) in src.monomials().iter().enumerate() {
            let f = Poly::from_term(ring, mono.clone(), ring.one());
            for (i, mat) in mats.iter().enumerate() {
                let g = ctx.dunkl_difference(&f, i, 3).unwrap();
                let mut unit = vec![ring.zero(); src.len()];
                unit[col] = ring.one();
                assert_eq!(dst.to_poly(ring, &mat.apply(ring, &unit)), g);
            }
        }
    }

    #[test]
    fn relations_hold_and_corruption_is_caught() {
        let ctx = DunklContext::rational(2, 3).unwrap();
        for d in 0..=3 {
            assert!(check_commutators(&ctx, d, 5, d as u64).passed());
        }
        let bad = check_commutators_with(&ctx, 2, 3, 1, |f, i, j| ctx.dunkl_difference_corrupted(f, i, j));
        assert!(!bad.passed());
    }
}

//! The symmetric group acting on reduced polynomials.
//!
//! Indices are 0-based: slot `n - 1` stands for `x_n`, which never appears in a
//! reduced polynomial. Anything touching it goes through [`lift`] (add an
//! empty `x_n` slot), acts on `n` variables, and comes back through
//! [`Reducer::reduce`] (substitute `x_n = -(x_1 + ... + x_{n-1})`).

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::poly::{monomials_of_degree, Exponents, Monomial, Poly};
use crate::scalar::Ring;
use crate::upoly::mul_mod;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transposition {
    pub i: usize,
    pub j: usize,
}

impl Transposition {
    /// `sigma_{ij}` in `S_n`, with 0-based `i != j < n`.
    pub fn new(i: usize, j: usize, n: usize) -> Result<Self> {
        if i >= n || j >= n {
            return Err(Error::InvalidParameter(format!(
                "transposition ({}, {}) outside 1..={n}",
                i + 1,
                j + 1
            )));
        }
        if i == j {
            return Err(Error::InvalidParameter("transposition needs i != j".into()));
        }
        Ok(Self { i, j })
    }
}

/// Expansions of `(-(x_1 + ... + x_m))^b` over `F_p`, as `(exponents, residue)`.
#[derive(Debug)]
pub struct Reducer {
    m: usize,
    p: u64,
    powers: Mutex<Vec<Arc<Vec<(Exponents, u64)>>>>,
}

fn binom_u128(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

impl Reducer {
    /// For reduced polynomials with `m = n - 1` slots.
    pub fn new(m: usize, p: u64) -> Self {
        Self {
            m,
            p,
            powers: Mutex::new(Vec::new()),
        }
    }

    /// A process-wide shared instance per `(m, p)`.
    pub fn shared(m: usize, p: u64) -> Arc<Reducer> {
        static CACHE: OnceLock<Mutex<BTreeMap<(usize, u64), Arc<Reducer>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        cache
            .lock()
            .expect("reducer cache")
            .entry((m, p))
            .or_insert_with(|| Arc::new(Reducer::new(m, p)))
            .clone()
    }

    pub fn nvars(&self) -> usize {
        self.m
    }

    /// `(-e)^b` with `e = x_1 + ... + x_m`.
    pub fn neg_sum_power(&self, b: usize) -> Arc<Vec<(Exponents, u64)>> {
        let mut powers = self.powers.lock().expect("power table");
        while powers.len() <= b {
            let k = powers.len();
            let sign = if k % 2 == 0 { 1 } else { self.p - 1 };
            let terms = monomials_of_degree(self.m, k)
                .into_iter()
                .filter_map(|mono| {
                    // multinomial coefficient k! / prod(a_i!)
                    let mut left = k as u64;
                    let mut coeff: u128 = 1;
                    for &a in mono.exps() {
                        coeff = coeff * binom_u128(left, a as u64) % self.p as u128;
                        left -= a as u64;
                    }
                    let c = mul_mod(coeff as u64, sign, self.p);
                    (c != 0).then(|| (Exponents::from_slice(mono.exps()), c))
                })
                .collect();
            powers.push(Arc::new(terms));
        }
        powers[b].clone()
    }

    /// Substitutes `x_n = -(x_1 + ... + x_{n-1})` in a lifted polynomial.
    pub fn reduce<R: Ring>(&self, ring: &R, f: &Poly<R>) -> Poly<R> {
        assert_eq!(f.nvars(), self.m + 1, "reduce expects a lifted polynomial");
        let mut out = Poly::zero(self.m);
        for (mono, c) in f.terms() {
            let b = mono.exps()[self.m] as usize;
            let base: Exponents = SmallVec::from_slice(&mono.exps()[..self.m]);
            if b == 0 {
                out.add_term(ring, Monomial::from_exponents(base), c.clone());
                continue;
            }
            for (e, k) in self.neg_sum_power(b).iter() {
                let ex: Exponents = base.iter().zip(e).map(|(x, y)| x + y).collect();
                out.add_term(
                    ring,
                    Monomial::from_exponents(ex),
                    ring.mul(c, &ring.from_int(*k as i64)),
                );
            }
        }
        out
    }
}

/// Appends an empty `x_n` slot.
pub fn lift<R: Ring>(f: &Poly<R>) -> Poly<R> {
    f.with_nvars(f.nvars() + 1).expect("padding never fails")
}

/// Swaps two slots.
pub fn swap_slots<R: Ring>(f: &Poly<R>, i: usize, j: usize) -> Poly<R> {
    let nv = f.nvars();
    let mut perm: Vec<usize> = (0..nv).collect();
    perm.swap(i, j);
    f.permute_slots(&perm, nv)
}

/// `sigma_{ij} f` for a reduced polynomial `f` in `S_n`.
pub fn apply_transposition<R: Ring>(ring: &R, f: &Poly<R>, s: Transposition, n: usize) -> Result<Poly<R>> {
    check_reduced(f, n)?;
    let (i, j) = (s.i, s.j);
    if i >= n || j >= n || i == j {
        return Err(Error::InvalidParameter(format!("bad transposition {s:?} for n = {n}")));
    }
    if i < n - 1 && j < n - 1 {
        return Ok(swap_slots(f, i, j));
    }
    let red = Reducer::shared(n - 1, ring.characteristic());
    Ok(red.reduce(ring, &swap_slots(&lift(f), i, j)))
}

fn check_reduced<R: Ring>(f: &Poly<R>, n: usize) -> Result<()> {
    if n < 2 || f.nvars() != n - 1 {
        return Err(Error::SlotMismatch {
            expected: n.saturating_sub(1),
            found: f.nvars(),
        });
    }
    Ok(())
}

/// `(m - sigma_{ik} m) / (x_i - x_k)` for a single monomial, as `(monomial, +-1)`
/// terms. Works in any slot count.
pub fn divided_difference_monomial(exps: &[u8], i: usize, k: usize, mut emit: impl FnMut(Exponents, bool)) {
    let (a, b) = (exps[i], exps[k]);
    if a == b {
        return;
    }
    let (hi, lo, negative) = if a > b { (a, b, false) } else { (b, a, true) };
    // x_i^a x_k^b - x_i^b x_k^a = +-(x_i x_k)^lo (x_i^(hi-lo) - x_k^(hi-lo))
    let span = hi - lo;
    for s in 0..span {
        let mut e: Exponents = SmallVec::from_slice(exps);
        e[i] = lo + s;
        e[k] = lo + span - 1 - s;
        emit(e, negative);
    }
}

/// Closed-form divided difference in the slot space of `f` (both indices are
/// slots of `f`).
pub fn divided_difference_slots<R: Ring>(ring: &R, f: &Poly<R>, i: usize, k: usize) -> Poly<R> {
    let mut out = Poly::zero(f.nvars());
    for (m, c) in f.terms() {
        let neg = ring.neg(c);
        divided_difference_monomial(m.exps(), i, k, |e, negative| {
            out.add_term(
                ring,
                Monomial::from_exponents(e),
                if negative { neg.clone() } else { c.clone() },
            );
        });
    }
    out
}

/// Exact division of `g` by `x_i - x_k`; `None` if there is a remainder.
pub fn divide_by_difference<R: Ring>(ring: &R, g: &Poly<R>, i: usize, k: usize) -> Option<Poly<R>> {
    // Repeatedly cancel the term of highest x_i-degree.
    let mut work: BTreeMap<(u8, Monomial), R::Elem> = g
        .terms()
        .map(|(m, c)| ((m.exps()[i], m.clone()), c.clone()))
        .collect();
    let mut q = Poly::zero(g.nvars());
    while let Some(((a, m), c)) = work.pop_last() {
        if a == 0 {
            return None;
        }
        let mut e: Exponents = SmallVec::from_slice(m.exps());
        e[i] -= 1;
        q.add_term(ring, Monomial::from_exponents(e.clone()), c.clone());
        // g -= (x_i - x_k) * c * x^e; the x_i part cancels the popped term
        e[k] += 1;
        let key = (e[i], Monomial::from_exponents(e));
        let cur = work.remove(&key).unwrap_or_else(|| ring.zero());
        let s = ring.add(&cur, &c);
        if !ring.is_zero(&s) {
            work.insert(key, s);
        }
    }
    Some(q)
}

/// `(f - sigma_{ik} f) / (x_i - x_k)` for a reduced `f` in `S_n`.
///
/// With both indices below `n` this is the monomial-wise geometric sum. With
/// one index equal to `n` the difference is formed in `n` variables, divided
/// exactly, and reduced.
pub fn divided_difference<R: Ring>(ring: &R, f: &Poly<R>, i: usize, k: usize, n: usize) -> Result<Poly<R>> {
    check_reduced(f, n)?;
    if i >= n || k >= n || i == k {
        return Err(Error::InvalidParameter(format!(
            "divided difference needs distinct indices in 1..={n}"
        )));
    }
    if i < n - 1 && k < n - 1 {
        return Ok(divided_difference_slots(ring, f, i, k));
    }
    Ok(divided_difference_by_division(ring, f, i, k, n))
}

/// The lift-subtract-divide-reduce path, valid for any index pair.
pub fn divided_difference_by_division<R: Ring>(ring: &R, f: &Poly<R>, i: usize, k: usize, n: usize) -> Poly<R> {
    let lifted = lift(f);
    let g = lifted
        .sub(ring, &swap_slots(&lifted, i, k))
        .expect("same slots");
    let q = divide_by_difference(ring, &g, i, k)
        .expect("f - sigma f is always divisible by x_i - x_k");
    Reducer::shared(n - 1, ring.characteristic()).reduce(ring, &q)
}

/// Feeds the reduced expansion of a lifted monomial (times `coeff`) to `add`.
pub(crate) fn accumulate_reduced(
    red: &Reducer,
    exps: &[u8],
    coeff: u64,
    mut add: impl FnMut(&[u8], u64),
) {
    let m = red.nvars();
    let b = exps[m] as usize;
    if b == 0 {
        add(&exps[..m], coeff);
        return;
    }
    let mut buf: Exponents = SmallVec::from_elem(0, m);
    for (e, k) in red.neg_sum_power(b).iter() {
        for s in 0..m {
            buf[s] = exps[s] + e[s];
        }
        add(&buf, mul_mod(coeff, *k, red.p));
    }
}

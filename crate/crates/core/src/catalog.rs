//! Known singular polynomials and kernel members, by family.
//!
//! Indices are 1-based and may include `n`, whose variable is replaced by
//! `-(x_1 + ... + x_{n-1})`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dunkl::DunklContext;
use crate::error::{Error, Result};
use crate::kernel::{is_in_kernel, is_singular};
use crate::poly::Poly;
use crate::scalar::Ring;
use crate::upoly::inv_mod;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `x_i^2 + x_i x_j + x_j^2`; `t = 0`, `p = 2`.
    TriangleSum,
    /// `(x_j - x_k)(x_i - x_j - x_k)`; `t = 0`, odd `p`.
    LinearProduct,
    /// `x_i^2 x_j - x_i x_j^2`; `t = 0`.
    SkewCubic,
    /// `x_i^3 - x_i^2 x_j + x_j^3`; `t = 0`, `p = 3`.
    CubicChar3,
    /// `x_i^p - x_i x_j^{p-1} + x_j^p`; `t = 0`.
    PowerP,
    /// `x_i^4 + x_i^2 x_j^2 + x_j^4 + c (x_i^2 x_j^2 + (x_i + x_j) sum_{k != i,j} x_k^3)`;
    /// `t = 1`, `p = 2`, `i, j < n`.
    QuarticChar2,
    /// `[z^p] F(z) / (1 - x_i z)` with `F = sum_{m<p} binom(c, m) (g - 1)^m`
    /// and `g = prod_j (1 - x_j z)`; `t = 1`, `p | n`, `i < n`.
    BinomialSeries,
}

/// Which statement certifies a family member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    /// Killed by every `D_{y_i - y_n}`.
    Singular,
    /// In the radical of the contravariant form.
    Kernel,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::TriangleSum,
        Family::LinearProduct,
        Family::SkewCubic,
        Family::CubicChar3,
        Family::PowerP,
        Family::QuarticChar2,
        Family::BinomialSeries,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::TriangleSum => "triangle-sum",
            Family::LinearProduct => "linear-product",
            Family::SkewCubic => "skew-cubic",
            Family::CubicChar3 => "cubic-char3",
            Family::PowerP => "power-p",
            Family::QuarticChar2 => "quartic-char2",
            Family::BinomialSeries => "binomial-series",
        }
    }

    /// Number of indices the family takes.
    pub fn arity(self) -> usize {
        match self {
            Family::LinearProduct => 3,
            Family::BinomialSeries => 1,
            _ => 2,
        }
    }

    pub fn default_indices(self) -> Vec<usize> {
        (1..=self.arity()).collect()
    }

    pub fn certification(self) -> Certification {
        match self {
            Family::SkewCubic | Family::CubicChar3 | Family::PowerP => Certification::Kernel,
            _ => Certification::Singular,
        }
    }

    /// Error text naming the regime the family needs, if `(p, n, t)` is outside it.
    pub fn regime_error(self, p: u64, n: usize, t: u8) -> Option<String> {
        let need = match self {
            Family::TriangleSum => (t == 0 && p == 2).then_some(()).ok_or("t = 0 and p = 2"),
            Family::LinearProduct => (t == 0 && p % 2 == 1).then_some(()).ok_or("t = 0 and odd p"),
            Family::SkewCubic | Family::PowerP => (t == 0).then_some(()).ok_or("t = 0"),
            Family::CubicChar3 => (t == 0 && p == 3).then_some(()).ok_or("t = 0 and p = 3"),
            Family::QuarticChar2 => (t == 1 && p == 2).then_some(()).ok_or("t = 1 and p = 2"),
            Family::BinomialSeries => (t == 1 && n as u64 % p == 0).then_some(()).ok_or("t = 1 and p dividing n"),
        };
        need.err().map(|r| {
            format!(
                "family {} requires {r}; got p = {p}, n = {n}, t = {t}",
                self.name()
            )
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
                Error::InvalidParameter(format!("unknown family {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

struct Build<'a, R: Ring> {
    ctx: &'a DunklContext<R>,
}

impl<R: Ring> Build<'_, R> {
    fn ring(&self) -> &R {
        self.ctx.ring()
    }

    fn x(&self, a: usize) -> Poly<R> {
        self.ctx.x(a - 1)
    }

    fn add(&self, a: &Poly<R>, b: &Poly<R>) -> Poly<R> {
        a.add(self.ring(), b).expect("same slots")
    }

    fn sub(&self, a: &Poly<R>, b: &Poly<R>) -> Poly<R> {
        a.sub(self.ring(), b).expect("same slots")
    }

    fn mul(&self, a: &Poly<R>, b: &Poly<R>) -> Poly<R> {
        a.mul(self.ring(), b).expect("same slots")
    }

    fn pow(&self, a: &Poly<R>, e: u32) -> Poly<R> {
        a.pow(self.ring(), e)
    }

    fn zero(&self) -> Poly<R> {
        Poly::zero(self.ctx.nvars())
    }

    fn constant(&self, c: R::Elem) -> Poly<R> {
        Poly::constant(self.ring(), self.ctx.nvars(), c)
    }

    /// `binom(c, m) = c (c - 1) ... (c - m + 1) / m!`, with `m < p`.
    fn binom_c(&self, m: u64) -> R::Elem {
        let ring = self.ring();
        let p = ring.characteristic();
        let mut acc = ring.one();
        let mut fact = 1u64;
        for l in 0..m {
            acc = ring.mul(&acc, &ring.sub(&ring.param(), &ring.from_int(l as i64)));
            fact = fact * (l + 1) % p;
        }
        let inv = inv_mod(fact, p);
        ring.mul(&acc, &ring.from_int(inv as i64))
    }

    /// Truncated product of series given as coefficient lists up to `z^top`.
    fn series_mul(&self, a: &[Poly<R>], b: &[Poly<R>], top: usize) -> Vec<Poly<R>> {
        let mut out = vec![self.zero(); top + 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if i + j <= top && !y.is_zero() {
                    out[i + j] = self.add(&out[i + j], &self.mul(x, y));
                }
            }
        }
        out
    }

    fn binomial_series(&self, i: usize) -> Poly<R> {
        let ring = self.ring();
        let n = self.ctx.n();
        let p = ring.characteristic() as usize;
        // g(z) - 1 truncated at z^p
        let mut g = vec![self.zero(); p + 1];
        g[0] = self.constant(ring.one());
        for j in 1..=n {
            let factor = vec![self.constant(ring.one()), self.x(j).neg(ring)];
            g = self.series_mul(&g, &factor, p);
        }
        let mut gm1 = g;
        gm1[0] = self.zero();
        let mut f = vec![self.zero(); p + 1];
        let mut power = vec![self.zero(); p + 1];
        power[0] = self.constant(ring.one());
        for m in 0..p {
            let b = self.binom_c(m as u64);
            for (acc, term) in f.iter_mut().zip(&power) {
                *acc = self.add(acc, &term.scale(ring, &b));
            }
            power = self.series_mul(&power, &gm1, p);
        }
        // [z^p] F(z) sum_k x_i^k z^k
        let xi = self.x(i);
        let mut out = self.zero();
        for (k, fk) in f.iter().enumerate() {
            out = self.add(&out, &self.mul(fk, &self.pow(&xi, (p - k) as u32)));
        }
        out
    }
}

/// The family member with the given 1-based indices.
pub fn singular_catalog<R: Ring>(family: Family, indices: &[usize], ctx: &DunklContext<R>) -> Result<Poly<R>> {
    let (p, n, t) = (ctx.p(), ctx.n(), ctx.t());
    if let Some(msg) = family.regime_error(p, n, t) {
        return Err(Error::Unsupported(msg));
    }
    if indices.len() != family.arity() {
        return Err(Error::InvalidParameter(format!(
            "family {family} takes {} indices, got {}",
            family.arity(),
            indices.len()
        )));
    }
    let top = match family {
        Family::QuarticChar2 | Family::BinomialSeries => n - 1,
        _ => n,
    };
    for (k, &a) in indices.iter().enumerate() {
        if a == 0 || a > top {
            return Err(Error::InvalidParameter(format!("index {a} outside 1..={top}")));
        }
        if indices[..k].contains(&a) {
            return Err(Error::InvalidParameter(format!("index {a} repeated")));
        }
    }
    let b = Build { ctx };
    let ring = ctx.ring();
    let f = match family {
        Family::TriangleSum => {
            let (xi, xj) = (b.x(indices[0]), b.x(indices[1]));
            b.add(&b.add(&b.pow(&xi, 2), &b.mul(&xi, &xj)), &b.pow(&xj, 2))
        }
        Family::LinearProduct => {
            let (xi, xj, xk) = (b.x(indices[0]), b.x(indices[1]), b.x(indices[2]));
            b.mul(&b.sub(&xj, &xk), &b.sub(&b.sub(&xi, &xj), &xk))
        }
        Family::SkewCubic => {
            let (xi, xj) = (b.x(indices[0]), b.x(indices[1]));
            b.sub(&b.mul(&b.pow(&xi, 2), &xj), &b.mul(&xi, &b.pow(&xj, 2)))
        }
        Family::CubicChar3 => {
            let (xi, xj) = (b.x(indices[0]), b.x(indices[1]));
            b.add(&b.sub(&b.pow(&xi, 3), &b.mul(&b.pow(&xi, 2), &xj)), &b.pow(&xj, 3))
        }
        Family::PowerP => {
            let (xi, xj) = (b.x(indices[0]), b.x(indices[1]));
            let e = p as u32;
            b.add(&b.sub(&b.pow(&xi, e), &b.mul(&xi, &b.pow(&xj, e - 1))), &b.pow(&xj, e))
        }
        Family::QuarticChar2 => {
            let (i, j) = (indices[0], indices[1]);
            let (xi, xj) = (b.x(i), b.x(j));
            let mixed = b.mul(&b.pow(&xi, 2), &b.pow(&xj, 2));
            let base = b.add(&b.add(&b.pow(&xi, 4), &mixed), &b.pow(&xj, 4));
            let mut cubes = b.zero();
            for k in (1..=n).filter(|&k| k != i && k != j) {
                cubes = b.add(&cubes, &b.pow(&b.x(k), 3));
            }
            let tail = b.add(&mixed, &b.mul(&b.add(&xi, &xj), &cubes));
            b.add(&base, &tail.scale(ring, &ring.param()))
        }
        Family::BinomialSeries => b.binomial_series(indices[0]),
    };
    Ok(f)
}

/// Outcome of checking one family member in its regime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogCheck {
    pub family: Family,
    pub indices: Vec<usize>,
    pub p: u64,
    pub n: usize,
    pub t: u8,
    pub polynomial: String,
    pub certification: Certification,
    /// Killed by every Dunkl operator.
    pub singular: bool,
    pub in_kernel: bool,
    /// The property named by `certification` holds.
    pub certified: bool,
}

pub fn certify<R: Ring>(family: Family, indices: &[usize], ctx: &DunklContext<R>) -> Result<CatalogCheck> {
    let f = singular_catalog(family, indices, ctx)?;
    let singular = is_singular(ctx, &f)?;
    let in_kernel = singular || is_in_kernel(ctx, &f)?.in_kernel;
    let certification = family.certification();
    let certified = match certification {
        Certification::Singular => singular,
        Certification::Kernel => in_kernel,
    };
    Ok(CatalogCheck {
        family,
        indices: indices.to_vec(),
        p: ctx.p(),
        n: ctx.n(),
        t: ctx.t(),
        polynomial: f.format(ctx.ring()),
        certification,
        singular,
        in_kernel,
        certified,
    })
}

//! Sparse multivariate polynomials and their text format.
//!
//! A [`Poly`] has a fixed number of variable slots. Reduced polynomials (the
//! representation used throughout) have `n - 1` slots, `x_n` having been
//! eliminated by `x_n = -(x_1 + ... + x_{n-1})`. Slots are 0-based in the API
//! and printed 1-based (`x1`, `x2`, ...).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::{PolyRing, RatFuncField, Ring};
use crate::upoly::{reduce_i64, UPoly};

pub type Exponents = SmallVec<[u8; 16]>;

/// An exponent vector. Ordered graded-lexicographically with `x1 > x2 > ...`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Exponents);

impl Monomial {
    pub fn new(exps: &[u8]) -> Self {
        Self(Exponents::from_slice(exps))
    }

    pub fn one(nvars: usize) -> Self {
        Self(SmallVec::from_elem(0, nvars))
    }

    /// `x_i` (0-based slot).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(exps: Exponents) -> Self {
        Self(exps)
    }

    pub fn exps(&self) -> &[u8] {
        &self.0
    }

    pub fn exps_mut(&mut self) -> &mut Exponents {
        &mut self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars(), other.nvars());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Divides by `other` if it divides.
    pub fn div(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Exponents>>()
            .map(Self)
    }

    pub fn format(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("x{}", i + 1)
                } else {
                    format!("x{}^{}", i + 1, e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of degree `d` in `nvars` variables, graded-lex descending.
pub fn monomials_of_degree(nvars: usize, d: usize) -> Vec<Monomial> {
    fn rec(slot: usize, left: usize, cur: &mut Exponents, out: &mut Vec<Monomial>) {
        let nvars = cur.len();
        if slot + 1 == nvars {
            cur[slot] = left as u8;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[slot] = e as u8;
            rec(slot + 1, left - e, cur, out);
        }
        cur[slot] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(0, d, &mut SmallVec::from_elem(0, nvars), &mut out);
    out
}

/// The monomials of one degree with a dense index, graded-lex descending.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    nvars: usize,
    degree: usize,
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: usize) -> Self {
        let monos = monomials_of_degree(nvars, degree);
        let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Self {
            nvars,
            degree,
            monos,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monos
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn index_of_exps(&self, e: &[u8]) -> Option<usize> {
        self.index.get(&Monomial::new(e)).copied()
    }

    /// Coordinates of a homogeneous polynomial of this degree.
    pub fn coords<R: Ring>(&self, ring: &R, f: &Poly<R>) -> Result<Vec<R::Elem>> {
        let mut v = vec![ring.zero(); self.len()];
        for (m, c) in f.terms() {
            let i = self.index_of(m).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "monomial {} is not of degree {} in {} variables",
                    m.format(),
                    self.degree,
                    self.nvars
                ))
            })?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn to_poly<R: Ring>(&self, ring: &R, v: &[R::Elem]) -> Poly<R> {
        Poly::from_terms(
            ring,
            self.nvars,
            self.monos.iter().cloned().zip(v.iter().cloned()),
        )
    }
}

/// A sparse polynomial with coefficients in the ring `R`.
#[derive(Clone)]
pub struct Poly<R: Ring> {
    nvars: usize,
    terms: BTreeMap<Monomial, R::Elem>,
}

impl<R: Ring> PartialEq for Poly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<R: Ring> Eq for Poly<R> {}

/// Polynomials in the reduced variables `x_1..x_{n-1}`.
pub type ReducedPoly<R> = Poly<R>;

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().rev().map(|(m, c)| (m, c)))
            .finish()
    }
}

impl<R: Ring> Poly<R> {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &R, nvars: usize, c: R::Elem) -> Self {
        Self::from_term(ring, Monomial::one(nvars), c)
    }

    pub fn one(ring: &R, nvars: usize) -> Self {
        Self::constant(ring, nvars, ring.one())
    }

    pub fn from_term(ring: &R, m: Monomial, c: R::Elem) -> Self {
        let mut out = Self::zero(m.nvars());
        out.add_term(ring, m, c);
        out
    }

    /// The variable in 0-based slot `i`.
    pub fn var(ring: &R, nvars: usize, i: usize) -> Self {
        Self::from_term(ring, Monomial::var(nvars, i), ring.one())
    }

    pub fn from_terms(ring: &R, nvars: usize, terms: impl IntoIterator<Item = (Monomial, R::Elem)>) -> Self {
        let mut out = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "slot count");
            out.add_term(ring, m, c);
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&R::Elem> {
        self.terms.get(m)
    }

    /// Terms in canonical (graded-lex descending) order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &R::Elem)> + '_ {
        self.terms.iter().rev()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, R::Elem)> {
        self.terms.into_iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &R::Elem)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// The common degree of all terms, or `None` for zero or mixed degree.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let d = self.degree()?;
        self.terms.keys().all(|m| m.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Slots carrying a nonzero exponent in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    pub fn add_term(&mut self, ring: &R, m: Monomial, c: R::Elem) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if ring.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = ring.add(o.get(), &c);
                if ring.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_slots(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::SlotMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, ring: &R, other: &Self) -> Result<Self> {
        self.check_slots(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(ring, m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, ring: &R, other: &Self) -> Result<Self> {
        self.check_slots(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(ring, m.clone(), ring.neg(c));
        }
        Ok(out)
    }

    pub fn neg(&self, ring: &R) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), ring.neg(c))).collect(),
        }
    }

    pub fn scale(&self, ring: &R, s: &R::Elem) -> Self {
        let mut out = Self::zero(self.nvars);
        if ring.is_zero(s) {
            return out;
        }
        for (m, c) in &self.terms {
            out.add_term(ring, m.clone(), ring.mul(c, s));
        }
        out
    }

    pub fn mul(&self, ring: &R, other: &Self) -> Result<Self> {
        self.check_slots(other)?;
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(ring, m1.mul(m2), ring.mul(c1, c2));
            }
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, ring: &R, e: u32) -> Self {
        let mut acc = Self::one(ring, self.nvars);
        for _ in 0..e {
            acc = acc.mul(ring, self).expect("same slots");
        }
        acc
    }

    /// Re-expresses the coefficients in another ring.
    pub fn map_coeffs<S: Ring>(&self, target: &S, f: impl Fn(&R::Elem) -> S::Elem) -> Poly<S> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(target, m.clone(), f(c));
        }
        out
    }

    /// Renames slot `i` to `perm[i]` in a polynomial with `nvars` slots.
    pub fn permute_slots(&self, perm: &[usize], nvars: usize) -> Self {
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut e: Exponents = SmallVec::from_elem(0, nvars);
            for (i, &x) in m.0.iter().enumerate() {
                e[perm[i]] += x;
            }
            out.terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Changes the slot count, padding with zero exponents or dropping slots
    /// that must be unused.
    pub fn with_nvars(&self, nvars: usize) -> Result<Self> {
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            if m.0.iter().skip(nvars).any(|&e| e > 0) {
                return Err(Error::SlotMismatch {
                    expected: nvars,
                    found: self.nvars,
                });
            }
            let mut e: Exponents = m.0.iter().copied().take(nvars).collect();
            e.resize(nvars, 0);
            out.terms.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    pub fn format(&self, ring: &R) -> String {
        format_poly(self, ring)
    }
}

/// Splits a generic-`c` polynomial into its `c`-components over `F_p`.
/// Fails when a coefficient has a nontrivial denominator.
pub fn c_components(
    f: &Poly<RatFuncField>,
    field: &RatFuncField,
) -> Result<Vec<Poly<crate::scalar::PrimeField>>> {
    let prime = crate::scalar::PrimeField::new(field.p())?;
    let mut top = None;
    for c in f.terms.values() {
        if !c.is_polynomial() {
            return Err(Error::InvalidParameter(
                "coefficient has a denominator in c; clear denominators first".into(),
            ));
        }
        top = top.max(c.num.degree());
    }
    let Some(top) = top else {
        return Ok(Vec::new());
    };
    Ok((0..=top)
        .map(|k| {
            let mut out = Poly::zero(f.nvars);
            for (m, c) in &f.terms {
                out.add_term(&prime, m.clone(), c.num.coeff(k));
            }
            out
        })
        .collect())
}

/// Splits an `F_p[c]` polynomial into components, given the ring.
pub fn c_components_poly(f: &Poly<PolyRing>, ring: &PolyRing) -> Vec<Poly<crate::scalar::PrimeField>> {
    let prime = crate::scalar::PrimeField::new(ring.p()).expect("prime");
    let top = f.terms.values().filter_map(|c| c.degree()).max();
    let Some(top) = top else {
        return Vec::new();
    };
    (0..=top)
        .map(|k| {
            let mut out = Poly::zero(f.nvars);
            for (m, c) in &f.terms {
                out.add_term(&prime, m.clone(), c.coeff(k));
            }
            out
        })
        .collect()
}

fn format_coeff<R: Ring>(ring: &R, c: &R::Elem) -> String {
    let s = ring.format_elem(c);
    if s.contains('/') || s.bytes().all(|b| b.is_ascii_digit()) {
        s
    } else {
        format!("({s})")
    }
}

/// Canonical text: terms in graded-lex descending order, joined by `+`.
pub fn format_poly<R: Ring>(f: &Poly<R>, ring: &R) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = f
        .terms()
        .map(|(m, c)| {
            let is_const = m.degree() == 0;
            if ring.is_one(c) {
                m.format()
            } else if is_const {
                format_coeff(ring, c)
            } else {
                format!("{}*{}", format_coeff(ring, c), m.format())
            }
        })
        .collect();
    parts.join("+")
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    p: u64,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// `+`, `-`, or the Unicode minus sign.
    fn sign(&mut self) -> Option<bool> {
        self.skip_ws();
        let rest = &self.s[self.pos..];
        if rest.starts_with(b"+") {
            self.pos += 1;
            Some(false)
        } else if rest.starts_with(b"-") {
            self.pos += 1;
            Some(true)
        } else if rest.starts_with("\u{2212}".as_bytes()) {
            self.pos += 3;
            Some(true)
        } else {
            None
        }
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii")
            .parse()
            .or_else(|_| self.err("integer too large"))
    }

    fn at_digit(&mut self) -> bool {
        matches!(self.peek(), Some(b) if b.is_ascii_digit())
    }

    /// `c` or `c^k`.
    fn c_power(&mut self) -> Result<UPoly> {
        if !self.eat(b'c') {
            return self.err("expected 'c'");
        }
        let e = if self.eat(b'^') { self.integer()? } else { 1 };
        let mut coeffs = vec![0u64; e as usize + 1];
        coeffs[e as usize] = 1;
        Ok(UPoly::from_coeffs(&coeffs, self.p))
    }

    /// A polynomial in `c` (inside parentheses).
    fn c_poly(&mut self) -> Result<UPoly> {
        let mut acc = UPoly::zero();
        let mut first = true;
        loop {
            let neg = match self.sign() {
                Some(n) => n,
                None if first => false,
                None => break,
            };
            first = false;
            let term = if self.at_digit() {
                let k = UPoly::constant(self.integer()? % self.p);
                if self.eat(b'*') {
                    k.mul(&self.c_power()?, self.p)
                } else {
                    k
                }
            } else {
                self.c_power()?
            };
            acc = if neg {
                acc.sub(&term, self.p)
            } else {
                acc.add(&term, self.p)
            };
        }
        Ok(acc)
    }

    fn paren_or_int(&mut self) -> Result<UPoly> {
        if self.eat(b'(') {
            let v = self.c_poly()?;
            if !self.eat(b')') {
                return self.err("expected ')'");
            }
            Ok(v)
        } else if self.at_digit() {
            Ok(UPoly::constant(self.integer()? % self.p))
        } else {
            self.err("expected a coefficient")
        }
    }

    fn monomial(&mut self, nvars: usize) -> Result<Monomial> {
        let mut m = Monomial::one(nvars);
        loop {
            if !self.eat(b'x') {
                return self.err("expected a variable x<i>");
            }
            let at = self.pos;
            let i = self.integer()? as usize;
            if i == 0 || i > nvars {
                self.pos = at;
                return self.err(format!("variable index {i} outside 1..={nvars}"));
            }
            let e = if self.eat(b'^') { self.integer()? } else { 1 };
            let cur = m.0[i - 1] as u64 + e;
            if cur > u8::MAX as u64 {
                return self.err("exponent too large");
            }
            m.0[i - 1] = cur as u8;
            // `*` followed by another variable continues the monomial
            self.skip_ws();
            if self.s[self.pos..].starts_with(b"*") {
                let save = self.pos;
                self.pos += 1;
                if self.peek() == Some(b'x') {
                    continue;
                }
                self.pos = save;
            }
            return Ok(m);
        }
    }

    /// Returns `(num, den, monomial)`.
    fn term(&mut self, nvars: usize) -> Result<(UPoly, UPoly, Monomial)> {
        let one = UPoly::constant(1);
        match self.peek() {
            Some(b'x') => Ok((one.clone(), one, self.monomial(nvars)?)),
            Some(b'(') | Some(b'0'..=b'9') | Some(b'c') => {
                let num = if self.peek() == Some(b'c') {
                    self.c_power()?
                } else {
                    self.paren_or_int()?
                };
                let den = if self.eat(b'/') {
                    self.paren_or_int()?
                } else {
                    one
                };
                let m = if self.eat(b'*') {
                    if self.peek() == Some(b'x') {
                        self.monomial(nvars)?
                    } else {
                        return self.err("expected a monomial after '*'");
                    }
                } else {
                    Monomial::one(nvars)
                };
                Ok((num, den, m))
            }
            _ => self.err("expected a term"),
        }
    }
}

/// Converts `num / den` (polynomials in `c`) into a ring element.
pub fn ring_fraction<R: Ring>(ring: &R, num: &UPoly, den: &UPoly) -> Result<R::Elem> {
    let n: Vec<u64> = num.coeffs().collect();
    let d: Vec<u64> = den.coeffs().collect();
    let nv = ring.from_c_poly(&n);
    let dv = ring.from_c_poly(&d);
    if ring.is_zero(&dv) {
        return Err(Error::DivisionByZero);
    }
    ring.div_exact(&nv, &dv).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "coefficient ({})/({}) is not in the coefficient ring",
            num.format(),
            den.format()
        ))
    })
}

/// Parses the polynomial text grammar into a polynomial with `nvars` slots.
pub fn parse_poly<R: Ring>(text: &str, nvars: usize, ring: &R) -> Result<Poly<R>> {
    let p = ring.characteristic();
    let mut ps = Parser {
        s: text.as_bytes(),
        pos: 0,
        p,
    };
    let mut out = Poly::zero(nvars);
    let mut first = true;
    loop {
        let neg = match ps.sign() {
            Some(n) => n,
            None if first => false,
            None => break,
        };
        first = false;
        let (num, den, m) = ps.term(nvars)?;
        let mut c = ring_fraction(ring, &num, &den)?;
        if neg {
            c = ring.neg(&c);
        }
        out.add_term(ring, m, c);
    }
    ps.skip_ws();
    if ps.pos != ps.s.len() {
        return ps.err("unexpected trailing input");
    }
    Ok(out)
}

/// Builds a polynomial from `(integer coefficient, exponents)` pairs.
pub fn poly_from_int_terms<R: Ring>(ring: &R, nvars: usize, terms: &[(i64, &[u8])]) -> Poly<R> {
    let p = ring.characteristic();
    Poly::from_terms(
        ring,
        nvars,
        terms.iter().map(|(c, e)| {
            let mut ex: Exponents = SmallVec::from_slice(e);
            ex.resize(nvars, 0);
            (Monomial(ex), ring.from_int(reduce_i64(*c, p) as i64))
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::PrimeField;

    #[test]
    fn grlex_order() {
        let a = Monomial::new(&[2, 0]);
        let b = Monomial::new(&[1, 1]);
        let c = Monomial::new(&[0, 3]);
        assert!(a > b);
        assert!(c > a);
        let ms = monomials_of_degree(3, 2);
        assert_eq!(ms.len(), 6);
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(ms[0], Monomial::new(&[2, 0, 0]));
    }

    #[test]
    fn sum_of_cubes_in_char_two() {
        let f2 = PrimeField::new(2).unwrap();
        let a = parse_poly("x1+x2", 2, &f2).unwrap();
        let b = parse_poly("x1^2+x1*x2+x2^2", 2, &f2).unwrap();
        let prod = a.mul(&f2, &b).unwrap();
        assert_eq!(prod.format(&f2), "x1^3+x2^3");
    }

    #[test]
    fn difference_of_squares_in_char_three() {
        let f3 = PrimeField::new(3).unwrap();
        let a = parse_poly("x1-x2", 2, &f3).unwrap();
        let b = parse_poly("x1+x2", 2, &f3).unwrap();
        let prod = a.mul(&f3, &b).unwrap();
        assert_eq!(prod, parse_poly("x1^2+2*x2^2", 2, &f3).unwrap());
    }

    #[test]
    fn slot_mismatch_is_an_error() {
        let f3 = PrimeField::new(3).unwrap();
        let a = Poly::var(&f3, 2, 0);
        let b = Poly::var(&f3, 3, 0);
        assert!(matches!(a.add(&f3, &b), Err(Error::SlotMismatch { .. })));
    }

    #[test]
    fn parses_c_coefficients() {
        let r = PolyRing::new(2).unwrap();
        let f = parse_poly("(c+1)*x1", 3, &r).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.format(&r), "(c+1)*x1");
        let g = parse_poly("x1^4 + c*x1^2*x2^2 − x2^4", 2, &r).unwrap();
        assert_eq!(g.format(&r), "x1^4+(c)*x1^2*x2^2+x2^4");
    }

    #[test]
    fn rejects_out_of_range_index() {
        let f2 = PrimeField::new(2).unwrap();
        assert!(matches!(parse_poly("x5", 3, &f2), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("x0", 3, &f2), Err(Error::Parse { .. })));
        assert!(parse_poly("(c+", 3, &f2).is_err());
        assert!(parse_poly("x1 +", 3, &f2).is_err());
    }

    #[test]
    fn fraction_coefficients_round_trip() {
        let q = RatFuncField::new(3).unwrap();
        let f = parse_poly("(c+1)/(c^2+1)*x1*x2 + 2", 2, &q).unwrap();
        let s = f.format(&q);
        assert_eq!(s, "(c+1)/(c^2+1)*x1*x2+2");
        assert_eq!(parse_poly(&s, 2, &q).unwrap(), f);
        // c^2 - 1 = (c - 1)(c + 1) cancels
        let f = parse_poly("(c+1)/(c^2+2)*x1", 2, &q).unwrap();
        let s = f.format(&q);
        assert_eq!(s, "1/(c+2)*x1");
        assert_eq!(parse_poly(&s, 2, &q).unwrap(), f);
    }

    #[test]
    fn c_split() {
        let q = RatFuncField::new(2).unwrap();
        let f = parse_poly("x1^2 + c*x2^2", 2, &q).unwrap();
        let comps = c_components(&f, &q).unwrap();
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].format(&f2), "x1^2");
        assert_eq!(comps[1].format(&f2), "x2^2");
        let one = Poly::one(&q, 2);
        assert_eq!(c_components(&one, &q).unwrap().len(), 1);
        let bad = parse_poly("1/(c)*x1", 2, &q).unwrap();
        assert!(c_components(&bad, &q).is_err());
    }
}

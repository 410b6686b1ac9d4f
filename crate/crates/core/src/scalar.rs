//! Coefficient domains.
//!
//! Every algorithm in the crate is generic over [`Ring`]. A ring object carries
//! the modulus and the value of the parameter `c`, so elements themselves stay
//! small plain values. Four domains are provided:
//!
//! * [`PrimeField`]: `F_p` with `c` specialised to a residue.
//! * [`PolyRing`]: `F_p[c]` with `c` an indeterminate. This is the working domain
//!   for generic `c`; elimination over it is fraction free.
//! * [`RatFuncField`]: `F_p(c)` with reduced fractions, used where genuine
//!   division is needed (user-facing scalars, normalised kernel bases).
//! * [`ExtField`]: `F_{p^k}` with `c` a random element, the non-certifying
//!   fast evaluation mode.
//!
//! [`CoeffDomain`] and [`Scalar`] are a dynamically checked facade over the
//! first and third of these.

use std::fmt;
use std::hash::Hash;

use rand::{Rng as _, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::upoly::{self, add_mod, inv_mod, mul_mod, reduce_i64, sub_mod, UPoly};

/// Largest admissible characteristic (exclusive).
pub const MAX_PRIME: u64 = 1 << 31;

pub trait Ring: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, v: i64) -> Self::Elem;
    /// The value taken by the deformation parameter `c` in this domain.
    fn param(&self) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;

    /// Normalised gcd. For fields this is `1` unless both inputs vanish.
    fn gcd(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `a / b` when `b` divides `a` exactly.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    /// Rescales a vector to the canonical representative of its line: for
    /// fields the first nonzero entry becomes `1`, for `F_p[c]` the content is
    /// removed and the first nonzero entry made monic.
    fn normalize(&self, v: &mut [Self::Elem]);

    fn format_elem(&self, a: &Self::Elem) -> String;

    /// A random element, for property checks.
    fn random_elem(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// Embeds a polynomial in `c` (coefficients low degree first) by evaluating
    /// it at [`Ring::param`].
    fn from_c_poly(&self, coeffs: &[u64]) -> Self::Elem {
        let c = self.param();
        let p = self.characteristic();
        coeffs.iter().rev().fold(self.zero(), |acc, &k| {
            self.add(&self.mul(&acc, &c), &self.from_int((k % p) as i64))
        })
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Returns `(a / g, b / g)` with `g = gcd(a, b)`, used for fraction-free
    /// row combinations.
    fn reduce_pair(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem) {
        let g = self.gcd(a, b);
        if self.is_one(&g) {
            return (a.clone(), b.clone());
        }
        (
            self.div_exact(a, &g).expect("gcd divides"),
            self.div_exact(b, &g).expect("gcd divides"),
        )
    }
}

fn random_upoly(p: u64, max_degree: usize, rng: &mut dyn RngCore) -> UPoly {
    let coeffs: Vec<u64> = (0..=max_degree).map(|_| rng.gen_range(0..p)).collect();
    UPoly::from_coeffs(&coeffs, p)
}

fn check_prime(p: u64) -> Result<()> {
    if p >= MAX_PRIME || !upoly::is_prime(p) {
        return Err(Error::InvalidParameter(format!(
            "p = {p} must be a prime below 2^31"
        )));
    }
    Ok(())
}

/// `F_p` with `c` specialised to a residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    c: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        Self::with_param(p, 1)
    }

    pub fn with_param(p: u64, c: i64) -> Result<Self> {
        check_prime(p)?;
        Ok(Self {
            p,
            c: reduce_i64(c, p),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        (a % self.p != 0).then(|| inv_mod(a, self.p))
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_int(&self, v: i64) -> u64 {
        reduce_i64(v, self.p)
    }
    fn param(&self) -> u64 {
        self.c
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        add_mod(*a, *b, self.p)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        sub_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        sub_mod(0, *a, self.p)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    fn gcd(&self, a: &u64, b: &u64) -> u64 {
        u64::from(*a != 0 || *b != 0)
    }
    fn div_exact(&self, a: &u64, b: &u64) -> Option<u64> {
        self.inv(*b).map(|bi| mul_mod(*a, bi, self.p))
    }
    fn normalize(&self, v: &mut [u64]) {
        if let Some(&lead) = v.iter().find(|x| **x != 0) {
            if lead != 1 {
                let li = inv_mod(lead, self.p);
                for x in v.iter_mut() {
                    *x = mul_mod(*x, li, self.p);
                }
            }
        }
    }
    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }
    fn random_elem(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn reduce_pair(&self, a: &u64, b: &u64) -> (u64, u64) {
        // Fields: scale so the first factor is one.
        match self.inv(*a) {
            Some(ai) => (1, mul_mod(*b, ai, self.p)),
            None => (*a, *b),
        }
    }
}

/// The polynomial ring `F_p[c]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    p: u64,
}

impl PolyRing {
    pub fn new(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The coefficient field obtained by setting `c` to a residue.
    pub fn specialize(&self, a: &UPoly, c: u64) -> u64 {
        a.eval(c, self.p)
    }
}

impl Ring for PolyRing {
    type Elem = UPoly;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> UPoly {
        UPoly::zero()
    }
    fn one(&self) -> UPoly {
        UPoly::constant(1)
    }
    fn from_int(&self, v: i64) -> UPoly {
        UPoly::constant(reduce_i64(v, self.p))
    }
    fn param(&self) -> UPoly {
        UPoly::var()
    }
    fn add(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.add(b, self.p)
    }
    fn sub(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.sub(b, self.p)
    }
    fn neg(&self, a: &UPoly) -> UPoly {
        a.neg(self.p)
    }
    fn mul(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.mul(b, self.p)
    }
    fn is_zero(&self, a: &UPoly) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &UPoly) -> bool {
        a.is_one()
    }
    fn gcd(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.gcd(b, self.p)
    }
    fn div_exact(&self, a: &UPoly, b: &UPoly) -> Option<UPoly> {
        if b.is_zero() {
            return None;
        }
        a.div_exact(b, self.p)
    }
    fn normalize(&self, v: &mut [UPoly]) {
        let mut content = UPoly::zero();
        for x in v.iter() {
            if x.is_zero() {
                continue;
            }
            content = if content.is_zero() {
                x.monic(self.p).1
            } else {
                content.gcd(x, self.p)
            };
            if content.is_one() {
                break;
            }
        }
        if content.is_zero() {
            return;
        }
        let lead = v.iter().find(|x| !x.is_zero()).expect("nonzero vector");
        let unit = inv_mod(lead.leading(), self.p);
        let divide = !content.is_one();
        for x in v.iter_mut() {
            if x.is_zero() {
                continue;
            }
            if divide {
                *x = x.div_exact(&content, self.p).expect("content divides");
            }
            if unit != 1 {
                *x = x.scale(unit, self.p);
            }
        }
    }
    fn format_elem(&self, a: &UPoly) -> String {
        a.format()
    }
    fn random_elem(&self, rng: &mut dyn RngCore) -> UPoly {
        random_upoly(self.p, 2, rng)
    }
    fn from_c_poly(&self, coeffs: &[u64]) -> UPoly {
        UPoly::from_coeffs(coeffs, self.p)
    }
}

/// A reduced fraction in `F_p(c)`: `gcd(num, den) = 1`, `den` monic, zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    pub num: UPoly,
    pub den: UPoly,
}

impl RatFunc {
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFuncField {
    p: u64,
}

impl RatFuncField {
    pub fn new(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Builds the canonical form of `num / den`.
    pub fn fraction(&self, num: UPoly, den: UPoly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num,
                den: UPoly::constant(1),
            });
        }
        let g = num.gcd(&den, self.p);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g, self.p).expect("gcd divides"),
                den.div_exact(&g, self.p).expect("gcd divides"),
            )
        };
        let (lc, den) = den.monic(self.p);
        let num = if lc == 1 {
            num
        } else {
            num.scale(inv_mod(lc, self.p), self.p)
        };
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(&self, num: UPoly) -> RatFunc {
        RatFunc {
            num,
            den: UPoly::constant(1),
        }
    }

    pub fn div(&self, a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
        if b.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.fraction(a.num.mul(&b.den, self.p), a.den.mul(&b.num, self.p))
    }

    pub fn inv(&self, a: &RatFunc) -> Result<RatFunc> {
        self.div(&self.one(), a)
    }
}

impl Ring for RatFuncField {
    type Elem = RatFunc;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> RatFunc {
        self.from_poly(UPoly::zero())
    }
    fn one(&self) -> RatFunc {
        self.from_poly(UPoly::constant(1))
    }
    fn from_int(&self, v: i64) -> RatFunc {
        self.from_poly(UPoly::constant(reduce_i64(v, self.p)))
    }
    fn param(&self) -> RatFunc {
        self.from_poly(UPoly::var())
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let p = self.p;
        if a.den == b.den {
            return self
                .fraction(a.num.add(&b.num, p), a.den.clone())
                .expect("nonzero denominator");
        }
        self.fraction(
            a.num.mul(&b.den, p).add(&b.num.mul(&a.den, p), p),
            a.den.mul(&b.den, p),
        )
        .expect("nonzero denominator")
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.add(a, &self.neg(b))
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        RatFunc {
            num: a.num.neg(self.p),
            den: a.den.clone(),
        }
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let p = self.p;
        self.fraction(a.num.mul(&b.num, p), a.den.mul(&b.den, p))
            .expect("nonzero denominator")
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.num.is_zero()
    }
    fn is_one(&self, a: &RatFunc) -> bool {
        a.num.is_one() && a.den.is_one()
    }
    fn gcd(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        if self.is_zero(a) && self.is_zero(b) {
            self.zero()
        } else {
            self.one()
        }
    }
    fn div_exact(&self, a: &RatFunc, b: &RatFunc) -> Option<RatFunc> {
        self.div(a, b).ok()
    }
    fn normalize(&self, v: &mut [RatFunc]) {
        if let Some(lead) = v.iter().find(|x| !x.num.is_zero()).cloned() {
            if !self.is_one(&lead) {
                let li = self.inv(&lead).expect("nonzero");
                for x in v.iter_mut() {
                    *x = self.mul(x, &li);
                }
            }
        }
    }
    fn random_elem(&self, rng: &mut dyn RngCore) -> RatFunc {
        let num = random_upoly(self.p, 2, rng);
        let den = loop {
            let d = random_upoly(self.p, 2, rng);
            if !d.is_zero() {
                break d;
            }
        };
        self.fraction(num, den).expect("nonzero denominator")
    }
    fn format_elem(&self, a: &RatFunc) -> String {
        if a.den.is_one() {
            a.num.format()
        } else if a.num.is_constant() {
            format!("{}/({})", a.num.format(), a.den.format())
        } else {
            format!("({})/({})", a.num.format(), a.den.format())
        }
    }
    fn reduce_pair(&self, a: &RatFunc, b: &RatFunc) -> (RatFunc, RatFunc) {
        match self.div(b, a) {
            Ok(q) => (self.one(), q),
            Err(_) => (a.clone(), b.clone()),
        }
    }
    fn from_c_poly(&self, coeffs: &[u64]) -> RatFunc {
        self.from_poly(UPoly::from_coeffs(coeffs, self.p))
    }
}

/// `F_{p^k}` realised as `F_p[u] / (m(u))`, with `c` a fixed random element.
///
/// Specialising `c` to a random element of a large field is exact arithmetic in
/// that field, but the resulting dimensions only equal the generic ones with
/// high probability, so nothing computed here is a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    p: u64,
    modulus: UPoly,
    c: UPoly,
}

impl ExtField {
    /// Picks the smallest `k` with `p^k >= 2^min_bits`, a random monic
    /// irreducible modulus of degree `k`, and a random `c` outside `F_p`.
    pub fn random<G: rand::Rng>(p: u64, min_bits: u32, rng: &mut G) -> Result<Self> {
        check_prime(p)?;
        let mut k = 1usize;
        let mut size = p as u128;
        while size < (1u128 << min_bits) {
            size *= p as u128;
            k += 1;
        }
        let modulus = loop {
            let mut coeffs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
            coeffs.push(1);
            let cand = UPoly::from_coeffs(&coeffs, p);
            if upoly::is_irreducible(&cand, p) {
                break cand;
            }
        };
        let c = loop {
            let coeffs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
            let cand = UPoly::from_coeffs(&coeffs, p);
            if !cand.is_constant() || k == 1 {
                break cand;
            }
        };
        Ok(Self { p, modulus, c })
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn modulus(&self) -> &UPoly {
        &self.modulus
    }

    pub fn inv(&self, a: &UPoly) -> Option<UPoly> {
        if a.is_zero() {
            return None;
        }
        // a^(p^k - 2)
        let order = (self.p as u128).pow(self.degree() as u32);
        Some(upoly::pow_mod_poly(a, order - 2, &self.modulus, self.p))
    }
}

impl Ring for ExtField {
    type Elem = UPoly;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> UPoly {
        UPoly::zero()
    }
    fn one(&self) -> UPoly {
        UPoly::constant(1)
    }
    fn from_int(&self, v: i64) -> UPoly {
        UPoly::constant(reduce_i64(v, self.p))
    }
    fn param(&self) -> UPoly {
        self.c.clone()
    }
    fn add(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.add(b, self.p)
    }
    fn sub(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.sub(b, self.p)
    }
    fn neg(&self, a: &UPoly) -> UPoly {
        a.neg(self.p)
    }
    fn mul(&self, a: &UPoly, b: &UPoly) -> UPoly {
        if a.is_constant() || b.is_constant() {
            return a.mul(b, self.p);
        }
        upoly::mul_mod_poly(a, b, &self.modulus, self.p)
    }
    fn is_zero(&self, a: &UPoly) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &UPoly) -> bool {
        a.is_one()
    }
    fn gcd(&self, a: &UPoly, b: &UPoly) -> UPoly {
        if a.is_zero() && b.is_zero() {
            UPoly::zero()
        } else {
            UPoly::constant(1)
        }
    }
    fn div_exact(&self, a: &UPoly, b: &UPoly) -> Option<UPoly> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
    fn normalize(&self, v: &mut [UPoly]) {
        if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
            if !lead.is_one() {
                let li = self.inv(&lead).expect("nonzero");
                for x in v.iter_mut() {
                    *x = self.mul(x, &li);
                }
            }
        }
    }
    fn random_elem(&self, rng: &mut dyn RngCore) -> UPoly {
        random_upoly(self.p, self.degree().saturating_sub(1), rng)
    }
    fn format_elem(&self, a: &UPoly) -> String {
        // Elements are printed in the power basis of the generator `u`.
        a.format().replace('c', "u")
    }
    fn reduce_pair(&self, a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
        match self.inv(a) {
            Some(ai) => (self.one(), self.mul(b, &ai)),
            None => (a.clone(), b.clone()),
        }
    }
}

/// How the parameter `c` is treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CMode {
    /// `c` transcendental over `F_p`, realised as `F_p(c)`.
    Generic,
    /// `c` specialised to a residue mod `p`.
    Value(u64),
}

impl fmt::Display for CMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CMode::Generic => write!(f, "generic"),
            CMode::Value(v) => write!(f, "{v}"),
        }
    }
}

/// Characteristic plus the treatment of `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoeffDomain {
    pub p: u64,
    pub c_mode: CMode,
}

impl CoeffDomain {
    pub fn generic(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(Self {
            p,
            c_mode: CMode::Generic,
        })
    }

    pub fn value(p: u64, v: i64) -> Result<Self> {
        check_prime(p)?;
        Ok(Self {
            p,
            c_mode: CMode::Value(reduce_i64(v, p)),
        })
    }

    pub fn zero(&self) -> Scalar {
        self.embed(&UPoly::zero())
    }

    pub fn one(&self) -> Scalar {
        self.embed(&UPoly::constant(1))
    }

    pub fn int(&self, v: i64) -> Scalar {
        self.embed(&UPoly::constant(reduce_i64(v, self.p)))
    }

    /// The scalar `c` itself.
    pub fn c(&self) -> Scalar {
        self.embed(&UPoly::var())
    }

    /// Embeds a polynomial in `c`.
    pub fn embed(&self, poly: &UPoly) -> Scalar {
        let repr = match self.c_mode {
            CMode::Generic => ScalarRepr::Fraction(RatFunc {
                num: poly.clone(),
                den: UPoly::constant(1),
            }),
            CMode::Value(v) => ScalarRepr::Residue(poly.eval(v, self.p)),
        };
        Scalar { domain: *self, repr }
    }

    /// Embeds `num / den`, failing when `den` vanishes in this domain.
    pub fn fraction(&self, num: &UPoly, den: &UPoly) -> Result<Scalar> {
        self.embed(num).div(&self.embed(den))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ScalarRepr {
    Residue(u64),
    Fraction(RatFunc),
}

/// A scalar tagged with its domain, for dynamically checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    domain: CoeffDomain,
    repr: ScalarRepr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn domain(&self) -> CoeffDomain {
        self.domain
    }

    pub fn repr(&self) -> &ScalarRepr {
        &self.repr
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            ScalarRepr::Residue(r) => *r == 0,
            ScalarRepr::Fraction(f) => f.num.is_zero(),
        }
    }

    pub fn apply(&self, other: &Scalar, op: ScalarOp) -> Result<Scalar> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        let p = self.domain.p;
        let repr = match (&self.repr, &other.repr) {
            (ScalarRepr::Residue(a), ScalarRepr::Residue(b)) => {
                let f = PrimeField { p, c: 0 };
                ScalarRepr::Residue(match op {
                    ScalarOp::Add => f.add(a, b),
                    ScalarOp::Sub => f.sub(a, b),
                    ScalarOp::Mul => f.mul(a, b),
                    ScalarOp::Div => f.div_exact(a, b).ok_or(Error::DivisionByZero)?,
                })
            }
            (ScalarRepr::Fraction(a), ScalarRepr::Fraction(b)) => {
                let f = RatFuncField { p };
                ScalarRepr::Fraction(match op {
                    ScalarOp::Add => f.add(a, b),
                    ScalarOp::Sub => f.sub(a, b),
                    ScalarOp::Mul => f.mul(a, b),
                    ScalarOp::Div => f.div(a, b)?,
                })
            }
            _ => return Err(Error::DomainMismatch),
        };
        Ok(Scalar {
            domain: self.domain,
            repr,
        })
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.apply(other, ScalarOp::Add)
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.apply(other, ScalarOp::Sub)
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.apply(other, ScalarOp::Mul)
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        self.apply(other, ScalarOp::Div)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            ScalarRepr::Residue(r) => write!(f, "{r}"),
            ScalarRepr::Fraction(q) => {
                let field = RatFuncField { p: self.domain.p };
                write!(f, "{}", field.format_elem(q))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn up(c: &[u64], p: u64) -> UPoly {
        UPoly::from_coeffs(c, p)
    }

    #[test]
    fn one_plus_one_is_zero_in_char_two() {
        let d = CoeffDomain::value(2, 1).unwrap();
        assert!(d.one().add(&d.one()).unwrap().is_zero());
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let d = CoeffDomain::generic(2).unwrap();
        let a = d.fraction(&up(&[0, 1], 2), &up(&[1, 1], 2)).unwrap();
        let b = d.fraction(&up(&[1, 1], 2), &up(&[0, 1], 2)).unwrap();
        assert_eq!(a.mul(&b).unwrap(), d.one());
    }

    #[test]
    fn fraction_reduces_to_canonical_form() {
        // (c^2 - 1) / (c + 1) = c - 1 = c + 2 over F_3
        let d = CoeffDomain::generic(3).unwrap();
        let q = d.fraction(&up(&[2, 0, 1], 3), &up(&[1, 1], 3)).unwrap();
        assert_eq!(q, d.embed(&up(&[2, 1], 3)));
        assert_eq!(q.to_string(), "c+2");
    }

    #[test]
    fn division_by_zero_and_mismatch_are_errors() {
        let d = CoeffDomain::generic(5).unwrap();
        assert!(matches!(d.one().div(&d.zero()), Err(Error::DivisionByZero)));
        let e = CoeffDomain::value(5, 2).unwrap();
        assert!(matches!(d.one().add(&e.one()), Err(Error::DomainMismatch)));
        // c - 2 vanishes when c = 2
        let x = e.c().sub(&e.int(2)).unwrap();
        assert!(matches!(e.one().div(&x), Err(Error::DivisionByZero)));
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(PrimeField::new(4).is_err());
        assert!(CoeffDomain::generic(1).is_err());
    }

    #[test]
    fn poly_ring_normalize_removes_content() {
        let r = PolyRing::new(3).unwrap();
        let mut v = vec![
            UPoly::zero(),
            up(&[2, 2], 3),        // 2(c+1)
            up(&[2, 0, 2], 3),     // 2(c^2+1)
        ];
        r.normalize(&mut v);
        assert_eq!(v[1], up(&[1, 1], 3));
        assert_eq!(v[2], up(&[1, 0, 1], 3));
    }

    #[test]
    fn extension_field_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2u64, 3, 5, 7] {
            let f = ExtField::random(p, 40, &mut rng).unwrap();
            assert!((p as f64).powi(f.degree() as i32) >= 2f64.powi(40));
            let c = f.param();
            let ci = f.inv(&c).unwrap();
            assert!(f.is_one(&f.mul(&c, &ci)));
        }
    }
}

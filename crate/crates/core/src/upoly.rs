//! Dense univariate polynomials over a prime field `F_p`.
//!
//! These back three coefficient domains: the polynomial ring `F_p[c]`, the
//! rational-function field `F_p(c)`, and the extension fields `F_{p^k}` used by
//! the randomized evaluation mode. Coefficients are stored low degree first and
//! the vector is always trimmed, so the zero polynomial has no coefficients.

use std::fmt;

use smallvec::SmallVec;

/// Modular helpers. `p` is always below `2^32`, so products fit in a `u64`.
#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0, "inverse of zero mod {p}");
    pow_mod(a, p - 2, p)
}

/// Reduces a signed integer into `0..p`.
pub(crate) fn reduce_i64(v: i64, p: u64) -> u64 {
    let m = v.rem_euclid(p as i64);
    m as u64
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: SmallVec<[u32; 6]>,
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly{:?}", self.coeffs.as_slice())
    }
}

impl UPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(v: u64) -> Self {
        let mut out = Self::default();
        if v != 0 {
            out.coeffs.push(v as u32);
        }
        out
    }

    /// The indeterminate `c`.
    pub fn var() -> Self {
        let mut out = Self::default();
        out.coeffs.push(0);
        out.coeffs.push(1);
        out
    }

    /// Builds a polynomial from arbitrary residues, reducing and trimming.
    pub fn from_coeffs(coeffs: &[u64], p: u64) -> Self {
        let mut out = Self {
            coeffs: coeffs.iter().map(|&c| (c % p) as u32).collect(),
        };
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).map_or(0, |&c| c as u64)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = u64> + '_ {
        self.coeffs.iter().map(|&c| c as u64)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().map_or(0, |&c| c as u64)
    }

    pub fn add(&self, other: &Self, p: u64) -> Self {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = long.clone();
        for (o, &s) in out.coeffs.iter_mut().zip(short.coeffs.iter()) {
            *o = add_mod(*o as u64, s as u64, p) as u32;
        }
        out.trim();
        out
    }

    pub fn neg(&self, p: u64) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            if *c != 0 {
                *c = (p - *c as u64) as u32;
            }
        }
        out
    }

    pub fn sub(&self, other: &Self, p: u64) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Self {
            coeffs: SmallVec::with_capacity(n),
        };
        for i in 0..n {
            out.coeffs
                .push(sub_mod(self.coeff(i), other.coeff(i), p) as u32);
        }
        out.trim();
        out
    }

    pub fn scale(&self, s: u64, p: u64) -> Self {
        let s = s % p;
        if s == 0 {
            return Self::zero();
        }
        if s == 1 {
            return self.clone();
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|&c| mul_mod(c as u64, s, p) as u32)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self, p: u64) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.coeffs.len() == 1 {
            return self.scale(other.coeffs[0] as u64, p);
        }
        if self.coeffs.len() == 1 {
            return other.scale(self.coeffs[0] as u64, p);
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        // Accumulate unreduced in u64 where safe, reducing per row otherwise.
        let mut acc = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % p;
            }
        }
        let mut out = Self {
            coeffs: acc.into_iter().map(|c| c as u32).collect(),
        };
        out.trim();
        out
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn divrem(&self, divisor: &Self, p: u64) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let lead_inv = inv_mod(divisor.leading(), p);
        let mut rem: Vec<u64> = self.coeffs.iter().map(|&c| c as u64).collect();
        let qlen = rem.len() - dd;
        let mut quot = vec![0u64; qlen];
        for k in (0..qlen).rev() {
            let top = rem[k + dd];
            if top == 0 {
                continue;
            }
            let q = mul_mod(top, lead_inv, p);
            quot[k] = q;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = sub_mod(rem[k + j], mul_mod(q, dc as u64, p), p);
            }
        }
        rem.truncate(dd);
        let mut q = Self {
            coeffs: quot.into_iter().map(|c| c as u32).collect(),
        };
        let mut r = Self {
            coeffs: rem.into_iter().map(|c| c as u32).collect(),
        };
        q.trim();
        r.trim();
        (q, r)
    }

    /// Exact quotient, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self, p: u64) -> Option<Self> {
        let (q, r) = self.divrem(divisor, p);
        r.is_zero().then_some(q)
    }

    pub fn rem(&self, divisor: &Self, p: u64) -> Self {
        self.divrem(divisor, p).1
    }

    /// Returns `(lc, self / lc)`; the zero polynomial maps to `(0, 0)`.
    pub fn monic(&self, p: u64) -> (u64, Self) {
        let lc = self.leading();
        if lc == 0 || lc == 1 {
            return (lc, self.clone());
        }
        (lc, self.scale(inv_mod(lc, p), p))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self, p: u64) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        // Constants short-circuit the common case of coprime scalars.
        if (a.is_constant() && !a.is_zero()) || (b.is_constant() && !b.is_zero()) {
            return Self::constant(1);
        }
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
            if b.is_constant() && !b.is_zero() {
                return Self::constant(1);
            }
        }
        a.monic(p).1
    }

    pub fn eval(&self, x: u64, p: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c as u64, p))
    }

    /// Formats with `c` as the indeterminate, highest degree first, e.g. `c^2+2*c+1`.
    pub fn format(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let body = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "c".to_string(),
                (1, c) => format!("{c}*c"),
                (i, 1) => format!("c^{i}"),
                (i, c) => format!("{c}*c^{i}"),
            };
            parts.push(body);
        }
        parts.join("+")
    }
}

/// Polynomials mod a fixed monic polynomial, used for `F_{p^k}` arithmetic.
pub(crate) fn mul_mod_poly(a: &UPoly, b: &UPoly, modulus: &UPoly, p: u64) -> UPoly {
    a.mul(b, p).rem(modulus, p)
}

pub(crate) fn pow_mod_poly(base: &UPoly, mut exp: u128, modulus: &UPoly, p: u64) -> UPoly {
    let mut acc = UPoly::constant(1);
    let mut b = base.rem(modulus, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_poly(&acc, &b, modulus, p);
        }
        b = mul_mod_poly(&b, &b, modulus, p);
        exp >>= 1;
    }
    acc
}

/// Rabin's irreducibility test for a monic polynomial of degree `k`.
pub(crate) fn is_irreducible(f: &UPoly, p: u64) -> bool {
    let k = match f.degree() {
        Some(k) if k >= 1 => k,
        _ => return false,
    };
    let x = UPoly::var();
    // x^(p^k) == x mod f
    let mut frob = x.clone();
    let mut powers = Vec::with_capacity(k);
    for _ in 0..k {
        frob = pow_mod_poly(&frob, p as u128, f, p);
        powers.push(frob.clone());
    }
    if powers[k - 1] != x.rem(f, p) {
        return false;
    }
    let mut prime_divisors = Vec::new();
    let mut m = k;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            prime_divisors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        prime_divisors.push(m);
    }
    for q in prime_divisors {
        let h = powers[k / q - 1].sub(&x, p);
        if !h.gcd(f, p).is_one() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_difference_of_squares() {
        let p = 3;
        let a = UPoly::from_coeffs(&[2, 0, 1], p); // c^2 - 1
        let b = UPoly::from_coeffs(&[1, 1], p); // c + 1
        assert_eq!(a.gcd(&b, p), b);
        assert_eq!(a.div_exact(&b, p), Some(UPoly::from_coeffs(&[2, 1], p)));
    }

    #[test]
    fn divrem_reconstructs() {
        let p = 7;
        let a = UPoly::from_coeffs(&[3, 1, 4, 1, 5], p);
        let b = UPoly::from_coeffs(&[2, 6, 1], p);
        let (q, r) = a.divrem(&b, p);
        assert_eq!(q.mul(&b, p).add(&r, p), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn irreducibility_small_cases() {
        // c^2 + c + 1 is irreducible over F_2, c^2 + 1 = (c+1)^2 is not.
        assert!(is_irreducible(&UPoly::from_coeffs(&[1, 1, 1], 2), 2));
        assert!(!is_irreducible(&UPoly::from_coeffs(&[1, 0, 1], 2), 2));
        // c^2 + 1 is irreducible over F_3.
        assert!(is_irreducible(&UPoly::from_coeffs(&[1, 0, 1], 3), 3));
    }

    #[test]
    fn format_orders_high_to_low() {
        assert_eq!(UPoly::from_coeffs(&[1, 2, 1], 5).format(), "c^2+2*c+1");
        assert_eq!(UPoly::zero().format(), "0");
    }
}

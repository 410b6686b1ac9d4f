//! Hilbert series: extraction from a computed kernel, and the closed forms
//! they are compared against.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::GradedKernel;
use crate::scalar::Ring;

/// Where a series came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Computed,
    /// The conjectured `t = 1` formula exactly as stated.
    ConjectureAsPrinted,
    /// The `t = 1` formula `[p]_z^{n-1} h_0(z^p)`.
    ConjectureRemarkConsistent,
    Theorem,
    BabyVerma,
    /// Building blocks such as `[k]_z`.
    Formula,
}

/// Polynomial in `z` with nonnegative integer coefficients, trailing zeros
/// trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Series {
    coeffs: Vec<u64>,
    provenance: Provenance,
}

type IPoly = Vec<i128>;

fn trim(mut v: IPoly) -> IPoly {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn ipoly_mul(a: &[i128], b: &[i128]) -> IPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Exact division by a polynomial with leading coefficient `+-1`.
fn ipoly_div_exact(a: &[i128], b: &[i128]) -> Option<IPoly> {
    let b = trim(b.to_vec());
    let lead = *b.last()?;
    assert!(lead == 1 || lead == -1, "divisor must have unit leading coefficient");
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return rem.is_empty().then(Vec::new);
    }
    let mut q = vec![0i128; rem.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = rem[k + b.len() - 1] * lead;
        q[k] = c;
        for (j, y) in b.iter().enumerate() {
            rem[k + j] -= c * y;
        }
    }
    trim(rem).is_empty().then(|| trim(q))
}

fn one_minus_z_pow(k: usize) -> IPoly {
    let mut v = vec![0i128; k + 1];
    v[0] = 1;
    v[k] -= 1;
    trim(v)
}

impl Series {
    /// Fails on a negative coefficient.
    pub fn from_signed(coeffs: &[i128], provenance: Provenance, what: &str) -> Result<Self> {
        let mut out = Vec::with_capacity(coeffs.len());
        for (d, &c) in coeffs.iter().enumerate() {
            if c < 0 {
                return Err(Error::NegativeCoefficient {
                    what: what.to_string(),
                    degree: d,
                    value: c as i64,
                });
            }
            out.push(c as u64);
        }
        Ok(Self::new(out, provenance))
    }

    pub fn new(mut coeffs: Vec<u64>, provenance: Provenance) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs, provenance }
    }

    pub fn one() -> Self {
        Self::new(vec![1], Provenance::Formula)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn coeff(&self, d: usize) -> u64 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Total dimension, the value at `z = 1`.
    pub fn total(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    fn signed(&self) -> IPoly {
        self.coeffs.iter().map(|&c| c as i128).collect()
    }

    pub fn mul(&self, other: &Series) -> Series {
        let v = ipoly_mul(&self.signed(), &other.signed());
        Series::new(v.into_iter().map(|c| c as u64).collect(), Provenance::Formula)
    }

    pub fn pow(&self, e: usize) -> Series {
        (0..e).fold(Series::one(), |acc, _| acc.mul(self))
    }

    /// `h(z^k)`.
    pub fn substitute_power(&self, k: usize) -> Series {
        let mut v = vec![0u64; self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * k] = c;
        }
        Series::new(v, self.provenance)
    }

    /// Exact quotient with nonnegative coefficients, if there is one.
    pub fn div_exact(&self, other: &Series) -> Option<Series> {
        let q = ipoly_div_exact_general(&self.signed(), &other.signed())?;
        Series::from_signed(&q, Provenance::Formula, "quotient").ok()
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Coefficientwise `self <= other`.
    pub fn dominated_by(&self, other: &Series) -> bool {
        (0..self.coeffs.len()).all(|d| self.coeff(d) <= other.coeff(d))
    }

    /// `1+3z+z^2` style text.
    pub fn format(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(d, &c)| match (d, c) {
                (0, c) => c.to_string(),
                (1, 1) => "z".to_string(),
                (1, c) => format!("{c}z"),
                (d, 1) => format!("z^{d}"),
                (d, c) => format!("{c}z^{d}"),
            })
            .collect();
        parts.join("+")
    }

    /// Pulls out the largest power of `[p]_z` that divides with a
    /// nonnegative quotient, e.g. `[2]_z^4*(1+4z^2+4z^4+z^6)`.
    pub fn factored(&self, p: usize) -> String {
        let base = q_bracket(p);
        let mut rest = self.clone();
        let mut e = 0;
        if p >= 2 && !self.coeffs.is_empty() {
            while let Some(q) = rest.div_exact(&base) {
                rest = q;
                e += 1;
            }
        }
        let power = match e {
            0 => String::new(),
            1 => format!("[{p}]_z"),
            e => format!("[{p}]_z^{e}"),
        };
        match (power.is_empty(), rest.coeffs.as_slice()) {
            (false, [1]) => power,
            (true, _) => rest.format(),
            (false, _) => format!("{power}*({})", rest.format()),
        }
    }
}

fn ipoly_div_exact_general(a: &[i128], b: &[i128]) -> Option<IPoly> {
    let b = trim(b.to_vec());
    let lead = *b.last()?;
    if lead == 1 || lead == -1 {
        return ipoly_div_exact(a, &b);
    }
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return rem.is_empty().then(Vec::new);
    }
    let mut q = vec![0i128; rem.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let top = rem[k + b.len() - 1];
        if top % lead != 0 {
            return None;
        }
        let c = top / lead;
        q[k] = c;
        for (j, y) in b.iter().enumerate() {
            rem[k + j] -= c * y;
        }
    }
    trim(rem).is_empty().then(|| trim(q))
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

/// `n = k p + r` with `0 <= r < p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceData {
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub r: usize,
}

impl CongruenceData {
    pub fn new(n: usize, p: usize) -> Self {
        Self {
            n,
            p,
            k: n / p,
            r: n % p,
        }
    }
}

/// `[k]_z = 1 + z + ... + z^{k-1}`; `[0]_z = 0`.
pub fn q_bracket(k: usize) -> Series {
    Series::new(vec![1; k], Provenance::Formula)
}

/// `[k]_z! = [k]_z [k-1]_z ... [1]_z`; `[0]_z! = 1`.
pub fn q_factorial(k: usize) -> Series {
    (1..=k).fold(Series::one(), |acc, j| acc.mul(&q_bracket(j)))
}

/// `binom(a, k)` for any integer `a`; zero for negative `k`.
pub fn binomial(a: i64, k: i64) -> i128 {
    if k < 0 {
        return 0;
    }
    let mut acc: i128 = 1;
    for i in 0..k as i128 {
        acc = acc * (a as i128 - i) / (i + 1);
    }
    acc
}

/// `Q_r(n, z) = binom(n-1, r-1) z^{r+1} + sum_{i=0}^{r} binom(n-r-2+i, i) z^i`.
pub fn q_r_polynomial(cong: &CongruenceData) -> Result<Series> {
    let (n, r) = (cong.n as i64, cong.r as i64);
    let mut v = vec![0i128; cong.r + 2];
    v[cong.r + 1] = binomial(n - 1, r - 1);
    for i in 0..=r {
        v[i as usize] += binomial(n - r - 2 + i, i);
    }
    Series::from_signed(&v, Provenance::Formula, &format!("Q_{}({}, z)", cong.r, cong.n))
}

/// Which reading of the `t = 1` conjecture to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjectureVariant {
    /// `[p]_z^{n-1} [r]_{z^p}! [p]_{z^p}! Q_r(n, z^p)`.
    AsPrinted,
    /// `[p]_z^{n-1} h_0(z^p)` with `h_0` the `t = 0` formula.
    #[default]
    RemarkConsistent,
}

impl ConjectureVariant {
    pub const ALL: [ConjectureVariant; 2] = [ConjectureVariant::AsPrinted, ConjectureVariant::RemarkConsistent];

    pub fn name(self) -> &'static str {
        match self {
            ConjectureVariant::AsPrinted => "as_printed",
            ConjectureVariant::RemarkConsistent => "remark_consistent",
        }
    }

    fn provenance(self) -> Provenance {
        match self {
            ConjectureVariant::AsPrinted => Provenance::ConjectureAsPrinted,
            ConjectureVariant::RemarkConsistent => Provenance::ConjectureRemarkConsistent,
        }
    }
}

/// The conjectured Hilbert series of `L_{t,c}` for generic `c`.
pub fn conjectured_hilbert(cong: &CongruenceData, t: u8, variant: ConjectureVariant) -> Result<Series> {
    let p = cong.p;
    let q = q_r_polynomial(cong)?;
    let h0 = q_factorial(cong.r).mul(&q_bracket(p)).mul(&q);
    let out = match (t, variant) {
        (0, _) => h0,
        (1, ConjectureVariant::RemarkConsistent) => q_bracket(p).pow(cong.n - 1).mul(&h0.substitute_power(p)),
        (1, ConjectureVariant::AsPrinted) => q_bracket(p)
            .pow(cong.n - 1)
            .mul(&q_factorial(cong.r).substitute_power(p))
            .mul(&q_factorial(p).substitute_power(p))
            .mul(&q.substitute_power(p)),
        _ => return Err(Error::InvalidParameter(format!("t = {t} must be 0 or 1"))),
    };
    Ok(out.with_provenance(variant.provenance()))
}

/// `[p]_z (1 + (n-2) z + z^2)`, the `t = 0` series for `n = 1 mod p`.
pub fn rational_theorem_series(n: usize, p: usize) -> Series {
    let quad = Series::new(vec![1, n as u64 - 2, 1], Provenance::Formula);
    q_bracket(p).mul(&quad).with_provenance(Provenance::Theorem)
}

/// `(1 + z^2)(1 + z)^{n-1}(1 + (n-2) z^2 + z^4)`, the `t = 1`, `p = 2` series
/// for odd `n`.
pub fn char_two_theorem_series(n: usize) -> Series {
    let quad = Series::new(vec![1, 0, n as u64 - 2, 0, 1], Provenance::Formula);
    Series::new(vec![1, 0, 1], Provenance::Formula)
        .mul(&q_bracket(2).pow(n - 1))
        .mul(&quad)
        .with_provenance(Provenance::Theorem)
}

/// `prod_{j=2}^n (1 - z^{j s}) / (1 - z)^{n-1}` with `s = 1` for `t = 0` and
/// `s = p` for `t = 1`.
pub fn baby_verma_series(n: usize, p: usize, t: u8) -> Result<Series> {
    let s = if t == 0 { 1 } else { p };
    let mut num: IPoly = vec![1];
    for j in 2..=n {
        num = ipoly_mul(&num, &one_minus_z_pow(j * s));
    }
    let mut den: IPoly = vec![1];
    for _ in 1..n {
        den = ipoly_mul(&den, &one_minus_z_pow(1));
    }
    let q = ipoly_div_exact(&num, &den)
        .ok_or_else(|| Error::InexactDivision("baby Verma numerator by (1-z)^(n-1)".into()))?;
    Ok(Series::from_signed(&q, Provenance::BabyVerma, "baby Verma series")?)
}

/// Outcome of checking `h = [p]_z^{n-1} g(z^p)` with `g >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub ok: bool,
    /// `g`, when the shape holds.
    pub inner: Option<Series>,
    pub reason: Option<String>,
}

pub fn shape_check_t1(h: &Series, n: usize, p: usize) -> ShapeReport {
    let fail = |reason: String| ShapeReport {
        ok: false,
        inner: None,
        reason: Some(reason),
    };
    let base: IPoly = q_bracket(p).pow(n - 1).coeffs.iter().map(|&c| c as i128).collect();
    let Some(q) = ipoly_div_exact(&h.signed(), &base) else {
        return fail(format!("not divisible by [{p}]_z^{}", n - 1));
    };
    if let Some((d, _)) = q.iter().enumerate().find(|(d, &c)| c != 0 && d % p != 0) {
        return fail(format!("quotient has a term at z^{d}, not a multiple of {p}"));
    }
    if let Some((d, &c)) = q.iter().enumerate().find(|(_, &c)| c < 0) {
        return fail(format!("quotient has coefficient {c} at z^{d}"));
    }
    let inner: Vec<u64> = q.iter().step_by(p).map(|&c| c as u64).collect();
    ShapeReport {
        ok: true,
        inner: Some(Series::new(inner, Provenance::Formula)),
        reason: None,
    }
}

/// Equality verdict between two series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub equal: bool,
    /// `(degree, computed, predicted)` at the first difference.
    pub first_mismatch: Option<(usize, u64, u64)>,
}

pub fn compare(computed: &Series, predicted: &Series) -> Comparison {
    let len = computed.coeffs.len().max(predicted.coeffs.len());
    let first_mismatch = (0..len)
        .find(|&d| computed.coeff(d) != predicted.coeff(d))
        .map(|d| (d, computed.coeff(d), predicted.coeff(d)));
    Comparison {
        equal: first_mismatch.is_none(),
        first_mismatch,
    }
}

/// `dim L[d]` for every computed degree; fails with the partial series when
/// `dim L` has not reached zero.
pub fn computed_hilbert<R: Ring>(kernel: &GradedKernel<R>) -> Result<Series> {
    let dims = kernel.dims_l();
    if dims.last() != Some(&0) {
        return Err(Error::Incomplete {
            partial: dims.iter().map(|&d| d as u64).collect(),
        });
    }
    Ok(Series::new(dims.iter().map(|&d| d as u64).collect(), Provenance::Computed))
}

/// Degree cap for a kernel run: at least `n + 10`, and three past the
/// largest degree either conjecture variant predicts.
pub fn default_degree_cap(n: usize, p: usize, t: u8) -> usize {
    let cong = CongruenceData::new(n, p);
    let predicted = ConjectureVariant::ALL
        .iter()
        .filter_map(|&v| conjectured_hilbert(&cong, t, v).ok())
        .filter_map(|s| s.degree())
        .max()
        .unwrap_or(0);
    (n + 10).max(predicted + 3)
}

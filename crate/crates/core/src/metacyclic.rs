//! The metacyclic group `G(p, p-1) = <x, y | x^p, y^(p-1), yx = x^m y>` and
//! its integral group ring.
//!
//! Group elements are kept in the normal form `x^a y^b`. Ring elements are
//! coefficient vectors indexed by `b·p + a` (powers of `x` grouped under each
//! power of `y`).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{lattice_basis, IntMatrix};
use crate::modrep::Lattice;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn pow_mod(base: u64, exp: u64, modulus: u64) -> u64 {
    let mut result = 1 % modulus;
    let mut b = base % modulus;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % modulus;
        }
        b = b * b % modulus;
        e >>= 1;
    }
    result
}

/// Multiplicative order of `a` modulo `p` (`a` coprime to `p`).
pub(crate) fn mult_order(a: u64, p: u64) -> u64 {
    let mut k = 1;
    let mut v = a % p;
    while v != 1 {
        v = v * a % p;
        k += 1;
    }
    k
}

/// Inverse of `a` modulo `p` as a value in `[1, p)`.
pub(crate) fn inv_mod(a: i64, p: i64) -> Option<i64> {
    let a = a.rem_euclid(p);
    if a == 0 {
        return None;
    }
    let (mut r0, mut r1) = (p, a);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(p))
}

/// Smallest primitive root modulo the prime `p`.
pub fn smallest_primitive_root(p: u64) -> u64 {
    (2..p).find(|&g| mult_order(g, p) == p - 1).unwrap_or(1)
}

/// Parameters of `G(p, p-1)`: an odd prime `p` and a primitive root `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupParams {
    p: u32,
    m: u32,
}

impl GroupParams {
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if p < 3 || !is_prime(p as u64) {
            return Err(Error::InvalidParams(format!("{p} is not an odd prime")));
        }
        if m < 2 || m >= p || mult_order(m as u64, p as u64) != (p - 1) as u64 {
            return Err(Error::InvalidParams(format!(
                "{m} is not a primitive root modulo {p}"
            )));
        }
        Ok(Self { p, m })
    }

    /// `m` defaults to the smallest primitive root (3 for p = 7).
    pub fn with_default_root(p: u32) -> Result<Self> {
        if p < 3 || !is_prime(p as u64) {
            return Err(Error::InvalidParams(format!("{p} is not an odd prime")));
        }
        Self::new(p, smallest_primitive_root(p as u64) as u32)
    }

    pub fn p7() -> Self {
        Self { p: 7, m: 3 }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Order of `y`.
    pub fn q(&self) -> u32 {
        self.p - 1
    }

    pub fn order(&self) -> usize {
        (self.p * (self.p - 1)) as usize
    }

    /// `m^k mod p`.
    fn m_pow(&self, k: u32) -> u32 {
        pow_mod(self.m as u64, k as u64, self.p as u64) as u32
    }

    pub fn index(&self, a: u32, b: u32) -> usize {
        (b as usize) * (self.p as usize) + a as usize
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElem> + '_ {
        (0..self.order()).map(move |i| self.elem_at(i))
    }

    pub fn elem_at(&self, idx: usize) -> GroupElem {
        let p = self.p as usize;
        GroupElem {
            params: *self,
            a: (idx % p) as u32,
            b: (idx / p) as u32,
        }
    }
}

/// The group element `x^a y^b` in normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElem {
    params: GroupParams,
    a: u32,
    b: u32,
}

impl GroupElem {
    pub fn new(params: GroupParams, a: i64, b: i64) -> Self {
        Self {
            params,
            a: a.rem_euclid(params.p as i64) as u32,
            b: b.rem_euclid(params.q() as i64) as u32,
        }
    }

    pub fn identity(params: GroupParams) -> Self {
        Self { params, a: 0, b: 0 }
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn index(&self) -> usize {
        self.params.index(self.a, self.b)
    }

    pub fn is_identity(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn inverse(&self) -> Self {
        // (x^a y^b)^-1 = y^-b x^-a = x^(-a·m^-b) y^-b
        let q = self.params.q();
        let nb = (q - self.b) % q;
        let p = self.params.p as u64;
        let a = (p - self.a as u64) % p * self.params.m_pow(nb) as u64 % p;
        Self {
            params: self.params,
            a: a as u32,
            b: nb,
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut r = Self::identity(self.params);
        for _ in 0..e % self.params.order() as u64 {
            r = group_mul(&r, self);
        }
        r
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} y^{}", self.a, self.b)
    }
}

/// `(x^a y^b)(x^c y^d) = x^(a + c·m^b) y^(b+d)`.
pub fn group_mul(g: &GroupElem, h: &GroupElem) -> GroupElem {
    debug_assert_eq!(g.params, h.params);
    let pr = g.params;
    let p = pr.p as u64;
    let a = (g.a as u64 + h.a as u64 * pr.m_pow(g.b) as u64) % p;
    GroupElem {
        params: pr,
        a: a as u32,
        b: (g.b + h.b) % pr.q(),
    }
}

impl Mul for GroupElem {
    type Output = GroupElem;
    fn mul(self, rhs: GroupElem) -> GroupElem {
        group_mul(&self, &rhs)
    }
}

/// Element of the integral group ring `Z[G(p, p-1)]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElem {
    params: GroupParams,
    coeffs: Vec<BigInt>,
}

impl RingElem {
    pub fn zero(params: GroupParams) -> Self {
        Self {
            params,
            coeffs: vec![BigInt::zero(); params.order()],
        }
    }

    pub fn one(params: GroupParams) -> Self {
        Self::from_group(GroupElem::identity(params))
    }

    pub fn from_group(g: GroupElem) -> Self {
        let mut r = Self::zero(g.params);
        r.coeffs[g.index()] = BigInt::one();
        r
    }

    pub fn from_coeffs(params: GroupParams, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != params.order() {
            return Err(Error::Dimension(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                params.order()
            )));
        }
        Ok(Self { params, coeffs })
    }

    /// Sum of `c · x^a y^b` over the given terms.
    pub fn from_terms(params: GroupParams, terms: &[(i64, i64, i64)]) -> Self {
        let mut r = Self::zero(params);
        for &(a, b, c) in terms {
            r.coeffs[GroupElem::new(params, a, b).index()] += c;
        }
        r
    }

    /// `Σ c_i x^i`.
    pub fn x_poly(params: GroupParams, cs: &[i64]) -> Self {
        let terms: Vec<_> = cs.iter().enumerate().map(|(i, &c)| (i as i64, 0, c)).collect();
        Self::from_terms(params, &terms)
    }

    pub fn x_pow(params: GroupParams, k: i64) -> Self {
        Self::from_group(GroupElem::new(params, k, 0))
    }

    pub fn y_pow(params: GroupParams, k: i64) -> Self {
        Self::from_group(GroupElem::new(params, 0, k))
    }

    pub fn x(params: GroupParams) -> Self {
        Self::x_pow(params, 1)
    }

    pub fn y(params: GroupParams) -> Self {
        Self::y_pow(params, 1)
    }

    pub fn constant(params: GroupParams, c: i64) -> Self {
        Self::one(params).scale(&BigInt::from(c))
    }

    /// `Σ = 1 + x + ... + x^(p-1)`.
    pub fn sigma_x(params: GroupParams) -> Self {
        Self::x_poly(params, &vec![1; params.p as usize])
    }

    /// `1 + y + ... + y^(p-2)`.
    pub fn sigma_y(params: GroupParams) -> Self {
        let terms: Vec<_> = (0..params.q() as i64).map(|b| (0, b, 1)).collect();
        Self::from_terms(params, &terms)
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, g: &GroupElem) -> &BigInt {
        &self.coeffs[g.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self {
            params: self.params,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(self.params);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Product of the factors in order.
    pub fn product(params: GroupParams, factors: &[&RingElem]) -> Self {
        factors
            .iter()
            .fold(Self::one(params), |acc, f| &acc * *f)
    }

    /// Coefficients as a 1-row matrix.
    pub fn to_row(&self) -> IntMatrix {
        IntMatrix::row_matrix(&self.coeffs)
    }

    pub fn from_row(params: GroupParams, row: &[BigInt]) -> Result<Self> {
        Self::from_coeffs(params, row.to_vec())
    }

    pub fn terms(&self) -> impl Iterator<Item = (GroupElem, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.params.elem_at(i), c))
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms()
            .map(|(g, c)| format!("{c}·x^{}y^{}", g.a, g.b))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Text format: header `p m`, then one `a b coeff` line per nonzero term.
impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.params.p, self.params.m)?;
        for (g, c) in self.terms() {
            writeln!(f, "{} {} {}", g.a, g.b, c)?;
        }
        Ok(())
    }
}

impl FromStr for RingElem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "missing 'p m' header".into(),
        })?;
        let hdr: Vec<&str> = header.split_whitespace().collect();
        let bad_header = || Error::Parse {
            line: hl + 1,
            msg: format!("header must be 'p m', got '{}'", header.trim()),
        };
        if hdr.len() != 2 {
            return Err(bad_header());
        }
        let p: u32 = hdr[0].parse().map_err(|_| bad_header())?;
        let m: u32 = hdr[1].parse().map_err(|_| bad_header())?;
        let params = GroupParams::new(p, m).map_err(|e| Error::Parse {
            line: hl + 1,
            msg: e.to_string(),
        })?;
        let mut r = RingElem::zero(params);
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: String| Error::Parse { line: ln + 1, msg };
            if toks.len() != 3 {
                return Err(err(format!("expected 'a b coeff', got '{}'", line.trim())));
            }
            let a: u32 = toks[0].parse().map_err(|_| err(format!("bad exponent '{}'", toks[0])))?;
            let b: u32 = toks[1].parse().map_err(|_| err(format!("bad exponent '{}'", toks[1])))?;
            if a >= p || b >= p - 1 {
                return Err(err(format!("exponents ({a},{b}) out of range")));
            }
            let c: BigInt = toks[2].parse().map_err(|_| err(format!("bad coefficient '{}'", toks[2])))?;
            r.coeffs[params.index(a, b)] += c;
        }
        Ok(r)
    }
}

fn same_params(u: &RingElem, v: &RingElem) {
    assert_eq!(u.params, v.params, "ring elements over different groups");
}

pub fn ring_mul(u: &RingElem, v: &RingElem) -> RingElem {
    same_params(u, v);
    let pr = u.params;
    let mut out = RingElem::zero(pr);
    let vt: Vec<(GroupElem, &BigInt)> = v.terms().collect();
    for (g, cu) in u.terms() {
        for (h, cv) in &vt {
            out.coeffs[group_mul(&g, h).index()] += cu * *cv;
        }
    }
    out
}

pub fn ring_add(u: &RingElem, v: &RingElem) -> RingElem {
    same_params(u, v);
    RingElem {
        params: u.params,
        coeffs: u.coeffs.iter().zip(&v.coeffs).map(|(a, b)| a + b).collect(),
    }
}

pub fn ring_neg(u: &RingElem) -> RingElem {
    RingElem {
        params: u.params,
        coeffs: u.coeffs.iter().map(|a| -a).collect(),
    }
}

pub fn ring_scale(u: &RingElem, s: i64) -> RingElem {
    u.scale(&BigInt::from(s))
}

/// Sum of all coefficients; a ring map to `Z`.
pub fn augmentation(u: &RingElem) -> BigInt {
    u.coeffs.iter().sum()
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        ring_mul(self, rhs)
    }
}

impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        ring_add(self, rhs)
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        ring_add(self, &ring_neg(rhs))
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        ring_neg(self)
    }
}

/// Matrix of `α ↦ u·α` acting on coordinate row vectors:
/// `coords(u·α) = coords(α) · M`.
///
/// With row vectors this is anti-multiplicative:
/// `left_mul_matrix(u·v) = left_mul_matrix(v) · left_mul_matrix(u)`.
pub fn left_mul_matrix(u: &RingElem) -> IntMatrix {
    let pr = u.params;
    let n = pr.order();
    let mut m = IntMatrix::zeros(n, n);
    for (k, g) in pr.elements().enumerate() {
        for (h, c) in u.terms() {
            let j = group_mul(&h, &g).index();
            let v = m.get(k, j) + c;
            m.set(k, j, v);
        }
    }
    m
}

/// Matrix of `α ↦ α·u`: `coords(α·u) = coords(α) · M`. Multiplicative:
/// `right_mul_matrix(u·v) = right_mul_matrix(u) · right_mul_matrix(v)`.
pub fn right_mul_matrix(u: &RingElem) -> IntMatrix {
    let pr = u.params;
    let n = pr.order();
    let mut m = IntMatrix::zeros(n, n);
    for (k, g) in pr.elements().enumerate() {
        for (h, c) in u.terms() {
            let j = group_mul(&g, &h).index();
            let v = m.get(k, j) + c;
            m.set(k, j, v);
        }
    }
    m
}

/// Stacks ring elements as the rows of a matrix.
pub fn elements_matrix(params: GroupParams, elems: &[RingElem]) -> IntMatrix {
    let mut m = IntMatrix::zeros(elems.len(), params.order());
    for (i, e) in elems.iter().enumerate() {
        for (j, c) in e.coeffs.iter().enumerate() {
            if !c.is_zero() {
                m.set(i, j, c.clone());
            }
        }
    }
    m
}

/// The right ideal `Σ g·Λ` as a lattice in `Λ` with the regular right action.
///
/// Spanned directly by `{g·h : g in gens, h in G}`; that set already spans the
/// ideal, so no iteration is needed.
pub fn ideal_lattice(gens: &[RingElem]) -> Result<Lattice> {
    let first = gens
        .first()
        .ok_or_else(|| Error::Precondition("ideal needs at least one generator".into()))?;
    let pr = first.params;
    let mut rows = Vec::with_capacity(gens.len() * pr.order());
    for g in gens {
        if g.params != pr {
            return Err(Error::InvalidParams("generators over different groups".into()));
        }
        for h in pr.elements() {
            rows.push(ring_mul(g, &RingElem::from_group(h)));
        }
    }
    let span = elements_matrix(pr, &rows);
    Lattice::new(
        pr,
        lattice_basis(&span),
        right_mul_matrix(&RingElem::x(pr)),
        right_mul_matrix(&RingElem::y(pr)),
    )
}

/// The full group ring as a lattice, with the regular right action.
pub fn regular_lattice(params: GroupParams) -> Lattice {
    Lattice::new(
        params,
        IntMatrix::identity(params.order()),
        right_mul_matrix(&RingElem::x(params)),
        right_mul_matrix(&RingElem::y(params)),
    )
    .expect("regular lattice is closed")
}

/// `π = (x-1)((2+x²+x⁵)y + (-1+x²+2x³+2x⁴+x⁵)y² + y³)(1-y³)` in `Z[G(7,6)]`,
/// expanded.
pub fn build_pi(params: GroupParams) -> Result<RingElem> {
    if params != GroupParams::p7() {
        return Err(Error::InvalidParams(format!(
            "the element π is defined for (p, m) = (7, 3), not ({}, {})",
            params.p, params.m
        )));
    }
    let pr = params;
    let xm1 = &RingElem::x(pr) - &RingElem::one(pr);
    let a = &RingElem::x_poly(pr, &[2, 0, 1, 0, 0, 1]) * &RingElem::y(pr);
    let b = &RingElem::x_poly(pr, &[-1, 0, 1, 2, 2, 1]) * &RingElem::y_pow(pr, 2);
    let mid = &(&a + &b) + &RingElem::y_pow(pr, 3);
    let tail = &RingElem::one(pr) - &RingElem::y_pow(pr, 3);
    Ok(RingElem::product(pr, &[&xm1, &mid, &tail]))
}

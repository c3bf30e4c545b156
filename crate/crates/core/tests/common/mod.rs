//! Independent reference computations for the exact linear algebra.
//!
//! Nothing here calls into the library: rank and solving go through
//! `num-rational` Gaussian elimination, Hermite forms through plain
//! extended-gcd row combinations, and invariant factors through gcds of
//! minors.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub type Rows = Vec<Vec<BigInt>>;

pub fn to_rows(m: &[Vec<i64>]) -> Rows {
    m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

pub fn random_rows(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect()
}

/// Random matrix of prescribed rank `r` (product of `rows×r` and `r×cols`).
pub fn random_rank(rng: &mut impl Rng, rows: usize, cols: usize, r: usize, bound: i64) -> Vec<Vec<i64>> {
    let a = random_rows(rng, rows, r, bound);
    let b = random_rows(rng, r, cols, bound);
    (0..rows)
        .map(|i| (0..cols).map(|j| (0..r).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn rational(m: &Rows) -> Vec<Vec<BigRational>> {
    m.iter().map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect()).collect()
}

/// Row echelon form over Q; returns the pivot columns.
fn echelon(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (dst, src) in m[i].iter_mut().zip(&pivot_row) {
                    *dst = &*dst - &(&f * src);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(m: &Rows) -> usize {
    let mut q = rational(m);
    echelon(&mut q).len()
}

pub fn det(m: &Rows) -> BigInt {
    let n = m.len();
    let mut q = rational(m);
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !q[i][c].is_zero()) else { return BigInt::zero() };
        if p != c {
            q.swap(p, c);
            d = -d;
        }
        d = &d * &q[c][c];
        for i in c + 1..n {
            let f = &q[i][c] / &q[c][c];
            let pivot_row = q[c].clone();
            for (dst, src) in q[i].iter_mut().zip(&pivot_row) {
                *dst = &*dst - &(&f * src);
            }
        }
    }
    assert!(d.is_integer());
    d.to_integer()
}

/// Solution of `A·x = b` over Q for one column `b`, if any.
pub fn rational_solve(a: &Rows, b: &[BigInt]) -> Option<Vec<BigRational>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Rows = a.iter().zip(b).map(|(r, v)| {
        let mut r = r.clone();
        r.push(v.clone());
        r
    }).collect();
    if aug.is_empty() {
        return Some(vec![BigRational::zero(); cols]);
    }
    let mut q = rational(&std::mem::take(&mut aug));
    let piv = echelon(&mut q);
    if piv.contains(&cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = q[r][cols].clone();
    }
    Some(x)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Determinantal divisors `d_k` = gcd of all `k×k` minors, `k = 1..=min`.
pub fn determinantal_divisors(m: &Rows) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let minor: Rows = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect()).collect();
                g = g.gcd(&det(&minor));
            }
        }
        out.push(g);
    }
    out
}

/// Invariant factors from determinantal divisors: `d_k / d_{k-1}` while
/// non-zero.
pub fn invariant_factors(m: &Rows) -> Vec<BigInt> {
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for d in determinantal_divisors(m) {
        if d.is_zero() {
            break;
        }
        out.push(&d / &prev);
        prev = d;
    }
    out
}

/// Row Hermite form by pairwise extended-gcd combinations: pivots positive,
/// entries above a pivot in `[0, pivot)`, zero rows dropped.
pub fn hermite(m: &Rows) -> Rows {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            // [[s, t], [-b/g, a/g]] has determinant 1
            let (x, y) = (a[r][c].clone(), a[i][c].clone());
            let e = x.extended_gcd(&y);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let (u, v) = (-(&y / &g), &x / &g);
            let (top, bot) = (a[r].clone(), a[i].clone());
            for j in 0..cols {
                a[r][j] = &s * &top[j] + &t * &bot[j];
                a[i][j] = &u * &top[j] + &v * &bot[j];
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for v in a[r].iter_mut() {
                *v = -&*v;
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            let pivot_row = a[r].clone();
            for (dst, src) in a[i].iter_mut().zip(&pivot_row) {
                *dst = &*dst - &(&q * src);
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// `gcd` of the maximal minors of a full-row-rank matrix: 1 exactly when the
/// row lattice is saturated.
pub fn maximal_minor_gcd(m: &Rows) -> BigInt {
    determinantal_divisors(m).last().cloned().unwrap_or_else(BigInt::one)
}

pub fn mat_mul(a: &Rows, b: &Rows) -> Rows {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|r| (0..cols).map(|j| (0..inner).map(|k| &r[k] * &b[k][j]).sum()).collect())
        .collect()
}

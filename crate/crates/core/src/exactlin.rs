//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers. Module elements
//! are row vectors and lattices are row spans, so "kernel" means the left
//! kernel `{v : v·A = 0}` unless stated otherwise.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Scalar multiple of the identity.
    pub fn scalar(n: usize, s: impl Into<BigInt>) -> Self {
        let s = s.into();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = s.clone();
        }
        m
    }

    /// Builds a matrix from small integer rows. Panics on ragged input, so
    /// only use it for literals.
    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged matrix literal");
            data.extend(row.iter().map(|&v| BigInt::from(v)));
        }
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Self {
            rows: r,
            cols,
            data,
        })
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// Block-diagonal matrix.
    pub fn block_diag(blocks: &[&IntMatrix]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: impl Into<BigInt>) {
        self.data[i * self.cols + j] = v.into();
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    /// Single row matrix.
    pub fn row_matrix(v: &[BigInt]) -> Self {
        Self {
            rows: 1,
            cols: v.len(),
            data: v.to_vec(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut m = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m.data[(i - r0) * (c1 - c0) + (j - c0)] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &IntMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j).clone();
            }
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m.data[i * idx.len() + k] = self.get(i, j).clone();
            }
        }
        m
    }

    /// Stacks rows of `self` on top of rows of `other`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<Self> {
        if self.cols != other.cols && self.rows != 0 && other.rows != 0 {
            return Err(Error::Dimension(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let cols = if self.rows == 0 { other.cols } else { self.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            rows: self.rows + other.rows,
            cols,
            data,
        })
    }

    pub fn vstack_all(parts: &[&IntMatrix]) -> Result<Self> {
        let mut out = IntMatrix::zeros(0, parts.first().map_or(0, |p| p.cols));
        for p in parts {
            out = out.vstack(p)?;
        }
        Ok(out)
    }

    pub fn hstack(&self, other: &IntMatrix) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut m = Self::zeros(self.rows, cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, other);
        Ok(m)
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let orow = other.row(k);
                let base = i * other.cols;
                for (j, b) in orow.iter().enumerate() {
                    if !b.is_zero() {
                        out.data[base + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn checked_zip(&self, other: &IntMatrix, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "shape mismatch {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn checked_add(&self, other: &IntMatrix) -> Result<Self> {
        self.checked_zip(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &IntMatrix) -> Result<Self> {
        self.checked_zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        assert!(self.is_square(), "pow of a non-square matrix");
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in self.row(k).iter().enumerate() {
                if !b.is_zero() {
                    out[j] += a * b;
                }
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn rank(&self) -> usize {
        hnf_rows(self).1.len()
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let res = hnf(self);
        if !res.h.is_identity() {
            return Err(Error::NotUnimodular(format!(
                "determinant {}",
                self.det()
            )));
        }
        Ok(res.u)
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Matrix text format: a `rows cols` header followed by one line of
/// space-separated decimal integers per row.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "missing 'rows cols' header".into(),
        })?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        let parse_dim = |t: &str| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line: hline + 1,
                msg: format!("bad dimension '{t}' in header"),
            })
        };
        if dims.len() != 2 {
            return Err(Error::Parse {
                line: hline + 1,
                msg: format!("header must be 'rows cols', got '{}'", header.trim()),
            });
        }
        let (rows, cols) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
        let mut data = Vec::with_capacity(rows * cols);
        let mut seen = 0;
        for (ln, line) in lines {
            if seen == rows {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: format!("more than {rows} rows"),
                });
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != cols {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: format!("expected {cols} entries, found {}", toks.len()),
                });
            }
            for t in toks {
                data.push(t.parse::<BigInt>().map_err(|_| Error::Parse {
                    line: ln + 1,
                    msg: format!("bad integer '{t}'"),
                })?);
            }
            seen += 1;
        }
        if seen != rows {
            return Err(Error::Parse {
                line: s.lines().count().max(1),
                msg: format!("expected {rows} rows, found {seen}"),
            });
        }
        IntMatrix::new(rows, cols, data)
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        self.scale(&BigInt::from(-1))
    }
}

// ---------------------------------------------------------------------------
// Row operations on a Vec<Vec<BigInt>> work area.

fn row_axpy(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    // rows[dst] -= q * rows[src]
    if q.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (a, b) = rows.split_at_mut(src);
        (&mut a[dst], &b[0])
    } else {
        let (a, b) = rows.split_at_mut(dst);
        (&mut b[0], &a[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn negate_row(row: &mut [BigInt]) {
    for v in row.iter_mut() {
        if !v.is_zero() {
            *v = -std::mem::take(v);
        }
    }
}

/// Quotient rounded to nearest, used during elimination to keep entries small.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // floor division leaves r with the sign of b, so r - b is the other
    // candidate remainder
    let (q, r) = a.div_mod_floor(b);
    if (&r + &r).abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

type Rows = Vec<Vec<BigInt>>;

/// Row-style Hermite normal form of `a`; returns (H rows, pivot columns,
/// optional transform rows). Rows of H beyond the pivot count are zero.
fn hnf_core(a: &IntMatrix, track: bool) -> (Rows, Vec<usize>, Option<Rows>) {
    let n = a.rows;
    let m = a.cols;
    let mut work: Vec<Vec<BigInt>> = a.to_rows();
    if track {
        for (i, row) in work.iter_mut().enumerate() {
            let mut ext = vec![BigInt::zero(); n];
            ext[i] = BigInt::one();
            row.extend(ext);
        }
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m {
        if r == n {
            break;
        }
        loop {
            let best = (r..n)
                .filter(|&i| !work[i][c].is_zero())
                .min_by(|&i, &j| work[i][c].abs().cmp(&work[j][c].abs()));
            let Some(best) = best else { break };
            work.swap(r, best);
            let mut clean = true;
            for i in r + 1..n {
                if work[i][c].is_zero() {
                    continue;
                }
                let q = round_div(&work[i][c], &work[r][c]);
                row_axpy(&mut work, i, r, &q);
                if !work[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if r < n && !work[r][c].is_zero() {
            if work[r][c].is_negative() {
                negate_row(&mut work[r]);
            }
            for i in 0..r {
                if work[i][c].is_zero() {
                    continue;
                }
                let q = work[i][c].div_floor(&work[r][c]);
                row_axpy(&mut work, i, r, &q);
            }
            pivots.push(c);
            r += 1;
        }
    }
    if track {
        let mut h = Vec::with_capacity(n);
        let mut u = Vec::with_capacity(n);
        for mut row in work {
            let tail = row.split_off(m);
            h.push(row);
            u.push(tail);
        }
        (h, pivots, Some(u))
    } else {
        (work, pivots, None)
    }
}

/// Hermite normal form with its unimodular transform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfResult {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub pivots: Vec<usize>,
}

impl HnfResult {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Row-style HNF: `U·A = H`, pivots positive, entries above each pivot
/// reduced into `[0, pivot)`, zero rows last.
pub fn hnf(a: &IntMatrix) -> HnfResult {
    let (h, pivots, u) = hnf_core(a, true);
    let n = a.rows;
    HnfResult {
        h: IntMatrix::from_rows(h, a.cols).expect("hnf shape"),
        u: IntMatrix::from_rows(u.expect("tracked"), n).expect("transform shape"),
        pivots,
    }
}

/// Nonzero rows of the HNF (a canonical basis of the row lattice) together
/// with the pivot columns, skipping the transform.
pub fn hnf_rows(a: &IntMatrix) -> (IntMatrix, Vec<usize>) {
    let (mut h, pivots, _) = hnf_core(a, false);
    h.truncate(pivots.len());
    (
        IntMatrix::from_rows(h, a.cols).expect("hnf shape"),
        pivots,
    )
}

/// Canonical basis of the row lattice of `a`.
pub fn lattice_basis(a: &IntMatrix) -> IntMatrix {
    hnf_rows(a).0
}

/// Smith normal form with transforms, `U·A·V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.d.rows.min(self.d.cols);
        (0..k)
            .map(|i| self.d.get(i, i).clone())
            .take_while(|v| !v.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn snf(a: &IntMatrix) -> SnfResult {
    let n = a.rows;
    let m = a.cols;
    let mut d = a.to_rows();
    let mut u: Vec<Vec<BigInt>> = IntMatrix::identity(n).to_rows();
    // V is kept transposed so column operations become row operations.
    let mut vt: Vec<Vec<BigInt>> = IntMatrix::identity(m).to_rows();

    let col_axpy = |d: &mut Vec<Vec<BigInt>>, vt: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        // col dst -= q * col src
        for row in d.iter_mut() {
            if !row[src].is_zero() {
                let t = q * &row[src];
                row[dst] -= t;
            }
        }
        row_axpy(vt, dst, src, q);
    };
    let col_swap = |d: &mut Vec<Vec<BigInt>>, vt: &mut Vec<Vec<BigInt>>, a: usize, b: usize| {
        for row in d.iter_mut() {
            row.swap(a, b);
        }
        vt.swap(a, b);
    };

    let k = n.min(m);
    for t in 0..k {
        loop {
            // smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..m {
                    if d[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                // trailing block is zero
                return finish_snf(d, u, vt, n, m);
            };
            d.swap(t, bi);
            u.swap(t, bi);
            col_swap(&mut d, &mut vt, t, bj);

            let mut dirty = false;
            for i in t + 1..n {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = round_div(&d[i][t], &d[t][t]);
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !d[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..m {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = round_div(&d[t][j], &d[t][t]);
                col_axpy(&mut d, &mut vt, j, t, &q);
                if !d[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility: pivot must divide the whole trailing block
            let piv = d[t][t].clone();
            let offender = (t + 1..n).find(|&i| (t + 1..m).any(|j| !(&d[i][j] % &piv).is_zero()));
            match offender {
                Some(i) => {
                    // row t += row i, then re-run elimination
                    let neg_one = BigInt::from(-1);
                    row_axpy(&mut d, t, i, &neg_one);
                    row_axpy(&mut u, t, i, &neg_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            negate_row(&mut d[t]);
            negate_row(&mut u[t]);
        }
    }
    finish_snf(d, u, vt, n, m)
}

fn finish_snf(
    mut d: Vec<Vec<BigInt>>,
    mut u: Vec<Vec<BigInt>>,
    vt: Vec<Vec<BigInt>>,
    n: usize,
    m: usize,
) -> SnfResult {
    for t in 0..n.min(m) {
        if d[t][t].is_negative() {
            negate_row(&mut d[t]);
            negate_row(&mut u[t]);
        }
    }
    SnfResult {
        d: IntMatrix::from_rows(d, m).expect("snf shape"),
        u: IntMatrix::from_rows(u, n).expect("snf shape"),
        v: IntMatrix::from_rows(vt, m).expect("snf shape").transpose(),
    }
}

/// Saturated Z-basis (in HNF) of the left kernel `{v : v·A = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let res = hnf(a);
    let r = res.rank();
    let idx: Vec<usize> = (r..a.rows).collect();
    let raw = res.u.select_rows(&idx);
    if raw.rows == 0 {
        return IntMatrix::zeros(0, a.rows);
    }
    lattice_basis(&raw)
}

/// Saturated Z-basis of the right kernel `{x : A·x = 0}`, as rows.
pub fn right_kernel_basis(a: &IntMatrix) -> IntMatrix {
    kernel_basis(&a.transpose())
}

/// Evidence that `A·x = b` has no integer solution: after the Smith
/// transform, `(U·b)[position]` is not divisible by the invariant factor
/// there (`divisor = 0` means the position is past the rank).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveCertificate {
    pub column: usize,
    pub position: usize,
    pub divisor: String,
    pub value: String,
}

impl fmt::Display for SolveCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.divisor == "0" {
            write!(
                f,
                "rhs column {}: transformed entry {} = {} outside the image (beyond rank)",
                self.column, self.position, self.value
            )
        } else {
            write!(
                f,
                "rhs column {}: invariant factor {} does not divide transformed entry {} = {}",
                self.column, self.divisor, self.position, self.value
            )
        }
    }
}

/// Outcome of an exact integer solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Solvable(IntMatrix),
    Unsolvable(SolveCertificate),
}

impl Solution {
    pub fn solution(&self) -> Option<&IntMatrix> {
        match self {
            Solution::Solvable(x) => Some(x),
            Solution::Unsolvable(_) => None,
        }
    }

    pub fn into_solution(self) -> Option<IntMatrix> {
        match self {
            Solution::Solvable(x) => Some(x),
            Solution::Unsolvable(_) => None,
        }
    }

    pub fn is_solvable(&self) -> bool {
        matches!(self, Solution::Solvable(_))
    }

    pub fn certificate(&self) -> Option<&SolveCertificate> {
        match self {
            Solution::Unsolvable(c) => Some(c),
            Solution::Solvable(_) => None,
        }
    }
}

/// Reusable solver for `A·X = B` with a fixed `A`; the Smith form is computed
/// once.
pub struct RightSolver {
    snf: SnfResult,
    factors: Vec<BigInt>,
    rows: usize,
    cols: usize,
}

impl RightSolver {
    pub fn new(a: &IntMatrix) -> Self {
        let snf = snf(a);
        let factors = snf.invariant_factors();
        Self {
            snf,
            factors,
            rows: a.rows,
            cols: a.cols,
        }
    }

    pub fn solve(&self, b: &IntMatrix) -> Result<Solution> {
        if b.rows != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side has {} rows, system has {}",
                b.rows, self.rows
            )));
        }
        let y = &self.snf.u * b;
        let mut z = IntMatrix::zeros(self.cols, b.cols);
        for col in 0..b.cols {
            for i in 0..self.rows {
                let yi = y.get(i, col);
                match self.factors.get(i) {
                    Some(d) => {
                        let (q, r) = yi.div_mod_floor(d);
                        if !r.is_zero() {
                            return Ok(Solution::Unsolvable(SolveCertificate {
                                column: col,
                                position: i,
                                divisor: d.to_string(),
                                value: yi.to_string(),
                            }));
                        }
                        z.set(i, col, q);
                    }
                    None => {
                        if !yi.is_zero() {
                            return Ok(Solution::Unsolvable(SolveCertificate {
                                column: col,
                                position: i,
                                divisor: "0".into(),
                                value: yi.to_string(),
                            }));
                        }
                    }
                }
            }
        }
        Ok(Solution::Solvable(&self.snf.v * &z))
    }
}

/// Decides `A·X = B` over the integers.
pub fn solve_right(a: &IntMatrix, b: &IntMatrix) -> Result<Solution> {
    RightSolver::new(a).solve(b)
}

/// One Sylvester-type constraint `L·X − X·R = C` on an unknown `X`.
#[derive(Clone, Debug)]
pub struct SylvesterBlock {
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub constant: IntMatrix,
}

impl SylvesterBlock {
    pub fn new(left: IntMatrix, right: IntMatrix, constant: IntMatrix) -> Self {
        Self {
            left,
            right,
            constant,
        }
    }
}

/// Coefficient matrix of the linear map `X ↦ L·X − X·R` acting on the
/// row-major vectorisation of an `n×m` unknown.
pub fn sylvester_operator(left: &IntMatrix, right: &IntMatrix) -> Result<IntMatrix> {
    if !left.is_square() || !right.is_square() {
        return Err(Error::Dimension("Sylvester coefficients must be square".into()));
    }
    let n = left.rows;
    let m = right.rows;
    let mut op = IntMatrix::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..m {
            let eq = i * m + j;
            for a in 0..n {
                let l = left.get(i, a);
                if !l.is_zero() {
                    op.data[eq * n * m + a * m + j] += l;
                }
            }
            for b in 0..m {
                let r = right.get(b, j);
                if !r.is_zero() {
                    op.data[eq * n * m + i * m + b] -= r;
                }
            }
        }
    }
    Ok(op)
}

fn vec_row_major(m: &IntMatrix) -> IntMatrix {
    IntMatrix {
        rows: m.rows * m.cols,
        cols: 1,
        data: m.data.clone(),
    }
}

/// Decides whether one integer `X` satisfies every block simultaneously.
pub fn solve_affine_system(blocks: &[SylvesterBlock]) -> Result<Solution> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::Dimension("empty constraint list".into()))?;
    let (n, m) = (first.left.rows, first.right.rows);
    let mut ops = Vec::with_capacity(blocks.len());
    let mut rhs = Vec::with_capacity(blocks.len());
    for b in blocks {
        if b.left.rows != n || b.right.rows != m || b.constant.rows != n || b.constant.cols != m {
            return Err(Error::Dimension(
                "all blocks must constrain the same unknown shape".into(),
            ));
        }
        ops.push(sylvester_operator(&b.left, &b.right)?);
        rhs.push(vec_row_major(&b.constant));
    }
    let a = IntMatrix::vstack_all(&ops.iter().collect::<Vec<_>>())?;
    let c = IntMatrix::vstack_all(&rhs.iter().collect::<Vec<_>>())?;
    Ok(match solve_right(&a, &c)? {
        Solution::Solvable(x) => Solution::Solvable(IntMatrix {
            rows: n,
            cols: m,
            data: x.data,
        }),
        other => other,
    })
}

/// All integer `X` (n×m) with `L·X = X·R` for every pair; returned as a
/// basis of matrices.
pub fn commutant_basis(pairs: &[(&IntMatrix, &IntMatrix)]) -> Result<Vec<IntMatrix>> {
    let (first_l, first_r) = pairs
        .first()
        .ok_or_else(|| Error::Dimension("empty commutant system".into()))?;
    let (n, m) = (first_l.rows, first_r.rows);
    let mut ops = Vec::new();
    for (l, r) in pairs {
        if l.rows != n || r.rows != m {
            return Err(Error::Dimension("inconsistent commutant shapes".into()));
        }
        ops.push(sylvester_operator(l, r)?);
    }
    let a = IntMatrix::vstack_all(&ops.iter().collect::<Vec<_>>())?;
    let k = right_kernel_basis(&a);
    Ok((0..k.rows)
        .map(|i| IntMatrix {
            rows: n,
            cols: m,
            data: k.row_vec(i),
        })
        .collect())
}

/// Z-basis of `rowlattice(A) ∩ rowlattice(B)`.
pub fn lattice_intersect(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    if a.cols != b.cols {
        return Err(Error::Dimension(format!(
            "ambient dimensions differ: {} vs {}",
            a.cols, b.cols
        )));
    }
    let a = lattice_basis(a);
    let b = lattice_basis(b);
    if a.rows == 0 || b.rows == 0 {
        return Ok(IntMatrix::zeros(0, a.cols));
    }
    let stacked = a.vstack(&b)?;
    let k = kernel_basis(&stacked);
    if k.rows == 0 {
        return Ok(IntMatrix::zeros(0, a.cols));
    }
    let coeff = k.submatrix(0, k.rows, 0, a.rows);
    Ok(lattice_basis(&(&coeff * &a)))
}

pub fn lattice_equal(a: &IntMatrix, b: &IntMatrix) -> bool {
    a.cols == b.cols && lattice_basis(a) == lattice_basis(b)
}

/// Whether every row of `sub` lies in the row lattice of `lat`.
pub fn lattice_contains(lat: &IntMatrix, sub: &IntMatrix) -> bool {
    if sub.rows == 0 {
        return true;
    }
    match lat.vstack(sub) {
        Ok(both) => lattice_equal(&both, lat),
        Err(_) => false,
    }
}

/// Coordinates of row vectors with respect to a basis (rows linearly
/// independent); the Smith form of the basis is computed once.
pub struct CoordinateSolver {
    inner: RightSolver,
    dim: usize,
}

impl CoordinateSolver {
    pub fn new(basis: &IntMatrix) -> Self {
        Self {
            inner: RightSolver::new(&basis.transpose()),
            dim: basis.cols,
        }
    }

    /// Integer coordinates `c` with `c·basis = v`, if they exist.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.dim {
            return None;
        }
        let b = IntMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        };
        self.inner
            .solve(&b)
            .ok()?
            .into_solution()
            .map(|x| x.data)
    }

    /// Coordinates of every row of `m`, as the rows of the result.
    pub fn coords_matrix(&self, m: &IntMatrix) -> Option<IntMatrix> {
        if m.cols != self.dim {
            return None;
        }
        let sol = self.inner.solve(&m.transpose()).ok()?.into_solution()?;
        Some(sol.transpose())
    }
}

/// Converts to i64 when the value fits; used for compact reporting.
pub fn to_i64(v: &BigInt) -> Option<i64> {
    v.to_i64()
}

//! Lattices with a right group action, their representations, and the
//! certificates identifying row modules.
//!
//! Two matrix conventions meet here. A lattice acts on row vectors,
//! `v ↦ v·A(g)`, so `A` is multiplicative. A [`Representation`] stores the
//! transposed "column" form `X = A(x)^T`, `Y = A(y)^T`, which is the form in
//! which the θ, L, ρ, σ and φ matrices are written; it satisfies
//! `X^p = I`, `Y^(p-1) = I` and `X·Y = Y·X^m`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{
    kernel_basis, lattice_basis, lattice_contains, lattice_equal, snf, CoordinateSolver, IntMatrix,
};
use crate::metacyclic::{GroupParams, RingElem};

/// A `Z`-lattice in `Z^n` closed under a right action of `x` and `y`.
#[derive(Clone, Debug)]
pub struct Lattice {
    params: GroupParams,
    basis: IntMatrix,
    act_x: IntMatrix,
    act_y: IntMatrix,
}

impl Lattice {
    /// Checks independence of the basis rows and closure under both actions.
    pub fn new(params: GroupParams, basis: IntMatrix, act_x: IntMatrix, act_y: IntMatrix) -> Result<Self> {
        let n = basis.cols();
        for (name, a) in [("x", &act_x), ("y", &act_y)] {
            if a.rows() != n || a.cols() != n {
                return Err(Error::Dimension(format!(
                    "action of {name} is {}x{}, ambient dimension is {n}",
                    a.rows(),
                    a.cols()
                )));
            }
        }
        if basis.rank() != basis.rows() {
            return Err(Error::Precondition("basis rows are linearly dependent".into()));
        }
        let lat = Self {
            params,
            basis,
            act_x,
            act_y,
        };
        for (name, a) in [("x", &lat.act_x), ("y", &lat.act_y)] {
            let image = &lat.basis * a;
            if !lattice_contains(&lat.basis, &image) {
                return Err(Error::NotClosed(format!("image under {name} leaves the lattice")));
            }
        }
        Ok(lat)
    }

    /// Lattice spanned by arbitrary generators (basis taken in HNF).
    pub fn from_generators(
        params: GroupParams,
        gens: &IntMatrix,
        act_x: IntMatrix,
        act_y: IntMatrix,
    ) -> Result<Self> {
        Self::new(params, lattice_basis(gens), act_x, act_y)
    }

    /// Same lattice, different basis; the new rows must span the same lattice.
    pub fn with_basis(&self, basis: IntMatrix) -> Result<Self> {
        if basis.rows() != self.rank() || !lattice_equal(&basis, &self.basis) {
            return Err(Error::Precondition(
                "replacement rows do not form a basis of the lattice".into(),
            ));
        }
        Ok(Self {
            basis,
            ..self.clone()
        })
    }

    /// The sublattice generated over the group by `gens`.
    pub fn submodule(&self, gens: &IntMatrix) -> Result<Self> {
        let span = orbit_span(gens, &self.act_x, &self.act_y, self.params);
        Self::from_generators(self.params, &span, self.act_x.clone(), self.act_y.clone())
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn act_x(&self) -> &IntMatrix {
        &self.act_x
    }

    pub fn act_y(&self) -> &IntMatrix {
        &self.act_y
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        lattice_contains(&self.basis, &IntMatrix::row_matrix(v))
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        lattice_contains(&self.basis, &other.basis)
    }
}

/// `Z`-span of `{v·g : v a row of gens, g in G}`.
pub fn orbit_span(gens: &IntMatrix, act_x: &IntMatrix, act_y: &IntMatrix, params: GroupParams) -> IntMatrix {
    let mut x_pows = vec![IntMatrix::identity(act_x.rows())];
    for _ in 1..params.p() {
        let next = x_pows.last().unwrap() * act_x;
        x_pows.push(next);
    }
    let mut rows = Vec::new();
    let mut cur = gens.clone();
    for _ in 0..params.q() {
        for xp in &x_pows {
            rows.push(&cur * xp);
        }
        cur = &cur * act_y;
    }
    let parts: Vec<&IntMatrix> = rows.iter().collect();
    lattice_basis(&IntMatrix::vstack_all(&parts).expect("same width"))
}

/// Integer representation in column form: `x` is the matrix of `x^{-1}`,
/// `y` that of `y^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    params: GroupParams,
    x: IntMatrix,
    y: IntMatrix,
}

impl Representation {
    /// Validates `X^p = I`, `Y^(p-1) = I`, `X·Y = Y·X^m`.
    pub fn new(params: GroupParams, x: IntMatrix, y: IntMatrix) -> Result<Self> {
        let rep = Self { params, x, y };
        if let Some(bad) = rep.relation_failures().into_iter().next() {
            return Err(Error::Precondition(format!("representation relation fails: {bad}")));
        }
        Ok(rep)
    }

    /// Builds the representation without checking relations; use
    /// [`Representation::relation_failures`] to audit it.
    pub fn unchecked(params: GroupParams, x: IntMatrix, y: IntMatrix) -> Self {
        Self { params, x, y }
    }

    /// From row-action matrices `v ↦ v·A(x)`, `v ↦ v·A(y)`.
    pub fn from_row_action(params: GroupParams, ax: &IntMatrix, ay: &IntMatrix) -> Result<Self> {
        Self::new(params, ax.transpose(), ay.transpose())
    }

    pub fn zero_dim(params: GroupParams) -> Self {
        Self {
            params,
            x: IntMatrix::zeros(0, 0),
            y: IntMatrix::zeros(0, 0),
        }
    }

    /// The regular representation of `Z[C_{p-1}]` pulled back along `x ↦ 1`,
    /// in the basis `1, y, ..., y^(p-2)`.
    pub fn cyclic_regular(params: GroupParams) -> Self {
        let q = params.q() as usize;
        let mut ay = IntMatrix::zeros(q, q);
        for i in 0..q {
            ay.set(i, (i + 1) % q, 1);
        }
        Self::from_row_action(params, &IntMatrix::identity(q), &ay).expect("cyclic relations")
    }

    /// Names of the failing relations (empty when all hold).
    pub fn relation_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.dim();
        if self.x.rows() != n || self.x.cols() != n || self.y.rows() != n || self.y.cols() != n {
            out.push("generator matrices are not square of equal size".into());
            return out;
        }
        if !self.x.pow(self.params.p()).is_identity() {
            out.push(format!("X^{} = I", self.params.p()));
        }
        if !self.y.pow(self.params.q()).is_identity() {
            out.push(format!("Y^{} = I", self.params.q()));
        }
        if &self.x * &self.y != &self.y * &self.x.pow(self.params.m()) {
            out.push(format!("X·Y = Y·X^{}", self.params.m()));
        }
        out
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn dim(&self) -> usize {
        self.x.rows()
    }

    /// Matrix of `x^{-1}` (column form).
    pub fn x(&self) -> &IntMatrix {
        &self.x
    }

    /// Matrix of `y^{-1}` (column form).
    pub fn y(&self) -> &IntMatrix {
        &self.y
    }

    /// Row-action matrix of `x`.
    pub fn row_x(&self) -> IntMatrix {
        self.x.transpose()
    }

    /// Row-action matrix of `y`.
    pub fn row_y(&self) -> IntMatrix {
        self.y.transpose()
    }

    /// Row-action matrix of an arbitrary ring element.
    pub fn row_action_of(&self, u: &RingElem) -> IntMatrix {
        let (ax, ay) = (self.row_x(), self.row_y());
        let mut out = IntMatrix::zeros(self.dim(), self.dim());
        for (g, c) in u.terms() {
            let m = &ax.pow(g.a()) * &ay.pow(g.b());
            out = &out + &m.scale(c);
        }
        out
    }

    /// Conjugated representation `h·X·h^{-1}`, `h·Y·h^{-1}`.
    pub fn conjugate(&self, h: &IntMatrix) -> Result<Self> {
        let hinv = h.inverse_unimodular()?;
        Self::new(self.params, &(h * &self.x) * &hinv, &(h * &self.y) * &hinv)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(parts: &[&Representation]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Precondition("empty direct sum".into()))?;
        let xs: Vec<&IntMatrix> = parts.iter().map(|r| &r.x).collect();
        let ys: Vec<&IntMatrix> = parts.iter().map(|r| &r.y).collect();
        Self::new(first.params, IntMatrix::block_diag(&xs), IntMatrix::block_diag(&ys))
    }

    /// The lattice `Z^n` with this representation as its action.
    pub fn as_lattice(&self) -> Lattice {
        Lattice::new(
            self.params,
            IntMatrix::identity(self.dim()),
            self.row_x(),
            self.row_y(),
        )
        .expect("full lattice is closed")
    }
}

/// Matrices of the action in the lattice basis:
/// `basis · act = A · basis`, returned in column form.
pub fn action_matrices(lat: &Lattice) -> Result<Representation> {
    let solver = CoordinateSolver::new(lat.basis());
    let ax = solver
        .coords_matrix(&(lat.basis() * lat.act_x()))
        .ok_or_else(|| Error::NotClosed("x-image has no integer coordinates".into()))?;
    let ay = solver
        .coords_matrix(&(lat.basis() * lat.act_y()))
        .ok_or_else(|| Error::NotClosed("y-image has no integer coordinates".into()))?;
    Representation::from_row_action(lat.params(), &ax, &ay)
}

/// Whether `Σ_{i<p} X^i = 0`, i.e. the norm element of `<x>` acts as zero.
pub fn check_sigma_condition(rep: &Representation) -> bool {
    let n = rep.dim();
    let mut acc = IntMatrix::zeros(n, n);
    let mut pw = IntMatrix::identity(n);
    for _ in 0..rep.params().p() {
        acc = &acc + &pw;
        pw = &pw * rep.x();
    }
    acc.is_zero()
}

/// Sign and power in `v·y = sign · v·(1+x)^power` that characterise the
/// row module `R(k)` for `p = 7`.
pub fn char_condition(k: usize) -> Option<(i32, u32)> {
    match k {
        1 => Some((-1, 1)),
        2 => Some((1, 2)),
        3 => Some((-1, 0)),
        4 => Some((1, 1)),
        5 => Some((-1, 2)),
        6 => Some((1, 0)),
        _ => None,
    }
}

/// A generator `v` (ambient coordinates) with `v·y = sign · v·(1+x)^power`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharCertificate {
    pub k: usize,
    pub v: Vec<String>,
    pub sign: i32,
    pub power: u32,
}

impl CharCertificate {
    pub fn vector(&self) -> Vec<BigInt> {
        self.v.iter().map(|s| s.parse().expect("stored decimal")).collect()
    }
}

fn char_operator(lat: &Lattice, sign: i32, power: u32) -> IntMatrix {
    let n = lat.ambient_dim();
    let one_plus_x = &IntMatrix::identity(n) + lat.act_x();
    let rhs = one_plus_x.pow(power).scale(&BigInt::from(sign));
    lat.act_y() - &rhs
}

/// Whether the rows of `gens` generate `lat` as a module.
pub fn generates(lat: &Lattice, gens: &IntMatrix) -> bool {
    let span = orbit_span(gens, lat.act_x(), lat.act_y(), lat.params());
    lattice_equal(&span, lat.basis())
}

/// Checks the equation and the generation property of a certificate by
/// direct computation.
pub fn verify_char_certificate(lat: &Lattice, cert: &CharCertificate) -> bool {
    let v = cert.vector();
    if v.len() != lat.ambient_dim() || !lat.contains(&v) {
        return false;
    }
    let op = char_operator(lat, cert.sign, cert.power);
    if !op.vec_mul(&v).iter().all(Zero::is_zero) {
        return false;
    }
    generates(lat, &IntMatrix::row_matrix(&v))
}

/// Searches the solution lattice of `v·(A_y − sign·(I + A_x)^power) = 0` for
/// a module generator: HNF basis rows first, then combinations with
/// coefficients in `[-3, 3]` (all of them when the solution rank is at most
/// 3, pairs otherwise).
pub fn find_char_generator(lat: &Lattice, k: usize) -> Option<CharCertificate> {
    let (sign, power) = char_condition(k)?;
    let op = char_operator(lat, sign, power);
    // v = c·basis with c·(basis·op) = 0
    let coeff = kernel_basis(&(lat.basis() * &op));
    if coeff.rows() == 0 {
        return None;
    }
    let sols = lattice_basis(&(&coeff * lat.basis()));
    let make = |v: Vec<BigInt>| CharCertificate {
        k,
        v: v.iter().map(|c| c.to_string()).collect(),
        sign,
        power,
    };
    let try_vec = |v: &[BigInt]| generates(lat, &IntMatrix::row_matrix(v));
    for i in 0..sols.rows() {
        if try_vec(sols.row(i)) {
            return Some(make(sols.row_vec(i)));
        }
    }
    let r = sols.rows();
    let combine = |cs: &[i64]| -> Vec<BigInt> {
        let c: Vec<BigInt> = cs.iter().map(|&t| BigInt::from(t)).collect();
        IntMatrix::row_matrix(&c).checked_mul(&sols).expect("shape").row_vec(0)
    };
    if r <= 3 {
        let total = 7usize.pow(r as u32);
        for code in 0..total {
            let mut cs = Vec::with_capacity(r);
            let mut t = code;
            for _ in 0..r {
                cs.push((t % 7) as i64 - 3);
                t /= 7;
            }
            if cs.iter().all(|&c| c == 0) {
                continue;
            }
            let v = combine(&cs);
            if try_vec(&v) {
                return Some(make(v));
            }
        }
    } else {
        for i in 0..r {
            for j in i + 1..r {
                for a in -3..=3i64 {
                    for b in -3..=3i64 {
                        if a == 0 || b == 0 {
                            continue;
                        }
                        let mut cs = vec![0; r];
                        cs[i] = a;
                        cs[j] = b;
                        let v = combine(&cs);
                        if try_vec(&v) {
                            return Some(make(v));
                        }
                    }
                }
            }
        }
    }
    None
}

/// Rank 6, the norm of `<x>` acts as zero, and a characteristic generator for
/// `R(k)` exists (`p = 7`).
pub fn is_isomorphic_to_row(lat: &Lattice, k: usize) -> bool {
    if lat.rank() != 6 || lat.params() != GroupParams::p7() {
        return false;
    }
    match action_matrices(lat) {
        Ok(rep) if check_sigma_condition(&rep) => find_char_generator(lat, k).is_some(),
        _ => false,
    }
}

/// Whether `h·A·h^{-1} = B` for both generators.
pub fn conjugacy_check(h: &IntMatrix, a: &Representation, b: &Representation) -> Result<bool> {
    if !h.is_square() || h.rows() != a.dim() || a.dim() != b.dim() {
        return Err(Error::Dimension("conjugator and representations disagree in size".into()));
    }
    let hinv = h.inverse_unimodular()?;
    Ok(&(h * a.x()) * &hinv == *b.x() && &(h * a.y()) * &hinv == *b.y())
}

/// Representation on `lat / sub` together with the lifts used as its basis
/// (ambient coordinates).
#[derive(Clone, Debug)]
pub struct QuotientRep {
    pub rep: Representation,
    pub lifts: IntMatrix,
}

/// Coordinates of `sub` in the basis of `lat`, checking containment and that
/// the quotient is torsion-free.
fn sub_coords(lat: &Lattice, sub: &Lattice) -> Result<IntMatrix> {
    let solver = CoordinateSolver::new(lat.basis());
    let s = solver
        .coords_matrix(sub.basis())
        .ok_or_else(|| Error::Precondition("sublattice is not contained in the lattice".into()))?;
    if s.rows() > 0 {
        let factors = snf(&s).invariant_factors();
        if let Some(d) = factors.iter().find(|d| !d.is_one()) {
            return Err(Error::Torsion(format!("elementary divisor {d}")));
        }
    }
    Ok(s)
}

/// Quotient representation with a complement chosen from the Smith transform.
pub fn quotient_rep(lat: &Lattice, sub: &Lattice) -> Result<QuotientRep> {
    let s = sub_coords(lat, sub)?;
    let n = lat.rank();
    let r = s.rows();
    let comp = if r == 0 {
        IntMatrix::identity(n)
    } else {
        // U·S·V = [I 0]; rows r.. of V^{-1} complete S to a basis.
        let vinv = snf(&s).v.inverse_unimodular()?;
        vinv.submatrix(r, n, 0, n)
    };
    let lifts = &comp * lat.basis();
    quotient_rep_with_lifts(lat, sub, &lifts)
}

/// Quotient representation in the basis given by `lifts` (ambient
/// coordinates), which must complete `sub` to a basis of `lat`.
pub fn quotient_rep_with_lifts(lat: &Lattice, sub: &Lattice, lifts: &IntMatrix) -> Result<QuotientRep> {
    sub_coords(lat, sub)?;
    let r = sub.rank();
    let k = lifts.rows();
    if r + k != lat.rank() {
        return Err(Error::Dimension(format!(
            "{k} lifts cannot complete a rank-{r} sublattice of a rank-{} lattice",
            lat.rank()
        )));
    }
    if k == 0 {
        return Ok(QuotientRep {
            rep: Representation::zero_dim(lat.params()),
            lifts: IntMatrix::zeros(0, lat.ambient_dim()),
        });
    }
    let full = sub.basis().vstack(lifts)?;
    if !lattice_equal(&full, lat.basis()) {
        return Err(Error::Precondition(
            "lifts do not complete the sublattice to a basis".into(),
        ));
    }
    let solver = CoordinateSolver::new(&full);
    let tail = |act: &IntMatrix| -> Result<IntMatrix> {
        let c = solver
            .coords_matrix(&(lifts * act))
            .ok_or_else(|| Error::NotClosed("lift image outside the lattice".into()))?;
        Ok(c.submatrix(0, k, r, r + k))
    };
    let ax = tail(lat.act_x())?;
    let ay = tail(lat.act_y())?;
    Ok(QuotientRep {
        rep: Representation::from_row_action(lat.params(), &ax, &ay)?,
        lifts: lifts.clone(),
    })
}

/// Checks, over `Z[C_{p-1}]`, that multiplication by `1 + y + ... + y^(r-1)`
/// maps the augmentation ideal `[y-1)` onto itself and that
/// `-r + (1 + y + ... + y^(r-1))` lies in it.
pub fn fullness_automorphism_check(p: u32, r: u32) -> Result<bool> {
    if p < 3 || !crate::metacyclic::is_prime(p as u64) {
        return Err(Error::InvalidParams(format!("{p} is not an odd prime")));
    }
    let n = (p - 1) as usize;
    if r < 1 || r as usize > n - 1 || (r as usize).gcd(&n) != 1 {
        return Err(Error::Precondition(format!(
            "r = {r} must lie in [1, {}] and be coprime to {n}",
            n - 1
        )));
    }
    // cyclic group ring elements as length-n vectors; mult matrix of u:
    // row k = y^k · u
    let mul_matrix = |u: &[i64]| -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for k in 0..n {
            for (j, &c) in u.iter().enumerate() {
                if c != 0 {
                    let idx = (k + j) % n;
                    let v = m.get(k, idx) + c;
                    m.set(k, idx, v);
                }
            }
        }
        m
    };
    let mut ym1 = vec![0i64; n];
    ym1[0] = -1;
    ym1[1] += 1;
    let ideal = lattice_basis(&mul_matrix(&ym1));
    let mut s = vec![0i64; n];
    for c in s.iter_mut().take(r as usize) {
        *c = 1;
    }
    let image = &ideal * &mul_matrix(&s);
    let onto = lattice_equal(&image, &ideal);
    let mut t = s.clone();
    t[0] -= r as i64;
    let tv: Vec<BigInt> = t.iter().map(|&c| BigInt::from(c)).collect();
    let member = lattice_contains(&ideal, &IntMatrix::row_matrix(&tv));
    Ok(onto && member)
}

/// `gcd` of a list of integers (nonnegative).
pub(crate) fn gcd_all(vals: impl IntoIterator<Item = BigInt>) -> BigInt {
    vals.into_iter().fold(BigInt::zero(), |g, v| g.gcd(&v.abs()))
}

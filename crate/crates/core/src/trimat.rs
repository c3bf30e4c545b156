//! The ring `T_{p-1}(Z, p)` of integer matrices whose entries below the
//! diagonal are divisible by `p`, its row modules `R(i)`, homomorphisms
//! between them, and explicit unit constructions.
//!
//! Slots and row indices are 1-based in the public API, matching the usual
//! `R(1), ..., R(p-1)` numbering.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{commutant_basis, IntMatrix};
use crate::fixtures::FixtureSet;
use crate::metacyclic::{inv_mod, is_prime, right_mul_matrix, GroupParams, RingElem};
use crate::modrep::{
    char_condition, find_char_generator, gcd_all, verify_char_certificate, CharCertificate, Lattice,
    Representation,
};

fn check_prime(p: u32) -> Result<()> {
    if p < 3 || !is_prime(p as u64) {
        return Err(Error::InvalidParams(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Element of `T_{p-1}(Z, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriMatrix {
    p: u32,
    m: IntMatrix,
}

impl TriMatrix {
    pub fn new(p: u32, m: IntMatrix) -> Result<Self> {
        check_prime(p)?;
        let n = (p - 1) as usize;
        if m.rows() != n || m.cols() != n {
            return Err(Error::Dimension(format!(
                "expected {n}x{n}, found {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if let Some((i, j)) = shape_violation(p, &m) {
            return Err(Error::Shape(format!(
                "entry ({},{}) = {} below the diagonal is not divisible by {p}",
                i + 1,
                j + 1,
                m.get(i, j)
            )));
        }
        Ok(Self { p, m })
    }

    pub fn identity(p: u32) -> Result<Self> {
        check_prime(p)?;
        Ok(Self {
            p,
            m: IntMatrix::identity((p - 1) as usize),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.m
    }

    pub fn mul(&self, other: &TriMatrix) -> Result<TriMatrix> {
        if self.p != other.p {
            return Err(Error::InvalidParams("different primes".into()));
        }
        TriMatrix::new(self.p, &self.m * &other.m)
    }

    pub fn det(&self) -> BigInt {
        self.m.det()
    }

    pub fn is_unit(&self) -> bool {
        self.det().abs().is_one()
    }

    /// Diagonal entries reduced into `[0, p)`.
    pub fn diag_residues(&self) -> Vec<i64> {
        let p = BigInt::from(self.p);
        (0..self.m.rows())
            .map(|i| self.m.get(i, i).mod_floor(&p).to_i64().expect("small residue"))
            .collect()
    }
}

impl fmt::Display for TriMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.m)
    }
}

impl FromStr for TriMatrix {
    type Err = Error;

    /// Matrix text format; the prime is `rows + 1`.
    fn from_str(s: &str) -> Result<Self> {
        let m: IntMatrix = s.parse()?;
        TriMatrix::new(m.rows() as u32 + 1, m)
    }
}

/// First entry `(i, j)`, `i > j`, not divisible by `p` (0-based).
fn shape_violation(p: u32, m: &IntMatrix) -> Option<(usize, usize)> {
    let p = BigInt::from(p);
    for i in 0..m.rows() {
        for j in 0..i.min(m.cols()) {
            if !m.get(i, j).is_multiple_of(&p) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Element of the row module `R(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowVector {
    p: u32,
    i: usize,
    entries: Vec<BigInt>,
}

impl RowVector {
    pub fn new(p: u32, i: usize, entries: Vec<BigInt>) -> Result<Self> {
        check_prime(p)?;
        let n = (p - 1) as usize;
        if i < 1 || i > n {
            return Err(Error::Precondition(format!("row index {i} outside 1..={n}")));
        }
        if entries.len() != n {
            return Err(Error::Dimension(format!("{} entries, expected {n}", entries.len())));
        }
        let pb = BigInt::from(p);
        if let Some(j) = (0..i - 1).find(|&j| !entries[j].is_multiple_of(&pb)) {
            return Err(Error::Shape(format!(
                "entry {} of a vector in R({i}) must be divisible by {p}",
                j + 1
            )));
        }
        Ok(Self { p, i, entries })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn row(&self) -> usize {
        self.i
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }
}

/// Basis of `R(i)`: `p·e_j` for `j < i`, `e_j` otherwise.
pub fn row_basis(p: u32, i: usize) -> Result<Vec<RowVector>> {
    check_prime(p)?;
    let n = (p - 1) as usize;
    if i < 1 || i > n {
        return Err(Error::Precondition(format!("row index {i} outside 1..={n}")));
    }
    (1..=n)
        .map(|j| {
            let mut e = vec![BigInt::zero(); n];
            e[j - 1] = if j < i { BigInt::from(p) } else { BigInt::one() };
            RowVector::new(p, i, e)
        })
        .collect()
}

/// Diagonal matrix whose rows are the basis of `R(i)`.
pub fn row_basis_matrix(p: u32, i: usize) -> Result<IntMatrix> {
    let rows: Vec<Vec<BigInt>> = row_basis(p, i)?.into_iter().map(|r| r.entries).collect();
    IntMatrix::from_rows(rows, (p - 1) as usize)
}

/// `λ(x^{-1})`, `λ(y^{-1})`: the row-action matrices of `x` and `y` on
/// `T_{p-1}` row vectors, `t·x = t·λ(x^{-1})`.
#[derive(Clone, Debug)]
pub struct LambdaFixture {
    pub lx: TriMatrix,
    pub ly: TriMatrix,
    params: GroupParams,
}

impl LambdaFixture {
    pub fn new(params: GroupParams, lx: IntMatrix, ly: IntMatrix) -> Result<Self> {
        let p = params.p();
        Ok(Self {
            lx: TriMatrix::new(p, lx)?,
            ly: TriMatrix::new(p, ly)?,
            params,
        })
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    /// Failing invariants, by description (empty when valid).
    ///
    /// The matrices are a right action on row vectors, so the group relation
    /// `yx = x^m y` appears as `ly·lx = lx^m·ly`.
    pub fn discrepancies(&self) -> Vec<String> {
        let (lx, ly) = (self.lx.matrix(), self.ly.matrix());
        let mut out = Vec::new();
        if !lx.pow(self.params.p()).is_identity() {
            out.push(format!("λ(x^-1)^{} ≠ I", self.params.p()));
        }
        if !ly.pow(self.params.q()).is_identity() {
            out.push(format!("λ(y^-1)^{} ≠ I", self.params.q()));
        }
        if ly * lx != &lx.pow(self.params.m()) * ly {
            out.push(format!("λ(y^-1)·λ(x^-1) ≠ λ(x^-1)^{}·λ(y^-1)", self.params.m()));
        }
        for (name, t) in [("λ(x^-1)", &self.lx), ("λ(y^-1)", &self.ly)] {
            if !t.is_unit() {
                out.push(format!("{name} is not a unit (det {})", t.det()));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.discrepancies().first() {
            None => Ok(()),
            Some(d) => Err(Error::Precondition(format!("λ fixture discrepancy: {d}"))),
        }
    }

    /// Column-form representation on `Z^{p-1}`.
    pub fn representation(&self) -> Result<Representation> {
        Representation::from_row_action(self.params, self.lx.matrix(), self.ly.matrix())
    }

    /// `R(i)` as a lattice in `Z^{p-1}`.
    pub fn row_lattice(&self, i: usize) -> Result<Lattice> {
        Lattice::new(
            self.params,
            row_basis_matrix(self.params.p(), i)?,
            self.lx.matrix().clone(),
            self.ly.matrix().clone(),
        )
    }
}

/// The reference `λ` fixture. Only `p = 7` is available.
pub fn lambda_fixture(p: u32) -> Result<LambdaFixture> {
    if p != 7 {
        return Err(Error::UnsupportedPrime(p as u64));
    }
    let fx = FixtureSet::builtin();
    LambdaFixture::new(GroupParams::p7(), fx.lambda_x, fx.lambda_y)
}

/// Reference generators `v_k` of `R(k)` for `p = 7`, each with the
/// characteristic equation `v_k·y = sign · v_k·(1+x)^power` it satisfies.
pub fn row_certificates_p7() -> Vec<CharCertificate> {
    let vs: [[i64; 6]; 6] = [
        [20, -10, 4, -1, 0, 0],
        [7, -1, 0, 0, 0, 0],
        [21, -7, 1, 1, -1, 0],
        [0, 0, 0, 1, -2, 2],
        [77, -49, 28, -14, 6, -2],
        [7, -7, 7, -7, 7, -6],
    ];
    vs.iter()
        .enumerate()
        .map(|(n, v)| {
            let k = n + 1;
            let (sign, power) = char_condition(k).expect("k in 1..=6");
            CharCertificate { k, v: v.iter().map(|c| c.to_string()).collect(), sign, power }
        })
        .collect()
}

/// Outcome of checking one row certificate.
#[derive(Clone, Debug)]
pub struct RowCertificateCheck {
    pub k: usize,
    pub holds: bool,
    /// A certificate found by search, reported when the given one fails.
    pub replacement: Option<CharCertificate>,
}

/// Checks that `cert.v` lies in `R(k)`, satisfies its equation and generates
/// `R(k)`.
pub fn check_row_certificate(fix: &LambdaFixture, cert: &CharCertificate) -> Result<RowCertificateCheck> {
    let lat = fix.row_lattice(cert.k)?;
    let holds = verify_char_certificate(&lat, cert);
    Ok(RowCertificateCheck {
        k: cert.k,
        holds,
        replacement: if holds { None } else { find_char_generator(&lat, cert.k) },
    })
}

/// Row-action matrices of `x`, `y` on `R(i)` in its own basis.
fn row_module_action(fix: &LambdaFixture, i: usize) -> Result<(IntMatrix, IntMatrix)> {
    let p = fix.params.p();
    let b = row_basis_matrix(p, i)?;
    let conj = |a: &IntMatrix| -> Result<IntMatrix> {
        // B·A·B^{-1} with B diagonal
        let ba = &b * a;
        let n = b.rows();
        let mut out = IntMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let (q, rem) = ba.get(r, c).div_rem(b.get(c, c));
                if !rem.is_zero() {
                    return Err(Error::NotClosed(format!("R({i}) is not stable under λ")));
                }
                out.set(r, c, q);
            }
        }
        Ok(out)
    };
    Ok((conj(fix.lx.matrix())?, conj(fix.ly.matrix())?))
}

/// `Hom(R(i), R(j))` as ambient matrices `M` (`v ↦ v·M`).
#[derive(Clone, Debug)]
pub struct HomLattice {
    pub i: usize,
    pub j: usize,
    pub generators: Vec<IntMatrix>,
}

impl HomLattice {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// The generator when the lattice has rank 1, normalised to a positive
    /// scalar when it is one.
    pub fn generator(&self) -> Option<IntMatrix> {
        if self.generators.len() != 1 {
            return None;
        }
        let g = &self.generators[0];
        if g.get(0, 0).is_negative() {
            Some(-g)
        } else {
            Some(g.clone())
        }
    }

    /// `Some(n)` when the lattice is spanned by `n·I`.
    pub fn scalar_generator(&self) -> Option<BigInt> {
        let g = self.generator()?;
        let s = g.get(0, 0).clone();
        (g == IntMatrix::scalar(g.rows(), s.clone())).then_some(s)
    }
}

/// All `Λ`-homomorphisms `R(i) → R(j)`, found as the commutant of the two
/// actions in module coordinates and mapped back to ambient matrices.
pub fn hom_lattice(p: u32, i: usize, j: usize, fix: &LambdaFixture) -> Result<HomLattice> {
    if fix.params.p() != p {
        return Err(Error::UnsupportedPrime(p as u64));
    }
    let (aix, aiy) = row_module_action(fix, i)?;
    let (ajx, ajy) = row_module_action(fix, j)?;
    let basis = commutant_basis(&[(&aix, &ajx), (&aiy, &ajy)])?;
    let bi = row_basis_matrix(p, i)?;
    let bj = row_basis_matrix(p, j)?;
    let n = bi.rows();
    let mut generators = Vec::with_capacity(basis.len());
    for f in &basis {
        // M = B_i^{-1} F B_j
        let mut m = IntMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let num = f.get(r, c) * bj.get(c, c);
                let (q, rem) = num.div_rem(bi.get(r, r));
                if !rem.is_zero() {
                    return Err(Error::Precondition("hom is not integral on the ambient space".into()));
                }
                m.set(r, c, q);
            }
        }
        generators.push(m);
    }
    Ok(HomLattice { i, j, generators })
}

/// Order of `Hom(R(i), R(j))` modulo homs factoring through the free module
/// `Λ`: the index of the subgroup spanned by all `g∘h` with `h: R(i) → Λ`,
/// `g: Λ → R(j)`.
pub fn hom_der_order(p: u32, i: usize, j: usize, fix: &LambdaFixture) -> Result<BigInt> {
    let ctx = HomDerContext::new(p, fix)?;
    ctx.order(i, j)
}

/// Caches the homs into and out of `Λ` so a full table costs `2(p-1)`
/// commutant solves.
pub struct HomDerContext {
    p: u32,
    into_free: Vec<Vec<IntMatrix>>,
    from_free: Vec<Vec<IntMatrix>>,
    homs: Vec<Vec<Option<HomLattice>>>,
    fix: LambdaFixture,
}

impl HomDerContext {
    pub fn new(p: u32, fix: &LambdaFixture) -> Result<Self> {
        if fix.params.p() != p {
            return Err(Error::UnsupportedPrime(p as u64));
        }
        let n = (p - 1) as usize;
        let pr = fix.params;
        let rx = right_mul_matrix(&RingElem::x(pr));
        let ry = right_mul_matrix(&RingElem::y(pr));
        let mut into_free = Vec::with_capacity(n);
        let mut from_free = Vec::with_capacity(n);
        for i in 1..=n {
            let (ax, ay) = row_module_action(fix, i)?;
            into_free.push(commutant_basis(&[(&ax, &rx), (&ay, &ry)])?);
            from_free.push(commutant_basis(&[(&rx, &ax), (&ry, &ay)])?);
        }
        Ok(Self {
            p,
            into_free,
            from_free,
            homs: vec![vec![None; n]; n],
            fix: fix.clone(),
        })
    }

    fn hom(&mut self, i: usize, j: usize) -> Result<HomLattice> {
        if self.homs[i - 1][j - 1].is_none() {
            self.homs[i - 1][j - 1] = Some(hom_lattice(self.p, i, j, &self.fix)?);
        }
        Ok(self.homs[i - 1][j - 1].clone().expect("filled"))
    }

    pub fn order(&self, i: usize, j: usize) -> Result<BigInt> {
        let hom = hom_lattice(self.p, i, j, &self.fix)?;
        self.order_with(&hom)
    }

    /// Like [`HomDerContext::order`] but reuses a cached hom lattice.
    pub fn order_cached(&mut self, i: usize, j: usize) -> Result<(HomLattice, BigInt)> {
        let hom = self.hom(i, j)?;
        let ord = self.order_with(&hom)?;
        Ok((hom, ord))
    }

    fn order_with(&self, hom: &HomLattice) -> Result<BigInt> {
        let (i, j) = (hom.i, hom.j);
        let gen = hom
            .generator()
            .ok_or_else(|| Error::Precondition(format!("Hom(R({i}),R({j})) is not cyclic")))?;
        // compositions in module coordinates, compared against the generator
        // expressed in the same coordinates: F = B_i M B_j^{-1}
        let bi = row_basis_matrix(self.p, i)?;
        let bj = row_basis_matrix(self.p, j)?;
        let n = bi.rows();
        let mut g_mod = IntMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let num = bi.get(r, r) * gen.get(r, c);
                g_mod.set(r, c, num / bj.get(c, c));
            }
        }
        let (pr, pc) = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .find(|&(r, c)| !g_mod.get(r, c).is_zero())
            .ok_or_else(|| Error::Precondition("zero hom generator".into()))?;
        let mut coeffs = Vec::new();
        for h in &self.into_free[i - 1] {
            for g in &self.from_free[j - 1] {
                let comp = h * g;
                let (q, rem) = comp.get(pr, pc).div_rem(g_mod.get(pr, pc));
                if !rem.is_zero() || g_mod.scale(&q) != comp {
                    return Err(Error::Precondition(
                        "composition through Λ is not a multiple of the hom generator".into(),
                    ));
                }
                coeffs.push(q);
            }
        }
        let g = gcd_all(coeffs);
        if g.is_zero() {
            return Err(Error::Precondition("no composition through Λ is nonzero".into()));
        }
        Ok(g)
    }
}

/// Reduces a residue into `[1, p)`, rejecting multiples of `p`.
fn unit_residue(c: i64, p: u32) -> Result<(i64, i64)> {
    let c = c.rem_euclid(p as i64);
    let s = inv_mod(c, p as i64).ok_or_else(|| {
        Error::Precondition(format!("residue {c} is not invertible modulo {p}"))
    })?;
    Ok((c, s))
}

/// A unit of `T_{p-1}(Z, p)` whose diagonal is congruent to `residues` at
/// every slot except `free_slot`.
///
/// Built as a product of determinant-one 2×2 blocks, one per constrained
/// slot `i`, each coupling `i` with the free slot: `[[c, k], [p, s]]` on
/// `(i, n)` when `i < n`, `[[s, k], [p, c]]` on `(n, i)` when `i > n`, where
/// `s ≡ c^{-1}` and `cs = 1 + kp`. The `p` always sits below the diagonal.
pub fn bezout_unit(p: u32, free_slot: usize, residues: &[i64]) -> Result<TriMatrix> {
    check_prime(p)?;
    let n = (p - 1) as usize;
    if free_slot < 1 || free_slot > n {
        return Err(Error::Precondition(format!("free slot {free_slot} outside 1..={n}")));
    }
    if residues.len() != n - 1 {
        return Err(Error::Precondition(format!(
            "{} residues given, expected {}",
            residues.len(),
            n - 1
        )));
    }
    let slots = (1..=n).filter(|&i| i != free_slot);
    let mut u = IntMatrix::identity(n);
    for (i, &r) in slots.zip(residues) {
        let (c, s) = unit_residue(r, p)?;
        if c == 1 {
            continue;
        }
        let k = (c * s - 1) / p as i64;
        let mut e = IntMatrix::identity(n);
        let (a, b) = (i.min(free_slot) - 1, i.max(free_slot) - 1);
        let (top, bottom) = if i < free_slot { (c, s) } else { (s, c) };
        e.set(a, a, top);
        e.set(a, b, k);
        e.set(b, a, p as i64);
        e.set(b, b, bottom);
        u = &u * &e;
    }
    TriMatrix::new(p, u)
}

/// Whether `Π residues ≡ ±1 (mod p)`. For a unit `u` of `T_{p-1}(Z, p)`,
/// `det u ≡ Π diag(u) (mod p)`, so this is necessary for a unit with the
/// given diagonal residues to exist.
pub fn diag_residue_obstruction(p: u32, residues: &[i64]) -> bool {
    let pm = p as i64;
    let prod = residues
        .iter()
        .fold(1i64, |acc, &r| acc * r.rem_euclid(pm) % pm);
    prod == 1 || prod == pm - 1
}

/// Generators of the automorphisms of `R(2) ⊕ R(3) ⊕ ... ⊕ R(p-1)`
/// used to realise prescribed `k`-map values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutKind {
    /// `f_(n,1,...,1)`: identity with `n` at (1,2).
    Shear(i64),
    /// `f_(1,0,1,...,1)`: swap of the first two slots.
    Swap,
    /// `f_(0,2,1,...,1)`.
    ScaleTop,
    /// `f_(0,1,2,1,...,1)`.
    ScaleThird,
    /// `f_(0,1,...,(p+1)/2,2,...,1)` with the `2` at the given slot (≥ 4).
    Chain(usize),
    /// `f_(0,c,1,...,1)` for any unit residue `c`: `ScaleTop` with `2`
    /// replaced by `c`.
    BezoutTop(i64),
    /// Identity except for `[[s, k], [p, c]]` on slots `(1, slot)`, giving
    /// residue `c` at `slot ≥ 3`.
    BezoutSlot(usize, i64),
}

impl FromStr for AutKind {
    type Err = Error;

    /// `shear:n`, `swap`, `scale-top`, `scale-third`, `chain:slot`,
    /// `bezout-top:c`, `bezout-slot:slot:c`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| t.parse::<i64>().map_err(|_| Error::UnknownKind(s.to_string()));
        match parts.as_slice() {
            ["shear", n] => Ok(AutKind::Shear(num(n)?)),
            ["swap"] => Ok(AutKind::Swap),
            ["scale-top"] => Ok(AutKind::ScaleTop),
            ["scale-third"] => Ok(AutKind::ScaleThird),
            ["chain", k] => Ok(AutKind::Chain(num(k)? as usize)),
            ["bezout-top", c] => Ok(AutKind::BezoutTop(num(c)?)),
            ["bezout-slot", k, c] => Ok(AutKind::BezoutSlot(num(k)? as usize, num(c)?)),
            _ => Err(Error::UnknownKind(s.to_string())),
        }
    }
}

/// `s ≡ c^{-1}` in `[1, p)` and `k` with `cs = 1 + kp`.
fn bezout_pair(c: i64, p: u32) -> Result<(i64, i64, i64)> {
    let (c, s) = unit_residue(c, p)?;
    Ok((c, s, (c * s - 1) / p as i64))
}

/// The explicit matrix of a generator; checked for shape and determinant.
pub fn kmap_generator(p: u32, kind: AutKind) -> Result<IntMatrix> {
    check_prime(p)?;
    let n = (p - 1) as usize;
    let pi = p as i64;
    let half = (pi + 1) / 2;
    let mut m = IntMatrix::identity(n);
    match kind {
        AutKind::Shear(v) => m.set(0, 1, v),
        AutKind::Swap => {
            m.set(0, 0, 0);
            m.set(1, 1, 0);
            m.set(0, 1, 1);
            m.set(1, 0, 1);
        }
        AutKind::ScaleTop | AutKind::BezoutTop(_) => {
            let (c, s, k) = match kind {
                AutKind::BezoutTop(c) => bezout_pair(c, p)?,
                _ => (2, half, 1),
            };
            if n < 3 {
                return Err(Error::Precondition("needs p ≥ 5".into()));
            }
            m.set(0, 0, s);
            m.set(1, 0, -k);
            m.set(1, 1, c);
            m.set(0, 2, 1);
            m.set(2, 1, pi);
        }
        AutKind::ScaleThird => {
            if n < 3 {
                return Err(Error::Precondition("needs p ≥ 5".into()));
            }
            m.set(0, 0, half);
            m.set(0, 2, 1);
            m.set(2, 0, pi);
            m.set(2, 2, 2);
        }
        AutKind::Chain(slot) => {
            if slot < 4 || slot > n {
                return Err(Error::Precondition(format!("chain slot {slot} outside 4..={n}")));
            }
            let (a, b) = (slot - 2, slot - 1);
            m.set(a, a, half);
            m.set(a, b, 1);
            m.set(b, a, pi);
            m.set(b, b, 2);
        }
        AutKind::BezoutSlot(slot, c) => {
            if slot < 3 || slot > n {
                return Err(Error::Precondition(format!("slot {slot} outside 3..={n}")));
            }
            let (c, s, k) = bezout_pair(c, p)?;
            let b = slot - 1;
            m.set(0, 0, s);
            m.set(0, b, k);
            m.set(b, 0, pi);
            m.set(b, b, c);
        }
    }
    check_endo_shape(p, &m)?;
    if !m.det().abs().is_one() {
        return Err(Error::NotUnimodular(format!("generator {kind:?} has det {}", m.det())));
    }
    Ok(m)
}

/// Endomorphism shape of `R(2) ⊕ R(3) ⊕ ... ⊕ R(p-1)`: rows 1 and 2 are free,
/// every row `i ≥ 3` has entries left of the diagonal divisible by `p`.
pub fn check_endo_shape(p: u32, m: &IntMatrix) -> Result<()> {
    let n = (p - 1) as usize;
    if m.rows() != n || m.cols() != n {
        return Err(Error::Dimension(format!("expected {n}x{n}")));
    }
    let pb = BigInt::from(p);
    for i in 2..n {
        for j in 0..i {
            if !m.get(i, j).is_multiple_of(&pb) {
                return Err(Error::Shape(format!(
                    "entry ({},{}) = {} must be divisible by {p}",
                    i + 1,
                    j + 1,
                    m.get(i, j)
                )));
            }
        }
    }
    Ok(())
}

/// `(a_12, a_22, a_33, ..., a_{p-1,p-1}) mod p`.
pub fn k_map(p: u32, m: &IntMatrix) -> Result<Vec<i64>> {
    check_endo_shape(p, m)?;
    let pb = BigInt::from(p);
    let r = |v: &BigInt| v.mod_floor(&pb).to_i64().expect("small residue");
    let n = m.rows();
    let mut out = vec![r(m.get(0, 1)), r(m.get(1, 1))];
    out.extend((2..n).map(|i| r(m.get(i, i))));
    Ok(out)
}

/// Discrete log of `target` to base 2 mod `p`, when it exists.
fn log2_mod(target: i64, p: u32) -> Option<u32> {
    let pi = p as i64;
    let t = target.rem_euclid(pi);
    let mut v = 1i64;
    for a in 0..p {
        if v == t {
            return Some(a);
        }
        v = v * 2 % pi;
    }
    None
}

fn validate_target(p: u32, target: &[i64]) -> Result<()> {
    check_prime(p)?;
    let n = (p - 1) as usize;
    if n < 3 {
        return Err(Error::Precondition("needs p ≥ 5".into()));
    }
    if target.len() != n {
        return Err(Error::Precondition(format!("target must have {n} entries")));
    }
    let pi = p as i64;
    if target[0].rem_euclid(pi) == 0 && target[1].rem_euclid(pi) == 0 {
        return Err(Error::Precondition("a_12 and a_22 are both zero mod p".into()));
    }
    if let Some(i) = (2..n).find(|&i| target[i].rem_euclid(pi) == 0) {
        return Err(Error::Precondition(format!("a_{0}{0} is zero mod p", i + 1)));
    }
    Ok(())
}

/// Realisation using only the five generator families in their plain
/// form (powers of 2 for every scaling). `None` when some required residue is
/// not a power of 2 mod `p`.
pub fn power_recipe(p: u32, target: &[i64]) -> Result<Option<IntMatrix>> {
    validate_target(p, target)?;
    let n = (p - 1) as usize;
    let pi = p as i64;
    let (a12, a22) = (target[0].rem_euclid(pi), target[1].rem_euclid(pi));
    let top = if a22 != 0 {
        let Some(e) = log2_mod(a22, p) else { return Ok(None) };
        let shear = a12 * inv_mod(a22, pi).expect("unit") % pi;
        &kmap_generator(p, AutKind::Shear(shear))? * &kmap_generator(p, AutKind::ScaleTop)?.pow(e)
    } else {
        let Some(e) = log2_mod(a12, p) else { return Ok(None) };
        &kmap_generator(p, AutKind::Swap)? * &kmap_generator(p, AutKind::ScaleTop)?.pow(e)
    };
    // f_(0,1,..,2 at slot i): slot 3 is ScaleThird; slot i+1 is
    // f_(..2 at i) · Chain(i+1).
    let mut slot_gen = kmap_generator(p, AutKind::ScaleThird)?;
    let mut diag = IntMatrix::identity(n);
    for slot in 3..=n {
        if slot > 3 {
            slot_gen = &slot_gen * &kmap_generator(p, AutKind::Chain(slot))?;
        }
        let Some(e) = log2_mod(target[slot - 1], p) else { return Ok(None) };
        diag = &diag * &slot_gen.pow(e);
    }
    Ok(Some(&top * &diag))
}

/// Realisation valid for every prime: as the power recipe but with each
/// power of a scaling generator replaced by a single Bézout generator for the
/// required residue.
pub fn bezout_recipe(p: u32, target: &[i64]) -> Result<IntMatrix> {
    validate_target(p, target)?;
    let n = (p - 1) as usize;
    let pi = p as i64;
    let (a12, a22) = (target[0].rem_euclid(pi), target[1].rem_euclid(pi));
    let top = if a22 != 0 {
        let shear = a12 * inv_mod(a22, pi).expect("unit") % pi;
        &kmap_generator(p, AutKind::Shear(shear))? * &kmap_generator(p, AutKind::BezoutTop(a22))?
    } else {
        &kmap_generator(p, AutKind::Swap)? * &kmap_generator(p, AutKind::BezoutTop(a12))?
    };
    let mut diag = IntMatrix::identity(n);
    for slot in 3..=n {
        diag = &diag * &kmap_generator(p, AutKind::BezoutSlot(slot, target[slot - 1]))?;
    }
    Ok(&top * &diag)
}

/// An automorphism with the prescribed `k`-map value: the power recipe
/// when it reaches the target, the Bézout variant otherwise. The result is
/// verified (shape, determinant, `k`-map) before it is returned.
pub fn unit_for_k_target(p: u32, target: &[i64]) -> Result<IntMatrix> {
    let m = match power_recipe(p, target)? {
        Some(m) => m,
        None => bezout_recipe(p, target)?,
    };
    let k = k_map(p, &m)?;
    let pi = p as i64;
    let want: Vec<i64> = target.iter().map(|t| t.rem_euclid(pi)).collect();
    if k != want || !m.det().abs().is_one() {
        return Err(Error::Precondition(format!(
            "construction produced k-map {k:?}, det {}",
            m.det()
        )));
    }
    Ok(m)
}

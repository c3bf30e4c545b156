//! End-to-end verification of condition `M(7)` for `G(7,6)`.
//!
//! The chain: build `π`, take `K = ker(α ↦ π·α)`, exhibit the sublattice
//! `R(1) ⊕ R(3) ⊕ R(4) ⊕ R(5) ⊕ R(6)` inside `K`, compute the quotient
//! representation and the extension blocks `C(i)`, `D(i)`, and decide for
//! each `i` that no integer `X_i` splits the extension. Every identity is
//! recomputed in the group ring; the printed matrices only serve as
//! comparison targets.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{
    kernel_basis, lattice_basis, lattice_equal, lattice_intersect, solve_affine_system,
    CoordinateSolver, IntMatrix, Solution, SylvesterBlock,
};
use crate::fixtures::{FixtureSet, BLOCK_INDICES};
use crate::metacyclic::{
    augmentation, build_pi, elements_matrix, ideal_lattice, left_mul_matrix, right_mul_matrix,
    GroupParams, RingElem,
};
use crate::modrep::{
    action_matrices, check_sigma_condition, conjugacy_check, is_isomorphic_to_row,
    quotient_rep_with_lifts, Lattice, Representation,
};
use crate::report::{Report, Status};

fn pr() -> GroupParams {
    GroupParams::p7()
}

fn x_poly(cs: &[i64]) -> RingElem {
    RingElem::x_poly(pr(), cs)
}

fn y_pow(k: i64) -> RingElem {
    RingElem::y_pow(pr(), k)
}

fn x_pow(k: i64) -> RingElem {
    RingElem::x_pow(pr(), k)
}

fn one() -> RingElem {
    RingElem::one(pr())
}

fn x_minus_1() -> RingElem {
    &x_pow(1) - &one()
}

/// `Σ_k f_k(x) · y^k`.
fn y_expansion(parts: &[(i64, RingElem)]) -> RingElem {
    parts
        .iter()
        .fold(RingElem::zero(pr()), |acc, (k, f)| &acc + &(f * &y_pow(*k)))
}

/// `Σ_k y^k · f_k(x)`.
fn y_expansion_left(parts: &[(i64, RingElem)]) -> RingElem {
    parts
        .iter()
        .fold(RingElem::zero(pr()), |acc, (k, f)| &acc + &(&y_pow(*k) * f))
}

/// `e(1..18)`: `(y³+1)(x−1)x^j`, then `(y⁴+y)(x−1)x^j`, then `(y⁵+y²)(x−1)x^j`.
pub fn e_basis_elements() -> Vec<RingElem> {
    let heads = [
        &y_pow(3) + &one(),
        &y_pow(4) + &y_pow(1),
        &y_pow(5) + &y_pow(2),
    ];
    let mut out = Vec::with_capacity(18);
    for head in &heads {
        for j in 0..6 {
            out.push(RingElem::product(pr(), &[head, &x_minus_1(), &x_pow(j)]));
        }
    }
    out
}

/// The 24 elements whose images form a basis of `Λ / ([y³+1) ∩ [x−1))`:
/// `y^i x^j` for `i < 3`, `j < 7`, then `y³, y⁴, y⁵`.
pub fn quotient_basis_elements() -> Vec<RingElem> {
    let mut out = Vec::with_capacity(24);
    for i in 0..3 {
        for j in 0..7 {
            out.push(&y_pow(i) * &x_pow(j));
        }
    }
    out.extend((3..6).map(y_pow));
    out
}

/// Human-readable labels of the quotient basis, in order.
pub fn quotient_basis_labels() -> Vec<String> {
    let mut out = Vec::with_capacity(24);
    for i in 0..3 {
        for j in 0..7 {
            out.push(match (i, j) {
                (0, 0) => "1".to_string(),
                (0, j) => format!("X^{j}"),
                (i, 0) => format!("Y^{i}"),
                (i, j) => format!("Y^{i}X^{j}"),
            });
        }
    }
    out.extend((3..6).map(|i| format!("Y^{i}")));
    out
}

pub fn eta1() -> RingElem {
    let s = &(&one() + &y_pow(1)) + &y_pow(2);
    RingElem::product(pr(), &[&(&y_pow(3) + &one()), &s, &x_poly(&[0, 0, 0, 0, -1, 1])])
}

pub fn eta3() -> RingElem {
    let inner = y_expansion_left(&[
        (0, x_poly(&[0, 0, 0, 1, -1])),
        (1, x_poly(&[0, -1, 0, 0, 0, 0, 1])),
        (2, x_poly(&[0, 0, -1, 0, 0, 1])),
    ]);
    &(&y_pow(3) + &one()) * &inner
}

pub fn eta5() -> RingElem {
    let inner = y_expansion_left(&[
        (0, x_poly(&[0, 0, 0, 0, 0, 1, -1])),
        (1, x_poly(&[-1, 1, 0, -1, 1, -1, 1])),
        (2, x_poly(&[1, -1, 0, 1, -1])),
    ]);
    &(&y_pow(3) + &one()) * &inner
}

pub fn eta4() -> RingElem {
    let inner = y_expansion(&[
        (0, x_poly(&[1, 0, 0, 0, 0, 1])),
        (1, x_poly(&[0, -1, 0, 0, 1, 1])),
        (2, x_poly(&[0, 0, 1, 1, 1, 1])),
        (3, x_poly(&[0, 0, 0, 1, 0, 1])),
        (4, x_poly(&[-1, -1, -2, -1, -1])),
        (5, x_poly(&[0, 0, -1, -1, -1])),
    ]);
    &x_minus_1() * &inner
}

pub fn eta6() -> RingElem {
    RingElem::product(
        pr(),
        &[&x_minus_1(), &x_poly(&[1, 0, 0, 0, 0, 1]), &RingElem::sigma_y(pr())],
    )
}

/// The six residual generators of `ker π̄`, lifted via `Y^i X^j ↦ y^i x^j`:
/// `1+Y³`, `−2−X²−X⁵+Y²`, `2+X²+X⁵+Y⁵`, `−1+X²+2X³+2X⁴+X⁵+Y⁴`,
/// `1−X²−2X³−2X⁴−X⁵+Y`, `1+X+X²+X³+X⁴+X⁵+X⁶`.
pub fn residual_generators() -> Vec<RingElem> {
    vec![
        &one() + &y_pow(3),
        &x_poly(&[-2, 0, -1, 0, 0, -1]) + &y_pow(2),
        &x_poly(&[2, 0, 1, 0, 0, 1]) + &y_pow(5),
        &x_poly(&[-1, 0, 1, 2, 2, 1]) + &y_pow(4),
        &x_poly(&[1, 0, -1, -2, -2, -1]) + &y_pow(1),
        RingElem::sigma_x(pr()),
    ]
}

/// `{u·x^j : 0 ≤ j < 6}`.
fn x_block(u: &RingElem) -> Vec<RingElem> {
    (0..6).map(|j| u * &x_pow(j)).collect()
}

fn regular_act() -> (IntMatrix, IntMatrix) {
    (
        right_mul_matrix(&RingElem::x(pr())),
        right_mul_matrix(&RingElem::y(pr())),
    )
}

/// The lattice `K = {α : π·α = 0}` with the regular right action.
pub fn compute_kernel_k() -> Result<Lattice> {
    let pi = build_pi(pr())?;
    let k = kernel_basis(&left_mul_matrix(&pi));
    let (ax, ay) = regular_act();
    Lattice::new(pr(), k, ax, ay)
}

/// Lattice spanned by the given rows, inside `Λ`.
fn span_lattice(rows: &IntMatrix) -> Result<Lattice> {
    let (ax, ay) = regular_act();
    Lattice::from_generators(pr(), rows, ax, ay)
}

/// Representation on the span of the given independent elements, in that
/// basis.
fn rep_on_elements(elems: &[RingElem]) -> Result<Representation> {
    let m = elements_matrix(pr(), elems);
    let lat = span_lattice(&m)?.with_basis(m)?;
    action_matrices(&lat)
}

fn three_cycle(block: &IntMatrix) -> IntMatrix {
    let mut m = IntMatrix::zeros(18, 18);
    m.set_block(0, 12, block);
    m.set_block(6, 0, block);
    m.set_block(12, 6, block);
    m
}

/// `C(i)`, `D(i)`: the top-right blocks of `φ(x^{-1})`, `φ(y^{-1})` for the
/// summand `R(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionBlocks {
    pub i: usize,
    pub c: IntMatrix,
    pub d: IntMatrix,
}

/// Outcome of the splitting test for one summand.
#[derive(Clone, Debug)]
pub struct KInvariantVerdict {
    pub i: usize,
    /// `C(i) = (θ_i(x^{-1}) − I)X` and `D(i) + X·σ(y^{-1}) = θ_i(y^{-1})X`.
    pub joint: Solution,
    /// `C(i) = (θ_i(x^{-1}) − I)X` alone.
    pub eq7: Solution,
}

impl KInvariantVerdict {
    pub fn solvable(&self) -> bool {
        self.joint.is_solvable()
    }

    pub fn eq7_solvable(&self) -> bool {
        self.eq7.is_solvable()
    }
}

fn describe(sol: &Solution) -> String {
    match sol {
        Solution::Solvable(x) => format!("integer solution exists, e.g. X =\n{x}"),
        Solution::Unsolvable(c) => format!("no integer solution: {c}"),
    }
}

/// Decides both splitting systems exactly.
pub fn k_invariant_verdict(
    blocks: &ExtensionBlocks,
    theta_x: &IntMatrix,
    theta_y: &IntMatrix,
    sigma_y: &IntMatrix,
) -> Result<KInvariantVerdict> {
    let n = theta_x.rows();
    let eq7 = SylvesterBlock::new(
        theta_x - &IntMatrix::identity(n),
        IntMatrix::zeros(sigma_y.rows(), sigma_y.rows()),
        blocks.c.clone(),
    );
    let eq8 = SylvesterBlock::new(theta_y.clone(), sigma_y.clone(), blocks.d.clone());
    Ok(KInvariantVerdict {
        i: blocks.i,
        joint: solve_affine_system(&[eq7.clone(), eq8])?,
        eq7: solve_affine_system(&[eq7])?,
    })
}

/// Test hooks that deliberately break the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Replace the extension data of summand `i` by the split one
    /// (`C(i) = 0`; the group relations then force `D(i) = 0`).
    ZeroBlock(usize),
    /// Double the first row of `h`, so `det h = 2`.
    CorruptH,
}

impl FromStr for Mutation {
    type Err = Error;

    /// `C4=0` or `h`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("h") || t.eq_ignore_ascii_case("corrupt-h") {
            return Ok(Mutation::CorruptH);
        }
        let bad = || Error::InvalidParams(format!("unknown mutation '{s}' (expected e.g. C4=0 or h)"));
        let rest = t.strip_prefix('C').or_else(|| t.strip_prefix('c')).ok_or_else(bad)?;
        let (idx, val) = rest.split_once('=').ok_or_else(bad)?;
        let i: usize = idx.parse().map_err(|_| bad())?;
        if val.trim() != "0" || !BLOCK_INDICES.contains(&i) {
            return Err(bad());
        }
        Ok(Mutation::ZeroBlock(i))
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mutation::ZeroBlock(i) => write!(f, "C{i}=0"),
            Mutation::CorruptH => write!(f, "h"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct M7Options {
    /// Base the headline verdicts on the x-equation `C(i) = (θ_i(x⁻¹) − I)X` alone.
    pub eq7_only: bool,
    #[serde(skip)]
    pub mutations: Vec<Mutation>,
    /// Column order for the 24-element quotient basis (a permutation of
    /// `0..24`).
    pub basis_perm: Option<Vec<usize>>,
    pub seed: u64,
    pub rebasings: usize,
}

impl Default for M7Options {
    fn default() -> Self {
        Self {
            eq7_only: false,
            mutations: Vec::new(),
            basis_perm: None,
            seed: 0x005e_edd2,
            rebasings: 20,
        }
    }
}

/// Reads a permutation of `0..24`: whitespace- or comma-separated indices.
pub fn parse_basis_perm(text: &str) -> Result<Vec<usize>> {
    let perm: Vec<usize> = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse { line: 1, msg: format!("bad index '{t}'") })
        })
        .collect::<Result<_>>()?;
    validate_perm(&perm)?;
    Ok(perm)
}

fn validate_perm(perm: &[usize]) -> Result<()> {
    let mut seen = [false; 24];
    if perm.len() != 24 {
        return Err(Error::InvalidParams(format!("permutation has {} entries, expected 24", perm.len())));
    }
    for &i in perm {
        if i >= 24 || seen[i] {
            return Err(Error::InvalidParams("not a permutation of 0..24".into()));
        }
        seen[i] = true;
    }
    Ok(())
}

/// `π̄_*` in the quotient basis (columns) and the basis `{π·x^i}` (rows).
pub fn build_pibar_matrix(perm: Option<&[usize]>) -> Result<IntMatrix> {
    let pi = build_pi(pr())?;
    let image = elements_matrix(pr(), &x_block(&pi));
    let solver = CoordinateSolver::new(&image);
    let qb = quotient_basis_elements();
    let order: Vec<usize> = match perm {
        Some(p) => {
            validate_perm(p)?;
            p.to_vec()
        }
        None => (0..24).collect(),
    };
    let mut m = IntMatrix::zeros(6, 24);
    for (col, &idx) in order.iter().enumerate() {
        let v = (&pi * &qb[idx]).coeffs().to_vec();
        let c = solver
            .coords(&v)
            .ok_or_else(|| Error::Precondition(format!("π·{} is outside [π)", quotient_basis_labels()[idx])))?;
        for (row, val) in c.into_iter().enumerate() {
            m.set(row, col, val);
        }
    }
    Ok(m)
}

/// Every intermediate object of the chain.
struct Chain<'a> {
    fx: &'a FixtureSet,
    h: IntMatrix,
    pi: RingElem,
    k: Lattice,
    e: Vec<RingElem>,
    hb: IntMatrix,
    eta4_block: Vec<RingElem>,
    eta6_block: Vec<RingElem>,
    res: Vec<RingElem>,
    rho: Option<Representation>,
    sigma: Option<Representation>,
    blocks: BTreeMap<usize, ExtensionBlocks>,
    full_basis: Option<IntMatrix>,
}

const LABEL: &str = "M(7) chain";

impl<'a> Chain<'a> {
    fn new(fx: &'a FixtureSet, opts: &M7Options) -> Result<Self> {
        let mut h = fx.h.clone();
        if opts.mutations.contains(&Mutation::CorruptH) {
            for j in 0..h.cols() {
                let v = h.get(0, j) * 2;
                h.set(0, j, v);
            }
        }
        let e = e_basis_elements();
        let em = elements_matrix(pr(), &e);
        let hb = &h.transpose() * &em;
        Ok(Self {
            fx,
            h,
            pi: build_pi(pr())?,
            k: compute_kernel_k()?,
            e,
            hb,
            eta4_block: x_block(&eta4()),
            eta6_block: x_block(&eta6()),
            res: residual_generators(),
            rho: None,
            sigma: None,
            blocks: BTreeMap::new(),
            full_basis: None,
        })
    }

    fn pi_module(&self, r: &mut Report) -> Result<()> {
        let pi = &self.pi;
        let v = pi * &x_poly(&[1, 0, 1]);
        r.check(
            "pi.factor",
            "v = π(1+x²) satisfies v(1+x)(1+x⁴) = π",
            &(&v * &x_poly(&[1, 1])) * &x_poly(&[1, 0, 0, 0, 1]) == *pi,
            "",
            LABEL,
        );
        r.check(
            "pi.v_y",
            "v·y = −v·(1+x)",
            (&(&v * &y_pow(1)) + &(&v * &x_poly(&[1, 1]))).is_zero(),
            "",
            LABEL,
        );
        r.check(
            "pi.norm",
            "ε(π) = 0 and π·Σ = 0",
            augmentation(pi).is_zero() && (pi * &RingElem::sigma_x(pr())).is_zero(),
            "",
            LABEL,
        );
        r.check(
            "pi.y_reduction",
            "π·y = π(−1+x²+2x³+2x⁴+x⁵)",
            pi * &y_pow(1) == pi * &x_poly(&[-1, 0, 1, 2, 2, 1]),
            "",
            LABEL,
        );
        let lat_pi = ideal_lattice(std::slice::from_ref(pi))?;
        let lat_v = ideal_lattice(&[v])?;
        r.check("pi.same_ideal", "[v) = [π)", lattice_equal(lat_pi.basis(), lat_v.basis()), "", LABEL);
        r.check(
            "pi.rank",
            "rank [π) = 6",
            lat_pi.rank() == 6,
            format!("rank {}", lat_pi.rank()),
            LABEL,
        );
        r.check("pi.iso_r1", "[π) ≅ R(1)", is_isomorphic_to_row(&lat_pi, 1), "", LABEL);
        Ok(())
    }

    fn kernel(&self, r: &mut Report) -> Result<()> {
        r.check(
            "kernel.rank",
            "K = ker(π_*) has rank 36 and is closed under the action",
            self.k.rank() == 36,
            format!("rank {}", self.k.rank()),
            LABEL,
        );
        let em = elements_matrix(pr(), &self.e);
        r.check(
            "kernel.contains_e",
            "all e(i) lie in K",
            self.k.contains_lattice(&span_lattice(&em)?),
            "",
            LABEL,
        );
        let etas = elements_matrix(pr(), &[eta4(), eta6()]);
        r.check(
            "kernel.contains_eta",
            "η(4), η(6) lie in K",
            (0..2).all(|i| self.k.contains(etas.row(i))),
            "",
            LABEL,
        );
        Ok(())
    }

    fn e_basis(&self, r: &mut Report) -> Result<()> {
        let first = &(&y_pow(3) + &one()) * &x_minus_1();
        r.check("ebasis.first", "e(1) = (y³+1)(x−1)", self.e[0] == first, "", LABEL);
        let em = elements_matrix(pr(), &self.e);
        let rank = em.rank();
        r.check("ebasis.rank", "the 18 elements e(i) are independent", rank == 18, format!("rank {rank}"), LABEL);
        let a = ideal_lattice(&[&y_pow(3) + &one()])?;
        let b = ideal_lattice(&[x_minus_1()])?;
        let inter = lattice_intersect(a.basis(), b.basis())?;
        r.check(
            "ebasis.span",
            "the e(i) span [y³+1) ∩ [x−1)",
            inter.rows() == 18 && lattice_equal(&inter, &em),
            format!("intersection rank {}", inter.rows()),
            LABEL,
        );
        let l = rep_on_elements(&self.e)?;
        let lp = Representation::unchecked(pr(), self.fx.lprime_x.clone(), self.fx.lprime_y.clone());
        let lx = IntMatrix::block_diag(&[lp.x(), lp.x(), lp.x()]);
        let ly = three_cycle(lp.y());
        r.check(
            "ebasis.lprime",
            "L′ satisfies the group relations and M(Σ)",
            lp.relation_failures().is_empty() && check_sigma_condition(&lp),
            lp.relation_failures().join("; "),
            LABEL,
        );
        r.check(
            "ebasis.L_x",
            "L(x⁻¹) = diag(L′(x⁻¹), L′(x⁻¹), L′(x⁻¹))",
            *l.x() == lx,
            "",
            LABEL,
        );
        r.check(
            "ebasis.L_y",
            "L(y⁻¹) is the 3-cycle block permutation of L′(y⁻¹)",
            *l.y() == ly,
            "",
            LABEL,
        );
        Ok(())
    }

    fn theta(&self, k: usize) -> Representation {
        let (tx, ty) = self.fx.theta(k);
        Representation::unchecked(pr(), tx.clone(), ty.clone())
    }

    fn h_conjugation(&self, r: &mut Report) -> Result<bool> {
        let det = self.h.det();
        let det_ok = r.check("h.det", "det h = 1", det == BigInt::from(1), format!("det {det}"), LABEL);
        if !det_ok {
            return Ok(false);
        }
        let t135 = Representation::direct_sum(&[&self.theta(1), &self.theta(3), &self.theta(5)])?;
        let l = rep_on_elements(&self.e)?;
        let conj = conjugacy_check(&self.h, &t135, &l)?;
        r.check("h.conj", "h·θ_{1,3,5}(g)·h⁻¹ = L(g) for g = x⁻¹, y⁻¹", conj, "", LABEL);
        let hb_rep = {
            let lat = span_lattice(&self.hb)?.with_basis(self.hb.clone())?;
            action_matrices(&lat)?
        };
        r.check(
            "h.basis",
            "the basis Σ_i h_ij e(i) carries θ_1 ⊕ θ_3 ⊕ θ_5",
            hb_rep == t135,
            "",
            LABEL,
        );
        let mut all = conj && hb_rep == t135;
        for (n, (k, eta)) in [(1, eta1()), (3, eta3()), (5, eta5())].into_iter().enumerate() {
            let block = self.hb.submatrix(6 * n, 6 * n + 6, 0, 42);
            let (sign, power) = crate::modrep::char_condition(k).expect("row index");
            let lhs = &eta * &y_pow(1);
            let rhs = (&eta * &x_poly(&[1, 1]).pow(power)).scale(&BigInt::from(sign));
            let lat = span_lattice(&block)?;
            let gen = span_lattice(&elements_matrix(pr(), &x_block(&eta)))?;
            let sub = lat.submodule(&eta.to_row())?;
            let ok = lhs == rhs
                && lattice_equal(sub.basis(), lat.basis())
                && lattice_equal(gen.basis(), lat.basis())
                && is_isomorphic_to_row(&sub, k);
            all &= r.check(
                format!("h.eta{k}"),
                format!("η({k}) generates the θ_{k} block and [η({k})) ≅ R({k})"),
                ok,
                "",
                LABEL,
            );
        }
        Ok(all)
    }

    fn eta_elements(&self, r: &mut Report) -> Result<()> {
        let (e4, e6) = (eta4(), eta6());
        r.check("eta.pi4", "π·η(4) = 0", (&self.pi * &e4).is_zero(), "", LABEL);
        r.check("eta.pi6", "π·η(6) = 0", (&self.pi * &e6).is_zero(), "", LABEL);
        r.check("eta.y6", "η(6)·y = η(6)", &e6 * &y_pow(1) == e6, "", LABEL);
        r.check("eta.y4", "η(4)·y = η(4)(1+x)", &e4 * &y_pow(1) == &e4 * &x_poly(&[1, 1]), "", LABEL);
        r.check("eta.aug6", "ε(η(6)) = 0", augmentation(&e6).is_zero(), "", LABEL);
        for (k, block) in [(4, &self.eta4_block), (6, &self.eta6_block)] {
            let rep = rep_on_elements(block)?;
            let lat = span_lattice(&elements_matrix(pr(), block))?;
            r.check(
                format!("eta.iso{k}"),
                format!("[η({k})) ≅ R({k}) and the basis η({k})x^j carries θ_{k}"),
                is_isomorphic_to_row(&lat, k) && rep == self.theta(k),
                "",
                LABEL,
            );
        }
        Ok(())
    }

    fn pibar(&self, r: &mut Report, perm: Option<&[usize]>) -> Result<()> {
        let m = build_pibar_matrix(perm)?;
        let expected = &self.fx.pibar;
        let labels = quotient_basis_labels();
        let order: Vec<usize> = perm.map(|p| p.to_vec()).unwrap_or_else(|| (0..24).collect());
        let mismatched: Vec<String> = (0..24)
            .filter(|&c| m.col_vec(c) != expected.col_vec(c))
            .map(|c| format!("column {} ({})", c + 1, labels[order[c]]))
            .collect();
        let status = if mismatched.is_empty() { Status::Pass } else { Status::Warn };
        r.push(
            "pibar.match",
            "6×24 matrix of π̄_* equals the printed matrix",
            status,
            if mismatched.is_empty() {
                String::new()
            } else {
                format!("differs in {}", mismatched.join(", "))
            },
            LABEL,
        );
        let ker = kernel_basis(&m.transpose());
        r.check(
            "pibar.kernel",
            "ker π̄_* has rank 18",
            ker.rows() == 18,
            format!("rank {}", ker.rows()),
            LABEL,
        );
        Ok(())
    }

    fn quotient_and_rho(&mut self, r: &mut Report) -> Result<bool> {
        // split Λ = ([y³+1) ∩ [x−1)) ⊕ span(quotient basis)
        let em = elements_matrix(pr(), &self.e);
        let qm = elements_matrix(pr(), &quotient_basis_elements());
        let full = em.vstack(&qm)?;
        let solver = CoordinateSolver::new(&full);
        let images = |els: &[RingElem]| -> Result<IntMatrix> {
            let c = solver
                .coords_matrix(&elements_matrix(pr(), els))
                .ok_or_else(|| Error::Precondition("element outside Λ".into()))?;
            Ok(c.submatrix(0, els.len(), 18, 42))
        };
        let in_k = self.res.iter().all(|g| (&self.pi * g).is_zero());
        r.check("rho.residuals", "the six residual generators lie in K", in_k, "", LABEL);
        let mut gens: Vec<RingElem> = self.eta4_block.clone();
        gens.extend(self.eta6_block.iter().cloned());
        gens.extend(self.res.iter().cloned());
        let img = images(&gens)?;
        let pibar = build_pibar_matrix(None)?;
        let ker = kernel_basis(&pibar.transpose());
        let spans = (&img * &pibar.transpose()).is_zero() && img.rows() == 18 && lattice_equal(&img, &ker);
        r.check(
            "rho.quotient_basis",
            "images of η(4)x^j, η(6)x^j and the residual generators form a basis of ker π̄_*",
            spans,
            "",
            LABEL,
        );
        let sub_rows: Vec<RingElem> = self
            .e
            .iter()
            .chain(&self.eta4_block)
            .chain(&self.eta6_block)
            .cloned()
            .collect();
        let sub = span_lattice(&elements_matrix(pr(), &sub_rows))?;
        let lifts = elements_matrix(pr(), &self.res);
        let q = quotient_rep_with_lifts(&self.k, &sub, &lifts)?;
        let rho = q.rep;
        r.check("rho.x", "ρ(x⁻¹) = I", rho.x().is_identity(), "", LABEL);
        let st = if *rho.y() == self.fx.rho_y { Status::Pass } else { Status::Warn };
        r.push(
            "rho.match",
            "ρ(y⁻¹) equals the printed matrix",
            st,
            if st == Status::Warn { format!("computed\n{}", rho.y()) } else { String::new() },
            LABEL,
        );
        let sigma = Representation::cyclic_regular(pr());
        let finv = self.fx.f.inverse_unimodular()?;
        let conj = conjugacy_check(&finv, &rho, &sigma)?;
        r.check("rho.sigma", "f⁻¹·ρ(g)·f = σ(g)", conj, "", LABEL);
        r.check(
            "rho.sigma_order",
            "σ(y⁻¹)⁶ = I",
            sigma.y().pow(6).is_identity(),
            "",
            LABEL,
        );
        self.rho = Some(rho);
        self.sigma = Some(sigma);
        Ok(conj)
    }

    /// Full basis `[θ_1, θ_3 blocks of h, η(4) block, θ_5 block, η(6) block, q′]`
    /// with `q′_j = Σ_i f_ij · res_i`.
    fn assemble_full_basis(&self) -> Result<IntMatrix> {
        let rm = elements_matrix(pr(), &self.res);
        let qprime = &self.fx.f.transpose() * &rm;
        let e4 = elements_matrix(pr(), &self.eta4_block);
        let e6 = elements_matrix(pr(), &self.eta6_block);
        IntMatrix::vstack_all(&[
            &self.hb.submatrix(0, 6, 0, 42),
            &self.hb.submatrix(6, 12, 0, 42),
            &e4,
            &self.hb.submatrix(12, 18, 0, 42),
            &e6,
            &qprime,
        ])
    }

    fn blocks_from_basis(&self, basis: &IntMatrix) -> Result<(Representation, BTreeMap<usize, ExtensionBlocks>)> {
        let lat = self.k.with_basis(basis.clone())?;
        let phi = action_matrices(&lat)?;
        let mut out = BTreeMap::new();
        for (n, &i) in BLOCK_INDICES.iter().enumerate() {
            out.insert(
                i,
                ExtensionBlocks {
                    i,
                    c: phi.x().submatrix(6 * n, 6 * n + 6, 30, 36),
                    d: phi.y().submatrix(6 * n, 6 * n + 6, 30, 36),
                },
            );
        }
        Ok((phi, out))
    }

    fn extract(&mut self, r: &mut Report) -> Result<bool> {
        let fb = self.assemble_full_basis()?;
        let eq = lattice_equal(&fb, self.k.basis()) && fb.rows() == 36;
        r.check(
            "kernel.assembled",
            "the assembled 36-element basis spans K",
            eq,
            "",
            LABEL,
        );
        if !eq {
            return Ok(false);
        }
        let (phi, blocks) = self.blocks_from_basis(&fb)?;
        let fails = phi.relation_failures();
        r.check("phi.relations", "φ satisfies the group relations", fails.is_empty(), fails.join("; "), LABEL);
        let sigma = self.sigma.clone().expect("sigma computed");
        let mut diag_ok = phi.x().submatrix(30, 36, 30, 36).is_identity()
            && phi.y().submatrix(30, 36, 30, 36) == *sigma.y();
        for (n, &i) in BLOCK_INDICES.iter().enumerate() {
            let t = self.theta(i);
            diag_ok &= phi.x().submatrix(6 * n, 6 * n + 6, 6 * n, 6 * n + 6) == *t.x()
                && phi.y().submatrix(6 * n, 6 * n + 6, 6 * n, 6 * n + 6) == *t.y();
        }
        r.check(
            "phi.diagonal",
            "diagonal blocks of φ are θ_1, θ_3, θ_4, θ_5, θ_6, σ",
            diag_ok,
            "",
            LABEL,
        );
        for (i, b) in &blocks {
            for (name, got, want) in [("C", &b.c, &self.fx.c[i]), ("D", &b.d, &self.fx.d[i])] {
                let same = got == want;
                r.push(
                    format!("blocks.{name}{i}"),
                    format!("{name}({i}) equals the printed matrix"),
                    if same { Status::Pass } else { Status::Warn },
                    if same { String::new() } else { format!("computed\n{got}") },
                    LABEL,
                );
            }
        }
        self.full_basis = Some(fb);
        self.blocks = blocks;
        Ok(fails.is_empty() && diag_ok)
    }

    fn verdicts(&self, r: &mut Report, opts: &M7Options) -> Result<()> {
        let sigma = self.sigma.clone().expect("sigma computed");
        let mut blocks = self.blocks.clone();
        for m in &opts.mutations {
            if let Mutation::ZeroBlock(i) = m {
                if let Some(b) = blocks.get_mut(i) {
                    b.c = IntMatrix::zeros(6, 6);
                    b.d = IntMatrix::zeros(6, 6);
                }
            }
        }
        let mut flags = BTreeMap::new();
        for (&i, b) in &blocks {
            let t = self.theta(i);
            let v = k_invariant_verdict(b, t.x(), t.y(), sigma.y())?;
            let headline = if opts.eq7_only { &v.eq7 } else { &v.joint };
            let (id, what) = if opts.eq7_only {
                (format!("verdict.{i}.eq7"), format!("no integer X_{i} with C({i}) = (θ_{i}(x⁻¹) − I)X_{i}"))
            } else {
                (
                    format!("verdict.{i}"),
                    format!("no integer X_{i} solves both splitting equations for R({i})"),
                )
            };
            r.check(id, what, !headline.is_solvable(), describe(headline), LABEL);
            if !opts.eq7_only {
                r.push(
                    format!("verdict.{i}.eq7"),
                    format!("the x-equation alone has no integer solution for R({i})"),
                    if v.eq7_solvable() { Status::Fail } else { Status::Pass },
                    describe(&v.eq7),
                    LABEL,
                );
            }
            flags.insert(i, (v.solvable(), v.eq7_solvable()));
        }
        if opts.rebasings > 0 {
            let fb = self.full_basis.clone().expect("basis assembled");
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut stable = true;
            let mut detail = String::new();
            for round in 0..opts.rebasings {
                // q′ ↦ q′ + T·(sublattice rows): unipotent block change
                let mut t = IntMatrix::zeros(6, 30);
                for a in 0..6 {
                    for b in 0..30 {
                        t.set(a, b, rng.gen_range(-3i64..=3));
                    }
                }
                let sub = fb.submatrix(0, 30, 0, 42);
                let lifts = &fb.submatrix(30, 36, 0, 42) + &(&t * &sub);
                let nb = sub.vstack(&lifts)?;
                let (_, nblocks) = self.blocks_from_basis(&nb)?;
                for (&i, b) in &nblocks {
                    if opts.mutations.contains(&Mutation::ZeroBlock(i)) {
                        continue;
                    }
                    let th = self.theta(i);
                    let v = k_invariant_verdict(b, th.x(), th.y(), sigma.y())?;
                    if (v.solvable(), v.eq7_solvable()) != flags[&i] {
                        stable = false;
                        detail.push_str(&format!("round {round}: verdict for i={i} changed\n"));
                    }
                }
            }
            r.check(
                "verdict.rebasing",
                format!("verdicts unchanged under {} random unipotent changes of the quotient lifts", opts.rebasings),
                stable,
                detail,
                LABEL,
            );
        }
        Ok(())
    }
}

/// The `[π) ≅ R(1)` chain of identities.
pub fn verify_pi_module() -> Result<Report> {
    let fx = FixtureSet::builtin();
    let chain = Chain::new(&fx, &M7Options::default())?;
    let mut r = Report::new("pi-module");
    chain.pi_module(&mut r)?;
    Ok(r)
}

pub fn verify_e_basis(fx: &FixtureSet) -> Result<Report> {
    let chain = Chain::new(fx, &M7Options::default())?;
    let mut r = Report::new("e-basis");
    chain.e_basis(&mut r)?;
    Ok(r)
}

pub fn verify_h_conjugation(fx: &FixtureSet) -> Result<Report> {
    let chain = Chain::new(fx, &M7Options::default())?;
    let mut r = Report::new("h-conjugation");
    chain.h_conjugation(&mut r)?;
    Ok(r)
}

pub fn verify_eta_elements(fx: &FixtureSet) -> Result<Report> {
    let chain = Chain::new(fx, &M7Options::default())?;
    let mut r = Report::new("eta-elements");
    chain.eta_elements(&mut r)?;
    Ok(r)
}

/// `ρ` on `K / (R(1) ⊕ R(3) ⊕ R(4) ⊕ R(5) ⊕ R(6))`, in the residual
/// generator basis, after all checks of that step pass.
pub fn build_quotient_and_rho(fx: &FixtureSet) -> Result<Representation> {
    let mut chain = Chain::new(fx, &M7Options::default())?;
    let mut r = Report::new("rho");
    chain.quotient_and_rho(&mut r)?;
    if let Some(c) = r.first_failure() {
        return Err(Error::Precondition(format!("{}: {}", c.id, c.description)));
    }
    Ok(chain.rho.expect("rho computed"))
}

/// Extension blocks for every summand, computed from the assembled basis.
pub fn extract_all_blocks(fx: &FixtureSet) -> Result<BTreeMap<usize, ExtensionBlocks>> {
    let mut chain = Chain::new(fx, &M7Options::default())?;
    let mut r = Report::new("blocks");
    chain.quotient_and_rho(&mut r)?;
    chain.extract(&mut r)?;
    if let Some(c) = r.first_failure() {
        return Err(Error::Precondition(format!("{}: {}", c.id, c.description)));
    }
    Ok(chain.blocks)
}

pub fn extract_blocks(fx: &FixtureSet, i: usize) -> Result<ExtensionBlocks> {
    extract_all_blocks(fx)?
        .remove(&i)
        .ok_or_else(|| Error::Precondition(format!("no summand R({i}); valid indices are 1, 3, 4, 5, 6")))
}

/// Runs the whole chain. Steps run in order; after the first step with a
/// failing check the remaining steps are recorded as skipped.
pub fn verify_m7(fx: &FixtureSet, opts: &M7Options) -> Result<Report> {
    let mut r = Report::new("m7");
    if let Some(p) = &opts.basis_perm {
        validate_perm(p)?;
    }
    let mut chain = Chain::new(fx, opts)?;
    let steps = [
        "pi-module",
        "kernel",
        "e-basis",
        "h-conjugation",
        "eta-elements",
        "pibar",
        "quotient-rho",
        "blocks",
        "verdicts",
    ];
    for (n, step) in steps.iter().enumerate() {
        match *step {
            "pi-module" => chain.pi_module(&mut r)?,
            "kernel" => chain.kernel(&mut r)?,
            "e-basis" => chain.e_basis(&mut r)?,
            "h-conjugation" => {
                chain.h_conjugation(&mut r)?;
            }
            "eta-elements" => chain.eta_elements(&mut r)?,
            "pibar" => chain.pibar(&mut r, opts.basis_perm.as_deref())?,
            "quotient-rho" => {
                chain.quotient_and_rho(&mut r)?;
            }
            "blocks" => {
                chain.extract(&mut r)?;
            }
            _ => chain.verdicts(&mut r, opts)?,
        }
        if !r.passed() {
            for rest in &steps[n + 1..] {
                r.push(format!("step.{rest}"), format!("step {rest}"), Status::Skip, "halted after an earlier failure", LABEL);
            }
            break;
        }
    }
    let ok = r.passed();
    r.check(
        "m7.certificate",
        "condition M(7): every extension block has a non-zero k-invariant",
        ok,
        if ok {
            "summands R(1), R(3), R(4), R(5), R(6); R(2) does not occur in K".to_string()
        } else {
            format!("first failure: {}", r.first_failure().map(|c| c.id.clone()).unwrap_or_default())
        },
        LABEL,
    );
    Ok(r)
}

/// Rank of `[y³+1) ∩ [x−1)` computed from the two ideals.
pub fn intersection_rank() -> Result<usize> {
    let a = ideal_lattice(&[&y_pow(3) + &one()])?;
    let b = ideal_lattice(&[x_minus_1()])?;
    Ok(lattice_basis(&lattice_intersect(a.basis(), b.basis())?).rows())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_elements_lie_in_kernel() {
        let pi = build_pi(pr()).unwrap();
        for e in e_basis_elements() {
            assert!((&pi * &e).is_zero());
        }
    }

    #[test]
    fn eta_identities() {
        let (e4, e6) = (eta4(), eta6());
        assert_eq!(&e6 * &y_pow(1), e6);
        assert_eq!(&e4 * &y_pow(1), &e4 * &x_poly(&[1, 1]));
    }

    #[test]
    fn pibar_columns() {
        let m = build_pibar_matrix(None).unwrap();
        assert_eq!(m.col_vec(0), IntMatrix::from_i64_rows(&[[1, 0, 0, 0, 0, 0]]).row_vec(0));
        assert_eq!(m.col_vec(6), vec![BigInt::from(-1); 6]);
        assert_eq!(m.col_vec(21), IntMatrix::from_i64_rows(&[[-1, 0, 0, 0, 0, 0]]).row_vec(0));
    }

    #[test]
    fn trivial_blocks_are_solvable() {
        let fx = FixtureSet::builtin();
        let (tx, ty) = fx.theta(4);
        let sigma = Representation::cyclic_regular(pr());
        let b = ExtensionBlocks { i: 4, c: IntMatrix::zeros(6, 6), d: IntMatrix::zeros(6, 6) };
        let v = k_invariant_verdict(&b, tx, ty, sigma.y()).unwrap();
        assert!(v.solvable());
        assert!(v.joint.solution().unwrap().is_zero());
    }

    #[test]
    fn mutation_parsing() {
        assert_eq!("C4=0".parse::<Mutation>().unwrap(), Mutation::ZeroBlock(4));
        assert_eq!("h".parse::<Mutation>().unwrap(), Mutation::CorruptH);
        assert!("C2=0".parse::<Mutation>().is_err());
        assert!("C4=1".parse::<Mutation>().is_err());
    }

    #[test]
    fn perm_parsing() {
        let text: Vec<String> = (0..24).rev().map(|i| i.to_string()).collect();
        assert_eq!(parse_basis_perm(&text.join(" ")).unwrap()[0], 23);
        assert!(parse_basis_perm("0 1 2").is_err());
    }
}

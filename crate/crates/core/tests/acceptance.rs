//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//! Run with `cargo test -p metacyclic-d2 --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use metacyclic_d2::exactlin::{hnf, kernel_basis, snf, solve_right, IntMatrix, Solution};
use metacyclic_d2::fixtures::{FixtureSet, BLOCK_INDICES};
use metacyclic_d2::m7pipeline::{compute_kernel_k, verify_e_basis, verify_m7, verify_pi_module, M7Options, Mutation};
use metacyclic_d2::metacyclic::GroupParams;
use metacyclic_d2::modrep::{check_sigma_condition, fullness_automorphism_check, Representation};
use metacyclic_d2::report::{Report, Status};
use metacyclic_d2::trimat::{
    bezout_unit, check_row_certificate, diag_residue_obstruction, lambda_fixture, row_certificates_p7,
    unit_for_k_target, HomDerContext,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Duration, limit: Duration) -> Result<(), String> {
    ensure(t < limit, format!("took {t:?}, limit {limit:?}"))
}

fn all_pass(r: &Report, ids: &[&str]) -> Result<(), String> {
    for id in ids {
        match r.find(id) {
            Some(c) if c.status == Status::Pass => {}
            Some(c) => return Err(format!("{id}: {} {}", c.status, c.detail)),
            None => return Err(format!("{id}: not reported")),
        }
    }
    Ok(())
}

fn c1_fixtures() -> Outcome {
    let t = Instant::now();
    let lf = lambda_fixture(7).map_err(|e| e.to_string())?;
    ensure(lf.lx.matrix().pow(7).is_identity(), "λ(x⁻¹)⁷ ≠ I")?;
    ensure(lf.ly.matrix().pow(6).is_identity(), "λ(y⁻¹)⁶ ≠ I")?;
    ensure(lf.discrepancies().is_empty(), format!("{:?}", lf.discrepancies()))?;
    let fx = FixtureSet::builtin();
    let p = GroupParams::p7();
    for k in 1..=6 {
        let (x, y) = fx.theta(k);
        let rep = Representation::unchecked(p, x.clone(), y.clone());
        ensure(rep.relation_failures().is_empty(), format!("θ_{k} relations"))?;
        ensure(check_sigma_condition(&rep), format!("θ_{k} M(Σ)"))?;
    }
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!("λ and θ_1..θ_6 ({:?})", t.elapsed()))
}

fn c2_row_certificates() -> Outcome {
    let t = Instant::now();
    let lf = lambda_fixture(7).map_err(|e| e.to_string())?;
    for cert in row_certificates_p7() {
        let c = check_row_certificate(&lf, &cert).map_err(|e| e.to_string())?;
        ensure(c.holds, format!("v_{} fails", cert.k))?;
    }
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!("v_1..v_6 ({:?})", t.elapsed()))
}

fn c3_hom_tables() -> Outcome {
    let t = Instant::now();
    let lf = lambda_fixture(7).map_err(|e| e.to_string())?;
    let mut ctx = HomDerContext::new(7, &lf).map_err(|e| e.to_string())?;
    for i in 1..=6 {
        for j in 1..=6 {
            let (hom, order) = ctx.order_cached(i, j).map_err(|e| e.to_string())?;
            let gen = if i >= j { 1 } else { 7 };
            ensure(hom.rank() == 1, format!("rank Hom({i},{j}) = {}", hom.rank()))?;
            ensure(hom.scalar_generator() == Some(BigInt::from(gen)), format!("generator of Hom({i},{j})"))?;
            let want = if i == j { 7 } else { 1 };
            ensure(order == BigInt::from(want), format!("|Hom_Der({i},{j})| = {order}"))?;
        }
    }
    within(t.elapsed(), Duration::from_secs(30))?;
    Ok(format!("36 cells ({:?})", t.elapsed()))
}

fn c4_pi_module() -> Outcome {
    let t = Instant::now();
    let r = verify_pi_module().map_err(|e| e.to_string())?;
    all_pass(&r, &["pi.factor", "pi.v_y", "pi.iso_r1", "pi.rank"])?;
    let k = compute_kernel_k().map_err(|e| e.to_string())?;
    ensure(k.rank() == 36, format!("rank K = {}", k.rank()))?;
    within(t.elapsed(), Duration::from_secs(5))?;
    Ok(format!("rank K = 36 ({:?})", t.elapsed()))
}

fn c5_intersection(fx: &FixtureSet) -> Outcome {
    let r = verify_e_basis(fx).map_err(|e| e.to_string())?;
    all_pass(&r, &["ebasis.rank", "ebasis.span", "ebasis.L_x", "ebasis.L_y"])?;
    Ok("e(1..18) span [y³+1) ∩ [x−1)".into())
}

fn c6_conjugations(m7: &Report) -> Outcome {
    all_pass(m7, &["h.det", "h.conj", "rho.sigma"])?;
    Ok("h and f conjugations exact".into())
}

fn c7_eta(m7: &Report) -> Outcome {
    all_pass(
        m7,
        &["eta.pi4", "eta.pi6", "eta.y4", "eta.y6", "h.eta1", "h.eta3", "h.eta5", "eta.iso4", "eta.iso6"],
    )?;
    Ok("η(1), η(3), η(4), η(5), η(6)".into())
}

fn c8_pibar(m7: &Report) -> Outcome {
    let c = m7.find("pibar.match").ok_or("not reported")?;
    match c.status {
        Status::Pass => Ok("exact match, identity permutation".into()),
        Status::Warn => Ok(format!("matches up to reported differences: {}", c.detail)),
        _ => Err(c.detail.clone()),
    }
}

fn c9_verdicts(m7: &Report, elapsed: Duration) -> Outcome {
    for i in BLOCK_INDICES {
        all_pass(m7, &[&format!("verdict.{i}"), &format!("verdict.{i}.eq7")])?;
    }
    all_pass(m7, &["verdict.rebasing", "m7.certificate"])?;
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("5/5 unsolvable, stable under 20 re-basings ({elapsed:?})"))
}

fn c10_mutations(fx: &FixtureSet) -> Outcome {
    for i in BLOCK_INDICES {
        let o = M7Options { mutations: vec![Mutation::ZeroBlock(i)], rebasings: 0, ..M7Options::default() };
        let r = verify_m7(fx, &o).map_err(|e| e.to_string())?;
        let st = r.find(&format!("verdict.{i}")).map(|c| c.status);
        ensure(st == Some(Status::Fail), format!("zeroed block {i} not detected"))?;
        ensure(!r.passed(), "mutated run passed")?;
    }
    let o = M7Options { mutations: vec![Mutation::CorruptH], ..M7Options::default() };
    let r = verify_m7(fx, &o).map_err(|e| e.to_string())?;
    let first = r.first_failure().map(|c| c.id.clone()).unwrap_or_default();
    ensure(first == "h.det", format!("corrupted h first failed at {first}"))?;
    Ok("5 block mutations and corrupted h detected".into())
}

/// Independent check of an automorphism of `R(2) ⊕ ... ⊕ R(p-1)`: shape,
/// determinant ±1, and `k`-map read off the entries.
fn check_aut(p: i64, m: &IntMatrix, target: &[i64]) -> Result<(), String> {
    let n = (p - 1) as usize;
    let rows = m.to_rows();
    for (i, row) in rows.iter().enumerate().skip(2) {
        for v in &row[..i] {
            ensure(v.mod_floor(&BigInt::from(p)).is_zero(), format!("shape violated in row {}", i + 1))?;
        }
    }
    ensure(common::det(&rows).abs() == BigInt::from(1), "determinant not ±1")?;
    let res = |v: &BigInt| i64::try_from(v.mod_floor(&BigInt::from(p))).unwrap();
    let mut k = vec![res(&rows[0][1]), res(&rows[1][1])];
    k.extend((2..n).map(|i| res(&rows[i][i])));
    let want: Vec<i64> = target.iter().map(|t| t.rem_euclid(p)).collect();
    ensure(k == want, format!("k-map {k:?} for target {want:?}"))
}

fn c11_units() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [5u32, 7, 11] {
        let n = (p - 1) as usize;
        for _ in 0..200 {
            let slot = rng.gen_range(1..=n);
            let res: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(1..p as i64)).collect();
            let u = bezout_unit(p, slot, &res).map_err(|e| e.to_string())?;
            let rows = u.matrix().to_rows();
            ensure(common::det(&rows).abs() == BigInt::from(1), "Bézout unit det")?;
            let diag = u.diag_residues();
            let got: Vec<i64> = (1..=n).filter(|&i| i != slot).map(|i| diag[i - 1]).collect();
            ensure(got == res, format!("p={p} slot {slot}: {got:?} vs {res:?}"))?;
        }
    }
    let mut exhaustive = 0;
    for a12 in 0..5 {
        for a22 in 0..5 {
            if a12 == 0 && a22 == 0 {
                continue;
            }
            for a33 in 1..5 {
                for a44 in 1..5 {
                    let t = [a12, a22, a33, a44];
                    let m = unit_for_k_target(5, &t).map_err(|e| e.to_string())?;
                    check_aut(5, &m, &t)?;
                    exhaustive += 1;
                }
            }
        }
    }
    for _ in 0..500 {
        let mut t: Vec<i64> = vec![rng.gen_range(0..7), rng.gen_range(0..7)];
        if t[0] == 0 && t[1] == 0 {
            t[1] = 1;
        }
        t.extend((0..4).map(|_| rng.gen_range(1..7)));
        let m = unit_for_k_target(7, &t).map_err(|e| e.to_string())?;
        check_aut(7, &m, &t)?;
    }
    let admitted: Vec<i64> = (1..7)
        .filter(|&n| diag_residue_obstruction(7, &[n, 1, 1, 1, 1, 1]))
        .collect();
    ensure(admitted == vec![1, 6], format!("diag sweep admitted {admitted:?}"))?;
    Ok(format!("600 Bézout units, {exhaustive} targets for p=5, 500 for p=7, sweep admits ±1"))
}

fn c12_fullness() -> Outcome {
    let t = Instant::now();
    let mut count = 0;
    for p in [5u32, 7, 11, 13] {
        for r in (1..p - 1).filter(|r| r.gcd(&(p - 1)) == 1) {
            ensure(fullness_automorphism_check(p, r).map_err(|e| e.to_string())?, format!("p={p}, r={r}"))?;
            count += 1;
        }
    }
    within(t.elapsed(), Duration::from_secs(5))?;
    Ok(format!("{count} (p, r) pairs ({:?})", t.elapsed()))
}

fn c13_exactlin() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let dims = |rng: &mut ChaCha8Rng| (rng.gen_range(1..=5usize), rng.gen_range(1..=5usize));
    for case in 0..250 {
        let (r, c) = dims(&mut rng);
        let rank = rng.gen_range(0..=r.min(c));
        let rows = common::random_rank(&mut rng, r, c, rank, 6);
        let a = IntMatrix::from_i64_rows(&rows);
        let h = hnf(&a);
        let nonzero: Vec<Vec<BigInt>> = h.h.to_rows().into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
        ensure(nonzero == common::hermite(&common::to_rows(&rows)), format!("HNF case {case}"))?;
        ensure(&h.u * &a == h.h, format!("HNF transform case {case}"))?;
    }
    for case in 0..250 {
        let (r, c) = dims(&mut rng);
        let rows = common::random_rows(&mut rng, r.min(4), c.min(4), 9);
        let s = snf(&IntMatrix::from_i64_rows(&rows));
        ensure(s.invariant_factors() == common::invariant_factors(&common::to_rows(&rows)), format!("SNF case {case}"))?;
    }
    for case in 0..250 {
        let (r, c) = dims(&mut rng);
        let rank = rng.gen_range(0..=r.min(c));
        let rows = common::random_rank(&mut rng, r, c, rank, 5);
        let a = IntMatrix::from_i64_rows(&rows);
        let k = kernel_basis(&a);
        ensure(k.rows() == r - common::rank(&common::to_rows(&rows)), format!("kernel rank case {case}"))?;
        if k.rows() > 0 {
            ensure((&k * &a).is_zero(), format!("kernel exactness case {case}"))?;
            ensure(common::maximal_minor_gcd(&k.to_rows()) == BigInt::from(1), format!("kernel saturation case {case}"))?;
        }
    }
    for case in 0..250 {
        let n = rng.gen_range(1..=4usize);
        let rows = common::random_rows(&mut rng, n, n, 8);
        let b: Vec<Vec<i64>> = (0..n).map(|_| vec![rng.gen_range(-20..=20)]).collect();
        let a = IntMatrix::from_i64_rows(&rows);
        let bm = IntMatrix::from_i64_rows(&b);
        let sol = solve_right(&a, &bm).map_err(|e| e.to_string())?;
        if let Solution::Solvable(x) = &sol {
            ensure(&a * x == bm, format!("solve residual case {case}"))?;
        }
        let oracle = common::rational_solve(&common::to_rows(&rows), &common::to_rows(&b).concat());
        if !common::det(&common::to_rows(&rows)).is_zero() {
            let integral = oracle.unwrap().iter().all(|v| v.is_integer());
            ensure(integral == sol.is_solvable(), format!("solvability case {case}"))?;
        } else if oracle.is_none() {
            ensure(!sol.is_solvable(), format!("inconsistent system solved, case {case}"))?;
        }
    }
    let mut squares = 0;
    while squares < 200 {
        let n = rng.gen_range(1..=5usize);
        let rows = common::random_rows(&mut rng, n, n, 9);
        let d = common::det(&common::to_rows(&rows));
        if d.is_zero() {
            continue;
        }
        let prod: BigInt = snf(&IntMatrix::from_i64_rows(&rows)).invariant_factors().iter().product();
        ensure(prod == d.abs(), "divisor product ≠ |det|")?;
        squares += 1;
    }
    Ok("1000 HNF/SNF/kernel/solve instances, 200 determinant identities".into())
}

fn main() {
    let fx = FixtureSet::builtin();
    let t = Instant::now();
    let m7 = verify_m7(&fx, &M7Options::default());
    let m7_time = t.elapsed();
    let m7 = match m7 {
        Ok(r) => r,
        Err(e) => {
            println!("M(7) chain did not run: {e}");
            std::process::exit(1);
        }
    };
    let results: Vec<(&str, Outcome)> = vec![
        ("fixture validation", c1_fixtures()),
        ("characteristic certificates", c2_row_certificates()),
        ("hom tables for p = 7", c3_hom_tables()),
        ("π module and K", c4_pi_module()),
        ("intersection basis", c5_intersection(&fx)),
        ("conjugations", c6_conjugations(&m7)),
        ("η certificates", c7_eta(&m7)),
        ("6×24 matrix of π̄_*", c8_pibar(&m7)),
        ("k-invariant verdicts", c9_verdicts(&m7, m7_time)),
        ("mutation tests", c10_mutations(&fx)),
        ("unit constructions", c11_units()),
        ("fullness ingredients", c12_fullness()),
        ("exactlin property suite", c13_exactlin()),
    ];
    let mut failed = 0;
    for (n, (name, res)) in results.iter().enumerate() {
        match res {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d}", n + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d}", n + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

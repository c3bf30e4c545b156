use metacyclic_d2::exactlin::IntMatrix;
use metacyclic_d2::fixtures::{write_builtin, FixtureSet, BLOCK_INDICES};
use metacyclic_d2::m7pipeline::{
    build_quotient_and_rho, extract_all_blocks, k_invariant_verdict, verify_e_basis, verify_eta_elements,
    verify_h_conjugation, verify_m7, verify_pi_module, ExtensionBlocks, M7Options, Mutation,
};
use metacyclic_d2::metacyclic::GroupParams;
use metacyclic_d2::modrep::Representation;
use metacyclic_d2::report::Status;

fn opts() -> M7Options {
    M7Options { rebasings: 3, ..M7Options::default() }
}

#[test]
fn sub_steps_pass_individually() {
    let fx = FixtureSet::builtin();
    for r in [
        verify_pi_module().unwrap(),
        verify_e_basis(&fx).unwrap(),
        verify_h_conjugation(&fx).unwrap(),
        verify_eta_elements(&fx).unwrap(),
    ] {
        assert!(r.passed(), "{}", r.to_table());
        assert!(r.summary.pass > 0);
    }
}

#[test]
fn printed_block_rows() {
    let fx = FixtureSet::builtin();
    let blocks = extract_all_blocks(&fx).unwrap();
    assert_eq!(blocks[&4].c, fx.c[&4]);
    let row3: Vec<i64> = blocks[&4].c.row(2).iter().map(|v| i64::try_from(v).unwrap()).collect();
    assert_eq!(row3, vec![1, -2, -1, -1, 2, 1]);
    let row1: Vec<i64> = blocks[&6].d.row(0).iter().map(|v| i64::try_from(v).unwrap()).collect();
    assert_eq!(row1, vec![-1, 0, -1, 1, 0, 1]);
}

#[test]
fn rho_matches_fixture_and_fixes_x() {
    let fx = FixtureSet::builtin();
    let rho = build_quotient_and_rho(&fx).unwrap();
    assert!(rho.x().is_identity());
    assert_eq!(*rho.y(), fx.rho_y);
}

#[test]
fn zeroing_any_block_flips_its_verdict() {
    let fx = FixtureSet::builtin();
    for i in BLOCK_INDICES {
        let o = M7Options { mutations: vec![Mutation::ZeroBlock(i)], rebasings: 0, ..M7Options::default() };
        let r = verify_m7(&fx, &o).unwrap();
        assert_eq!(r.find(&format!("verdict.{i}")).unwrap().status, Status::Fail);
        assert_eq!(r.find(&format!("verdict.{i}.eq7")).unwrap().status, Status::Fail);
        for j in BLOCK_INDICES.iter().filter(|&&j| j != i) {
            assert_eq!(r.find(&format!("verdict.{j}")).unwrap().status, Status::Pass);
        }
        assert_eq!(r.find("m7.certificate").unwrap().status, Status::Fail);
    }
}

#[test]
fn corrupted_h_halts_at_conjugation() {
    let fx = FixtureSet::builtin();
    let o = M7Options { mutations: vec![Mutation::CorruptH], ..opts() };
    let r = verify_m7(&fx, &o).unwrap();
    assert_eq!(r.first_failure().unwrap().id, "h.det");
    assert_eq!(r.find("step.blocks").unwrap().status, Status::Skip);
    assert!(r.find("verdict.1").is_none());
}

#[test]
fn eq7_only_reports_x_equation_verdicts() {
    let fx = FixtureSet::builtin();
    let r = verify_m7(&fx, &M7Options { eq7_only: true, ..opts() }).unwrap();
    assert!(r.passed());
    for i in BLOCK_INDICES {
        assert_eq!(r.find(&format!("verdict.{i}.eq7")).unwrap().status, Status::Pass);
        assert!(r.find(&format!("verdict.{i}")).is_none());
    }
}

#[test]
fn permuted_quotient_basis_only_warns() {
    let fx = FixtureSet::builtin();
    let perm: Vec<usize> = (0..24).rev().collect();
    let r = verify_m7(&fx, &M7Options { basis_perm: Some(perm), ..opts() }).unwrap();
    assert_eq!(r.find("pibar.match").unwrap().status, Status::Warn);
    assert!(r.passed());
    assert_eq!(r.find("m7.certificate").unwrap().status, Status::Pass);
}

#[test]
fn edited_block_fixture_is_a_warning_not_a_failure() {
    let dir = tempfile::tempdir().unwrap();
    write_builtin(dir.path()).unwrap();
    let path = dir.path().join("C_4.mat");
    let mut m: IntMatrix = std::fs::read_to_string(&path).unwrap().parse().unwrap();
    m.set(0, 0, m.get(0, 0) + 1);
    std::fs::write(&path, m.to_string()).unwrap();
    let fx = FixtureSet::load_dir(dir.path()).unwrap();
    let r = verify_m7(&fx, &opts()).unwrap();
    let c4 = r.find("blocks.C4").unwrap();
    assert_eq!(c4.status, Status::Warn);
    assert!(c4.detail.contains("computed"));
    assert!(r.passed());
}

#[test]
fn verdicts_stable_across_seeds() {
    let fx = FixtureSet::builtin();
    for seed in [1u64, 2, 3] {
        let r = verify_m7(&fx, &M7Options { seed, rebasings: 5, ..M7Options::default() }).unwrap();
        assert_eq!(r.find("verdict.rebasing").unwrap().status, Status::Pass);
    }
}

#[test]
fn direct_sum_has_zero_blocks_and_splits() {
    let p = GroupParams::p7();
    let fx = FixtureSet::builtin();
    let (tx, ty) = fx.theta(4);
    let theta = Representation::new(p, tx.clone(), ty.clone()).unwrap();
    let sigma = Representation::cyclic_regular(p);
    let sum = Representation::direct_sum(&[&theta, &sigma]).unwrap();
    let blocks = ExtensionBlocks { i: 4, c: sum.x().submatrix(0, 6, 6, 12), d: sum.y().submatrix(0, 6, 6, 12) };
    assert!(blocks.c.is_zero() && blocks.d.is_zero());
    let v = k_invariant_verdict(&blocks, tx, ty, sigma.y()).unwrap();
    assert!(v.solvable() && v.eq7_solvable());
}

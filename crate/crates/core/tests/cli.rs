use std::path::Path;
use std::process::{Command, Output};

use metacyclic_d2::fixtures::write_builtin;
use metacyclic_d2::report::{Report, Status};

fn d2verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_d2verify")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_report(path: &Path) -> Report {
    Report::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_fixtures_builtin_passes() {
    let o = d2verify(&["verify-fixtures"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("rows.v5"));
}

#[test]
fn missing_fixture_file_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    write_builtin(dir.path()).unwrap();
    std::fs::remove_file(dir.path().join("lambda_x.mat")).unwrap();
    let o = d2verify(&["verify-fixtures", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("lambda_x.mat"), "{}", stdout(&o));
}

#[test]
fn corrupted_header_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    write_builtin(dir.path()).unwrap();
    std::fs::write(dir.path().join("h.mat"), "18 x\n1 2\n").unwrap();
    let o = d2verify(&["verify-fixtures", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("h.mat") && out.contains("line 1"), "{out}");
}

#[test]
fn verify_m7_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("m7.json");
    let o = d2verify(&["verify-m7", "--json", json.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = read_report(&json);
    assert_eq!(r.find("m7.certificate").unwrap().status, Status::Pass);
    assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    let verdicts = r.checks.iter().filter(|c| c.id.starts_with("verdict.") && c.id.len() == 9).count();
    assert_eq!(verdicts, 5);
}

#[test]
fn mutation_fails_at_block_4() {
    let o = d2verify(&["verify-m7", "--mutate", "C4=0", "--rebasings", "0"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("first failure: verdict.4"));
}

#[test]
fn eq7_only_flag() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = d2verify(&["verify-m7", "--eq7-only", "--rebasings", "2", "--json", json.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = read_report(&json);
    assert!(r.find("verdict.4.eq7").is_some() && r.find("verdict.4").is_none());
}

#[test]
fn basis_perm_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("perm.txt");
    let mut perm: Vec<String> = (0..24).map(|i| i.to_string()).collect();
    perm.swap(0, 1);
    std::fs::write(&path, perm.join(" ")).unwrap();
    let json = dir.path().join("r.json");
    let o = d2verify(&[
        "verify-m7",
        "--basis-perm",
        path.to_str().unwrap(),
        "--rebasings",
        "0",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let c = read_report(&json).find("pibar.match").unwrap().clone();
    assert_eq!(c.status, Status::Warn);
    assert!(c.detail.contains("column 1 (X^1)"), "{}", c.detail);
}

#[test]
fn usage_and_io_errors_exit_2() {
    assert_eq!(code(&d2verify(&[])), 2);
    assert_eq!(code(&d2verify(&["verify-m7", "--mutate", "C2=0"])), 2);
    assert_eq!(code(&d2verify(&["verify-m7", "--basis-perm", "/nonexistent/perm"])), 2);
    assert_eq!(code(&d2verify(&["units", "bezout", "--target", "7,1,1,1,1", "--slot", "2"])), 2);
    assert_eq!(code(&d2verify(&["fullness", "--p", "9"])), 2);
}

#[test]
fn hom_table_p7_and_gated_p11() {
    let o = d2verify(&["hom-table"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("summary: 72 pass, 0 fail"));
    let o = d2verify(&["hom-table", "--p", "11"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("100 skip"));
}

#[test]
fn units_commands() {
    let o = d2verify(&["units", "bezout", "--target", "3,1,1,1,1", "--slot", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("6 6\n"));
    let o = d2verify(&["units", "kmap", "--target", "0,1,3,1,1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("k-map (0,1,3,1,1,1)"));
    let o = d2verify(&["units", "diag", "--residues", "1,2,1,1,1,1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("no unit possible"));
}

#[test]
fn fullness_command() {
    for p in ["5", "7", "11"] {
        let o = d2verify(&["fullness", "--p", p]);
        assert_eq!(code(&o), 0, "p = {p}");
    }
    assert!(stdout(&d2verify(&["fullness"])).contains("fullness.r5"));
}

//! The `d2verify` command line.
//!
//! Every command produces a [`Report`]. The table goes to standard output,
//! `--json <path>` writes the machine-readable form. Exit status is 0 when no
//! check failed, 1 when one did, and 2 for usage or I/O errors.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fixtures::FixtureSet;
use crate::m7pipeline::{parse_basis_perm, verify_m7, M7Options, Mutation};
use crate::metacyclic::{is_prime, GroupParams};
use crate::modrep::{check_sigma_condition, fullness_automorphism_check, Representation};
use crate::report::{Report, Status};
use crate::trimat::{
    bezout_unit, check_row_certificate, diag_residue_obstruction, k_map, row_certificates_p7,
    unit_for_k_target, HomDerContext, LambdaFixture, TriMatrix,
};

#[derive(Debug, Parser)]
#[command(name = "d2verify", version, about = "Exact verification suites for the metacyclic groups G(p,p-1)")]
pub struct Cli {
    /// Also write the report as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every fixture matrix against its defining relations.
    VerifyFixtures(FixtureArgs),
    /// Run the full M(7) chain.
    VerifyM7(M7Args),
    /// Hom lattices and derived-hom orders between the row modules.
    HomTable {
        #[arg(long, default_value_t = 7)]
        p: u32,
    },
    /// Construct and verify units of the triangular matrix ring.
    Units {
        #[arg(long, default_value_t = 7)]
        p: u32,
        #[command(subcommand)]
        spec: UnitSpec,
    },
    /// Automorphism checks over Z[C_{p-1}] and the diagonal-residue sweep.
    Fullness {
        #[arg(long, default_value_t = 7)]
        p: u32,
    },
}

#[derive(Debug, Args)]
pub struct FixtureArgs {
    #[arg(long, default_value_t = 7)]
    pub p: u32,
    /// Directory of `.mat` files; the compiled-in copy when omitted.
    #[arg(long, value_name = "DIR")]
    pub fixtures: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct M7Args {
    #[arg(long, value_name = "DIR")]
    pub fixtures: Option<PathBuf>,
    /// Base the verdicts on the x-equation alone.
    #[arg(long)]
    pub eq7_only: bool,
    /// Test hook: `C4=0` replaces block 4 by split data, `h` corrupts h.
    #[arg(long, value_name = "BLOCK=0")]
    pub mutate: Vec<String>,
    /// File holding a permutation of 0..24 for the quotient basis columns.
    #[arg(long, value_name = "FILE")]
    pub basis_perm: Option<PathBuf>,
    #[arg(long, default_value_t = M7Options::default().seed)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub rebasings: usize,
}

#[derive(Debug, Subcommand)]
pub enum UnitSpec {
    /// Unit with prescribed diagonal residues away from a free slot.
    Bezout {
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        target: Vec<i64>,
        #[arg(long)]
        slot: usize,
    },
    /// Automorphism of R(2) ⊕ ... ⊕ R(p-1) with prescribed k-map value.
    Kmap {
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        target: Vec<i64>,
    },
    /// Whether a unit with these diagonal residues can exist.
    Diag {
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        residues: Vec<i64>,
    },
}

/// A report plus free text printed above its table.
#[derive(Debug)]
pub struct Output {
    pub report: Report,
    pub text: String,
}

impl From<Report> for Output {
    fn from(report: Report) -> Self {
        Self { report, text: String::new() }
    }
}

fn load_fixtures(dir: Option<&Path>) -> Result<FixtureSet> {
    match dir {
        Some(d) => FixtureSet::load_dir(d),
        None => Ok(FixtureSet::builtin()),
    }
}

pub fn cmd_verify_fixtures(p: u32, dir: Option<&Path>) -> Report {
    let mut r = Report::new("verify-fixtures");
    if p != 7 {
        r.push("fixtures.available", format!("fixtures for p = {p}"), Status::Skip, "only p = 7 is shipped", "");
        return r;
    }
    let fx = match load_fixtures(dir) {
        Ok(f) => f,
        Err(e) => {
            r.check("fixtures.load", "all fixture files parse with the expected shapes", false, e.to_string(), "");
            return r;
        }
    };
    r.check("fixtures.load", "all fixture files parse with the expected shapes", true, fx.source.clone(), "");
    let params = GroupParams::p7();
    const LAMBDA: &str = "row representation λ";
    match LambdaFixture::new(params, fx.lambda_x.clone(), fx.lambda_y.clone()) {
        Ok(lf) => {
            let d = lf.discrepancies();
            r.check("lambda.relations", "λ(x⁻¹)⁷ = I, λ(y⁻¹)⁶ = I and the metacyclic relation", d.is_empty(), d.join("; "), LAMBDA);
            match lf.representation() {
                Ok(rep) => {
                    r.check("lambda.sigma", "λ satisfies M(Σ)", check_sigma_condition(&rep), "", LAMBDA);
                }
                Err(e) => {
                    r.check("lambda.sigma", "λ satisfies M(Σ)", false, e.to_string(), LAMBDA);
                }
            }
            for cert in row_certificates_p7() {
                let k = cert.k;
                let what = format!(
                    "v_{k}·y = {}v_{k}·(1+x)^{} and [v_{k}) = R({k})",
                    if cert.sign < 0 { "−" } else { "" },
                    cert.power
                );
                match check_row_certificate(&lf, &cert) {
                    Ok(c) => {
                        let detail = match &c.replacement {
                            Some(rep) => format!("a valid generator is ({})", rep.v.join(", ")),
                            None if !c.holds => "no replacement found".into(),
                            None => String::new(),
                        };
                        r.check(format!("rows.v{k}"), what, c.holds, detail, "row certificates");
                    }
                    Err(e) => {
                        r.check(format!("rows.v{k}"), what, false, e.to_string(), "row certificates");
                    }
                }
            }
        }
        Err(e) => {
            r.check("lambda.shape", "λ matrices lie in T_6(Z, 7)", false, e.to_string(), LAMBDA);
        }
    }
    let rep_check = |r: &mut Report, id: String, what: String, x: &crate::IntMatrix, y: &crate::IntMatrix| {
        let rep = Representation::unchecked(params, x.clone(), y.clone());
        let fails = rep.relation_failures();
        let sig = check_sigma_condition(&rep);
        let mut detail = fails.join("; ");
        if !sig {
            detail.push_str(" M(Σ) fails");
        }
        r.check(id, what, fails.is_empty() && sig, detail.trim().to_string(), "representations θ_k");
    };
    for k in 1..=6 {
        let (x, y) = fx.theta(k);
        rep_check(&mut r, format!("theta.{k}"), format!("θ_{k} satisfies the relations and M(Σ)"), x, y);
    }
    rep_check(&mut r, "lprime".into(), "L′ satisfies the relations and M(Σ)".into(), &fx.lprime_x, &fx.lprime_y);
    let rho = Representation::unchecked(params, fx.rho_x.clone(), fx.rho_y.clone());
    let fails = rho.relation_failures();
    r.check("rho.relations", "ρ satisfies the relations", fails.is_empty(), fails.join("; "), "");
    let det_h = fx.h.det();
    r.check("h.det", "det h = 1", det_h == BigInt::from(1), format!("det {det_h}"), "");
    let det_f = fx.f.det();
    r.check("f.det", "det f = ±1", det_f.magnitude() == &1u32.into(), format!("det {det_f}"), "");
    let tri = TriMatrix::identity(7).and_then(|id| id.mul(&TriMatrix::new(7, fx.lambda_x.clone())?));
    r.check(
        "trimat.shape",
        "TriMatrix accepts the λ matrices and rejects a wrong size",
        tri.is_ok() && TriMatrix::new(7, fx.h.clone()).is_err(),
        "",
        "",
    );
    r
}

pub fn cmd_verify_m7(args: &M7Args) -> Result<Report> {
    let mut opts = M7Options {
        eq7_only: args.eq7_only,
        seed: args.seed,
        rebasings: args.rebasings,
        ..M7Options::default()
    };
    for m in &args.mutate {
        opts.mutations.push(m.parse::<Mutation>()?);
    }
    if let Some(path) = &args.basis_perm {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
        opts.basis_perm = Some(parse_basis_perm(&text)?);
    }
    let fx = match load_fixtures(args.fixtures.as_deref()) {
        Ok(f) => f,
        Err(e) => {
            let mut r = Report::new("m7");
            r.check("fixtures.load", "fixtures load", false, e.to_string(), "");
            return Ok(r);
        }
    };
    match verify_m7(&fx, &opts) {
        Ok(r) => Ok(r),
        Err(e) => {
            let mut r = Report::new("m7");
            r.check("m7.error", "the chain ran to completion", false, e.to_string(), "M(7) chain");
            Ok(r)
        }
    }
}

pub fn cmd_hom_table(p: u32) -> Result<Output> {
    if p < 3 || !is_prime(p as u64) {
        return Err(Error::InvalidParams(format!("{p} is not an odd prime")));
    }
    let n = (p - 1) as usize;
    let mut r = Report::new("hom-table");
    if p != 7 {
        for i in 1..=n {
            for j in 1..=n {
                r.push(format!("hom.{i}.{j}"), format!("Hom(R({i}), R({j}))"), Status::Skip, format!("no λ fixture for p = {p}"), "");
            }
        }
        return Ok(r.into());
    }
    let fix = crate::trimat::lambda_fixture(p)?;
    let mut ctx = HomDerContext::new(p, &fix)?;
    let mut text = String::from("i\\j");
    for j in 1..=n {
        text.push_str(&format!("  {j:>8}"));
    }
    text.push('\n');
    for i in 1..=n {
        text.push_str(&format!("{i:>3}"));
        for j in 1..=n {
            let (hom, order) = ctx.order_cached(i, j)?;
            let want_gen = if i >= j { BigInt::from(1) } else { BigInt::from(p) };
            let gen = hom.scalar_generator();
            let gen_text = gen.as_ref().map(|g| if g == &BigInt::from(1) { "I".into() } else { format!("{g}I") });
            r.check(
                format!("hom.{i}.{j}"),
                format!("Hom(R({i}), R({j})) is rank 1 generated by {}", if i >= j { "I".into() } else { format!("{p}I") }),
                hom.rank() == 1 && gen.as_ref() == Some(&want_gen),
                format!("rank {}, generator {}", hom.rank(), gen_text.clone().unwrap_or_else(|| "non-scalar".into())),
                "hom lattices",
            );
            let want_ord = if i == j { BigInt::from(p) } else { BigInt::from(1) };
            r.check(
                format!("der.{i}.{j}"),
                format!("|Hom_Der(R({i}), R({j}))| = {want_ord}"),
                order == want_ord,
                format!("order {order}"),
                "derived homs",
            );
            text.push_str(&format!("  {:>4}/{:<3}", gen_text.unwrap_or_else(|| "?".into()), order));
        }
        text.push('\n');
    }
    text.push_str("cells: generator / derived-hom order\n");
    Ok(Output { report: r, text })
}

fn fmt_tuple(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn cmd_units(p: u32, spec: &UnitSpec) -> Result<Output> {
    let mut r = Report::new("units");
    let pi = p as i64;
    let text = match spec {
        UnitSpec::Bezout { target, slot } => {
            let u = bezout_unit(p, *slot, target)?;
            let diag = u.diag_residues();
            let got: Vec<i64> = (1..=diag.len()).filter(|&i| i != *slot).map(|i| diag[i - 1]).collect();
            let want: Vec<i64> = target.iter().map(|t| t.rem_euclid(pi)).collect();
            r.check(
                "units.bezout",
                format!("unit with residues {} away from slot {slot}", fmt_tuple(target)),
                u.is_unit() && got == want,
                format!("det {}, diagonal residues {}", u.det(), fmt_tuple(&diag)),
                "Bézout units",
            );
            u.to_string()
        }
        UnitSpec::Kmap { target } => {
            // trailing slots default to 1, as in the f_(a,b,...,1) notation
            let mut target = target.clone();
            if target.len() < (p - 1) as usize {
                target.resize((p - 1) as usize, 1);
            }
            let target = &target;
            let m = unit_for_k_target(p, target)?;
            let k = k_map(p, &m)?;
            let want: Vec<i64> = target.iter().map(|t| t.rem_euclid(pi)).collect();
            r.check(
                "units.kmap",
                format!("automorphism with k-map {}", fmt_tuple(target)),
                k == want,
                format!("det {}, k-map {}", m.det(), fmt_tuple(&k)),
                "k-map realisation",
            );
            m.to_string()
        }
        UnitSpec::Diag { residues } => {
            if residues.len() != (p - 1) as usize {
                return Err(Error::InvalidParams(format!("{} residues given, expected {}", residues.len(), p - 1)));
            }
            let admitted = diag_residue_obstruction(p, residues);
            r.push(
                "units.diag",
                format!("units with diagonal residues {}", fmt_tuple(residues)),
                Status::Pass,
                if admitted {
                    "product of residues is ±1 mod p: not obstructed".to_string()
                } else {
                    "product of residues is not ±1 mod p: no unit possible".to_string()
                },
                "determinant obstruction",
            );
            let prod = residues.iter().fold(1i64, |acc, &r| acc * r.rem_euclid(pi) % pi);
            if admitted {
                format!("admitted: product of residues is {prod} mod {p}, which is ±1\n")
            } else {
                format!("obstructed: product of residues is {prod} mod {p}, not ±1; no unit possible\n")
            }
        }
    };
    Ok(Output { report: r, text })
}

pub fn cmd_fullness(p: u32) -> Result<Report> {
    if p < 3 || !is_prime(p as u64) {
        return Err(Error::InvalidParams(format!("{p} is not an odd prime")));
    }
    let mut r = Report::new("fullness");
    let q = p - 1;
    for rr in (1..q).filter(|&rr| num_integer::gcd(rr, q) == 1) {
        let ok = fullness_automorphism_check(p, rr)?;
        r.check(
            format!("fullness.r{rr}"),
            format!("y ↦ y^{rr} gives an automorphism of the relevant Z[C_{q}] lattices"),
            ok,
            "",
            "fullness",
        );
    }
    let mut admitted = Vec::new();
    for n in 1..p as i64 {
        let mut res = vec![1i64; q as usize];
        res[0] = n;
        if diag_residue_obstruction(p, &res) {
            admitted.push(n);
        }
    }
    r.check(
        "fullness.diag_sweep",
        "diag(n,1,...,1) residues are admitted exactly for n ≡ ±1",
        admitted == vec![1, p as i64 - 1],
        format!("admitted n = {admitted:?}"),
        "fullness",
    );
    Ok(r)
}

/// Runs the command and returns its output, or an error for exit status 2.
pub fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::VerifyFixtures(a) => Ok(cmd_verify_fixtures(a.p, a.fixtures.as_deref()).into()),
        Command::VerifyM7(a) => cmd_verify_m7(a).map(Output::from),
        Command::HomTable { p } => cmd_hom_table(*p),
        Command::Units { p, spec } => cmd_units(*p, spec),
        Command::Fullness { p } => cmd_fullness(*p).map(Output::from),
    }
}

/// Entry point used by the binary; returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let out = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if !out.text.is_empty() {
        print!("{}", out.text);
    }
    print!("{}", out.report.to_table());
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, out.report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 2;
        }
    }
    if out.report.passed() {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_are_rejected() {
        assert!(Cli::try_parse_from(["d2verify", "no-such-command"]).is_err());
        let e = Cli::try_parse_from(["d2verify", "units", "bezout"]).unwrap_err();
        assert!(e.use_stderr());
        assert!(Cli::try_parse_from(["d2verify", "units", "bezout", "--target", "3,-1", "--slot", "2"]).is_ok());
    }

    #[test]
    fn fullness_p5() {
        let r = cmd_fullness(5).unwrap();
        assert!(r.passed());
        assert!(r.find("fullness.r1").is_some() && r.find("fullness.r3").is_some());
    }

    #[test]
    fn hom_table_gated() {
        let out = cmd_hom_table(11).unwrap();
        assert_eq!(out.report.summary.skip, 100);
        assert!(out.report.passed());
    }

    #[test]
    fn diag_obstructed() {
        let spec = UnitSpec::Diag { residues: vec![1, 2, 1, 1, 1, 1] };
        let out = cmd_units(7, &spec).unwrap();
        assert!(out.text.contains("obstructed"));
    }
}

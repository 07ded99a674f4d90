use std::process::Command;

use chiral_cli::genus_cmd::{evaluate, example_input, parse_genus_input, render_text};
use chiral_cli::suites::SUSY_SKIP;
use chiral_cli::*;
use chiral_core::charts::{BundleKind, BundleSpec, ChartSystem};
use chiral_core::{Error, Rational};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chiral"))
}

fn quick(seed: u64) -> RunConfig {
    RunConfig {
        seed,
        samples: 10,
        ..RunConfig::default()
    }
}

#[test]
fn builtin_document_matches_hardcoded_system() {
    let spec = parse_chart_spec(ChartSpec::builtin_text("p1").unwrap()).unwrap();
    assert_eq!(spec.system.dim(), 1);
    assert_eq!(spec.bundle.rank(spec.system.dim()), 1);
    let hard = ChartSystem::projective_line();
    assert_eq!(spec.system.vars, hard.vars);
    assert_eq!(spec.system.charts[..], hard.charts[..2]);
    let p2 = parse_chart_spec(ChartSpec::builtin_text("p2").unwrap()).unwrap();
    assert_eq!(p2.system.charts[..], ChartSystem::projective_plane().charts[..3]);
    assert_eq!(p2.triples, vec![[0, 1, 2]]);
}

#[test]
fn documents_round_trip() {
    let text = "\
name = mixed
[variables]
x, y
[charts]
A
B
C
[overlaps]
A -> B : 1/x, y/x
B -> C : x + y^2, y   # composed through B
[bundle]
kind = general
A = 1, 0; 0, 1
B = x, 0; y, 1
C = 1, x*y; 0, 2
[triples]
A B C
";
    let spec = parse_chart_spec(text).unwrap();
    assert!(matches!(spec.bundle.kind, BundleKind::General(_)));
    let again = parse_chart_spec(&spec.to_text()).unwrap();
    assert_eq!(again, spec);
    let sys = ChartSystem::projective_plane();
    let from_sys = ChartSpec::from_system(sys.clone(), BundleSpec::cotangent());
    assert_eq!(parse_chart_spec(&from_sys.to_text()).unwrap().system, sys);
}

#[test]
fn syntax_errors_are_positioned() {
    let doc = "[variables]\nx y\n[charts]\nU0\nU1\n[overlaps]\nU0 -> U1 : x +* y, y\n[bundle]\nkind = tangent\n";
    match parse_chart_spec(doc) {
        Err(CliError::Syntax { line, col, .. }) => {
            assert_eq!(line, 7);
            assert_eq!(col, 15);
        }
        other => panic!("{other:?}"),
    }
    let undeclared = doc.replace("x +* y", "x + z");
    assert!(matches!(
        parse_chart_spec(&undeclared),
        Err(CliError::UndeclaredVariable { line: 7, col: 16, .. })
    ));
    let mobius = doc.replace("x +* y", "x").replace("tangent", "mobius");
    assert!(matches!(
        parse_chart_spec(&mobius),
        Err(CliError::UnknownBundleKind { line: 9, .. })
    ));
    let unknown_section = "[charts]\nU0\n[frames]\n";
    assert!(matches!(parse_chart_spec(unknown_section), Err(CliError::Syntax { line: 3, .. })));
}

#[test]
fn singular_and_inconsistent_changes_are_rejected() {
    let doc = "[variables]\nx y\n[charts]\nU0\nU1\n[overlaps]\nU0 -> U1 : x + y, 2*x + 2*y\n[bundle]\nkind = tangent\n";
    assert!(matches!(parse_chart_spec(doc), Err(CliError::SingularJacobian { line: 7, .. })));
    let cyc = "[variables]\nx\n[charts]\nU0\nU1\n[overlaps]\nU0 -> U1 : 1/x\nU1 -> U0 : x + 1\n[bundle]\nkind = tangent\n";
    assert!(matches!(parse_chart_spec(cyc), Err(CliError::Invalid(_))));
    let unreached = "[variables]\nx\n[charts]\nU0\nU1\n[bundle]\nkind = tangent\n";
    assert!(matches!(parse_chart_spec(unreached), Err(CliError::Invalid(_))));
    let singular_odd = "[variables]\nx\n[charts]\nU0\n[bundle]\nkind = general\nU0 = x, x; 1, 1\n";
    assert!(matches!(parse_chart_spec(singular_odd), Err(CliError::Invalid(_))));
}

#[test]
fn projective_line_tangent_all_suites() {
    let spec = parse_chart_spec(ChartSpec::builtin_text("p1").unwrap()).unwrap();
    let r = run_suite(&spec, &Suite::ALL, &quick(3)).unwrap();
    assert_eq!(r.totals.failed, 0, "{}", r.to_text());
    let susy: Vec<_> = r.records.iter().filter(|x| x.suite == "susy").collect();
    assert_eq!(susy.len(), 1);
    assert_eq!(susy[0].status, Status::Skipped);
    assert_eq!(susy[0].reason.as_deref(), Some(SUSY_SKIP));
    assert!(r.to_text().ends_with(&format!("{} passed, 0 failed, {} skipped\n", r.totals.passed, r.totals.skipped)));
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let mut spec = parse_chart_spec(ChartSpec::builtin_text("p2").unwrap()).unwrap();
    spec.bundle = BundleSpec::cotangent();
    let a = run_suite(&spec, &Suite::ALL, &quick(11)).unwrap();
    let b = run_suite(&spec, &Suite::ALL, &quick(11)).unwrap();
    assert_eq!(a.to_machine(), b.to_machine());
    assert_eq!(a.to_text(), b.to_text());
    assert_eq!(CheckReport::parse_machine(&a.to_machine()).unwrap(), a);
    assert!(CheckReport::parse_machine(&a.to_machine().replace("chiral-report/1", "chiral-report/0")).is_err());
    assert!(a.records.iter().any(|r| r.suite == "susy" && r.status == Status::Pass));
}

#[test]
fn corrupted_c_reports_a_witness() {
    let spec = parse_chart_spec(ChartSpec::builtin_text("p2").unwrap()).unwrap();
    let cfg = RunConfig {
        corrupt_c: Some("x^2".into()),
        samples: 40,
        ..quick(5)
    };
    let r = run_suite(&spec, &[Suite::Axioms], &cfg).unwrap();
    let bad = r.records.iter().find(|x| x.id == "vertex.c-differential").unwrap();
    assert_eq!(bad.status, Status::Fail);
    let w = bad.witness.as_ref().unwrap();
    assert!(w.contains("residual = "), "{w}");
    assert!(r.to_text().contains(w.as_str()));
}

#[test]
fn genus_examples() {
    let two = Rational::from_integer(2.into());
    let r = evaluate(&example_input("p1", Some(std::slice::from_ref(&two)), 4).unwrap()).unwrap();
    assert!(r.two_paths_agree);
    let at1 = r.at_y_one.clone().unwrap();
    assert_eq!(at1[0], "2");
    assert!(at1[1..].iter().all(|c| c == "0"));
    let q0 = r.series.as_ref().unwrap().iter().filter(|row| row.q == 0).count();
    assert!(q0 > 0);
    let r0 = evaluate(&example_input("p1", None, 0).unwrap()).unwrap();
    assert!(r0.series.unwrap().iter().all(|row| row.q == 0));
    let one = Rational::from_integer(1.into());
    assert!(matches!(
        example_input("p1", Some(&[one]), 4),
        Err(CliError::Core(Error::SimplicityViolation(_)))
    ));
    let file = parse_genus_input("# p2 torus fixed points\n2, 3\n1/2, 3/2\n1/3, 2/3\n", 3).unwrap();
    let text = render_text(&evaluate(&file).unwrap());
    assert!(text.contains("T(1,q) coefficients by q-degree: [3, 0, 0, 0]"), "{text}");
}

#[test]
fn binary_exit_codes() {
    let out = bin().args(["genus", "--example", "p1", "--lambda", "2", "--qmax", "4"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[2, 0, 0, 0, 0]"), "{text}");
    assert!(text.contains("+ 1 * u^1 * q^0"), "{text}");

    let out = bin().args(["genus", "--example", "p1", "--lambda", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("not simple"));

    let out = bin()
        .args(["verify", "--example", "p2", "--suite", "axioms", "--samples", "40", "--corrupt-c", "x"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    let dir = std::env::temp_dir().join(format!("chiral-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let report = dir.join("report.json");
    let out = bin()
        .args(["verify", "--example", "p1", "--samples", "5", "--format", "machine", "--output"])
        .arg(&report)
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin().args(["report", "--format", "text", "--input"]).arg(&report).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains(" passed, 0 failed, "));

    let bad = dir.join("bad.spec");
    std::fs::write(&bad, "[variables]\nx\n[charts]\nU0\n[bundle]\nkind = mobius\n").unwrap();
    let out = bin().args(["verify", "--spec"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("unknown bundle kind 'mobius'"));
    std::fs::remove_dir_all(&dir).unwrap();
}

use std::path::PathBuf;
use std::process::{Command, Output};

use ahaut_cli::datum_file;
use ahaut_cli::report::{LiftVerdict, Report, ReportResult, VerdictEntry};
use ahaut_cli::CliError;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    let args: Vec<String> = args.iter().map(|a| if a.ends_with(".json") { fixture(a) } else { a.to_string() }).collect();
    Command::new(env!("CARGO_BIN_EXE_ahaut")).args(&args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Report, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let report = Report::from_json(&String::from_utf8(out.stdout).unwrap()).expect("json report");
    (report, out.status.code().unwrap())
}

fn text(args: &[&str]) -> (String, i32) {
    let out = run(args);
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

#[test]
fn check_trivial_datum() {
    let (r, code) = json(&["check", "gm.json"]);
    assert_eq!(code, 0);
    let ReportResult::Check(c) = r.result else { panic!("{r:?}") };
    assert!(c.support.is_empty());
    assert!(c.bad_locus.is_empty());
    assert_eq!(c.conjugation_stable, Some(true));
}

#[test]
fn check_errors_are_located() {
    let (out, code) = text(&["check", "tail_mismatch.json"]);
    assert_eq!(code, 1);
    assert!(out.contains("coefficients[0]") && out.contains("at 3"), "{out}");

    let (out, code) = text(&["check", "bad_rational.json"]);
    assert_eq!(code, 1);
    assert!(out.contains("coefficients[0].vertices[0][0]"), "{out}");

    let (r, code) = json(&["check", "elliptic_punctured.json"]);
    assert_eq!(code, 2);
    assert!(matches!(r.result, ReportResult::Error(ref e) if e.exit_code == 2));
}

#[test]
fn lift_examples() {
    let (out, code) = text(&["lift", "swap.json", "--mobius", "0,1,1,0"]);
    assert_eq!(code, 0);
    assert!(out.contains("Liftable, f = t^-2"), "{out}");

    let (out, code) = text(&["lift", "interval.json", "--mobius", "-1,1,0,1"]);
    assert_eq!(code, 0);
    assert!(out.contains("NonTranslate at 0"), "{out}");

    let (out, code) = text(&["lift", "elliptic.json", "--ec-translate", "(1,0)"]);
    assert_eq!(code, 0);
    assert!(out.contains("NotPrincipal coord 0, obstruction (1,0)"), "{out}");
}

#[test]
fn lift_flag_errors() {
    let (r, code) = json(&["lift", "swap.json", "--ec-neg"]);
    assert_eq!(code, 2);
    assert!(matches!(r.result, ReportResult::Lift(ref l) if matches!(l.result, LiftVerdict::UnsupportedAutomorphism { .. })));
    assert_eq!(text(&["lift", "swap.json"]).1, 1);
    assert_eq!(text(&["lift", "swap.json", "--mobius", "1,2,2,4"]).1, 1);
    assert_eq!(text(&["lift", "gm.json", "--mobius", "1,1,0,1"]).1, 1);
}

#[test]
fn aut_examples() {
    let (r, _) = json(&["aut", "gm.json"]);
    let ReportResult::Aut(a) = r.result else { panic!() };
    assert_eq!((a.torus_rank, a.lambda_rank), (1, 1));
    assert!(a.k_base.contains("fixing 0 and inf"), "{}", a.k_base);
    assert!(a.cosets.iter().any(|c| c.status == "Liftable"));

    let (r, _) = json(&["aut", "projective.json"]);
    let ReportResult::Aut(a) = r.result else { panic!() };
    assert_eq!(a.lambda_rank, 0);
    assert!(a.k_base.starts_with("PGL2"));

    let (r, _) = json(&["aut", "elliptic2.json"]);
    let ReportResult::Aut(a) = r.result else { panic!() };
    assert!(a.k_base.contains("E[2](Q)"), "{}", a.k_base);
    assert_eq!(a.cosets.len(), 1);
    assert!(!r.warnings.is_empty(), "j = 1728 warning");
}

#[test]
fn h1_examples() {
    for (m, order, dec) in [("[[-1]]", 2, [0, 1, 0]), ("[[0,1],[1,0]]", 1, [0, 0, 1]), ("[[1]]", 1, [1, 0, 0])] {
        let (r, code) = json(&["h1", "--matrix", m]);
        assert_eq!(code, 0);
        let ReportResult::H1(h) = r.result else { panic!() };
        assert_eq!((h.h1_order, h.decomposition), (order, dec), "{m}");
        assert_eq!(h.brute_force.unwrap().order as u64, order);
    }
    assert_eq!(text(&["h1", "--matrix", "[[2]]"]).1, 2);
    assert_eq!(text(&["h1", "--matrix", "[[1,0]]"]).1, 1);
    assert_eq!(text(&["h1", "--matrix", "nonsense"]).1, 1);
}

#[test]
fn forms_examples() {
    let (r, code) = json(&["forms", "gm.json"]);
    assert_eq!(code, 0);
    let ReportResult::Forms(f) = &r.result else { panic!() };
    assert!(matches!(f.verdict, VerdictEntry::NotCertified { decomposition: [_, 1, _], .. }));
    let mu = f.mu_family.as_ref().unwrap();
    assert_eq!(mu.classes.len(), 2);
    assert!(r.warnings.iter().any(|w| w.contains("Z/2")));

    let (r, _) = json(&["forms", "fixed_point.json"]);
    let ReportResult::Forms(f) = &r.result else { panic!() };
    assert!(matches!(&f.verdict, VerdictEntry::FiniteCertified { evidence } if evidence.contains("inf")));

    assert_eq!(text(&["forms", "swap.json"]).1, 1, "no real structure");
    assert_eq!(text(&["forms", "gm.json", "--bound", "0"]).1, 1);
}

#[test]
fn text_and_json_describe_the_same_result() {
    let (r, _) = json(&["lift", "swap.json", "--mobius", "0,1,1,0"]);
    let (t, _) = text(&["lift", "swap.json", "--mobius", "0,1,1,0"]);
    assert_eq!(r.to_text(), t);
}

#[test]
fn parse_reports_field_paths() {
    let err = datum_file::parse(r#"{"torus_rank": 1, "tail_cone": {"rays": []}, "curve": {"type": "p2"}}"#, "x.json").unwrap_err();
    assert!(matches!(&err, CliError::Input { location, .. } if location == "x.json: curve.type"), "{err}");
    let err = datum_file::parse(r#"{"torus_rank": 1, "tail_cone": {"rays": []}, "curve": {"type": "p1"}, "extra": 1}"#, "x.json")
        .unwrap_err();
    assert_eq!(err.exit_code(), 1);
    let err = datum_file::parse(
        r#"{"torus_rank": 2, "tail_cone": {"rays": []}, "curve": {"type": "p1"}, "coefficients": [{"point": "0", "vertices": [["1"]]}]}"#,
        "x.json",
    )
    .unwrap_err();
    assert!(err.to_string().contains("coefficients[0].vertices[0]"), "{err}");
}

#[test]
fn help_exits_zero_and_bad_usage_exits_one() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

//! The command-line contract: output text, exit codes and JSON shape.

use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;

use torus_fields::algebra::Scalar;
use torus_fields::cli;
use torus_fields::curves::extactic_xy;
use torus_fields::families::{build_kolmogorov, KolmogorovParams};
use torus_fields::parser::serialize;
use torus_fields::vfield::{RationalFn, Torus, VectorField};

const P: &str = "(1/4)*x*z + x*y^2";
const Q: &str = "(1/4)*y*z - x^2*y";
const R: &str = "(1/2)*(-a^2*(x^2+y^2) + z^2 + a^4 - 1)";

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torus-fields"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn check_on_torus() {
    let o = bin(&["check", "--px", P, "--qy", Q, "--rz", R, "--m", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "on torus, cofactor K = z");
}

#[test]
fn check_off_torus_exits_two() {
    let o = bin(&["check", "--px", "x", "--qy", "y", "--rz", "z", "--m", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).trim(), "NOT on torus");
    for cmd in ["meridians", "parallels", "singular", "report"] {
        assert_eq!(
            bin(&[cmd, "--px", "x", "--qy", "y", "--rz", "z"])
                .status
                .code(),
            Some(2),
            "{cmd}"
        );
    }
}

#[test]
fn radius_constraint_is_enforced() {
    for m in ["1", "1/2", "-3", "abc"] {
        let o = bin(&["check", "--px", "y", "--qy", "-x", "--m", m]);
        assert_eq!(o.status.code(), Some(1), "m = {m}");
        assert!(!stderr(&o).contains("panicked"));
    }
    let o = bin(&["check", "--px", "y", "--qy", "-x", "--m", "1"]);
    assert!(stderr(&o).contains("a > 1"));
    let o = bin(&["check", "--px", "y", "--qy", "-x", "--m", "9/4"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn malformed_input_is_a_usage_error() {
    for args in [
        &["check", "--px", "x +"][..],
        &["check", "--px", "x^999"],
        &["check", "--qy", "1/0"],
        &[
            "integrate",
            "--px",
            "y",
            "--qy",
            "-x",
            "--start",
            "2,0",
            "--t-end",
            "1",
        ],
        &[
            "integrate",
            "--px",
            "y",
            "--qy",
            "-x",
            "--start",
            "2,0,1",
            "--t-end",
            "-1",
        ],
        &["frobnicate"],
        &[],
    ] {
        let o = bin(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(
            !stderr(&o).is_empty() && !stderr(&o).contains("panicked"),
            "{args:?}"
        );
    }
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
    assert_eq!(bin(&["--version"]).status.code(), Some(0));
}

#[test]
fn bracket_of_worked_example() {
    let o = bin(&[
        "bracket",
        "--px",
        "x^2*z",
        "--qy",
        "x*y*z",
        "--rz",
        "2*x*(-a^2*(x^2+y^2) + z^2 + a^4 - 1)",
        "--px2",
        "y^3",
        "--qy2",
        "-x*y^2",
        "--rz2",
        "0",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let t = Torus::with_m(4).unwrap();
    let r = t.parse(v["rz"].as_str().unwrap()).unwrap();
    assert_eq!(
        r,
        t.parse("-2*y^3*(-a^2*(x^2+y^2) + z^2 + a^4 - 1)").unwrap()
    );
}

#[test]
fn first_integral_and_extactic() {
    let o = bin(&[
        "first-integral",
        "--px",
        P,
        "--qy",
        Q,
        "--rz",
        R,
        "--num",
        "(x^2+y^2-a^2)^2+z^2-1",
        "--den",
        "(x^2+y^2)^2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("is a first integral"));
    let o = bin(&[
        "first-integral",
        "--px",
        P,
        "--qy",
        Q,
        "--rz",
        R,
        "--num",
        "z",
    ]);
    assert!(stdout(&o).contains("NOT"));
    let o = bin(&["extactic", "--px", P, "--qy", Q, "--rz", R]);
    assert_eq!(stdout(&o).trim(), "-x^3*y - x*y^3");
}

#[test]
fn meridians_of_example() {
    let o = bin(&["meridians", "--px", P, "--qy", Q, "--rz", R, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], "4");
    let kinds: Vec<&str> = v["planes"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|p| p["meridians"].as_array().unwrap())
        .map(|m| m["verdict"]["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["limit-cycle"; 4]);
}

#[test]
fn classify_and_singular() {
    let a = [
        "--px",
        "y*(y^2 + (z - 1/2)^2)",
        "--qy",
        "-x*(y^2 + (z - 1/2)^2)",
        "--rz",
        "0",
    ];
    let x = (4.0 + 3f64.sqrt() / 2.0).sqrt();
    let point = format!("{x},0,0.5");
    let mut args = vec!["classify"];
    args.extend(a);
    args.extend(["--point", &point]);
    let o = bin(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "linearly-zero");
    let mut args = vec!["singular", "--grid", "128", "--json"];
    args.extend(a);
    let v: Value = serde_json::from_slice(&bin(&args).stdout).unwrap();
    assert_eq!(v["set"]["kind"], "isolated-points");
    assert_eq!(v["set"]["points"].as_array().unwrap().len(), 4);
}

#[test]
fn integrate_writes_csv_and_json() {
    let dir = std::env::temp_dir().join(format!("torus-fields-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("t.csv");
    let o = bin(&[
        "integrate",
        "--px",
        "y",
        "--qy",
        "-x",
        "--start",
        "2,0,1",
        "--t-end",
        "1",
        "--dt",
        "0.01",
        "--every",
        "10",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x,y,z,theta,phi"));
    assert_eq!(lines.count(), 11);
    let o = bin(&[
        "integrate",
        "--px",
        "y",
        "--qy",
        "-x",
        "--start",
        "2,0,1",
        "--t-end",
        "0.5",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["projected"], false);
    assert_eq!(v["samples"].as_array().unwrap().len(), 501);
    std::fs::remove_dir_all(dir).unwrap();
}

fn report_json(px: &str, qy: &str, rz: &str) -> Value {
    let o = bin(&[
        "report", "--px", px, "--qy", qy, "--rz", rz, "--json", "--seed", "3", "--grid", "64",
    ]);
    assert_eq!(o.status.code(), Some(0));
    serde_json::from_slice(&o.stdout).unwrap()
}

/// Every polynomial string in the report parses back to the value computed
/// through the library.
fn assert_reparses(v: &Value, chi: &VectorField, t: &Torus) {
    assert_eq!(v["schema"], "torus-fields/1");
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
    let parse = |s: &Value| t.parse(s.as_str().unwrap()).unwrap();
    assert_eq!(
        &parse(&v["cofactor"]),
        chi.cofactor_on_torus(t).cofactor().unwrap()
    );
    assert_eq!(parse(&v["extactic"]), extactic_xy(chi));
    for p in v["family"]["params"].as_array().unwrap() {
        parse(&p["value"]);
    }
    for h in v["first_integrals"].as_array().unwrap() {
        let fi = RationalFn::new(parse(&h["numerator"]), parse(&h["denominator"])).unwrap();
        assert!(chi.check_first_integral(&fi));
        assert_eq!(h["verified"], true);
    }
    assert_eq!(v["bounds_check"]["holds"], true);
}

#[test]
fn report_polynomials_reparse() {
    let t = Torus::with_m(4).unwrap();
    let chi = VectorField::parse(P, Q, R, t.field()).unwrap();
    assert_reparses(&report_json(P, Q, R), &chi, &t);

    let chi = build_kolmogorov(
        &KolmogorovParams {
            c1: Scalar::from_integer(1),
            c2: Scalar::from_integer(4),
        },
        &t,
    );
    let (px, qy, rz) = (serialize(chi.p()), serialize(chi.q()), serialize(chi.r()));
    let v = report_json(&px, &qy, &rz);
    assert_eq!(v["first_integrals"].as_array().unwrap().len(), 1);
    assert_reparses(&v, &chi, &t);
}

#[test]
fn report_is_deterministic() {
    let args = [
        "report",
        "--px",
        "y*(x^2 - y^2)",
        "--qy",
        "-x*(x^2 - y^2)",
        "--rz",
        "0",
        "--json",
        "--seed",
        "9",
        "--grid",
        "96",
    ];
    let (a, b) = (bin(&args), bin(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Arbitrary argument vectors never panic and exit with 0, 1 or 2.
    #[test]
    fn arbitrary_arguments_never_crash(
        cmd in prop::sample::select(vec!["check", "bracket", "extactic", "first-integral", "integrate", "classify"]),
        words in prop::collection::vec("(--px|--qy|--rz|--m|--num|--start|--point|--t-end|[xyz0-9+*/^(), .-]{0,12})", 0..8),
    ) {
        let mut argv = vec!["torus-fields".to_string(), cmd.to_string()];
        argv.extend(words);
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = cli::run(argv, &mut out, &mut err);
        prop_assert!((0..=2).contains(&code));
        if code == 1 {
            prop_assert!(!err.is_empty());
        }
    }
}

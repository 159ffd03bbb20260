use std::path::PathBuf;

use expsum::cli::problem::{FreqSpec, ProblemFile, Scalar, TermSpec};
use expsum::cli::run;
use proptest::prelude::*;
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["expsum"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn results(stdout: &str) -> Value {
    let v: Value = serde_json::from_str(stdout).unwrap();
    v["results"].clone()
}

#[test]
fn mean_two_term() {
    let (code, out, _) = invoke(&["mean", "--input", &data("two_term.json")]);
    assert_eq!(code, 0);
    let r = results(&out);
    assert_eq!(r["M"][0].as_f64(), Some(-1.0));
    assert_eq!(r["M"][1].as_f64(), Some(0.0));
    assert_eq!(r["exact"]["M"], "-1");
    assert_eq!(r["exact"]["A_first"], "2pi");
}

#[test]
fn density_two_term() {
    let (code, out, _) = invoke(&["density", "--input", &data("two_term.json")]);
    assert_eq!(code, 0);
    assert_eq!(results(&out)["density"].as_f64(), Some(1.0));

    let (code, out, _) = invoke(&["density", "--input", &data("two_term.json"), "--R", "10"]);
    assert_eq!(code, 0);
    let r = results(&out);
    assert_eq!(r["empirical"]["count"], 20);
    assert_eq!(r["empirical"]["density"].as_f64(), Some(1.0));
}

#[test]
fn zeros_with_points_file() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.csv");
    let (code, out, _) = invoke(&[
        "zeros", "--input", &data("quadratic.json"), "--R", "1.5", "--emit-points",
        points.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let r = results(&out);
    assert_eq!(r["outer_winding"], r["total_multiplicity"]);
    assert_eq!(r["fewnomial_ok"], true);
    let text = std::fs::read_to_string(&points).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,multiplicity"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), r["zeros"].as_array().unwrap().len());
    assert!(rows.iter().all(|row| row.len() == 3 && row[2] == 1.0));
}

#[test]
fn csv_output() {
    let (code, out, _) = invoke(&["zeros", "--input", &data("two_term.json"), "--R", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("re,im,multiplicity"));
    assert_eq!(out.lines().count(), 5);
    let (_, out, _) = invoke(&["mean", "--input", &data("two_term.json"), "--format", "csv"]);
    assert!(out.lines().any(|l| l == "M.0,-1.0000000000000000e0"));
}

#[test]
fn verify_sqrt2() {
    let (code, out, _) = invoke(&["verify", "--input", &data("sqrt2.json"), "--R-list", "5,10,20,40"]);
    assert_eq!(code, 0);
    let r = results(&out);
    assert_eq!(r["verdict"], "pass");
    let rows = r["rows"].as_array().unwrap();
    assert!(rows.last().unwrap()["abs_error"].as_f64().unwrap() < 0.05);
}

#[test]
fn laurent_check_agrees() {
    for file in ["quadratic.json", "half.json"] {
        let (code, out, err) = invoke(&["laurent-check", "--input", &data(file)]);
        assert_eq!(code, 0, "{err}");
        let r = results(&out);
        assert!(r["residue_vs_roots"].as_f64().unwrap() < 1e-8);
        assert!(r["mean_vs_substitution"].as_f64().unwrap() < 1e-9);
    }
    let (_, out, _) = invoke(&["laurent-check", "--input", &data("half.json")]);
    assert_eq!(results(&out)["q"], 6);
}

#[test]
fn exit_codes() {
    let (code, _, err) = invoke(&["mean", "--input", &data("two_term.json"), "--bogus"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"));
    assert_eq!(invoke(&["frobnicate"]).0, 2);
    assert_eq!(invoke(&["mean", "--input", "/nonexistent/problem.json"]).0, 2);
    assert_eq!(invoke(&["zeros", "--input", &data("two_term.json")]).0, 2);
    assert_eq!(invoke(&["verify", "--input", &data("sqrt2.json"), "--R-list", "5"]).0, 2);
    // irrational frequencies cannot be substituted
    assert_eq!(invoke(&["laurent-check", "--input", &data("sqrt2.json")]).0, 2);
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("laurent-check"));
}

#[test]
fn output_is_deterministic_without_timing() {
    let args = ["zeros", "--input", &data("sqrt2.json"), "--R", "6", "--seed", "7"];
    let (_, a, _) = invoke(&args);
    let (_, b, _) = invoke(&args);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert!(v["timing"].is_null());
    let (_, t, _) = invoke(&["mean", "--input", &data("two_term.json"), "--timing"]);
    let v: Value = serde_json::from_str(&t).unwrap();
    assert!(v["timing"]["elapsed_seconds"].is_f64());
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        (-9i64..=9).prop_map(Scalar::Int),
        (-4.0f64..4.0).prop_map(Scalar::Float),
        (-9i64..=9, 1i64..=9).prop_map(|(p, q)| Scalar::Text(format!("{p}/{q}"))),
    ]
}

fn term(dim: usize) -> impl Strategy<Value = TermSpec> {
    let freq = if dim == 1 {
        scalar().prop_map(FreqSpec::Single).boxed()
    } else {
        prop::collection::vec(scalar(), dim).prop_map(FreqSpec::Vector).boxed()
    };
    (scalar(), scalar(), freq).prop_map(|(re, im, freq)| TermSpec { coeff: [re, im], freq })
}

proptest! {
    #[test]
    fn problem_round_trip_is_idempotent(
        f in prop::collection::vec(term(2), 1..4),
        g in prop::option::of(prop::collection::vec(term(2), 1..3)),
        exact in any::<bool>(),
    ) {
        let json = serde_json::json!({
            "basis": ["1", "1.4142135623730950488016887242096980786"],
            "mode": if exact { "exact" } else { "float" },
            "f": f,
            "g": g,
        });
        let first = ProblemFile::from_json(&json.to_string()).unwrap();
        let text = first.to_json();
        let second = ProblemFile::from_json(&text).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(text, second.to_json());
    }
}

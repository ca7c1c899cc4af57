use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;

use adelekit_core::adele::LocalComponent;
use adelekit_core::descent::Cocycle;
use adelekit_core::field::PrimeField;
use adelekit_core::json::cocycle_to_json;
use adelekit_core::local::LocalElt;
use adelekit_core::point::ClosedPoint;
use adelekit_core::rat::Rat;
use serde_json::{json, Value};

fn run(args: &[&str], env: &[(&str, &str)]) -> (i32, Value, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_adelekit"));
    cmd.args(args).env_remove("ADELEKIT_PRECISION");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(stdout.trim()).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v, stdout)
}

fn write(name: &str, v: &Value) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path.to_string_lossy().into_owned()
}

fn f5() -> PrimeField {
    PrimeField::new(5).unwrap()
}

/// The rank-1 cocycle of the idele with `p^e` at each listed point.
fn line(k: &PrimeField, at: &[(&str, i64)]) -> Value {
    let exc: BTreeMap<_, _> = at
        .iter()
        .map(|(p, e)| {
            let x = ClosedPoint::parse(k, p).unwrap();
            let f = Rat::parse(k, p, "1").unwrap().pow(*e).unwrap();
            (x, LocalElt::Exact(f))
        })
        .collect();
    let g = LocalComponent::new(exc, Rat::one(k));
    cocycle_to_json(&Cocycle::from_weil(k, &[vec![g]]).unwrap())
}

#[test]
fn cohomology_matches_the_cech_oracle() {
    let (code, v, _) = run(&["cohomology", "--sheaf", "O(3)", "--field", "f5", "--oracle", "cech"], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["dims"], json!({"0": 4, "1": 0}));
    assert_eq!(v["diff"], json!([]));
    for n in -4..=4i64 {
        let sheaf = format!("O({n})");
        let (code, v, _) = run(&["cohomology", "--sheaf", &sheaf, "--field", "q", "--oracle", "cech"], &[]);
        assert_eq!(code, 0, "{sheaf}");
        // monomials t^i with 0 <= i <= n, and n < i < 0
        let h0 = (0..=n).count();
        let h1 = (n + 1..0).count();
        assert_eq!(v["dims"], json!({"0": h0, "1": h1}), "{sheaf}");
    }
}

#[test]
fn constants_and_skyscrapers() {
    let (code, v, _) = run(&["cohomology", "--sheaf", "O(0)"], &[]);
    assert_eq!((code, &v["dims"]), (0, &json!({"0": 1, "1": 0})));
    let (code, v, _) = run(&["cohomology", "--sheaf", "sky(t,2)"], &[]);
    assert_eq!((code, &v["dims"]), (0, &json!({"0": 2, "1": 0})));
    // the fiber at a degree-2 point is 2-dimensional over F_5
    let (_, v, _) = run(&["cohomology", "--sheaf", "sky(t^2+2,1;t,1)"], &[]);
    assert_eq!(v["dims"], json!({"0": 3, "1": 0}));
}

#[test]
fn working_precision_bounds_the_windows() {
    let args = ["cohomology", "--sheaf", "O(-6)"];
    let (code, v, _) = run(&args, &[("ADELEKIT_PRECISION", "3")]);
    assert_eq!(code, 2);
    assert_eq!(v["stabilized"], json!(false));
    assert_eq!(v["precision"], json!(3));
    let (code, v, _) = run(&args, &[]);
    assert_eq!(code, 0);
    assert_eq!(v["precision"], json!(16));
    assert_eq!(v["dims"], json!({"0": 0, "1": 5}));
    let (code, _, _) = run(&["cohomology", "--sheaf", "O(-6)", "--precision", "0"], &[]);
    assert_eq!(code, 1);
}

#[test]
fn structure_sheaf_on_spec_z() {
    let (code, v, _) = run(&["cohomology", "--model", "specz", "--sheaf", "O"], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["ranks"], json!({"0": 1, "1": 0}));
}

#[test]
fn glue_reports_degree_and_cohomology() {
    let k = f5();
    let path = write("t_squared.json", &line(&k, &[("t", 2)]));
    let (code, v, _) = run(&["glue", "--cocycle", &path], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["validation"]["status"], json!("valid"));
    assert_eq!(v["degree"], json!(2));
    assert_eq!(v["splitting_type"], json!([2]));
    assert_eq!(v["cohomology"], json!({"0": 3, "1": 0}));
    assert_eq!(v["weil"]["degree"], json!(2));
}

#[test]
fn corrupted_integral_component_is_rejected() {
    let mut c = cocycle_to_json(&Cocycle::identity(&f5(), 1));
    c["entries"][0][0]["components"]["(x,x)"]["default"] = json!({"num": "2"});
    let path = write("corrupted.json", &c);
    let (code, v, _) = run(&["glue", "--cocycle", &path, "--check-only"], &[]);
    assert_eq!(code, 1);
    assert_eq!(v["validation"]["status"], json!("invalid"));
    assert_eq!(v["validation"]["witness"]["pattern"], json!("(x,x,eta)"));
}

#[test]
fn splitting_types() {
    let k = f5();
    let id = write("identity3.json", &cocycle_to_json(&Cocycle::identity(&k, 3)));
    let (code, v, _) = run(&["splitting", "--cocycle", &id], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["splitting_type"], json!([0, 0, 0]));

    let t = json!({"exceptions": {"t": {"num": "t"}}});
    let inv = json!({"exceptions": {"t": {"num": "1", "den": "t"}}});
    let one = json!({"exceptions": {"t": {"num": "1"}}, "default": "zero"});
    let zero = json!({"default": "zero"});
    let unipotent = write("unipotent.json", &json!({"rank": 2, "weil": [[t, one], [zero, inv]]}));
    let diagonal = write("diagonal.json", &json!({"rank": 2, "weil": [[t, zero], [zero, inv]]}));
    let (_, v, _) = run(&["splitting", "--cocycle", &unipotent], &[]);
    assert_eq!(v["splitting_type"], json!([0, 0]));
    let (_, v, _) = run(&["splitting", "--cocycle", &diagonal], &[]);
    assert_eq!(v["splitting_type"], json!([1, -1]));
}

#[test]
fn equivalence_with_witness() {
    let k = f5();
    let a = write("at_t.json", &line(&k, &[("t", 1)]));
    let b = write("at_t_minus_1.json", &line(&k, &[("t-1", 1)]));
    let (code, v, _) = run(&["equiv", &a, &b], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["equivalent"], json!("yes"));
    // psi = g_F phi g_O^{-1} forces g_F = (t-1)/t up to a constant unit
    assert_eq!(v["witness"]["g_F"], json!([[{"num": "t+4", "den": "t"}]]));

    let c = write("t_squared_again.json", &line(&k, &[("t", 2)]));
    let d = write("two_points.json", &line(&k, &[("t", 1), ("t-1", 1)]));
    let (_, v, _) = run(&["equiv", &c, &d], &[]);
    assert_eq!(v["equivalent"], json!("yes"));
    let (code, v, _) = run(&["equiv", &a, &c], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["equivalent"], json!("no"));
    assert!(v.get("witness").is_none());
}

#[test]
fn suites_pass_and_are_deterministic() {
    let (code, v, first) = run(&["suite", "cosimplicial", "--seed", "7"], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], json!(true));
    let (_, _, second) = run(&["suite", "cosimplicial", "--seed", "7"], &[]);
    assert_eq!(first, second);

    let (code, v, _) = run(&["suite", "homotopy", "--model", "fp4chain"], &[]);
    assert_eq!(code, 0);
    assert!(v["properties"].as_array().unwrap().iter().all(|p| p["checked"].as_u64().unwrap() > 0));

    let (code, v, _) = run(&["suite", "descent", "--rank", "2", "--samples", "50"], &[]);
    assert_eq!(code, 0);
    assert!(v.get("first_failure").is_none());

    let (code, _, _) = run(&["suite", "homotopy", "--model", "fpxchain"], &[]);
    assert_eq!(code, 1);
}

#[test]
fn output_file_matches_stdout() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("report.json");
    let p = path.to_string_lossy().into_owned();
    let (_, _, stdout) = run(&["cohomology", "--sheaf", "O(2)"], &[]);
    let (code, _, quiet) = run(&["cohomology", "--sheaf", "O(2)", "--output", &p], &[]);
    assert_eq!((code, quiet.as_str()), (0, ""));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
}

#[test]
fn paper_demos_all_pass() {
    let (code, v, _) = run(&["paper-demos"], &[]);
    assert_eq!(code, 0);
    let demos = v["demos"].as_array().unwrap();
    assert_eq!(demos.len(), 4);
    assert!(demos.iter().all(|d| d["passed"] == json!(true)));
}

#[test]
fn bad_input_fails_cleanly() {
    let (code, _, _) = run(&["cohomology", "--sheaf", "O(1)", "--field", "f4"], &[]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["glue", "--cocycle", "/nonexistent.json"], &[]);
    assert_eq!(code, 1);
}

#[test]
fn series_data_below_working_precision_is_indeterminate() {
    // t + t^2 + O(t^6) at the origin
    let s = json!({"point": "t", "val": 1, "coeffs": ["1", "1"], "prec": 6});
    let path = write("series.json", &json!({"rank": 1, "weil": [[{"exceptions": {"t": s}}]]}));
    let (code, v, _) = run(&["glue", "--cocycle", &path], &[]);
    assert_eq!(code, 4);
    assert_eq!(v["validation"]["status"], json!("indeterminate"));
    let (code, v, _) = run(&["glue", "--cocycle", &path], &[("ADELEKIT_PRECISION", "6")]);
    assert_eq!(code, 0);
    assert_eq!(v["degree"], json!(1));
}

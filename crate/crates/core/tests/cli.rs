mod common;

use common::fixture;
use tropper::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tropper").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(name: &str) -> String {
    fixture(&format!("{name}.toml"))
}

#[test]
fn period_of_kp1() {
    let (code, out, _) = call(&["period", "--scene", &path("kp1"), "--cycle", "circle"]);
    assert_eq!(code, 0);
    assert!(out.contains("a*b"), "{out}");
}

#[test]
fn period_json_out() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.json");
    let (code, _, _) = call(&["period", "--scene", &path("kp2"), "--cycle", "green", "--json-out", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(v["t_exponent"], 8);
    assert_eq!(v["cycle"], "green");
    assert!(v["report"].as_array().is_some_and(|r| !r.is_empty()));
}

#[test]
fn pairings() {
    let json = |args: &[&str]| -> serde_json::Value { serde_json::from_str(&call(args).1).unwrap() };
    assert_eq!(json(&["pair-c1", "--scene", &path("kp2"), "--cycle", "green"])["c1"], 8);
    let m = json(&["monodromy", "--scene", &path("kp1"), "--cycle", "circle"]);
    assert!(m.as_object().unwrap().values().any(|v| v == 0), "{m}");
}

#[test]
fn validate() {
    let (code, out, _) = call(&["validate", "--scene", &path("kp2")]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = call(&["validate", "--scene", &path("broken")]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn normalize_slabs() {
    let (code, out, _) = call(&["normalize", "--scene", &path("kp2")]);
    assert_eq!(code, 0);
    assert!(out.contains("-2*s + 5*s^2 - 32*s^3"), "{out}");
}

#[test]
fn normalize_cycle_is_loadable() {
    let (code, out, _) = call(&["normalize", "--scene", &path("kp1"), "--cycle", "circle"]);
    assert_eq!(code, 0);
    let _: toml::Value = toml::from_str(&out).unwrap();
}

#[test]
fn order_and_ronkin() {
    let (code, out, _) = call(&["order", "--scene", &path("kp1"), "--at", "2.5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["order"], serde_json::json!([1]));
    let (code, out, _) = call(&["amoeba", "ronkin", "--scene", &path("kp1"), "--at=-2.5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let re = v["numeric_mod_t"][0].as_f64().unwrap();
    assert!((re - 0.3f64.ln()).abs() < 1e-8, "{re}");
}

#[test]
fn consistency() {
    let (code, out, _) = call(&["consistency", "--scene", &path("ks")]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn homology() {
    let (code, out, _) = call(&["homology", "--complex", &path("annulus_ff")]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn picard_from_pairings() {
    let (code, out, _) = call(&["picard", "--pairings", &path("picard20")]);
    assert_eq!(code, 0);
    assert!(out.contains("19"), "{out}");
}

#[test]
fn lemmas() {
    assert_eq!(call(&["lemmas", "alternating", "--max", "12"]).0, 0);
    assert_eq!(call(&["lemmas", "gamma"]).0, 0);
}

#[test]
fn amoeba_plot_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("a.svg");
    let (code, _, err) = call(&[
        "amoeba-plot", "--scene", &path("kp2"), "--lo=-4,-4", "--hi", "4,4", "--resolution", "16", "--svg", svg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn usage_and_domain_errors() {
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["period"]).0, 2);
    let (code, _, err) = call(&["period", "--scene", &path("kp1"), "--cycle", "nope"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"));
    let (code, _, _) = call(&["period", "--scene", "/nonexistent.toml"]);
    assert_eq!(code, 1);
}

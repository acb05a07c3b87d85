use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const TREFOIL_F: &str = "(x-y)*(y-z)*z";
const FIGURE_EIGHT_F: &str = "(x+y)^3*(y+z)*(y-z)^3*z^5";
const TORUS_LINK_F: &str = "(x+y)^2*(y-z)^3*z^5";

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tribound"))
        .args(args)
        .env_remove("TRIBOUND_CACHE")
        .env("XDG_CACHE_HOME", std::env::temp_dir().join("tribound-cli-tests-unused"))
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let report = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().unwrap(), report)
}

fn ints(v: &Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_fixture() {
    let d1 = fixture("d1");
    let (code, r) = run_json(&["validate", path_str(&d1)]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["command"], "validate");
    assert_eq!(r["results"]["crossings"], 3);
    assert_eq!(r["results"]["faces"], 5);
    assert!(r["results"].get("derived").is_none());
}

#[test]
fn validate_emits_derived_data() {
    let d3 = fixture("d3");
    let (code, r) = run_json(&["validate", path_str(&d3), "--emit-derived"]);
    assert_eq!(code, 0);
    let derived = &r["results"]["derived"];
    assert_eq!(derived["arcs"].as_array().unwrap().len(), 4);
    assert_eq!(derived["faces"].as_array().unwrap().len(), 6);
    let signs: Vec<i64> =
        derived["signs"].as_array().unwrap().iter().map(|p| p[1].as_i64().unwrap()).collect();
    assert_eq!(signs.iter().filter(|&&s| s == 1).count(), 2);
    assert_eq!(signs.iter().filter(|&&s| s == -1).count(), 2);
}

#[test]
fn validate_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("d1")).unwrap();
    let mut spec: Value = serde_json::from_str(&text).unwrap();
    spec["crossings"][0]["slots"][0]["edge"] = 3.into();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, spec.to_string()).unwrap();
    let (code, r) = run_json(&["validate", path_str(&broken)]);
    assert_eq!(code, 2);
    assert_eq!(r["results"]["valid"], false);
    let kinds: Vec<&str> = r["results"]["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["kind"].as_str().unwrap())
        .collect();
    assert!(kinds.contains(&"edge_usage"), "{kinds:?}");

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{").unwrap();
    assert_eq!(run(&["validate", path_str(&garbage)]).status.code(), Some(2));
}

#[test]
fn coloring_counts() {
    let d1 = fixture("d1");
    let d3 = fixture("d3");
    let (_, r) = run_json(&["colorings", path_str(&d1), "-n", "3"]);
    assert_eq!(r["results"]["count"], 9);
    let (_, r) = run_json(&["colorings", path_str(&d3), "-n", "5", "--nontrivial-only"]);
    assert_eq!(r["results"]["listed"], 20);
    let (_, r) = run_json(&["colorings", path_str(&d1), "-n", "1"]);
    assert_eq!(r["results"]["count"], 1);
    let (code, _) = run_json(&["colorings", path_str(&d1), "-n", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn colorings_with_regions() {
    let d1 = fixture("d1");
    let (_, r) = run_json(&["colorings", path_str(&d1), "-n", "3", "-s", "0"]);
    let first = &r["results"]["colorings"][0];
    assert_eq!(first["region_colors"].as_array().unwrap().len(), 5);
}

#[test]
fn weights_and_value_sets() {
    let d1 = fixture("d1");
    let d2 = fixture("d2");
    let d6 = fixture("d6");
    let (code, r) = run_json(&["weight", path_str(&d1), "-n", "3", "-f", TREFOIL_F, "-s", "0"]);
    assert_eq!(code, 0);
    assert!(ints(&r["results"]["phi"]["values"]).contains(&-8));
    let (_, r) = run_json(&["weight", path_str(&d2), "-n", "3", "-f", TREFOIL_F, "-s", "0"]);
    assert_eq!(ints(&r["results"]["phi"]["values"]), vec![-2, 2]);
    let (_, r) = run_json(&["weight", path_str(&d6), "-n", "4", "-f", TORUS_LINK_F, "-s", "0"]);
    assert_eq!(ints(&r["results"]["phi"]["values"]), vec![-3744, -1004, 0, 292]);

    let (_, r) = run_json(&[
        "weight", path_str(&d1), "-n", "3", "-f", TREFOIL_F, "-s", "0", "--coloring", "0",
    ]);
    assert_eq!(r["results"]["trivial"], true);
    assert_eq!(r["results"]["weight"]["value"], 0);
}

#[test]
fn weight_refuses_bad_cochains() {
    let d1 = fixture("d1");
    let out = run(&["weight", path_str(&d1), "-n", "3", "-f", "x", "-s", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("f(1, 0, 0)"));
    let out = run(&["weight", path_str(&d1), "-n", "3", "-f", "x^(-1)", "-s", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["weight", path_str(&d1), "-n", "3", "-f", TREFOIL_F, "-s", "0", "--coloring", "99"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn delta_levels_and_image_sizes() {
    let (code, r) = run_json(&["delta", "-n", "3", "-f", TREFOIL_F, "--max-m", "1", "--no-cache"]);
    assert_eq!(code, 0);
    assert_eq!(
        ints(&r["results"]["levels"][1]["set"]["values"]),
        vec![-11, -8, -7, -5, -4, -2, -1, 0, 1, 2, 4, 5, 7, 8, 11]
    );
    let (_, r) = run_json(&["delta", "-n", "5", "-f", FIGURE_EIGHT_F, "--no-cache"]);
    assert_eq!(r["results"]["image_size"], 393);
    assert!(r["results"]["image"].get("values").is_none());
    assert_eq!(r["results"]["image"]["size"], 393);
    let (_, r) = run_json(&["delta", "-n", "4", "-f", TORUS_LINK_F, "--no-cache"]);
    assert_eq!(r["results"]["image_size"], 105);
}

#[test]
fn delta_cap_exits_4() {
    let out = run(&["delta", "-n", "3", "-f", TREFOIL_F, "--max-m", "2", "--level-cap", "20", "--no-cache"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn warm_cache_matches_cold() {
    let dir = tempfile::tempdir().unwrap();
    let cache = path_str(dir.path());
    let args = ["delta", "-n", "5", "-f", FIGURE_EIGHT_F, "--max-m", "2", "--cache", cache];
    let (_, cold) = run_json(&args);
    let (_, warm) = run_json(&args);
    assert_eq!(cold["cache"]["hits"], 0);
    assert_eq!(cold["cache"]["writes"], 1);
    assert_eq!(warm["cache"]["hits"], 1);
    assert_eq!(warm["cache"]["writes"], 0);
    assert_eq!(cold["results"], warm["results"]);
    let file = warm["results"]["cache_file"].as_str().unwrap();
    assert!(Path::new(file).exists());

    // an equal expansion shares the entry
    let (_, other) = run_json(&[
        "delta", "-n", "5", "-f", "z^5*(y-z)^3*(y+z)*(y+x)^3", "--max-m", "2", "--cache", cache,
    ]);
    assert_eq!(other["cache"]["hits"], 1);
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_tribound"))
        .args(["--json", "delta", "-n", "3", "-f", TREFOIL_F])
        .env("TRIBOUND_CACHE", dir.path())
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["cache"]["dir"], path_str(dir.path()));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn certify_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let cache = path_str(dir.path());
    let (d1, d2, d3, d4) = (fixture("d1"), fixture("d2"), fixture("d3"), fixture("d4"));
    let (code, r) = run_json(&[
        "certify", path_str(&d1), path_str(&d2), "-n", "3", "-f", TREFOIL_F, "-s", "0", "--max-m",
        "2", "--cache", cache,
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["certificate"]["certified_m"], 2);
    assert_eq!(r["results"]["verified"], true);
    assert_eq!(ints(&r["results"]["certificate"]["differences"]), vec![-10, -6]);

    let (code, r) = run_json(&[
        "certify", path_str(&d3), path_str(&d4), "-n", "5", "-f", FIGURE_EIGHT_F, "-s", "2",
        "--max-m", "3", "--cache", cache,
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["certificate"]["certified_m"], 3);

    let (code, r) = run_json(&[
        "certify", path_str(&d1), path_str(&d1), "-n", "3", "-f", TREFOIL_F, "-s", "0", "--cache",
        cache,
    ]);
    assert_eq!(code, 3);
    assert_eq!(r["results"]["certificate"]["certified_m"], 0);
    assert_eq!(r["results"]["certificate"]["first_hit"], 0);
}

#[test]
fn reproduce_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = run_json(&["reproduce", "--cache", path_str(dir.path())]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["passed"], true);
    let bounds: Vec<i64> =
        r["results"]["bounds"].as_array().unwrap().iter().map(|b| b["m"].as_i64().unwrap()).collect();
    assert_eq!(bounds, vec![2, 3, 3]);

    let text = run(&["reproduce", "--cache", path_str(dir.path())]);
    let stdout = String::from_utf8_lossy(&text.stdout);
    assert!(stdout.lines().all(|l| !l.starts_with("FAIL")));
    assert!(stdout.contains("PASS bound d3 -> d4"));
}

#[test]
fn reproduce_flags_a_wrong_fixture() {
    let dir = tempfile::tempdir().unwrap();
    for i in 1..=6 {
        let name = format!("d{i}");
        std::fs::copy(fixture(&name), dir.path().join(format!("{name}.json"))).unwrap();
    }
    // d2 with the outer face of d1 is no longer the reference diagram
    let d2 = dir.path().join("d2.json");
    let mut spec: Value = serde_json::from_str(&std::fs::read_to_string(&d2).unwrap()).unwrap();
    spec["outer_face"] = 0.into();
    std::fs::write(&d2, spec.to_string()).unwrap();

    let out = run(&["reproduce", "--fixtures", path_str(dir.path()), "--no-cache"]);
    assert_eq!(out.status.code(), Some(3));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let fail = stdout.lines().find(|l| l.starts_with("FAIL phi d2")).expect("phi check fails");
    assert!(fail.contains("expected [-2, 2]"), "{fail}");
    assert!(fail.contains("missing") || fail.contains("unexpected"), "{fail}");
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["delta", "-n", "3"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let d1 = fixture("d1");
    let out = run(&["certify", path_str(&d1), path_str(&d1), "-n", "3", "-f", TREFOIL_F, "-s", "0", "--max-m", "0", "--no-cache"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_error_shape() {
    let (code, r) = run_json(&["delta", "-n", "3", "-f", "w", "--no-cache"]);
    assert_eq!(code, 2);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["error"]["kind"], "input");
}

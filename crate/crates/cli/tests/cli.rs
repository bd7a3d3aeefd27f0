//! End-to-end runs of the binary against the fixtures directory.
//!
//! Exact-arithmetic commands are compared byte for byte with files in
//! `tests/golden`; set `SUPERLIE_BLESS=1` to rewrite them. Float commands are
//! checked structurally.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_superlie"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8 stdout"))
}

fn report(args: &[&str], code: i32) -> Value {
    let (c, out) = run(args);
    assert_eq!(c, code, "{args:?} exited {c}, stdout:\n{out}");
    serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: stdout is not JSON ({e}):\n{out}"))
}

/// (golden name, arguments, exit code)
const GOLDEN: &[(&str, &[&str], i32)] = &[
    ("jacobi_ok", &["algebra", "jacobi", "--in", "clifford1.json"], 0),
    ("jacobi_bad", &["algebra", "jacobi", "--in", "clifford1_bad.json"], 1),
    ("pbw_xx", &["pbw", "normalize", "--algebra", "clifford1.json", "--word", "x x"], 0),
    ("pbw_leftmost", &["pbw", "normalize", "--algebra", "builtin:nil22", "--word", "y x a x", "--strategy", "leftmost"], 0),
    ("star", &["star", "--algebra", "clifford1.json", "--element", "x z + 2 z"], 0),
    ("hcpair_check", &["hcpair", "check", "--pair", "clifford1_pair.json", "--samples", "10", "--seed", "3"], 0),
    ("lambda_mul", &["lambda", "mul", "--pair", "clifford1_pair.json", "--left", "point_a.json", "--right", "point_b.json"], 0),
    ("lambda_exp", &["lambda", "exp", "--pair", "builtin:nil22", "--point", "point_a.json"], 0),
    ("lambda_functor", &["lambda", "functor", "--pair", "builtin:clifford1", "--point", "point_a.json", "--morphism", "swap.json"], 0),
    ("lambda_bullet", &["lambda", "bullet", "--pair", "builtin:nil22", "--samples", "20", "--seed", "5"], 0),
    ("skeleton_eval", &["skeleton", "eval", "--algebra", "builtin:clifford1", "--skeleton", "skeleton_clifford.json", "--point", "chart_point.json"], 0),
    ("phi_forward_word", &["phi", "forward", "--pair", "builtin:clifford1", "--skeleton", "skeleton_clifford.json", "--word", "x z"], 0),
    ("phi_forward_form", &["phi", "forward", "--pair", "builtin:clifford1", "--skeleton", "skeleton_clifford.json", "--degree", "2"], 0),
    ("phi_roundtrip", &["phi", "roundtrip", "--pair", "builtin:nil22", "--skeleton", "skeleton_nil22.json"], 0),
    ("monoid_mul", &["monoid", "mul", "--pair", "builtin:clifford1", "--left", "selement_a.json", "--right", "selement_b.json"], 0),
    ("monoid_star", &["monoid", "star", "--pair", "builtin:clifford1", "--element", "selement_a.json"], 0),
    ("moment_ok", &["moment", "check", "--in", "good_moment.json", "--algebra", "clifford1.json", "--degree", "3"], 0),
    ("moment_bad", &["moment", "check", "--in", "bad_moment.json", "--algebra", "clifford1.json", "--degree", "3"], 1),
];

#[test]
fn golden_reports() {
    let bless = std::env::var_os("SUPERLIE_BLESS").is_some();
    let mut mismatches = Vec::new();
    for (name, args, code) in GOLDEN {
        let (c, out) = run(args);
        assert_eq!(c, *code, "{name}: exit {c}, stdout:\n{out}");
        let path = golden_dir().join(format!("{name}.json"));
        if bless {
            std::fs::create_dir_all(golden_dir()).unwrap();
            std::fs::write(&path, &out).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
        if expected != out {
            mismatches.push(*name);
        }
    }
    assert!(mismatches.is_empty(), "golden mismatch: {mismatches:?}");
}

#[test]
fn doc_example_normalizes_odd_square() {
    let r = report(&["pbw", "normalize", "--algebra", "clifford1.json", "--word", "x x"], 0);
    assert_eq!(r["result"]["result"], "1/2 z");
    assert_eq!(r["ok"], true);
}

#[test]
fn corrupted_algebra_reports_witness_triples() {
    let r = report(&["algebra", "jacobi", "--in", "clifford1_bad.json"], 1);
    let v = r["result"]["violations"].as_array().unwrap();
    assert!(!v.is_empty());
    assert_eq!(v[0]["triple"].as_array().unwrap().len(), 3);
}

#[test]
fn flipped_moment_fails_with_witness() {
    let r = report(&["moment", "check", "--in", "bad_moment.json", "--algebra", "clifford1.json", "--degree", "3"], 1);
    assert_eq!(r["result"]["verdict"], "not-positive");
    assert!(r["result"]["witness"].as_array().is_some_and(|w| !w.is_empty()));
    let ok = report(&["moment", "check", "--in", "good_moment.json", "--algebra", "clifford1.json", "--degree", "3"], 0);
    assert_eq!(ok["result"]["verdict"], "positive-at-degree-3");
}

#[test]
fn report_envelope_carries_provenance() {
    let r = report(&["hcpair", "check", "--pair", "clifford1_pair.json", "--seed", "11", "--tolerance", "1e-7"], 0);
    assert_eq!(r["seed"], 11);
    assert_eq!(r["tolerance"], 1e-7);
    assert_eq!(r["tool"]["name"], "superlie");
    let inputs = r["inputs"].as_object().unwrap();
    assert!(inputs.contains_key("clifford1_pair.json"));
    assert!(inputs.contains_key("clifford1.json"));
    assert!(inputs.values().all(|d| d.as_str().is_some_and(|s| s.len() == 64)));
}

#[test]
fn same_seed_reproduces_bytes() {
    let cases: &[&[&str]] = &[
        &["lambda", "bullet", "--pair", "builtin:nil22", "--samples", "30", "--seed", "9"],
        &["hcpair", "check", "--pair", "builtin:scaling11", "--samples", "30", "--seed", "9"],
        &["gns", "verify", "--in", "clifford_gns.json", "--samples", "30", "--seed", "9"],
    ];
    for args in cases {
        let (c1, a) = run(args);
        let (c2, b) = run(args);
        assert_eq!((c1, c2), (0, 0), "{args:?}");
        assert_eq!(a, b, "{args:?} is not reproducible");
    }
}

#[test]
fn gns_commands_pass_on_clifford() {
    let b = report(&["gns", "build", "--in", "clifford_gns.json"], 0);
    assert_eq!(b["result"]["rank"], 2);
    let v = report(&["gns", "verify", "--in", "clifford_gns.json", "--samples", "40"], 0);
    assert!(v["result"]["residuals"]["reconstruction"].as_f64().unwrap() < 1e-9);
    let t = report(&["gns", "intertwine", "--in", "clifford_gns.json"], 0);
    assert!(t["result"]["residual"].as_f64().unwrap() < 1e-9);
    assert!(t["result"]["note"].as_str().unwrap().contains("finite quotient"));
}

#[test]
fn moment_gns_and_growth_run() {
    let g = report(&["moment", "gns", "--in", "good_moment.json", "--algebra", "clifford1.json", "--degree", "3"], 0);
    assert_eq!(g["result"]["rank"], 2);
    let h = report(&["moment", "growth", "--in", "good_moment.json", "--algebra", "clifford1.json", "--x", "z", "--n", "3"], 0);
    assert_eq!(h["result"]["label"], "HEURISTIC");
}

#[test]
fn phi_inverse_recovers_skeleton() {
    let f = report(&["phi", "forward", "--pair", "builtin:clifford1", "--skeleton", "skeleton_clifford.json", "--degree", "3"], 0);
    let dir = std::env::temp_dir().join(format!("superlie-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("homform.json");
    std::fs::write(&path, serde_json::to_string(&f["result"]).unwrap()).unwrap();
    let p = path.to_str().unwrap();
    let r = report(&["phi", "inverse", "--pair", "builtin:clifford1", "--homform", p, "--odd-cap", "1"], 0);
    let forms = r["result"]["skeleton"]["forms"].as_array().unwrap();
    assert_eq!(forms.len(), 2);
    assert_eq!(forms[1]["poly"], "3 u");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_two_on_usage_schema_and_capability_errors() {
    let cases: &[&[&str]] = &[
        &["no-such-command"],
        &["pbw", "normalize", "--algebra", "missing.json", "--word", "x"],
        &["pbw", "normalize", "--algebra", "builtin:clifford1", "--word", "q"],
        &["pbw", "normalize", "--algebra", "builtin:clifford1", "--word", "x", "--strategy", "random"],
        &["algebra", "jacobi", "--in", "point_a.json"],
        &["lambda", "exp", "--pair", "builtin:scaling11", "--point", "torus_exp.json"],
        &["phi", "forward", "--pair", "builtin:scaling11", "--skeleton", "skeleton_clifford.json"],
        &["moment", "check", "--in", "good_moment.json", "--algebra", "clifford1.json", "--degree", "4"],
        &["moment", "check", "--in", "good_moment.json"],
        &["skeleton", "eval", "--algebra", "builtin:nil22", "--skeleton", "skeleton_clifford.json", "--point", "chart_point.json"],
    ];
    for args in cases {
        let (c, out) = run(args);
        assert_eq!(c, 2, "{args:?} exited {c}:\n{out}");
    }
}

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.display().to_string()
}

fn lca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lca"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn verify_vir_passes() {
    let out = lca(&["verify", &fixture("vir.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["counts"]["checked"], 1);
    assert_eq!(r["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_broken_reports_skew_residual() {
    let out = lca(&["verify", &fixture("broken.json")]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["status"], "fail");
    let v = &r["violations"][0];
    assert_eq!(v["section"], "skew");
    assert_eq!(v["residuals"][0]["poly"], "-d");
}

#[test]
fn verify_cl2_with_bindings_has_spectral_sections() {
    let out = lca(&[
        "verify",
        &fixture("cl2.json"),
        "--bind",
        "b=1",
        "--bind",
        "s=0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["status"], "pass");
    let names: Vec<&str> = r["sections"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["skew", "jacobi", "spectral", "degree", "support"]);
}

#[test]
fn family_scl2_verifies_and_matches_literal() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let oracle = lca(&["family", "SCL2", "--b", "1", "--window", "-6..6"]);
    let literal = lca(&["family", "SCL2Literal", "--b", "1", "--window", "-6..6"]);
    assert_eq!(oracle.status.code(), Some(0));
    assert_eq!(oracle.stdout, literal.stdout);
    std::fs::write(&a, &oracle.stdout).unwrap();
    std::fs::write(&b, &literal.stdout).unwrap();
    let r = json(&lca(&["verify", a.to_str().unwrap()]));
    assert_eq!(r["status"], "pass");
}

#[test]
fn family_cl1_grades() {
    let r = json(&lca(&["family", "CL1", "--N", "5"]));
    let grades: Vec<i64> = r["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["grade"].as_i64().unwrap())
        .collect();
    assert_eq!(grades, (-1..=5).collect::<Vec<_>>());
}

#[test]
fn family_v_at_zero_is_uniform() {
    let r = json(&lca(&["family", "V", "--s", "0", "--window", "-3..3"]));
    let brackets = r["brackets"].as_array().unwrap();
    assert!(!brackets.is_empty());
    for b in brackets {
        for t in b["terms"].as_array().unwrap() {
            assert_eq!(t["poly"], "d + 2*x");
        }
    }
}

#[test]
fn solve_feq_top_degree_three() {
    let out = lca(&["solve-feq", "--ai", "5/3", "--aj", "5/3", "--top", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["dimension"], 1);
    assert_eq!(r["basis"][0], "d^3 + 3/2*d^2*x - 3/2*d*x^2 - x^3");
}

#[test]
fn solve_feq_tables_pass() {
    let out = lca(&["solve-feq", "--tables"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["status"], "pass");
    let cases: usize = r["tables"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["cases"].as_array().unwrap().len())
        .sum();
    assert!(cases >= 14);
}

#[test]
fn solve_feq_shift_mismatch_is_empty() {
    let out = lca(&[
        "solve-feq",
        "--ai",
        "2",
        "--bi",
        "0",
        "--aj",
        "2",
        "--bj",
        "0",
        "--aij",
        "2",
        "--bij",
        "1",
        "--full",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["dimension"], 0);
}

#[test]
fn gd_to_lca_matches_family() {
    let via_gd = lca(&["gd", "to-lca", &fixture("a1.json"), "--s", "1"]);
    let direct = lca(&["family", "CL1", "--s", "1"]);
    assert_eq!(via_gd.status.code(), Some(0));
    assert_eq!(via_gd.stdout, direct.stdout);
}

#[test]
fn gd_from_lca_inverts() {
    let dir = tempfile::tempdir().unwrap();
    let cl2 = dir.path().join("cl2.json");
    std::fs::write(&cl2, lca(&["family", "CL2", "--s", "-1"]).stdout).unwrap();
    let back = lca(&["gd", "from-lca", cl2.to_str().unwrap()]);
    assert_eq!(back.status.code(), Some(0));
    assert_eq!(back.stdout, lca(&["gd", "family", "A2", "--s", "1"]).stdout);
}

#[test]
fn gd_check_a2_passes() {
    let out = lca(&["gd", "check", &fixture("a2.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "pass");
}

#[test]
fn ideal_check_scl2_pattern_closed() {
    let out = lca(&[
        "ideal-check",
        &fixture("cl2.json"),
        "--pattern",
        &fixture("scl2.json"),
        "--bind",
        "b=1/2",
        "--bind",
        "s=1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["sections"][0]["notes"][0], "closed");
}

#[test]
fn probe_finds_proper_closure_only_for_half_integer() {
    let half = lca(&[
        "probe",
        &fixture("cl2.json"),
        "--core",
        "-2..2",
        "--bind",
        "b=1/2",
        "--bind",
        "s=1",
    ]);
    assert_eq!(half.status.code(), Some(1));
    let r = json(&half);
    let seed0 = r["violations"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["at"] == "seed L0")
        .expect("seed L0 is deficient");
    assert_eq!(seed0["residuals"][0]["target"], "grade -1");
    assert_eq!(seed0["residuals"][0]["poly"], "d + 2");

    let third = lca(&[
        "probe",
        &fixture("cl2.json"),
        "--core",
        "-2..2",
        "--bind",
        "b=1/3",
        "--bind",
        "s=1",
    ]);
    assert_eq!(third.status.code(), Some(0));
}

#[test]
fn output_is_byte_stable_across_runs_and_threads() {
    let cl2 = fixture("cl2.json");
    let a2 = fixture("a2.json");
    let commands: [Vec<&str>; 3] = [
        vec!["verify", &cl2],
        vec!["gd", "check", &a2],
        vec![
            "probe", &cl2, "--core", "-1..1", "--bind", "b=1/2", "--bind", "s=1",
        ],
    ];
    for args in &commands {
        let first = lca(args);
        let again = lca(args);
        let mut seq = vec!["--sequential"];
        seq.extend(args.iter());
        let sequential = lca(&seq);
        assert_eq!(stdout(&first), stdout(&again));
        assert_eq!(stdout(&first), stdout(&sequential));
    }
}

#[test]
fn input_errors_exit_two() {
    let missing = lca(&["verify", "does-not-exist.json"]);
    assert_eq!(missing.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"params": [], "generators": [{"name": "L", "grade": 0}],
"brackets": [{"left": "L", "right": "L", "terms": [{"target": "L", "poly": "d + 2x"}]}]}"#,
    )
    .unwrap();
    let out = lca(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2:"));

    assert_eq!(lca(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(lca(&["solve-feq", "--ai", "1"]).status.code(), Some(2));
    assert_eq!(
        lca(&["family", "CL2", "--window", "3..1"]).status.code(),
        Some(2)
    );
    assert_eq!(lca(&["--help"]).status.code(), Some(0));
}

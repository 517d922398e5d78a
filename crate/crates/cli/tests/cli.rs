use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn uqcn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uqcn")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// Parsed report without the timing block.
fn report(o: &Output) -> Value {
    let mut v: Value = serde_json::from_slice(&o.stdout).expect("json report");
    v.as_object_mut().unwrap().remove("timing");
    v
}

fn golden(name: &str) -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn smallest_full_pipeline_passes() {
    let o = uqcn(&["all", "--rank", "1", "--cutoff", "2", "--window", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = report(&o);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["pass"], true);
    let names: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    for want in ["oscillator", "R8", "S2", "S3", "characters F1+F2", "highest weight 4", "sign matrix"] {
        assert!(names.contains(&want), "{want} missing from {names:?}");
    }
}

#[test]
fn golden_identities() {
    let o = uqcn(&["verify-identities", "--rank", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o), golden("verify_identities"));
}

#[test]
fn golden_characters() {
    let o = uqcn(&["characters", "--rank", "1", "--pmax", "2", "--weight-bound", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o), golden("characters_rank1"));
}

#[test]
fn golden_highest_weights() {
    let o = uqcn(&["highest-weights", "--rank", "2", "--window", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o), golden("highest_weights_rank2"));
}

#[test]
fn characters_rank_two_match_product_side() {
    let o = uqcn(&["characters", "--rank", "2", "--pmax", "1"]);
    assert_eq!(code(&o), 0);
    for r in report(&o)["results"].as_array().unwrap() {
        assert_eq!(r["section"]["data"]["mismatches"].as_array().unwrap().len(), 0);
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&uqcn(&["bogus"])), 1);
    assert_eq!(code(&uqcn(&["all", "--rank", "0"])), 1);
    assert_eq!(code(&uqcn(&["verify-relations", "--relations", "r10"])), 1);
    assert_eq!(code(&uqcn(&["all", "--cocycle", "/nonexistent/table.json"])), 1);
    assert_eq!(code(&uqcn(&["all", "--window", "x"])), 1);
    // a 2x2 table does not fit rank 2
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.json");
    std::fs::write(&p, "[[0,1],[0,0]]").unwrap();
    assert_eq!(code(&uqcn(&["verify-relations", "--cocycle", p.to_str().unwrap()])), 1);
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&uqcn(&["--help"])), 0);
}

#[test]
fn failing_verification_exits_two() {
    let table = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/flip_rank2.json");
    let o = uqcn(&[
        "verify-relations",
        "--rank",
        "2",
        "--relations",
        "r8",
        "--cutoff",
        "1",
        "--window",
        "1",
        "--sectors",
        "hw",
        "--cocycle",
        table.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
    let v = report(&o);
    assert_eq!(v["pass"], false);
    let r8 = &v["results"][0]["section"]["data"];
    assert!(r8["failures"].as_u64().unwrap() > 0);
    // every failure is an overall sign
    assert_eq!(r8["failures"], r8["sign_flips"]);
}

#[test]
fn identical_configs_give_identical_reports() {
    let args = ["screening", "--rank", "1", "--cutoff", "1", "--window", "1"];
    let (a, b) = (uqcn(&args), uqcn(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(report(&a), report(&b));
    // byte-level: strip the timing block textually from the file output
    let dir = tempfile::tempdir().unwrap();
    let strip = |path: &Path| {
        let s = std::fs::read_to_string(path).unwrap();
        s[..s.find("\"timing\"").unwrap()].to_string()
    };
    let (p1, p2) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&p1, &p2] {
        let mut full = args.to_vec();
        full.extend(["--out", p.to_str().unwrap()]);
        assert_eq!(code(&uqcn(&full)), 0);
    }
    // the output path itself is echoed in the config
    assert_eq!(strip(&p1).replace("a.json", "X"), strip(&p2).replace("b.json", "X"));
}

#[test]
fn text_format_has_one_line_per_result() {
    let o = uqcn(&["verify-identities", "--format", "text"]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().take(3).all(|l| l.starts_with("PASS ")));
    assert_eq!(lines[3], "overall: PASS");
}

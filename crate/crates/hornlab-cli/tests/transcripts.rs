//! Frozen transcripts for the pinned examples, plus exit-code and
//! determinism checks.  Expected stdout lives in `tests/golden/`.

use std::path::PathBuf;
use std::process::{Command, Output};

fn hornlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hornlab"))
        .args(args)
        .env_remove("HORNLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> Vec<u8> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name]
        .iter()
        .collect();
    std::fs::read(&path).unwrap_or_else(|e| panic!("missing golden file {path:?}: {e}"))
}

fn assert_transcript(args: &[&str], name: &str, code: i32) {
    let out = hornlab(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {out:?}");
    let want = golden(name);
    assert_eq!(
        out.stdout,
        want,
        "{args:?} drifted from {name}:\n--- got ---\n{}\n--- want ---\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&want)
    );
}

#[test]
fn tableau_coefficient_transcripts() {
    assert_transcript(&["lr", "--lam", "3,2,1", "--mu", "3,2,2", "--nu", "5,4,3,1"], "lr_543.txt", 0);
    assert_transcript(&["lr", "--lam", "2,1", "--mu", "2,1", "--nu", "3,2,1"], "lr_321.txt", 0);
    assert_transcript(
        &["lr", "--lam", "2,1", "--mu", "2,1", "--nu", "3,2,1", "--witness"],
        "lr_321_witness.txt",
        0,
    );
}

#[test]
fn inequality_set_transcript() {
    assert_transcript(&["horn-set", "--kind", "T", "--r", "1", "--n", "3", "--json"], "tset_1_3.txt", 0);
    let out = hornlab(&["horn-set", "--kind", "T", "--r", "1", "--n", "3", "--json"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 6);
}

#[test]
fn feasibility_transcripts() {
    assert_transcript(
        &["check-spectra", "--alpha", "3,-1", "--beta", "0,0", "--gamma", "3,-1"],
        "feasible.txt",
        0,
    );
    assert_transcript(
        &["check-spectra", "--alpha", "2,1", "--beta", "2,1", "--gamma", "4,1", "--json"],
        "infeasible_trace.txt",
        3,
    );
    // A genuine inequality violation carries a witness.
    let out = hornlab(&["check-spectra", "--alpha", "3,0", "--beta", "1,0", "--gamma", "2,2", "--json"]);
    assert_eq!(out.status.code(), Some(3));
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["feasible"], serde_json::json!(false));
    assert!(body["witness"].is_object(), "{body}");
}

#[test]
fn interval_transcripts() {
    assert_transcript(&["interval", "--alpha", "1,0", "--beta", "1,0", "--k", "1"], "interval_k1.txt", 0);
    assert_transcript(&["interval", "--alpha", "1,0", "--beta", "1,0", "--k", "2"], "interval_k2.txt", 0);
}

#[test]
fn block_triangular_transcripts() {
    assert_transcript(
        &["carlson", "--a", "T:2", "--b", "T:2", "--max-degree", "4"],
        "carlson_t2_t2.txt",
        0,
    );
    let out = hornlab(&["carlson", "--a", "T:2", "--b", "T:2", "--c", "T:4"]);
    assert_eq!(out.status.code(), Some(0));
    let out = hornlab(&["carlson", "--a", "T:2", "--b", "T:2", "--c", "T:2,1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn diagonalization_transcripts() {
    let dir = std::env::temp_dir().join("hornlab-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.json");
    std::fs::write(&path, "[[2, 4], [-2, 6]]").unwrap();
    let p = path.to_str().unwrap();
    assert_transcript(&["smith", "--matrix", p, "--json"], "smith_int.txt", 0);
    assert_transcript(&["smith", "--matrix", p, "--prime", "2"], "smith_at_2.txt", 0);
    // T^2 on the diagonal of a 2x2 Jordan-type matrix: [[T, 1], [0, T]].
    let poly_path = dir.join("p.json");
    std::fs::write(&poly_path, "[[[0,1],[1]],[[0],[0,1]]]").unwrap();
    assert_transcript(
        &["smith", "--matrix", poly_path.to_str().unwrap(), "--poly"],
        "smith_poly.txt",
        0,
    );
}

#[test]
fn example_reports_pass() {
    for which in ["1", "3", "4"] {
        let out = hornlab(&["verify-example", "--which", which, "--json"]);
        assert_eq!(out.status.code(), Some(0), "example {which}: {out:?}");
        let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(body["passed"], serde_json::json!(true), "{body}");
    }
}

#[test]
fn random_verification_passes_and_is_deterministic() {
    let args = ["verify-random", "--mode", "hermitian", "--n", "3", "--trials", "25", "--seed", "42", "--json"];
    let first = hornlab(&args);
    let second = hornlab(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let body: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(body["passed"], serde_json::json!(true), "{body}");
}

#[test]
fn facet_transcript() {
    assert_transcript(&["facets", "--n", "2"], "facets_n2.txt", 0);
}

#[test]
fn exit_codes() {
    // Unknown flag: usage error from the argument parser.
    assert_eq!(hornlab(&["lr", "--bogus"]).status.code(), Some(2));
    // Malformed value: usage error from our validation.
    assert_eq!(
        hornlab(&["lr", "--lam", "1,x", "--mu", "1", "--nu", "2"]).status.code(),
        Some(2)
    );
    // Matching-product bounds are capped at n = 8.
    let nine = "9,8,7,6,5,4,3,2,1";
    assert_eq!(
        hornlab(&["interval", "--alpha", nine, "--beta", nine, "--products"]).status.code(),
        Some(4)
    );
    // Bad thread cap.
    let out = Command::new(env!("CARGO_BIN_EXE_hornlab"))
        .args(["lr", "--lam", "1", "--mu", "1", "--nu", "1,1"])
        .env("HORNLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // A valid thread cap works.
    let out = Command::new(env!("CARGO_BIN_EXE_hornlab"))
        .args(["lr", "--lam", "1", "--mu", "1", "--nu", "1,1"])
        .env("HORNLAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, b"1\n");
}

#[test]
fn exact_commands_are_byte_stable() {
    for args in [
        vec!["lr", "--lam", "3,2,1", "--mu", "3,2,2", "--nu", "5,4,3,1", "--json"],
        vec!["horn-set", "--kind", "S", "--r", "2", "--n", "5", "--json"],
        vec!["facets", "--n", "3", "--json"],
        vec!["carlson", "--a", "T:2;2:1", "--b", "T:1", "--json"],
    ] {
        let first = hornlab(&args);
        let second = hornlab(&args);
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

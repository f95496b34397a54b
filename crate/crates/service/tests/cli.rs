use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(path: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(path)
}

fn fairfuse(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fairfuse")).args(args).output().unwrap();
    (
        out.status.success(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn employee_args<'a>(cand: &'a str, scores: &'a str) -> Vec<&'a str> {
    vec!["--candidates", cand, "--scores", scores, "--protected", "job_role"]
}

#[test]
fn audit_json_and_table() {
    let cand = fixture("employee/candidates.csv");
    let ranks = fixture("employee/rankings.csv");
    let (cand, ranks) = (cand.to_str().unwrap(), ranks.to_str().unwrap());

    let mut args = vec!["audit"];
    args.extend(employee_args(cand, ranks));
    args.push("--json");
    let (ok, stdout, stderr) = fairfuse(&args);
    assert!(ok, "{stderr}");
    let body: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(body["schema"], 1);
    let reports = body["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    assert_eq!(reports[0]["ranking_id"], "R1");
    assert_eq!(reports[0]["most_favored_group"], "Human Resources");

    args.pop();
    let (ok, table, _) = fairfuse(&args);
    assert!(ok);
    assert!(table.starts_with("group"));
    assert!(table.contains("Human Resources"));
    assert!(table.contains("\nARP"));
    assert!(table.contains("similarity"));
}

#[test]
fn aggregate_writes_consensus_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("consensus.csv");
    let cand = fixture("scholarship/candidates.csv");
    let scores = fixture("scholarship/scores.csv");
    let (ok, stdout, stderr) = fairfuse(&[
        "aggregate",
        "--candidates",
        cand.to_str().unwrap(),
        "--scores",
        scores.to_str().unwrap(),
        "--protected",
        "race",
        "--t",
        "0.9",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(ok, "{stderr}");
    assert!(stdout.starts_with("t=0.900000 max_arp=0.100000"), "{stdout}");
    assert!(stdout.contains("feasible=true"));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("position,consensus"));
    assert_eq!(lines.count(), 60);

    // the written file is itself a valid rankings input
    let (ok, stdout, _) = fairfuse(&[
        "audit",
        "--candidates",
        cand.to_str().unwrap(),
        "--scores",
        out.to_str().unwrap(),
        "--protected",
        "race",
        "--json",
    ]);
    assert!(ok);
    let body: Value = serde_json::from_str(&stdout).unwrap();
    assert!(body["reports"][0]["arp"].as_f64().unwrap() <= 0.1);
}

#[test]
fn synth_is_reproducible() {
    let ranks = fixture("employee/rankings.csv");
    let args = [
        "synth", "--seed", "5", "--swaps", "10", "--count", "4", "--rankings",
        ranks.to_str().unwrap(), "--column", "R2",
    ];
    let (ok, a, stderr) = fairfuse(&args);
    assert!(ok, "{stderr}");
    let (_, b, _) = fairfuse(&args);
    assert_eq!(a, b);
    assert!(a.starts_with("position,S1,S2,S3,S4\n"));
    assert_eq!(a.lines().count(), 26);

    let (ok, _, stderr) = fairfuse(&["synth", "--seed", "1", "--swaps", "1", "--count", "1"]);
    assert!(!ok);
    assert!(stderr.contains("--rankings or --candidates"));

    let cand = fixture("pair/candidates.csv");
    let (ok, out, _) = fairfuse(&[
        "synth", "--seed", "1", "--swaps", "0", "--count", "1", "--candidates",
        cand.to_str().unwrap(),
    ]);
    assert!(ok);
    assert_eq!(out, "position,S1\n1,a\n2,b\n");
}

#[test]
fn oracle_summary_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("oracle.json");
    let (ok, stdout, stderr) = fairfuse(&[
        "oracle", "--max-n", "5", "--instances", "6", "--seed", "2", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(ok, "{stderr}");
    assert!(stdout.contains("kemeny <= copeland violations: 0"));
    assert!(stdout.contains("fair-kemeny >= kemeny violations: 0"));
    let report: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(report["comparisons"], 30);
}

#[test]
fn bad_input_fails_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let scores = dir.path().join("scores.csv");
    std::fs::write(&scores, "id,R1\na,1\nb,x\n").unwrap();
    let cand = fixture("pair/candidates.csv");
    let (ok, _, stderr) = fairfuse(&[
        "audit",
        "--candidates",
        cand.to_str().unwrap(),
        "--scores",
        scores.to_str().unwrap(),
        "--protected",
        "group",
    ]);
    assert!(!ok);
    assert!(stderr.contains("line 3"), "{stderr}");

    let (ok, _, _) = fairfuse(&[
        "aggregate",
        "--candidates",
        cand.to_str().unwrap(),
        "--scores",
        fixture("pair/rankings.csv").to_str().unwrap(),
        "--protected",
        "group",
        "--t",
        "2",
        "--out",
        dir.path().join("x.csv").to_str().unwrap(),
    ]);
    assert!(!ok);
}

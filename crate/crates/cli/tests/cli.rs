use std::path::Path;
use std::process::{Command, Output};

fn divkl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divkl")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = divkl(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(divkl(&["--help"]).status.code(), Some(0));
    assert_eq!(divkl(&["compute", "0"]).status.code(), Some(1));
    assert_eq!(divkl(&["compute", "abc"]).status.code(), Some(1));
    assert_eq!(divkl(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(divkl(&["verify", "--limit", "100", "--claims", "nope"]).status.code(), Some(1));
    assert_eq!(divkl(&["verify", "--limit", "100", "--claims", "false-phi-ineq"]).status.code(), Some(0));
    assert_eq!(divkl(&["--digits", "3", "compute", "6"]).status.code(), Some(1));
}

#[test]
fn compute_values() {
    let out = stdout(&["compute", "6", "--kl", "--h"]);
    assert_eq!(out, "h 2\nkl 0.876597250734\n");
    let out = stdout(&["compute", "945", "--h", "--g"]);
    assert!(out.contains("h 2.03174603175"), "{out}");
    let out = stdout(&["compute", "2", "--kl"]);
    assert_eq!(out, "kl -0.69314718056\n");
    let json: serde_json::Value = serde_json::from_str(&stdout(&["compute", "28", "--all", "--format", "json"])).unwrap();
    assert_eq!(json["n"], 28);
    assert_eq!(json["values"]["sigma"], 56);
    assert_eq!(json["values"]["phi"], 12);
}

#[test]
fn classify_output() {
    let out = stdout(&["classify", "6", "945", "--format", "json"]);
    let rows: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows[0]["deficiency"], "perfect");
    assert_eq!(rows[1]["deficiency"], "abundant");
    assert_eq!(rows[1]["kl_primitive"], false);
}

#[test]
fn table_formats() {
    let csv = stdout(&["table", "T", "--limit", "100", "--format", "csv"]);
    assert_eq!(csv.lines().next(), Some("sequence,n,g,h,kl"));
    assert_eq!(csv.lines().nth(1), Some("T,6,,2,0.876597250734"));
    let odd = stdout(&["table", "T", "--odd-only", "--limit", "2000", "--format", "csv"]);
    assert_eq!(odd, stdout(&["table", "To", "--limit", "2000", "--format", "csv"]));
    let json = stdout(&["table", "B1", "--limit", "1000", "--format", "json"]);
    let first: serde_json::Value = serde_json::from_str(json.lines().next().unwrap()).unwrap();
    assert_eq!(first["n"], 945);
    assert_eq!(first["sequence"], "B1");
    let text = stdout(&["table", "T", "--limit", "100"]);
    assert!(text.starts_with('n'), "{text}");
}

#[test]
fn scan_resume_matches_cold() {
    let dir = tempfile::tempdir().unwrap();
    let cold = dir.path().join("cold.csv");
    let warm = dir.path().join("warm.csv");
    let cp = dir.path().join("t.ckpt");
    stdout(&["scan", "T", "--limit", "50000", "--output", p(&cold)]);
    stdout(&["scan", "T", "--limit", "9000", "--block-size", "2048", "--output", p(&warm), "--checkpoint", p(&cp)]);
    stdout(&[
        "scan", "T", "--limit", "50000", "--block-size", "2048", "--output", p(&warm), "--checkpoint", p(&cp),
        "--resume",
    ]);
    assert_eq!(std::fs::read(&cold).unwrap(), std::fs::read(&warm).unwrap());
}

#[test]
fn resume_rejects_other_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("b1.ckpt");
    stdout(&["scan", "B1", "--limit", "2000", "--checkpoint", p(&cp)]);
    let out = divkl(&["scan", "B2", "--limit", "4000", "--checkpoint", p(&cp), "--resume"]);
    assert_ne!(out.status.code(), Some(0));
    std::fs::write(&cp, "{ not json").unwrap();
    let out = divkl(&["scan", "B1", "--limit", "4000", "--checkpoint", p(&cp), "--resume"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn verify_json_lines() {
    let out = stdout(&["verify", "--limit", "10000", "--claims", "thm*", "--format", "json"]);
    let reports: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(reports.len(), 4);
    assert!(reports.iter().all(|r| r["violation_count"] == 0));
    assert_eq!(reports[0]["status"], "vacuous");
    assert!(stdout(&["verify", "--list"]).lines().any(|l| l.starts_with("conj-v ")));
}

#[test]
fn plot_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&["plot", "--limit", "300", "--output", p(dir.path())]);
    for f in ["h_kl.csv", "h_kl.svg", "h_kl_zoom.svg", "h_kl_zoom2.svg"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let csv = std::fs::read_to_string(dir.path().join("h_kl.csv")).unwrap();
    assert_eq!(csv.lines().count(), 301);
}

use std::process::Command;

use serde_json::Value;

fn verify(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn passing_claim_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("lemma6.json");
    let csv = dir.path().join("lemma6.csv");
    let (code, _, err) = verify(&[
        "lemma6",
        "--n",
        "12",
        "--out",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["claim_id"], "lemma6");
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["parameters"]["n_max"], "12");
    assert!(report["paper_anchor"].as_str().unwrap().contains("(n−k)!"));
    let rows = report["evidence"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert!(rows[0]["lhs"].as_str().unwrap().contains('/'));
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("claim_id,input,relation,lhs,rhs,slack,holds"));
    assert_eq!(table.lines().count(), 10);
}

#[test]
fn stdout_by_default() {
    let (code, out, _) = verify(&["remark", "--n", "1,2,3"]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["claim_id"], "remark-counterexample");
    assert_eq!(report["evidence"][0]["rhs"], "1");
}

#[test]
fn inconclusive_exits_two() {
    let (code, out, _) = verify(&["corollary10", "--n", "2"]);
    assert_eq!(code, 2);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["verdict"], "inconclusive");
}

#[test]
fn errors_exit_three() {
    assert_eq!(verify(&["nonsense"]).0, 3);
    assert_eq!(verify(&["lemma6", "--n", "three"]).0, 3);
    assert_eq!(verify(&["lemma5", "--n", "8", "--m-max", "8"]).0, 3);
    assert_eq!(verify(&["lemma6", "--bogus"]).0, 3);
    assert_eq!(verify(&[]).0, 3);
    assert_eq!(verify(&["--help"]).0, 0);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# small run\nn = 6\nm_max = 2\ntrials = 3\n").unwrap();
    let (code, out, _) = verify(&["lemma5", "--config", cfg.to_str().unwrap(), "--n", "2"]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["parameters"]["n_max"], "2");
    assert_eq!(report["parameters"]["m_max"], "2");
    assert_eq!(report["parameters"]["trials"], "3");
}

#[test]
fn vectors_and_seeds_are_reproducible() {
    let a = verify(&["corollary13", "--n", "5", "--trials", "3", "--seed", "4"]).1;
    let b = verify(&["corollary13", "--n", "5", "--trials", "3", "--seed", "4"]).1;
    let strip = |s: &str| {
        let mut v: Value = serde_json::from_str(s).unwrap();
        v["runtime_ms"] = Value::Null;
        v
    };
    assert_eq!(strip(&a), strip(&b));
    let (code, out, _) = verify(&["lemma7", "--a", "1,2;2,2"]);
    assert_eq!(code, 0);
    assert!(out.contains("a=(2,2) witness"));
}

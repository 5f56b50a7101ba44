use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_szego-lab"))
        .args(args)
        .env_remove("SZEGO_LAB_WORKERS")
        .output()
        .unwrap()
}

#[test]
fn mapping_norm_json_schema() {
    let out = lab(&["mapping-norm", "--format", "json", "--seed", "9"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["config", "rows", "validation", "version"]);
    assert_eq!(v["config"]["seed"], 9);
    assert_eq!(v["config"]["subcommand"], "mapping-norm");
    assert!(v["config"].get("workers").is_none());
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r["seed"] == 9));
    // q = ∞ is not representable in JSON
    assert!(rows[0]["q"].is_null());
    assert!(v["validation"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn csv_header_is_fixed() {
    let out = lab(&["mapping-norm", "--N", "10", "--N", "40", "--p", "2", "--q", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "seed,m,N,p,q,r,lower,upper,schur_young,fitted_exponent,expected_exponent"
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn failed_validation_exits_nonzero_with_list() {
    let out = lab(&["kernel-asymptotics", "--N", "25", "--N", "100"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    let line = stderr.lines().find(|l| l.starts_with('{')).unwrap();
    let v: serde_json::Value = serde_json::from_str(line).unwrap();
    let failures = v["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    assert!(failures.iter().all(|f| f["passed"] == false && f["name"].is_string()));
}

#[test]
fn bad_config_is_rejected() {
    for args in [
        &["supnorm-growth", "--N", "64", "--N", "16"][..],
        &["lp-median", "--trials", "10"],
        &["tail-law", "--d", "1"],
        &["mapping-norm", "--p", "4", "--q", "2"],
        &["gradient-growth", "--m", "2"],
    ] {
        let out = lab(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    }
    assert!(!lab(&["tail-law", "--format", "xml"]).status.success());
}

#[test]
fn byte_identical_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for workers in ["1", "4", "16"] {
        let out = dir.path().join(format!("lp-{workers}.json"));
        let trials = dir.path().join(format!("trials-{workers}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_szego-lab"))
            .args(["lp-median", "--N", "8", "--N", "24", "--trials", "150", "--grid-nodes", "3000", "--seed", "5"])
            .args(["--format", "json", "--out", out.to_str().unwrap(), "--trial-out", trials.to_str().unwrap()])
            .env("SZEGO_LAB_WORKERS", workers)
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        assert!(status.stdout.is_empty());
        files.push((std::fs::read(&out).unwrap(), std::fs::read(&trials).unwrap()));
    }
    assert!(files.iter().all(|f| *f == files[0]));
    let trials = String::from_utf8(files[0].1.clone()).unwrap();
    assert_eq!(trials.lines().next().unwrap(), "seed,trial,m,N,p,value,method,error_bound");
    assert_eq!(trials.lines().count(), 301);
}

#[test]
fn tail_law_rows() {
    let out = lab(&["tail-law", "--d", "3", "--trials", "200", "--seed", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let second = text.lines().nth(1).unwrap();
    // λ = 0 row: exact tail 1
    assert!(second.starts_with("4,3,0.0,1.0,"), "{second}");
    assert_eq!(text.lines().count(), 11);
}

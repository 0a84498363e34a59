use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_divcascade"));
    c.env_remove("DIVCASCADE_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("divcascade-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn list_is_stable_and_names_the_scale() {
    let a = run(&["list"]);
    let b = run(&["list"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.lines().any(|l| l.starts_with("W8 = (1/2)F")), "{text}");
    assert!(text.lines().any(|l| l.starts_with("V1,")), "{text}");
    let json: serde_json::Value = serde_json::from_slice(&run(&["list", "--format", "json"]).stdout).unwrap();
    assert_eq!(json.as_array().unwrap().len(), text.lines().count());
}

#[test]
fn compute_on_pairs() {
    let o = run(&["compute", "--measure", "V1", "--a", "4", "--b", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0.1");
    let o = run(&["compute", "--measure", "K", "--a", "5", "--b", "5"]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = run(&["compute", "--measure", "W8", "--a", "4", "--b", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["measure"], "W8");
    // Generator (x²−1)²/(4x^{3/2}) at x = 4: 15²/32.
    assert!((v["value"].as_f64().unwrap() - 225.0 / 32.0).abs() < 1e-13);
}

#[test]
fn compute_on_distribution_files() {
    let dir = scratch_dir("dist");
    let p = dir.join("p.csv");
    let q = dir.join("q.json");
    std::fs::write(&p, "0.5,0.5\n").unwrap();
    std::fs::write(&q, "[0.25, 0.75]").unwrap();
    let o = bin().args(["compute", "--measure", "delta", "--p"]).arg(&p).arg("--q").arg(&q).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 2.0 / 15.0).abs() <= 1e-15);

    std::fs::write(&q, "[0.25, 0.7]").unwrap();
    let o = bin().args(["compute", "--measure", "delta", "--p"]).arg(&p).arg("--q").arg(&q).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sum"));
}

#[test]
fn compute_error_codes() {
    assert_eq!(run(&["compute", "--measure", "W10", "--a", "1", "--b", "2"]).status.code(), Some(3));
    assert_eq!(run(&["compute", "--measure", "nope", "--a", "1", "--b", "2"]).status.code(), Some(3));
    assert_eq!(run(&["compute", "--measure", "V1", "--a", "-1", "--b", "2"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--measure", "V1", "--a", "1"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--measure", "V1", "--a", "1", "--b", "1", "--p", "x.csv"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--measure", "V1", "--a", "abc", "--b", "1"]).status.code(), Some(2));
}

#[test]
fn named_chain_audit_passes() {
    let o = run(&["audit", "--chains", "w-scale", "--samples", "2000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("1 checks, 1 passed, 0 failed"));
    let o = run(&["audit", "--chains", "means,w-definitions", "--samples", "1", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn failing_chain_exits_four() {
    let dir = scratch_dir("cfg");
    let cfg = dir.join("chains.toml");
    std::fs::write(&cfg, "[[chain]]\nid = \"backwards\"\nterms = [\"W3\", \"W1\"]\n").unwrap();
    let o = bin().args(["audit", "--chains", "backwards", "--samples", "500", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("FAIL chain.backwards"), "{}", stdout(&o));
}

#[test]
fn config_errors_exit_five() {
    assert_eq!(run(&["audit", "--samples", "0"]).status.code(), Some(5));
    assert_eq!(run(&["audit", "--tolerance", "0"]).status.code(), Some(5));
    assert_eq!(run(&["audit", "--chains", "no-such-chain"]).status.code(), Some(5));
    let dir = scratch_dir("badcfg");
    let cfg = dir.join("chains.json");
    std::fs::write(&cfg, r#"[{"id": "x", "terms": ["W1", "Q7"]}]"#).unwrap();
    let o = bin().args(["audit", "--chains", "x", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn seed_from_environment() {
    let o = bin()
        .env("DIVCASCADE_SEED", "9")
        .args(["audit", "--chains", "w-scale", "--samples", "10", "--format", "json"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["header"]["seed"], 9);
    let o = bin()
        .env("DIVCASCADE_SEED", "9")
        .args(["audit", "--chains", "w-scale", "--samples", "10", "--seed", "11", "--format", "json"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["header"]["seed"], 11);
}

#[test]
fn report_diff_detects_tampering() {
    let dir = scratch_dir("diff");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for (path, seed) in [(&a, "42"), (&b, "43")] {
        let o = bin()
            .args(["audit", "--chains", "w-scale,v-main", "--samples", "1000", "--seed", seed, "--report"])
            .arg(path)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
    }
    let same = bin().arg("report-diff").arg(&a).arg(&a).output().unwrap();
    assert_eq!(same.status.code(), Some(0));
    assert!(same.stdout.is_empty());
    let seeds = bin().arg("report-diff").arg(&a).arg(&b).output().unwrap();
    assert_eq!(seeds.status.code(), Some(0));

    let tampered = dir.join("t.json");
    let text = std::fs::read_to_string(&a).unwrap().replacen("\"pass\"", "\"fail\"", 1);
    std::fs::write(&tampered, text).unwrap();
    let o = bin().arg("report-diff").arg(&a).arg(&tampered).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().count(), 1);

    let broken = dir.join("broken.json");
    std::fs::write(&broken, "{not json").unwrap();
    assert_eq!(bin().arg("report-diff").arg(&a).arg(&broken).output().unwrap().status.code(), Some(2));
}

#[test]
fn full_audit_writes_a_complete_report() {
    let dir = scratch_dir("full");
    let path = dir.join("report.json");
    let o = bin().args(["audit", "--samples", "2000", "--report"]).arg(&path).output().unwrap();
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let checks = report["checks"].as_array().unwrap();
    let failed: Vec<&str> =
        checks.iter().filter(|c| c["verdict"] == "fail").map(|c| c["id"].as_str().unwrap()).collect();
    // Exit status follows the verdicts: any failing check gives 4, none gives 0.
    let expected = if failed.is_empty() { 0 } else { 4 };
    assert_eq!(o.status.code(), Some(expected), "failed: {failed:?}");
    for e in ["E1", "E2", "E3", "E4"] {
        assert!(report["errata"].as_array().unwrap().iter().any(|x| x["id"] == e), "missing erratum {e}");
    }
    assert!(report["errata"].as_array().unwrap().iter().any(|x| x["id"].as_str().unwrap().starts_with("E5")));
}

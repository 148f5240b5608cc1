use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lefschetz-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn gen(dir: &TempDir, name: &str, extra: &[&str]) -> String {
    let path = dir.path().join(name);
    let mut args = vec!["gen", "--m", "4", "--d", "2", "--out", path_str(&path)];
    args.extend_from_slice(extra);
    let out = lab(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path_str(&path).to_owned()
}

#[test]
fn gen_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, "a.json", &["--seed", "5"]);
    let b = gen(&dir, "b.json", &["--seed", "5"]);
    let c = gen(&dir, "c.json", &["--seed", "6"]);
    let a = fs::read_to_string(a).unwrap();
    assert_eq!(a, fs::read_to_string(b).unwrap());
    assert_ne!(a, fs::read_to_string(c).unwrap());
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["field"]["p"], 65521);
    assert_eq!(v["generators"].as_array().unwrap().len(), 5);
}

#[test]
fn missing_seed_is_echoed() {
    let out = lab(&["gen", "--m", "2", "--d", "2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("seed: "));
}

#[test]
fn hilbert_table_for_quadrics() {
    let dir = TempDir::new().unwrap();
    let inst = gen(&dir, "i.json", &["--seed", "1"]);
    let out = lab(&["hilbert", "--instance", &inst, "--seed", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let hf: Vec<&str> = text
        .lines()
        .skip(1)
        .filter_map(|l| l.split_whitespace().nth(1))
        .take(7)
        .collect();
    assert_eq!(hf, ["1", "5", "10", "10", "5", "1", "0"]);
    assert!(text.contains("pass"));
}

#[test]
fn socle_generator_of_monomial_instance() {
    let dir = TempDir::new().unwrap();
    let inst = gen(&dir, "m.json", &["--monomial"]);
    let out = lab(&["inverse", "--instance", &inst, "--seed", "0", "--socle"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "u0*u1*u2*u3*u4\n");
}

#[test]
fn verify_reports_are_identical_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let inst = gen(&dir, "i.json", &["--seed", "2"]);
    let one = dir.path().join("one.json");
    let many = dir.path().join("many.json");
    for (threads, out) in [("1", &one), ("4", &many)] {
        let o = lab(&["--threads", threads, "verify", "--instance", &inst, "--seed", "9", "--out", path_str(out)]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let a = fs::read(&one).unwrap();
    assert_eq!(a, fs::read(&many).unwrap());
    let report: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["seed"], 9);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c.get("elapsed_ms").is_none()));
}

#[test]
fn timings_are_opt_in() {
    let dir = TempDir::new().unwrap();
    let inst = gen(&dir, "i.json", &["--seed", "3"]);
    let out = lab(&["check", "wlp", "--instance", &inst, "--seed", "1", "--json", "--timings"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "wlp"));
    assert!(checks.iter().all(|c| c["elapsed_ms"].is_u64()));
}

#[test]
fn locus_line_scan_runs() {
    let dir = TempDir::new().unwrap();
    let inst = gen(&dir, "i.json", &["--seed", "4"]);
    let out = lab(&["locus", "--instance", &inst, "--seed", "1", "--samples", "5", "--json"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let scan = report["checks"].as_array().unwrap().iter().find(|c| c["name"] == "locus_scan").unwrap();
    assert_eq!(scan["status"], "pass");
}

#[test]
fn non_complete_intersection_exits_one() {
    // x0^2 and x0*x1 share the zero [0:1].
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(
        &path,
        r#"{"m":1,"d":2,"field":{"kind":"prime","p":65521},
            "generators":[[{"exps":[2,0],"coef":"1"}],[{"exps":[1,1],"coef":"1"}]]}"#,
    )
    .unwrap();
    let out = lab(&["verify", "--instance", path_str(&path), "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("fail"));
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{ not json").unwrap();
    let out = lab(&["verify", "--instance", path_str(&path), "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let missing = dir.path().join("absent.json");
    assert_eq!(lab(&["hilbert", "--instance", path_str(&missing), "--seed", "1"]).status.code(), Some(2));

    let inst = gen(&dir, "i.json", &["--seed", "1"]);
    let out = lab(&["hilbert", "--instance", &inst, "--seed", "1", "--field", "prime:65537"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no compiled backend"));

    let out = lab(&["verify", "--instance", &inst, "--seed", "1", "--suites", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

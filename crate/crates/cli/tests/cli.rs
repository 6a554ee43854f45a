use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_haarent"));
    c.env_remove("HAARENT_TOL").env_remove("RUST_LOG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn interval_spec(dir: &Path, name: &str, density: &str) -> String {
    let body = format!(r#"{{"space": {{"kind": "interval", "bounds": [0, 2]}}, "density": {density}}}"#);
    write(dir, name, &body).to_str().unwrap().to_string()
}

#[test]
fn entropy_of_uniform_against_lebesgue() {
    let d = TempDir::new().unwrap();
    let uni = interval_spec(d.path(), "u.json", r#"{"kind": "builtin", "payload": "uniform"}"#);
    let leb = interval_spec(d.path(), "l.json", r#"{"kind": "builtin", "payload": "lebesgue"}"#);
    for (m, mass) in [(&uni, 1.0), (&leb, 2.0)] {
        let o = run(&["entropy", "--measure", m, "--reference", &leb, "--set", "[0,2]", "--format", "json"]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert!((v["nats"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
        assert_eq!(v["form"], "Finite");
        assert_eq!(v["mass"].as_f64().unwrap(), mass);
    }
}

#[test]
fn entropy_of_subgroup() {
    let o = run(&["entropy", "--group", "D6", "--subgroup", "{r0,r2,r4}", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0].parse::<f64>().unwrap(), 3f64.ln());
    let o = run(&["entropy", "--group", "D6", "--subgroup", "{r0,r1}"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn examples_csv_match_closed_forms() {
    let o = run(&["examples", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers[0], "claim_id");
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert!(rows.len() >= 3);
    let passed = headers.iter().position(|h| h == "passed").unwrap();
    assert!(rows.iter().all(|r| &r[passed] == "true"));
}

#[test]
fn verify_all_passes_and_is_deterministic() {
    let args = ["verify", "--all", "--seed", "42", "--trials", "200", "--format", "json"];
    let a = run(&args);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(doc["schema"], "haarent-report/1");
    assert_eq!(doc["failed"], 0);
    assert!(doc["claims"].as_array().unwrap().iter().all(|c| c.get("worst_slack").is_some()));
}

#[test]
fn tiny_tolerance_fails_verification() {
    let o = run(&["verify", "--claim", "lemma-change-reference", "--trials", "20", "--tol", "1e-20"]);
    assert_eq!(code(&o), 1);
    let o = bin()
        .args(["verify", "--claim", "lemma-change-reference", "--trials", "20"])
        .env("HAARENT_TOL", "1e-20")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn zero_trials_skip_with_warning() {
    let o = run(&["verify", "--all", "--trials", "0"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert!(stdout(&o).contains("0 passed, 0 failed"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["--bogus"])), 2);
    assert_eq!(code(&run(&["verify", "--claim", "no-such-claim"])), 2);
    assert_eq!(code(&run(&["verify"])), 2);
    assert_eq!(code(&run(&["verify", "--all", "--tol", "-1"])), 2);
    assert_eq!(code(&run(&["entropy", "--measure", "/no/such/file.json", "--group", "Z3"])), 2);
    assert_eq!(code(&run(&["entropy", "--group", "Q8"])), 2);
    assert_eq!(code(&run(&["maxent", "--n", "4", "--weights", "1,2"])), 2);
}

#[test]
fn dsl_errors_are_positioned() {
    let d = TempDir::new().unwrap();
    let bad = interval_spec(d.path(), "bad.json", r#"{"kind": "expr", "payload": "x * (1 +"}"#);
    let leb = interval_spec(d.path(), "l.json", r#"{"kind": "builtin", "payload": "lebesgue"}"#);
    let o = run(&["entropy", "--measure", &bad, "--reference", &leb]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains("bad.json") && err.contains("byte 8"), "{err}");
}

#[test]
fn numeric_failure_exits_3() {
    let d = TempDir::new().unwrap();
    let body = r#"{"space": {"kind": "interval", "bounds": [0, 1]},
                   "density": {"kind": "expr", "payload": "piecewise{x <= 0: 0; else: x^-0.99}"}}"#;
    let sing = write(d.path(), "s.json", body);
    let leb = write(
        d.path(),
        "l.json",
        r#"{"space": {"kind": "interval", "bounds": [0, 1]}, "density": {"kind": "builtin", "payload": "lebesgue"}}"#,
    );
    let o = run(&["entropy", "--measure", sing.to_str().unwrap(), "--reference", leb.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
}

#[test]
fn help_lists_flags() {
    for (sub, flags) in [
        ("entropy", &["--measure", "--reference", "--set", "--group", "--subgroup", "--tol", "--format", "--output"][..]),
        ("supnorm", &["--measure", "--reference", "--target"][..]),
        ("verify", &["--all", "--claim", "--seed", "--trials"][..]),
        ("examples", &["--format"][..]),
        ("maxent", &["--n", "--mass", "--iters", "--step", "--seed"][..]),
    ] {
        let o = run(&[sub, "--help"]);
        assert_eq!(code(&o), 0);
        let text = stdout(&o);
        for f in flags {
            assert!(text.contains(f), "{sub} --help lacks {f}");
        }
    }
}

#[test]
fn output_file_and_maxent() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("m.json");
    let o = run(&["maxent", "--weights", "1,2,3", "--seed", "5", "--format", "json", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["sup_distance"].as_f64().unwrap() < 1e-6);
    assert!((v["entropy"].as_f64().unwrap() - 6f64.ln()).abs() < 1e-9);
}

#[test]
fn supnorm_translate_bound() {
    let o = run(&["supnorm", "--group", "Z12", "--set", "{0,1,5}", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["reports"][0]["passed"], true);
    assert_eq!(v["schema"], "haarent-report/1");
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_glassdual"));
    c.env_remove("GLASSDUAL_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn glassdual")
}

fn stdout_ok(args: &[&str]) -> Vec<u8> {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Parses the data part of an emitted CSV into header and rows.
fn rows(csv: &[u8]) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::str::from_utf8(csv).unwrap();
    let body = text.split_once('\n').unwrap().1;
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let data = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, data)
}

fn col(csv: &[u8], name: &str) -> Vec<f64> {
    let (h, d) = rows(csv);
    let i = h.iter().position(|c| c == name).unwrap();
    d.iter().map(|r| r[i].parse().unwrap()).collect()
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("rem_grid.csv", &["rem", "--beta-grid", "0.1:3:0.05"]),
    ("oracle_rem.csv", &["oracle", "--model", "rem", "--N", "10", "--beta", "1.5", "--replicas", "8", "--seed", "7"]),
    ("phase_rem.csv", &["phase", "--model", "rem", "--beta-grid", "0.5:3:0.25"]),
    (
        "oracle_ising.json",
        &["oracle", "--model", "ising", "--N", "8", "--check", "inequality", "--beta", "0.9", "--m", "0.6", "--emit", "json"],
    ),
];

#[test]
fn outputs_match_golden_files() {
    for (file, args) in GOLDEN {
        let got = stdout_ok(args);
        let want = std::fs::read(golden(file)).unwrap();
        assert!(got == want, "{file} differs from {args:?}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["oracle", "--model", "ising", "--N", "10", "--beta", "1.1", "--replicas", "6"];
    let one = bin().args(args).env("GLASSDUAL_THREADS", "1").output().unwrap();
    let four = bin().args(args).arg("--threads").arg("4").output().unwrap();
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn rem_grid_gaps_are_small() {
    let csv = std::fs::read(golden("rem_grid.csv")).unwrap();
    let gaps = col(&csv, "roundtrip_gap");
    assert_eq!(gaps.len(), 59);
    assert!(gaps.iter().all(|g| *g <= 1e-6));
}

#[test]
fn phase_table_stationary_energy() {
    let csv = std::fs::read(golden("phase_rem.csv")).unwrap();
    let beta_c = (2.0 * std::f64::consts::LN_2).sqrt();
    for (b, m) in col(&csv, "beta").into_iter().zip(col(&csv, "m_star")) {
        let want = if b <= beta_c { 1.0 } else { beta_c / b };
        assert!((m - want).abs() < 1e-6, "beta {b}: m* = {m}");
    }
    let single = stdout_ok(&["phase", "--model", "rem", "--beta", "1.2"]);
    assert_eq!(rows(&single).1.len(), 1);
}

#[test]
fn header_regenerates_identical_table() {
    let dir = tempfile::tempdir().unwrap();
    for (i, (_, args)) in GOLDEN.iter().enumerate() {
        let first = dir.path().join(format!("first{i}"));
        let second = dir.path().join(format!("second{i}"));
        let mut a = args.to_vec();
        a.extend(["-o", first.to_str().unwrap()]);
        stdout_ok(&a);
        stdout_ok(&["replay", "--config", first.to_str().unwrap(), "-o", second.to_str().unwrap()]);
        assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap(), "{args:?}");
    }
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"command":"rem","beta":[0.5,2.0]}"#).unwrap();
    let from_file = stdout_ok(&["replay", "--config", cfg.to_str().unwrap()]);
    assert_eq!(col(&from_file, "beta"), vec![0.5, 2.0]);
    let overridden = stdout_ok(&["rem", "--config", cfg.to_str().unwrap(), "--beta", "1.0"]);
    assert_eq!(col(&overridden, "beta"), vec![1.0]);
}

#[test]
fn json_mirrors_csv() {
    let args = ["rem", "--beta", "0.5,1.5"];
    let csv = stdout_ok(&args);
    let mut a = args.to_vec();
    a.extend(["--emit", "json"]);
    let json: serde_json::Value = serde_json::from_slice(&stdout_ok(&a)).unwrap();
    let (header, data) = rows(&csv);
    assert_eq!(json["columns"], serde_json::json!(header));
    for (r, row) in data.iter().enumerate() {
        for (c, name) in header.iter().enumerate() {
            assert_eq!(json["rows"][r][name].as_f64().unwrap(), row[c].parse::<f64>().unwrap());
        }
    }
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn exit_codes() {
    let sk = r#"{"kind":"ising","terms":[[2,0.7071067811865476]]}"#;
    assert_eq!(code(&["ising", "--xi", sk, "--beta", "0"]), 1);
    assert_eq!(code(&["oracle", "--model", "rem", "--N", "30", "--beta", "1"]), 3);
    assert_eq!(code(&["duality", "--model", "rem", "--beta", "3.5", "--search-hi", "2"]), 2);
    assert_eq!(code(&["rem"]), 1);
    assert_eq!(code(&["rem", "--no-such-flag"]), 1);
    assert_eq!(code(&["ising", "--beta", "1", "--quad-nodes", "2"]), 1);
    assert_eq!(code(&["--help"]), 0);
    let out = run(&["ising", "--beta", "0"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("ising") && err.contains("beta"), "{err}");
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"command":"rem","beta":[1.0],"betta":2}"#).unwrap();
    assert_eq!(code(&["replay", "--config", cfg.to_str().unwrap()]), 1);
    assert_eq!(code(&["replay", "--config", "/nonexistent/run.json"]), 1);
}

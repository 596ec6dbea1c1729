use std::process::{Command, Output};

fn hdapprox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdapprox")).args(args).output().expect("binary runs")
}

#[test]
fn unknown_experiment_is_usage_error() {
    let out = hdapprox(&["run", "--experiment", "nope", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown experiment"));
}

#[test]
fn missing_seed_is_usage_error() {
    let out = hdapprox(&["run", "--experiment", "bounds-table"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_key_is_usage_error() {
    let out = hdapprox(&["run", "--experiment", "mono-grid", "--seed", "1", "--set", "bogus=3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_override_is_usage_error() {
    let out = hdapprox(&["run", "--experiment", "mono-grid", "--seed", "1", "--set", "noequals"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn constants_repro_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let out = hdapprox(&[
        "run", "--experiment", "constants-repro", "--seed", "3", "--out", path.to_str().unwrap(), "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("name,params,replicate_mean,stderr,bound,pass\n"));
    assert!(!text.contains(",false"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("r{i}.json"));
        let out = hdapprox(&[
            "run", "--experiment", "mono-grid", "--seed", "42", "--set", "instances=5", "--out",
            path.to_str().unwrap(), "--format", "json",
        ]);
        assert_eq!(out.status.code(), Some(0));
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn json_output_is_an_array_of_rows() {
    let out = hdapprox(&["run", "--experiment", "bounds-table", "--seed", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v.as_array().expect("array");
    assert!(!rows.is_empty());
    for row in rows {
        for key in ["name", "params", "paper_value", "computed_value", "abs_diff", "pass"] {
            assert!(row.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn failing_row_exits_one_and_is_printed() {
    // A single quadrature point cannot resolve the error, so the bound check fails.
    let out = hdapprox(&["run", "--experiment", "mono-grid", "--seed", "1", "--set", "res=1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("FAIL") && err.contains("pass=false"), "{err}");
}

#[test]
fn config_file_supplies_runner_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# smoke run\nexperiment = bounds-table\nseed = 9\nformat = json\n").unwrap();
    let out = hdapprox(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.starts_with(b"["));
}

#[test]
fn list_names_every_experiment() {
    let out = hdapprox(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for e in hdapprox::experiments::EXPERIMENTS {
        assert!(text.contains(e));
    }
}

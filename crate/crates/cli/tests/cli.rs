use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn ehrlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ehrlab")).current_dir(root()).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn ehrhart_prints_a_table_and_a_manifest_line() {
    let o = ehrlab(&["ehrhart", "--simplex", "configs/simplex.json", "--t", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("# ehrlab ehrhart seed=none config_hash="));
    assert!(text.contains("3/2"));
    let manifest: Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(manifest["exit_code"], 0);
}

#[test]
fn csv_output_carries_seed_and_hash() {
    let dir = tempfile::tempdir().unwrap();
    let o = ehrlab(&[
        "--out", dir.path().to_str().unwrap(),
        "rw-density", "--config", "configs/density_x_axis.json", "--seed", "7", "--N", "50", "--M", "5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    let hash = manifest["config_hash"].as_str().unwrap();
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 7);
    assert_eq!(summary["config_hash"], hash);
    let csvs: Vec<PathBuf> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    assert!(!csvs.is_empty());
    for path in csvs {
        let first = std::fs::read_to_string(&path).unwrap().lines().next().unwrap().to_string();
        assert_eq!(first, format!("# ehrlab rw-density seed=7 config_hash={hash}"));
    }
}

#[test]
fn same_seed_same_output_and_different_seed_differs() {
    let run = |seed: &str| {
        stdout(&ehrlab(&["--format", "json", "dyn-cesaro", "--system", "configs/torus.json", "--B", "configs/torus_B.json", "--v", "1,0", "--N", "200", "--M", "10", "--seed", seed]))
    };
    let strip = |s: String| -> Value {
        let mut v: Value = serde_json::from_str(&s).unwrap();
        v.as_object_mut().unwrap().remove("config_hash");
        v.as_object_mut().unwrap().remove("seed");
        v
    };
    assert_eq!(run("3"), run("3"));
    assert_ne!(strip(run("3")), strip(run("4")));
}

#[test]
fn worker_count_does_not_change_results() {
    let args = ["rw-weyl", "--config", "configs/weyl_sqrt2_sqrt3.json", "--seed", "7", "--N", "200", "--M", "16"];
    let one = ehrlab(&[&["--workers", "1", "--format", "csv"][..], &args[..]].concat());
    let four = ehrlab(&[&["--workers", "4", "--format", "csv"][..], &args[..]].concat());
    assert_eq!(stdout(&one), stdout(&four));
}

#[test]
fn exhausted_searches_exit_two() {
    let o = ehrlab(&["haystack", "--r", "2", "--max-norm", "1", "--target", "50"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn bad_inputs_exit_one_with_an_error_code() {
    let cases: [&[&str]; 4] = [
        &["ehrhart", "--simplex", "configs/missing.json"],
        &["ehrhart", "--simplex", "configs/basis.json"],
        &["no-such-command"],
        &["dyn-cset", "--system", "configs/torus.json", "--B", "configs/torus_B.json", "--v", "1,0", "--seed", "1", "--c", "1/2"],
    ];
    for args in cases {
        let o = ehrlab(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).starts_with("error E_"), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn rerun_refuses_changed_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let simplex = dir.path().join("s.json");
    std::fs::copy(root().join("configs/simplex.json"), &simplex).unwrap();
    let out = dir.path().join("a");
    let o = ehrlab(&["--out", out.to_str().unwrap(), "ehrhart", "--simplex", simplex.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    std::fs::write(&simplex, r#"{"vertices": [[0, 0], [2, 0], [0, 2]]}"#).unwrap();
    let manifest = out.join("manifest.json");
    let o = ehrlab(&["rerun", "--manifest", manifest.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("E_PRECONDITION"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(ehrlab(&["--help"]).status.code(), Some(0));
    assert_eq!(ehrlab(&["witness", "--help"]).status.code(), Some(0));
}

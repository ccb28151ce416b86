use std::path::PathBuf;
use std::process::{Command, Output};

fn equires(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equires")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("equires-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn catalogue_run_succeeds() {
    let o = equires(&["cohomology", "--catalogue", "rotation_sphere", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["tables"]["cohomology"], serde_json::json!([1, 0, 2, 0, 2, 0, 2, 0, 2]));
    assert_eq!(report["status"], "ok");
}

#[test]
fn emitted_file_runs_like_the_catalogue() {
    let path = scratch("sphere.json");
    let o = equires(&["emit", "--catalogue", "rotation_sphere", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let from_file = equires(&["all", "--scenario", path.to_str().unwrap(), "--format", "csv"]);
    let from_catalogue = equires(&["all", "--catalogue", "rotation_sphere", "--format", "csv"]);
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    assert_eq!(stdout(&from_file), stdout(&from_catalogue));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["all", "--catalogue", "torus_on_s3", "--format", "json"];
    assert_eq!(equires(&args).stdout, equires(&args).stdout);
}

#[test]
fn mismatch_exits_with_one() {
    let path = scratch("wrong.json");
    equires(&["emit", "--catalogue", "rotation_sphere", "--out", path.to_str().unwrap()]);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["expectations"]["cohomology"][2] = serde_json::json!(5);
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let o = equires(&["cohomology", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("mismatch"));
}

#[test]
fn invalid_tower_exits_with_two() {
    let path = scratch("invalid.json");
    equires(&["emit", "--catalogue", "rotation_sphere", "--out", path.to_str().unwrap()]);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["maps"]["psi_south"]["pairs"] = serde_json::json!([[1, 7]]);
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let o = equires(&["validate", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("violation"));
}

#[test]
fn input_errors_exit_with_three() {
    let o = equires(&["all", "--scenario", "/nonexistent/scenario.json"]);
    assert_eq!(o.status.code(), Some(3));

    let path = scratch("truncated.json");
    std::fs::write(&path, "{\n  \"version\": \"equires-scenario/1\",\n  \"id\": ").unwrap();
    let o = equires(&["all", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let o = equires(&["all", "--catalogue", "klein_bottle"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("rotation_sphere"));

    let o = equires(&["plot", "--catalogue", "rotation_sphere"]);
    assert_eq!(o.status.code(), Some(3));

    let o = equires(&["all", "--catalogue", "rotation_sphere", "--window", "3,1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn overrides_and_params() {
    let o = equires(&["ktheory", "--catalogue", "rotation_sphere", "--window", "-1,1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("k_theory,k0,5"));
    let o = equires(&["cohomology", "--catalogue", "trivial_action", "--param", "base=square", "--max-degree", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("cohomology,4,1"));
    assert!(!stdout(&o).contains("cohomology,5,"));
}

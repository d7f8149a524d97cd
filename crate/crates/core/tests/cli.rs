use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rainbow-schur"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .env_remove("RAINBOW_SCHUR_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(text.lines().count(), 1, "one compact line");
    serde_json::from_str(&text).unwrap()
}

#[test]
fn count_hits_the_cache_on_second_call() {
    let dir = tempfile::tempdir().unwrap();
    let first = json(&run(dir.path(), &["count", "--set", "1..4", "--r", "8"]));
    assert_eq!(first["g"], "736");
    assert_eq!(first["triples"], 2);
    assert_eq!(first["reproducibility"]["cache"], "miss");
    let second = json(&run(dir.path(), &["count", "--set", "1,2,3,4", "--r", "8"]));
    assert_eq!(second["g"], "736");
    assert_eq!(second["reproducibility"]["cache"], "hit");

    let stats = json(&run(dir.path(), &["cache", "stats"]));
    assert_eq!(stats["entries"], 1);
    let cleared = json(&run(dir.path(), &["cache", "clear"]));
    assert_eq!(cleared["entries"], 0);
}

#[test]
fn search_small_case() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(dir.path(), &["search", "--n", "4", "--r", "8", "--mode", "exhaustive"]));
    assert_eq!(v["g_max"], "736");
    assert_eq!(v["argmax"], serde_json::json!(["1..4"]));
    assert_eq!(v["reproducibility"]["schema_version"], 1);
}

#[test]
fn jobs_do_not_change_search_output() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |out: Output| {
        let mut v = json(&out);
        v.as_object_mut().unwrap().remove("reproducibility");
        v.to_string()
    };
    let one = strip(run(dir.path(), &["--jobs", "1", "search", "--n", "10", "--r", "4"]));
    let eight = strip(run(dir.path(), &["--jobs", "8", "search", "--n", "10", "--r", "4"]));
    assert_eq!(one, eight);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["search", "--n", "40", "--r", "3"]).status.code(), Some(3));
    assert_eq!(run(dir.path(), &["count", "--set", "1..20", "--r", "3", "--method", "naive"]).status.code(), Some(3));
    assert_eq!(run(dir.path(), &["count", "--set", "1..x", "--r", "3"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["frobnicate"]).status.code(), Some(2));
    let refused = run(dir.path(), &["search", "--n", "40", "--r", "3"]);
    assert!(String::from_utf8_lossy(&refused.stderr).contains("pruned_max_n"));
}

#[test]
fn config_raises_a_limit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("limits.conf");
    std::fs::write(&cfg, "# small\nnaive_max_size = 20\n").unwrap();
    let out = run(dir.path(), &["--config", cfg.to_str().unwrap(), "count", "--set", "1..15", "--r", "2", "--method", "naive"]);
    assert_eq!(json(&out)["g"], "32768");
}

#[test]
fn staden_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--format", "csv", "structure", "staden", "--n", "6"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,m,min,argmin,matches_theorem"));
    assert_eq!(lines.next(), Some("6,4,1,3..6,true"));
}

#[test]
fn template_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, r#"{"n":3,"r":3,"palettes":{"1":[1,2],"2":[2,3],"3":[1,3]}}"#).unwrap();
    let arg = format!("@{}", path.display());
    let v = json(&run(dir.path(), &["templates", "rs", "--template", &arg]));
    // one triple, 1 + 2 = 3
    let mut k = 0;
    for a in [1, 2] {
        for b in [2, 3] {
            for c in [1, 3] {
                k += (a != b && b != c && a != c) as u32;
            }
        }
    }
    assert_eq!(v["rs"], k.to_string());
}

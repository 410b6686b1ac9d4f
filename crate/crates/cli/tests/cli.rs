use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cherednik(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cherednik"))
        .args(args)
        .env("CHEREDNIK_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}); stderr: {}", String::from_utf8_lossy(&out.stderr))
    })
}

fn series(v: &Value) -> Vec<u64> {
    v["series"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

fn untimed(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn rational_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = cherednik(dir.path(), &["hilbert", "--p", "2", "--n", "5", "--t", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(series(&v), [1, 4, 4, 1]);
    assert_eq!(v["theorem"]["comparison"]["equal"], true);

    let out = cherednik(dir.path(), &["hilbert", "--p", "3", "--n", "7", "--t", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(series(&v), [1, 6, 7, 6, 1]);
    assert_eq!(v["factored"], "[3]_z*(1+5z+z^2)");
    assert_eq!(v["conjectures"]["as_printed"]["comparison"]["equal"], true);
    assert_eq!(v["conjectures"]["remark_consistent"]["comparison"]["equal"], true);
}

#[test]
fn smallest_cell_runs_outside_the_theorems() {
    let dir = tempfile::tempdir().unwrap();
    let out = cherednik(dir.path(), &["hilbert", "--p", "2", "--n", "2", "--t", "0"]);
    // the conjecture predicts 1+z here, so this is a reported mismatch rather than a failure
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(series(&v), [1]);
    assert_eq!(v["r"], 0);
    assert_eq!(v["theorem"]["note"], "no theorem covers this cell");
}

#[test]
fn mismatch_exits_3_and_reports_both_variants() {
    let dir = tempfile::tempdir().unwrap();
    let out = cherednik(dir.path(), &["hilbert", "--p", "2", "--n", "4", "--t", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(series(&v), [1, 3, 3, 1]);
    assert_eq!(v["theorem"]["comparison"]["equal"], true);
    assert_eq!(v["conjectures"]["as_printed"]["comparison"]["equal"], false);
    assert_eq!(v["conjectures"]["remark_consistent"]["comparison"]["equal"], false);
    assert_eq!(v["shape"]["ok"], true);
}

#[test]
fn cap_reached_exits_1_with_partial_series() {
    let dir = tempfile::tempdir().unwrap();
    let out = cherednik(dir.path(), &["hilbert", "--p", "2", "--n", "5", "--t", "1", "--max-degree", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(series(&v), [1, 4, 10, 20, 29]);
    assert_eq!(v["status"]["cap_reached"]["cap"], 4);
}

#[test]
fn fast_eval_agrees_with_exact() {
    let dir = tempfile::tempdir().unwrap();
    let exact = json(&cherednik(dir.path(), &["hilbert", "--p", "2", "--n", "3", "--t", "1"]));
    let fast = json(&cherednik(
        dir.path(),
        &["hilbert", "--p", "2", "--n", "3", "--t", "1", "--fast-eval", "--trials", "3", "--seed", "5"],
    ));
    assert_eq!(series(&exact), series(&fast));
    assert_eq!(fast["fast_eval"]["agree"], true);
    assert_eq!(fast["fast_eval"]["trials"].as_array().unwrap().len(), 3);
}

#[test]
fn check_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = cherednik(dir.path(), &["check", "singular", "--poly", "x1^2+x1*x2+x2^2", "--p", "2", "--n", "5", "--t", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["singular"], true);

    let out = cherednik(dir.path(), &["check", "stable", "--poly", "x1^4*x2^4", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["stable"], true);

    let out = cherednik(
        dir.path(),
        &["check", "kernel", "--poly", "x1^5*x2", "--p", "2", "--n", "5", "--t", "1", "--c", "generic"],
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["in_kernel"], false);
    assert!(v["witness"].is_array());
}

#[test]
fn rational_coefficients_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let out = cherednik(dir.path(), &["check", "kernel", "--poly", "(1)/(c+1)*x1^2", "--p", "3", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(json(&out)["in_kernel"].is_boolean());
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["check", "kernel", "--poly", "x1^^2", "--p", "2", "--n", "5"],
        &["check", "singular", "--poly", "x9", "--p", "2", "--n", "3"],
        &["hilbert", "--p", "4", "--n", "5", "--t", "0"],
        &["hilbert", "--p", "2", "--n", "5", "--t", "2"],
        &["catalog", "--family", "linear-product", "--p", "2", "--n", "4", "--t", "0"],
    ];
    for args in cases {
        assert_eq!(cherednik(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn catalog_member() {
    let dir = tempfile::tempdir().unwrap();
    let out = cherednik(
        dir.path(),
        &["catalog", "--family", "linear-product", "--indices", "4,1,2", "--p", "3", "--n", "4", "--t", "0"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["certified"], true);
}

#[test]
fn kernel_export_lists_formatted_bases() {
    let dir = tempfile::tempdir().unwrap();
    let out = cherednik(dir.path(), &["kernel", "--p", "2", "--n", "3", "--t", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["format_version"], 1);
    let degrees = v["degrees"].as_array().unwrap();
    assert_eq!(degrees[2]["kernel"].as_array().unwrap().len(), 1);
    assert!(degrees[2]["kernel"][0].is_string());
}

#[test]
fn output_is_deterministic_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["hilbert", "--p", "3", "--n", "4", "--t", "0"];
    let first = json(&cherednik(dir.path(), &args));
    assert_eq!(first["timing"]["cache_hit"], false);
    let cached = json(&cherednik(dir.path(), &args));
    assert_eq!(cached["timing"]["cache_hit"], true);
    let fresh_dir = tempfile::tempdir().unwrap();
    let fresh = json(&cherednik(fresh_dir.path(), &args));
    let mut no_cache = args.to_vec();
    no_cache.push("--no-cache");
    let uncached = json(&cherednik(dir.path(), &no_cache));
    assert_eq!(untimed(first.clone()), untimed(cached));
    assert_eq!(untimed(first.clone()), untimed(fresh));
    assert_eq!(untimed(first), untimed(uncached));
}

#[test]
fn poisoned_cache_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["hilbert", "--p", "2", "--n", "3", "--t", "0"];
    let good = json(&cherednik(dir.path(), &args));
    let mut stale = good.clone();
    stale["key"]["format_version"] = 0.into();
    stale["series"] = serde_json::json!([7, 7]);
    let mut foreign = good.clone();
    foreign["engine"] = "0000".into();
    foreign["series"] = serde_json::json!([8]);
    let body = format!("garbage\n{stale}\n{{\"key\":1}}\n{foreign}\n");
    fs::write(dir.path().join("runs.jsonl"), body).unwrap();
    let out = cherednik(dir.path(), &args);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["timing"]["cache_hit"], false);
    assert_eq!(series(&v), [1, 2, 2, 1]);
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap()
}

#[test]
fn empty_sweep_writes_header() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = cherednik(dir.path(), &["sweep", "--p-list", "", "--n-list", "", "--t", "0", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        read(&out_dir.join("summary.csv")),
        "p,n,r,series,variant_a_match,variant_b_match,theorem_match,status\n"
    );
}

#[test]
fn rational_sweep_matches_and_resumes_from_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let args = [
        "sweep", "--p-list", "2,3,5", "--n-list", "3,4,5,6,7,8,9,10,11", "--t", "0", "--congruent-only", "--out",
        out_dir.to_str().unwrap(),
    ];
    let out = cherednik(dir.path(), &args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(&out_dir.join("summary.csv"));
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    for row in &rows {
        assert!(row.ends_with(",true,true,true,ok"), "{row}");
    }
    let records = read(&out_dir.join("records.jsonl"));

    // a second run is served entirely from the cache and agrees cell for cell
    let again = cherednik(dir.path(), &args);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(read(&out_dir.join("summary.csv")), csv);
    let reread = read(&out_dir.join("records.jsonl"));
    for (a, b) in records.lines().zip(reread.lines()) {
        let (a, b): (Value, Value) = (serde_json::from_str(a).unwrap(), serde_json::from_str(b).unwrap());
        assert_eq!(b["timing"]["cache_hit"], true);
        assert_eq!(untimed(a), untimed(b));
    }
}

#[test]
fn char_two_sweep_matches_theorem() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = cherednik(
        dir.path(),
        &["sweep", "--p-list", "2", "--n-list", "3,5", "--t", "1", "--out", out_dir.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = read(&out_dir.join("summary.csv"));
    assert!(csv.contains("2,3,1,1 2 3 4 4 4 3 2 1,true,true,true,ok"), "{csv}");
    assert!(csv.contains("2,5,1,1 4 10 20 29 32 29 20 10 4 1,true,true,true,ok"), "{csv}");
}

#[test]
fn sweep_records_cell_failures_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = cherednik(
        dir.path(),
        &["sweep", "--p-list", "2", "--n-list", "3,5", "--t", "1", "--max-degree", "5", "--out", out_dir.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(1));
    let csv = read(&out_dir.join("summary.csv"));
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().all(|l| !l.ends_with(",ok")), "{csv}");
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = cherednik(dir.path(), &["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["commutator_instances"].as_u64().unwrap() >= 500);
}

#[test]
fn selftest_catches_a_corrupted_dunkl_operator() {
    let dir = tempfile::tempdir().unwrap();
    let out = cherednik(dir.path(), &["selftest", "--mutate-dunkl"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert!(v["counterexample"].as_str().unwrap().contains("D_(y"));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn graphlb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphlb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn summary(dir: &Path, name: &str) -> Value {
    let text = fs::read_to_string(dir.join(format!("{name}.summary.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn write_path_graph(dir: &Path, n: usize) -> String {
    let path = dir.join("path.el");
    let body: String = (1..n).map(|v| format!("{} {}\n", v - 1, v)).collect();
    fs::write(&path, format!("# a path\n{body}")).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn invalid_scheduler_is_usage_error() {
    let out = graphlb(&["run", "--scheduler", "round-robin"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("scheduler"));
}

#[test]
fn bad_geometry_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = graphlb(&["run", "--tpb", "100", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_is_config_error() {
    let out = graphlb(&["run", "--input", "/nonexistent/graph.el"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn twc_on_path_launches_no_lb() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_path_graph(dir.path(), 12);
    let out_dir = dir.path().join("out");
    let out = graphlb(&[
        "run", "--input", &input, "--app", "bfs", "--scheduler", "twc", "--out",
        out_dir.to_str().unwrap(), "--name", "p",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(&out_dir, "p");
    assert_eq!(s["schema_version"], 1);
    assert_eq!(s["summary"]["kernel_launches"]["lb"], 0);
    assert_eq!(s["summary"]["rounds"], 12);
    for ext in ["cta.csv", "warp.csv", "round.csv"] {
        assert!(out_dir.join(format!("p.{ext}")).exists());
    }
}

#[test]
fn rmat_sssp_alb_launches_lb() {
    let dir = tempfile::tempdir().unwrap();
    let out = graphlb(&[
        "run", "--input", "rmat", "--scale", "16", "--app", "sssp", "--max-weight", "64", "--scheduler",
        "alb", "--cta", "8", "--tpb", "128", "--out", dir.path().to_str().unwrap(), "--name", "r",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(dir.path(), "r");
    assert!(s["summary"]["kernel_launches"]["lb"].as_u64().unwrap() >= 1);
    assert_eq!(s["run"]["scheduler"]["kind"], "alb");
}

#[test]
fn compare_twc_alb_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let out = graphlb(&[
        "compare", "--scale", "12", "--app", "cc", "--schedulers", "twc,alb", "--cta", "4", "--tpb", "64",
        "--out", dir.path().to_str().unwrap(), "--name", "c",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = fs::read_to_string(dir.path().join("c.compare.csv")).unwrap();
    assert_eq!(table.lines().count(), 3);
    assert!(String::from_utf8_lossy(&out.stdout).contains("labels agree"));
}

#[test]
fn compare_distributions_on_low_skew() {
    let dir = tempfile::tempdir().unwrap();
    let out = graphlb(&[
        "compare", "--scale", "12", "--skew", "uniform", "--app", "bfs", "--schedulers",
        "alb-cyclic,alb-blocked,lb-cyclic,lb-blocked", "--out", dir.path().to_str().unwrap(), "--name", "u",
    ]);
    assert!(out.status.success());
    let mut rdr = csv::Reader::from_path(dir.path().join("u.compare.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let col = |r: &csv::StringRecord, name: &str| {
        let i = rdr_index(name);
        r[i].parse::<u64>().unwrap()
    };
    // no huge vertex on a low-skew graph
    assert_eq!(col(&rows[0], "lb_launches"), 0);
    assert_eq!(col(&rows[1], "lb_launches"), 0);
    assert!(col(&rows[3], "search_memory_accesses") >= col(&rows[2], "search_memory_accesses"));
}

fn rdr_index(name: &str) -> usize {
    [
        "scheduler",
        "rounds",
        "cv",
        "max_over_mean",
        "worst_round_max_over_mean",
        "search_memory_accesses",
        "lb_launches",
        "total_launches",
    ]
    .iter()
    .position(|c| *c == name)
    .unwrap()
}

#[test]
fn sweep_writes_one_row_per_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let out = graphlb(&[
        "sweep", "--scale", "10", "--thresholds", "0,1,64,inf", "--cta", "2", "--tpb", "64", "--out",
        dir.path().to_str().unwrap(), "--name", "s",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("s.sweep.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("0,1,"), "0 is remapped to 1: {}", lines[1]);
    assert!(lines[4].starts_with("inf,inf,"));
}

#[test]
fn convert_round_trips_through_binary() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_path_graph(dir.path(), 6);
    let bin = dir.path().join("path.bin");
    let out = graphlb(&["convert", "--input", &input, "--output", bin.to_str().unwrap()]);
    assert!(out.status.success());
    let out_dir = dir.path().join("out");
    let out = graphlb(&[
        "run", "--input", bin.to_str().unwrap(), "--app", "bfs", "--out", out_dir.to_str().unwrap(),
        "--name", "b",
    ]);
    assert!(out.status.success());
    assert_eq!(summary(&out_dir, "b")["summary"]["rounds"], 6);
}

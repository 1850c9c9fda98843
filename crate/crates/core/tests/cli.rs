use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn epoa(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epoa"))
        .args(args)
        .env("EPOA_OUTPUT_DIR", dir)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn analyze_clique_writes_distribution_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = epoa(dir.path(), &["analyze", "--topology", "clique", "--size", "30", "--matrix"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&dir.path().join("clique_n30_pairwise_report.json"));
    assert_eq!(report["report"]["most_abundant"], "15");
    assert_eq!(report["report"]["source"], "exact");
    assert_eq!(report["config"]["spec"]["mutation_rate"], 0.001);
    let csv = fs::read_to_string(dir.path().join("clique_n30_pairwise_distribution.csv")).unwrap();
    assert!(csv.starts_with("state,probability\n"));
    assert_eq!(csv.lines().count(), 32);
    assert!(dir.path().join("clique_n30_pairwise_matrix.csv").exists());
}

#[test]
fn analyze_star_writes_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let out = epoa(dir.path(), &["analyze", "--topology", "star", "--size", "12", "--infection", "3"]);
    assert!(out.status.success());
    let d = json(&dir.path().join("star_n12_pairwise_diagnostics.json"));
    assert_eq!(d["threshold"], 4);
    assert_eq!(d["sink_pairs"][0][0], "(0,5)");
    let star20 = tempfile::tempdir().unwrap();
    assert!(epoa(star20.path(), &["analyze", "--topology", "star", "--size", "20"]).status.success());
    let r = json(&star20.path().join("star_n20_pairwise_report.json"));
    assert!(r["report"]["epoa"].as_f64().unwrap() >= r["report"]["poa"].as_f64().unwrap());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let zero_mu = epoa(dir.path(), &["analyze", "--topology", "clique", "--size", "5", "--mu", "0"]);
    assert_eq!(zero_mu.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&zero_mu.stderr).contains("no unique stationary distribution"));
    let cycle = epoa(dir.path(), &["analyze", "--topology", "cycle", "--size", "6"]);
    assert_eq!(cycle.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&cycle.stderr).contains("simulate"));
    assert_eq!(epoa(dir.path(), &["analyze", "--size", "5"]).status.code(), Some(1));
    assert_eq!(epoa(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(epoa(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn simulate_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["simulate", "--topology", "cycle", "--size", "6", "--steps", "20000", "--seed", "3", "--replicas", "2", "--name", "run"];
    assert!(epoa(a.path(), &args).status.success());
    assert!(epoa(b.path(), &args).status.success());
    let visits_a = fs::read(a.path().join("run_visits.csv")).unwrap();
    assert_eq!(visits_a, fs::read(b.path().join("run_visits.csv")).unwrap());
    let report = |d: &Path| json(&d.join("run_report.json"))["report"].clone();
    assert_eq!(report(a.path()), report(b.path()));
    let text = String::from_utf8(visits_a).unwrap();
    let states = text.lines().skip(1).count();
    assert!(states <= 12);
    assert!(text.lines().skip(1).all(|l| l.starts_with("\"[") || l.starts_with('[')));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "topology = \"clique\"\nsize = 10\ndynamics = \"moran-db\"\nmu = 0.01\n").unwrap();
    let out = epoa(dir.path(), &["--config", cfg.to_str().unwrap(), "analyze", "--mu", "0.002", "--name", "x"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&dir.path().join("x_report.json"));
    assert_eq!(r["config"]["spec"]["mutation_rate"], 0.002);
    assert_eq!(r["config"]["spec"]["kind"], "moran-db");
}

#[test]
fn single_point_sweep_matches_analyze() {
    let dir = tempfile::tempdir().unwrap();
    assert!(epoa(dir.path(), &["analyze", "--topology", "star", "--size", "10", "--name", "one"]).status.success());
    let out = epoa(dir.path(), &["sweep", "--topology", "star", "--size", "10", "--name", "grid"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&dir.path().join("one_report.json"))["report"].clone();
    let mut rows = csv::Reader::from_path(dir.path().join("grid.csv")).unwrap();
    let headers = rows.headers().unwrap().clone();
    let row = rows.records().next().unwrap().unwrap();
    let field = |name: &str| row[headers.iter().position(|h| h == name).unwrap()].to_string();
    assert_eq!(field("epoa").parse::<f64>().unwrap(), report["epoa"].as_f64().unwrap());
    assert_eq!(field("S_hat").parse::<f64>().unwrap(), report["S_hat"].as_f64().unwrap());
    assert_eq!(field("source"), "exact");
}

#[test]
fn sweep_grid_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = epoa(
        dir.path(),
        &["sweep", "--topology", "clique", "--size-grid", "10,12,20", "--mu-grid", "0.0001,0.001", "--dynamics-grid", "pairwise,moran-bd"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(dir.path().join("sweep.csv")).unwrap();
    let headers: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        headers,
        ["topology", "kind", "mu", "N", "V/I", "epoa", "poa", "epoa_over_poa", "S_hat", "omega", "k", "seed", "source"]
    );
    assert_eq!(reader.records().count(), 12);
}

#[test]
fn custom_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("path.txt");
    fs::write(&edges, "5\n# a path\n0 1\n1 2\n2 3\n3 4\n").unwrap();
    let out = epoa(
        dir.path(),
        &["simulate", "--topology", "custom", "--edges", edges.to_str().unwrap(), "--steps", "5000", "--name", "path"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("path_visits.csv")).unwrap();
    assert!(text.lines().skip(1).all(|l| l.split(',').next().unwrap().len() == 5));
}

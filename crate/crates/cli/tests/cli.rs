use std::path::Path;
use std::process::{Command, Output};

fn weylwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weylwalk")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn galois_certifies_cubic_companion() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "comp.txt", "3\n0 0 1\n1 0 1\n0 1 0\n");
    let v: serde_json::Value = serde_json::from_str(&stdout(&weylwalk(&["galois", "--matrix", &m]))).unwrap();
    assert_eq!(v["certificate"]["verdict"], "proven_full_weyl");
    let primes: Vec<u64> = v["observations"].as_array().unwrap().iter().map(|o| o["p"].as_u64().unwrap()).collect();
    assert_eq!(primes.first(), Some(&2));
    assert_eq!(primes.last(), Some(&59));
    let skipped: Vec<&serde_json::Value> =
        v["observations"].as_array().unwrap().iter().filter(|o| o["status"] != "good").collect();
    assert_eq!(skipped.len(), 1);
    assert_eq!(skipped[0]["p"], 23);

    let id = write(dir.path(), "id.txt", "3\n1 0 0\n0 1 0\n0 0 1\n");
    let v: serde_json::Value = serde_json::from_str(&stdout(&weylwalk(&["galois", "--matrix", &id]))).unwrap();
    assert_eq!(v["certificate"]["verdict"], "degenerate");
}

#[test]
fn survey_is_reproducible_across_thread_counts() {
    let args = ["survey", "--group", "sl3", "--primes", "30", "--grid", "5,25", "--trials", "12", "--seed", "99"];
    let one = stdout(&weylwalk(&[&args[..], &["--threads", "1"]].concat()));
    let four = stdout(&weylwalk(&[&args[..], &["--threads", "4"]].concat()));
    assert_eq!(one, four);
    assert_eq!(one.lines().count(), 24);
    let other = stdout(&weylwalk(&[&args[..9], &["--seed", "100"]].concat()));
    assert_ne!(one, other);
}

#[test]
fn survey_summary_matches_records() {
    let dir = tempfile::tempdir().unwrap();
    let jsonl = dir.path().join("trials.jsonl");
    let csv = dir.path().join("summary.csv");
    let o = weylwalk(&[
        "survey", "--group", "sp4", "--primes", "40", "--grid", "10,30", "--trials", "15", "--seed", "3",
        "--out", jsonl.to_str().unwrap(), "--summary", csv.to_str().unwrap(),
    ]);
    stdout(&o);
    let records: Vec<serde_json::Value> =
        std::fs::read_to_string(&jsonl).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let summary = std::fs::read_to_string(&csv).unwrap();
    let mut lines = summary.lines();
    assert_eq!(lines.next(), Some("n,trials,certified,fraction,wilson_lo,wilson_hi,mean_primes"));
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let n: u64 = cols[0].parse().unwrap();
        let certified: usize = cols[2].parse().unwrap();
        let recount = records.iter().filter(|r| r["n"] == n && r["verdict"] == "proven_full_weyl").count();
        assert_eq!(recount, certified);
    }
    // certified records list every class of W(C_2)
    for r in records.iter().filter(|r| r["verdict"] == "proven_full_weyl") {
        assert_eq!(r["observed"].as_array().unwrap().len(), 5);
        assert!(r["missing"].as_array().unwrap().is_empty());
        assert!(r.get("wall_ms").is_none());
    }
}

#[test]
fn configuration_errors_exit_with_2() {
    let o = weylwalk(&["survey", "--group", "sl3", "--primes", "5", "--budget", "10", "--grid", "10", "--trials", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("prime budget"));
    assert_eq!(weylwalk(&["survey", "--group", "sl1", "--grid", "1", "--trials", "1"]).status.code(), Some(2));
    assert_eq!(weylwalk(&["tau", "--group", "sl2", "--mode", "exact", "--trials", "1", "--n-max", "3"]).status.code(), Some(2));
    assert_eq!(weylwalk(&["galois", "--matrix", "/nonexistent/matrix.txt"]).status.code(), Some(2));
    assert_eq!(weylwalk(&["equidist", "--group", "sp4", "--q", "2"]).status.code(), Some(2));
}

#[test]
fn walk_config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "walk.json",
        r#"{"group":{"family":"SL","m":3},"length":20,"mode":"dual","primes":{"first":4,"from":5},"seed":7}"#,
    );
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&weylwalk(&["walk", "--config", &cfg, "--length", "20"]))).unwrap();
    assert_eq!(v["length"], 20);
    assert_eq!(v["trace"].as_array().unwrap().len(), 20);
    assert_eq!(v["charpoly"]["exact"].as_str().unwrap().split_whitespace().count(), 4);
    let again = stdout(&weylwalk(&["walk", "--config", &cfg, "--length", "20"]));
    assert_eq!(serde_json::from_str::<serde_json::Value>(&again).unwrap(), v);
}

#[test]
fn chain_and_torus_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "chain.json", r#"{"states":["a","b"],"kernel":[["9/10","1/10"],["1/10","9/10"]],"start":0}"#);
    let csv = stdout(&weylwalk(&["chain", "--spec", &spec, "--grid", "50,100", "--trials", "2000", "--format", "csv"]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,empirical,bound,beta");
    assert_eq!(lines.len(), 3);
    let beta: f64 = lines[1].split(',').nth(3).unwrap().parse().unwrap();
    assert!((beta - 0.2).abs() < 1e-9);

    let bad = write(dir.path(), "bad.json", r#"{"states":["a","b"],"kernel":[["1/2","1/2"],["1/3","2/3"]],"start":0}"#);
    assert_eq!(weylwalk(&["chain", "--spec", &bad, "--grid", "5"]).status.code(), Some(2));

    let torus = stdout(&weylwalk(&["torus-demo", "--n-max", "2", "--format", "csv"]));
    assert_eq!(
        torus.lines().collect::<Vec<_>>(),
        vec!["n,probability,sqrt_n_probability", "1,0.3333333333333333,0.3333333333333333", "2,0.3333333333333333,0.4714045207910317"]
    );
}

#[test]
fn equidist_census_json() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&weylwalk(&["equidist", "--group", "sl2", "--q", "11"]))).unwrap();
    assert_eq!(v["total"], 1320);
    let counts: Vec<u64> = v["classes"].as_array().unwrap().iter().map(|c| c["count"].as_u64().unwrap()).collect();
    assert_eq!(counts.iter().sum::<u64>(), v["rs_count"].as_u64().unwrap());
}

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacobi-paley"))
        .args(args)
        .output()
        .expect("spawn cli")
}

fn json_lines(out: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

#[test]
fn eval_at_degree_zero_is_one() {
    let out = run(&["eval", "--n", "0", "--t", "0.3"]);
    assert!(out.status.success());
    assert_eq!(json_lines(&out)[0]["value"], 1.0);
}

#[test]
fn configuration_errors_exit_with_two() {
    assert_eq!(run(&["verify", "--p", "3"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--n", "1", "--t", "2"]).status.code(), Some(2));
    assert_eq!(run(&["quad", "--m", "4", "--alpha", "-1.5"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--omega", "/no/such/table"]).status.code(), Some(2));
}

#[test]
fn failed_confidence_flags_exit_with_three_and_still_report() {
    let out = run(&["verify", "--corpus", "full", "--theorem", "paley", "--max-degree", "64"]);
    assert_eq!(out.status.code(), Some(3));
    let rows = json_lines(&out);
    assert!(!rows.is_empty());
    assert!(rows.iter().any(|r| r["flags"]["ladder_decreasing"] == false));
}

#[test]
fn counterexample_budget_column_is_harmonic() {
    let out = run(&["counterexample", "--ladder", "16,64,256"]);
    assert!(out.status.success());
    for row in json_lines(&out) {
        let n = row["n"].as_u64().unwrap() as usize;
        let h: f64 = (1..=n + 1).map(|k| 1.0 / k as f64).sum();
        let budget = row["budget"].as_f64().unwrap();
        assert!((budget - h).abs() <= 1e-12 * h, "N={n}: {budget} vs {h}");
    }
}

#[test]
fn weight_tables_and_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("w.txt");
    std::fs::write(&table, "# decreasing\n1, 0.5 0.25\n0.125\n").unwrap();
    let out_path = dir.path().join("m.csv");
    let out = run(&[
        "mseq",
        "--omega",
        table.to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(&out_path).unwrap();
    let headers = reader.headers().unwrap().clone();
    let row = reader.records().next().unwrap().unwrap();
    let m_col = headers.iter().position(|h| h == "m_omega").unwrap();
    // t * sum_{omega(n) >= t} (n+1) at the levels 1, 1/2, 1/4, 1/8: 1, 3/2, 3/2, 5/4
    let m: f64 = row[m_col].parse().unwrap();
    assert_eq!(m, 1.5);
}

use std::fs;
use std::path::Path;

use predform_cli::{run_cli, EXIT_IO, EXIT_OK, EXIT_VALIDATION};

const CONFIG: &str = r#"{
  "complex_predicate": {
    "predicates": [
      {"id": "p1", "selectivity": 0.5, "accuracy_mean": 0.7},
      {"id": "p2", "selectivity": 0.5, "accuracy_mean": 0.8, "accuracy_var": 0.02}
    ],
    "penalty": 0.1
  },
  "item_count": 60,
  "budget_b": 3,
  "beta_weights": [1.0, 10.0],
  "trials": 4,
  "seed": 0
}"#;

fn run(args: &[&str]) -> i32 {
    run_cli(std::iter::once("predform").chain(args.iter().copied()))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn simulate_writes_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    let out = dir.path().join("out.csv");
    fs::write(&cfg, CONFIG).unwrap();
    assert_eq!(run(&["simulate", "--config", p(&cfg), "--seed", "5", "--out", p(&out)]), EXIT_OK);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(predform::engine::RESULTS_HEADER));
    // 3 designs x 4 trials x 2 betas
    assert_eq!(lines.count(), 24);

    let out2 = dir.path().join("out2.csv");
    assert_eq!(
        run(&["simulate", "--config", p(&cfg), "--seed", "5", "--trials", "2", "--out", p(&out2)]),
        EXIT_OK
    );
    assert_eq!(fs::read_to_string(&out2).unwrap().lines().count(), 1 + 12);
    // only the --out files were created
    let mut names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names, vec!["c.json", "out.csv", "out2.csv"]);
}

#[test]
fn invalid_penalty_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    let out = dir.path().join("out.csv");
    fs::write(&cfg, CONFIG.replace("\"penalty\": 0.1", "\"penalty\": 1.5")).unwrap();
    assert_eq!(
        run(&["simulate", "--config", p(&cfg), "--seed", "5", "--out", p(&out)]),
        EXIT_VALIDATION
    );
    assert!(!out.exists());

    let binary = std::process::Command::new(env!("CARGO_BIN_EXE_predform"))
        .args(["simulate", "--config", p(&cfg), "--seed", "5", "--out", p(&out)])
        .output()
        .unwrap();
    assert_eq!(binary.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&binary.stderr).contains("penalty"));
    assert!(binary.stdout.is_empty());
}

#[test]
fn usage_and_io_errors() {
    assert_eq!(run(&[]), EXIT_VALIDATION);
    assert_eq!(run(&["simulate", "--config", "x.json", "--out", "y.csv"]), EXIT_VALIDATION);
    assert_eq!(run(&["frobnicate"]), EXIT_VALIDATION);
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let out = dir.path().join("o.csv");
    assert_eq!(run(&["simulate", "--config", p(&missing), "--seed", "1", "--out", p(&out)]), EXIT_IO);

    let cfg = dir.path().join("c.json");
    fs::write(&cfg, CONFIG).unwrap();
    let unwritable = dir.path().join("no-such-dir").join("o.csv");
    assert_eq!(run(&["simulate", "--config", p(&cfg), "--seed", "1", "--out", p(&unwritable)]), EXIT_IO);

    fs::write(&cfg, "{ not json").unwrap();
    assert_eq!(run(&["simulate", "--config", p(&cfg), "--seed", "1", "--out", p(&out)]), EXIT_VALIDATION);
}

#[test]
fn sweep_writes_tagged_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    let grid = dir.path().join("g.json");
    let out = dir.path().join("s.csv");
    fs::write(&cfg, CONFIG).unwrap();
    fs::write(&grid, r#"{"mu": [0.6, 0.9], "budget": [3, 9]}"#).unwrap();
    assert_eq!(
        run(&["sweep", "--grid", p(&grid), "--config", p(&cfg), "--seed", "3", "--out", p(&out)]),
        EXIT_OK
    );
    let text = fs::read_to_string(&out).unwrap();
    // 4 points x 3 designs x 4 trials x 2 betas
    assert_eq!(text.lines().count(), 1 + 96);
    assert!(text.lines().nth(1).unwrap().contains(",0.6;0.6,"));

    fs::write(&grid, r#"{"mu": []}"#).unwrap();
    assert_eq!(
        run(&["sweep", "--grid", p(&grid), "--config", p(&cfg), "--seed", "3", "--out", p(&out)]),
        EXIT_VALIDATION
    );
}

#[test]
fn analyze_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let judgments = dir.path().join("j.csv");
    let truth = dir.path().join("t.csv");
    let out = dir.path().join("r.json");
    fs::write(&truth, "item_id,p_1,p_2,in_label\na,1,1,1\nb,1,0,0\nc,0,0,0\n").unwrap();
    let mut rows = String::from("worker_id,item_id,condition,predicate_id,answer,decision_time_s\n");
    for (item, in_label, b1, b2) in [("a", 1, 1, 1), ("b", 0, 1, 0), ("c", 0, 0, 0)] {
        for w in 0..3 {
            rows += &format!("bw{w},{item},baseline,complex,{in_label},{}\n", 20 + w);
            rows += &format!("sw{w},{item},p1_p2,p_1,{b1},30\n");
            rows += &format!("sw{w},{item},p1_p2,p_2,{b2},30\n");
        }
    }
    fs::write(&judgments, rows).unwrap();
    assert_eq!(
        run(&["analyze", "--judgments", p(&judgments), "--truth", p(&truth), "--out", p(&out)]),
        EXIT_OK
    );
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["f1"]["baseline"], 1.0);
    assert_eq!(report["f1"]["p1_p2"], 1.0);
    assert_eq!(report["median_decision_time_s"]["baseline"], 21.0);
    assert!(report["worker_accuracy_tests"]["kruskal_wallis"]["p_value"].is_number());

    fs::write(&judgments, "worker_id,item_id,condition,predicate_id,answer,decision_time_s\nw,a,baseline,complex,7,\n")
        .unwrap();
    assert_eq!(
        run(&["analyze", "--judgments", p(&judgments), "--truth", p(&truth), "--out", p(&out)]),
        EXIT_VALIDATION
    );
}

use std::collections::BTreeMap;

use plantedbip_harness::sweep::{sweep_into, RESULTS_HEADER};
use plantedbip_harness::{run_sweep, Algorithm, ExperimentConfig};

fn grid_config(algorithms: Vec<Algorithm>) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::single(40, 12, 3, 0.5, algorithms);
    cfg.grid.n = vec![40, 60];
    cfg.grid.k = vec![12, 16];
    cfg.trials = 5;
    cfg.master_seed = 2718;
    cfg
}

fn sweep_bytes(cfg: &ExperimentConfig, workers: usize) -> (Vec<u8>, Vec<u8>, usize) {
    let (mut results, mut timings) = (Vec::new(), Vec::new());
    let (rows, _) = sweep_into(cfg, &mut results, &mut timings, workers).unwrap();
    (results, timings, rows)
}

fn records(bytes: &[u8]) -> Vec<csv::StringRecord> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(bytes)
        .records()
        .map(Result::unwrap)
        .collect()
}

#[test]
fn single_cell_single_trial() {
    let cfg = ExperimentConfig::single(40, 12, 3, 0.5, vec![Algorithm::Degree, Algorithm::Certify]);
    let (results, _, rows) = sweep_bytes(&cfg, 1);
    assert_eq!(rows, 2);
    assert_eq!(records(&results).len(), 2);
    let text = String::from_utf8(results).unwrap();
    assert_eq!(text.lines().next(), Some(RESULTS_HEADER));
}

#[test]
fn grid_rows_in_cell_trial_order() {
    let cfg = grid_config(vec![Algorithm::Degree, Algorithm::Certify]);
    let (results, timings, rows) = sweep_bytes(&cfg, 2);
    assert_eq!(rows, 4 * 5 * 2);
    let recs = records(&results);
    assert_eq!(recs.len(), rows);
    assert_eq!(records(&timings).len(), rows);
    let keys: Vec<(usize, usize)> = recs.iter().map(|r| (r[0].parse().unwrap(), r[6].parse().unwrap())).collect();
    assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    for r in &recs {
        let success: bool = r[10].parse().unwrap();
        assert_eq!(success, r[11].parse::<usize>().ok() == Some(0) || &r[9] == "certified", "{r:?}");
    }
}

#[test]
fn bytes_do_not_depend_on_worker_count() {
    let cfg = grid_config(vec![Algorithm::Degree, Algorithm::Subspace]);
    let (one, _, _) = sweep_bytes(&cfg, 1);
    let (three, _, _) = sweep_bytes(&cfg, 3);
    assert_eq!(one, three);
}

#[test]
fn generation_errors_still_produce_rows() {
    let mut cfg = ExperimentConfig::single(40, 12, 3, 0.5, vec![Algorithm::Degree, Algorithm::Sdp]);
    cfg.grid.d = vec![3, 7];
    cfg.trials = 2;
    let (results, _, rows) = sweep_bytes(&cfg, 1);
    assert_eq!(rows, 2 * 2 * 2);
    let bad: Vec<_> = records(&results).into_iter().filter(|r| &r[3] == "7").collect();
    assert_eq!(bad.len(), 4);
    assert!(bad.iter().all(|r| &r[9] == "generation_error" && &r[10] == "false"));
}

#[test]
fn summary_matches_recomputed_success_rates() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = grid_config(vec![Algorithm::Degree, Algorithm::Certify]);
    cfg.output = dir.path().join("out.csv");
    let report = run_sweep(&cfg).unwrap();
    assert!(report.timings.ends_with("out.timings.csv"));

    let mut tally: BTreeMap<(String, String), (usize, usize)> = BTreeMap::new();
    for r in records(&std::fs::read(&report.results).unwrap()) {
        let e = tally.entry((r[0].to_string(), r[8].to_string())).or_default();
        e.0 += 1;
        e.1 += (&r[10] == "true") as usize;
    }
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report.summary_path).unwrap()).unwrap();
    let cells = summary["cells"].as_array().unwrap();
    assert_eq!(cells.len(), tally.len());
    for c in cells {
        let key = (c["cell"]["index"].to_string(), c["algorithm"].as_str().unwrap().to_string());
        let (trials, successes) = tally[&key];
        assert_eq!(c["trials"], trials);
        let rate = c["success_rate"].as_f64().unwrap();
        assert!((rate - successes as f64 / trials as f64).abs() < 1e-15);
    }
    assert_eq!(summary["rows"], 40);
}

#[test]
fn identical_configs_write_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = grid_config(vec![Algorithm::Degree]);
    cfg.output = dir.path().join("a.csv");
    run_sweep(&cfg).unwrap();
    cfg.output = dir.path().join("b.csv");
    run_sweep(&cfg).unwrap();
    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    assert_eq!(read("a.summary.json"), read("b.summary.json"));
}

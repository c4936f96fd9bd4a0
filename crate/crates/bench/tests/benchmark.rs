use lcplan::planners::PlannerKind;
use lcplan_bench::benchmark::{median, run_benchmark, BenchmarkOptions, Suite};
use lcplan_bench::reference::reference_scenarios;

#[test]
fn median_handles_even_odd_and_empty() {
    assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
    assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
    assert_eq!(median(&[]), None);
    assert_eq!(median(&[f64::NAN, 1.0]), Some(1.0));
}

#[test]
fn suite_with_one_bad_scenario_still_produces_other_rows() {
    let dir = tempfile::tempdir().unwrap();
    let case1 = reference_scenarios().remove(0);
    std::fs::write(dir.path().join("case1.json"), case1.to_json()).unwrap();
    std::fs::write(dir.path().join("broken.json"), "{\"format_version\": 1}").unwrap();
    std::fs::write(
        dir.path().join("suite.json"),
        r#"{"format_version": 1, "scenarios": ["case1.json", "broken.json"], "planners": ["astar", "potential_field"], "seeds": 2}"#,
    )
    .unwrap();
    let suite = Suite::load(&dir.path().join("suite.json")).unwrap();
    assert!(suite.entries[1].scenario.is_err());
    let out_dir = dir.path().join("out");
    let opts = BenchmarkOptions { out_dir: out_dir.clone(), seeds: None, write_runs: true };
    let out = run_benchmark(&suite, &opts).unwrap();
    assert_eq!(out.cells.len(), 4);
    assert!(out.cells.iter().all(|c| c.success()));

    let summary = String::from_utf8(out.summary_csv.clone()).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("case1,astar,6,low,2,2,"));
    assert!(lines[3].starts_with("broken.json,"));
    assert!(lines[3].contains("schema error") || lines[3].contains("missing field"), "{}", lines[3]);
    assert_eq!(std::fs::read(out_dir.join("summary.csv")).unwrap(), out.summary_csv);
    assert_eq!(std::fs::read_dir(out_dir.join("runs")).unwrap().count(), 4);
    assert!(out_dir.join("timings.csv").is_file());
}

#[test]
fn failed_planners_leave_empty_metric_cells() {
    let dir = tempfile::tempdir().unwrap();
    let case2 = reference_scenarios().remove(1);
    let suite = Suite::from_scenarios(vec![case2], vec![PlannerKind::PotentialField], 1);
    let opts = BenchmarkOptions { out_dir: dir.path().to_path_buf(), seeds: None, write_runs: false };
    let out = run_benchmark(&suite, &opts).unwrap();
    let summary = String::from_utf8(out.summary_csv).unwrap();
    let row = summary.lines().nth(1).unwrap();
    assert_eq!(row, "case2,potential_field,8,medium,1,0,,,,,0,local_minimum,");
}

#[test]
fn tables_are_identical_across_runs_and_thread_counts() {
    let scenarios: Vec<_> = reference_scenarios().into_iter().take(2).collect();
    let run = |threads: usize| {
        let dir = tempfile::tempdir().unwrap();
        let suite = Suite::from_scenarios(scenarios.clone(), PlannerKind::ALL.to_vec(), 2);
        let opts = BenchmarkOptions { out_dir: dir.path().to_path_buf(), seeds: None, write_runs: false };
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let out = pool.install(|| run_benchmark(&suite, &opts)).unwrap();
        (out.results_csv, out.summary_csv)
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(a, b);
    assert!(!a.0.windows(2).any(|w| w == b"\r\n"));
}

//! Benchmark suites: every (scenario, planner, seed) cell is planned and
//! evaluated on a worker pool, then tabulated.
//!
//! Output layout under the chosen directory:
//!
//! - `runs/<scenario>__<planner>__s<seed>.json`: one run record per cell.
//! - `results.csv`: one row per cell.
//! - `summary.csv`: one row per (scenario, planner) with medians over the
//!   successful seeds. Empty cells stand for "no successful run".
//! - `timings.csv`: wall-clock planning times, kept apart so the other two
//!   tables are reproducible byte for byte.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use lcplan::planners::PlannerKind;
use lcplan::rangeloc::EvaluationReport;

use crate::error::BenchError;
use crate::io::{csv_bytes, fmt_opt, read_to_string, write_atomic, write_json};
use crate::metrics::MetricsRecord;
use crate::record::RunRecord;
use crate::runner::{evaluate_record, plan_record, EvaluateOptions};
use crate::scenario::Scenario;

pub const SUITE_FORMAT_VERSION: u32 = 1;

/// Suite file. Scenario entries are file paths (relative to the suite file)
/// or inline scenario objects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteFile {
    pub format_version: u32,
    pub scenarios: Vec<Value>,
    #[serde(default = "all_planners")]
    pub planners: Vec<String>,
    #[serde(default = "default_seeds")]
    pub seeds: usize,
}

fn all_planners() -> Vec<String> {
    PlannerKind::ALL.iter().map(|k| k.as_str().to_string()).collect()
}

fn default_seeds() -> usize {
    10
}

/// A scenario entry that loaded, or the reason it did not.
#[derive(Debug)]
pub struct SuiteEntry {
    pub label: String,
    pub scenario: Result<Scenario, BenchError>,
}

#[derive(Debug)]
pub struct Suite {
    pub entries: Vec<SuiteEntry>,
    pub planners: Vec<PlannerKind>,
    pub seeds: usize,
}

impl Suite {
    pub fn from_scenarios(scenarios: Vec<Scenario>, planners: Vec<PlannerKind>, seeds: usize) -> Self {
        let entries =
            scenarios.into_iter().map(|s| SuiteEntry { label: s.name.clone(), scenario: Ok(s) }).collect();
        Self { entries, planners, seeds }
    }

    /// Fails only if the suite document itself is malformed; bad scenario
    /// entries are kept and reported per row.
    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = read_to_string(path)?;
        let file: SuiteFile = serde_json::from_str(&text).map_err(BenchError::from_json)?;
        if file.format_version != SUITE_FORMAT_VERSION {
            return Err(BenchError::Schema {
                field: "format_version".into(),
                message: format!("unsupported version {}", file.format_version),
            });
        }
        if file.scenarios.is_empty() {
            return Err(BenchError::Schema { field: "scenarios".into(), message: "suite lists no scenarios".into() });
        }
        let mut planners = Vec::new();
        for name in &file.planners {
            let kind = PlannerKind::parse(name)
                .ok_or_else(|| BenchError::Schema { field: "planners".into(), message: format!("unknown planner `{name}`") })?;
            planners.push(kind);
        }
        let base = path.parent().unwrap_or(Path::new("."));
        let entries = file
            .scenarios
            .iter()
            .enumerate()
            .map(|(i, v)| match v {
                Value::String(rel) => {
                    let p = base.join(rel);
                    SuiteEntry { label: rel.clone(), scenario: read_to_string(&p).and_then(|t| Scenario::from_json(&t)) }
                }
                Value::Object(_) => {
                    let label = v.get("name").and_then(Value::as_str).map_or_else(|| format!("scenarios[{i}]"), str::to_string);
                    let scenario = serde_json::from_value::<Scenario>(v.clone())
                        .map_err(|e| BenchError::Schema { field: format!("scenarios[{i}]"), message: e.to_string() })
                        .and_then(|s| s.validate().map(|()| s));
                    SuiteEntry { label, scenario }
                }
                _ => SuiteEntry {
                    label: format!("scenarios[{i}]"),
                    scenario: Err(BenchError::Schema {
                        field: format!("scenarios[{i}]"),
                        message: "expected a path or a scenario object".into(),
                    }),
                },
            })
            .collect();
        Ok(Self { entries, planners, seeds: file.seeds })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkOptions {
    pub out_dir: PathBuf,
    /// Overrides the suite's seed count.
    pub seeds: Option<usize>,
    pub write_runs: bool,
}

/// One (scenario, planner, seed) cell. Seed `k` (1-based) plans with
/// `seeds.planner + k - 1` and evaluates with `seeds.noise + k - 1`.
#[derive(Debug)]
pub struct CellOutcome {
    pub scenario: String,
    pub planner: PlannerKind,
    pub seed: usize,
    pub record: Option<RunRecord>,
    pub report: Option<EvaluationReport>,
    /// Scenario-level error that prevented planning.
    pub error: Option<String>,
}

impl CellOutcome {
    pub fn success(&self) -> bool {
        self.record.as_ref().is_some_and(|r| r.success)
    }

    pub fn failure_code(&self) -> Option<&str> {
        self.record.as_ref().and_then(|r| r.failure.as_ref()).map(|f| f.code.as_str())
    }
}

#[derive(Debug)]
pub struct BenchmarkOutput {
    pub cells: Vec<CellOutcome>,
    pub results_csv: Vec<u8>,
    pub summary_csv: Vec<u8>,
    pub timings_csv: Vec<u8>,
}

impl BenchmarkOutput {
    pub fn cells_for<'a>(&'a self, scenario: &'a str, planner: PlannerKind) -> impl Iterator<Item = &'a CellOutcome> + 'a {
        self.cells.iter().filter(move |c| c.scenario == scenario && c.planner == planner)
    }

    pub fn total_disconnected_calls(&self) -> u64 {
        self.cells.iter().filter_map(|c| c.record.as_ref()).map(|r| r.indicator_stats.disconnected_calls).sum()
    }
}

fn file_stem(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn run_cell(scenario: &Scenario, planner: PlannerKind, seed: usize, opts: &BenchmarkOptions) -> CellOutcome {
    let sc = scenario.with_planner(planner);
    let k = seed as u64 - 1;
    let mut cell =
        CellOutcome { scenario: scenario.name.clone(), planner, seed, record: None, report: None, error: None };
    let (mut record, _) = match plan_record(&sc, sc.seeds.planner.wrapping_add(k)) {
        Ok(r) => r,
        Err(e) => {
            cell.error = Some(e.to_string());
            return cell;
        }
    };
    if record.success {
        let eval = EvaluateOptions { trials: sc.trials, noise_seed: sc.seeds.noise.wrapping_add(k), noiseless: false };
        match evaluate_record(&record, &eval) {
            Ok(report) => {
                record.metrics = Some(MetricsRecord::new(&record, &eval, &report));
                cell.report = Some(report);
            }
            Err(e) => cell.error = Some(e.to_string()),
        }
    }
    if opts.write_runs {
        let path = opts.out_dir.join("runs").join(format!("{}__{}__s{seed}.json", file_stem(&sc.name), planner.as_str()));
        if let Err(e) = write_json(&path, &record) {
            cell.error = Some(e.to_string());
        }
    }
    log::info!(
        "{} {} seed {seed}: {}",
        sc.name,
        planner.as_str(),
        record.failure.as_ref().map_or("ok", |f| f.code.as_str())
    );
    cell.record = Some(record);
    cell
}

/// Median of the finite values, `None` when there are none.
pub fn median(values: &[f64]) -> Option<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

const RESULTS_HEADER: [&str; 14] = [
    "scenario",
    "planner",
    "seed",
    "success",
    "failure",
    "orderings_tried",
    "n_steps",
    "ale",
    "mle",
    "ad",
    "illposed_timesteps",
    "indicator_calls",
    "disconnected_calls",
    "error",
];

const SUMMARY_HEADER: [&str; 13] = [
    "scenario",
    "planner",
    "n_robots",
    "complexity",
    "runs",
    "successes",
    "orderings_tried",
    "ale",
    "mle",
    "ad",
    "disconnected_calls",
    "failures",
    "error",
];

fn results_row(c: &CellOutcome) -> Vec<String> {
    let r = c.record.as_ref();
    let m = r.and_then(|r| r.metrics.as_ref());
    vec![
        c.scenario.clone(),
        c.planner.as_str().to_string(),
        c.seed.to_string(),
        r.map_or(String::new(), |r| r.success.to_string()),
        c.failure_code().unwrap_or_default().to_string(),
        r.map_or(String::new(), |r| r.orderings_tried.to_string()),
        r.and_then(|r| r.plan.as_ref()).map_or(String::new(), |p| p.positions.first().map_or(0, Vec::len).to_string()),
        fmt_opt(m.and_then(|m| m.ale)),
        fmt_opt(m.and_then(|m| m.mle)),
        fmt_opt(m.map(|m| m.ad)),
        m.map_or(String::new(), |m| m.illposed_timesteps.len().to_string()),
        r.map_or(String::new(), |r| r.indicator_stats.calls.to_string()),
        r.map_or(String::new(), |r| r.indicator_stats.disconnected_calls.to_string()),
        c.error.clone().unwrap_or_default(),
    ]
}

fn summary_row(label: &str, planner: PlannerKind, scenario: Option<&Scenario>, cells: &[&CellOutcome], error: Option<String>) -> Vec<String> {
    let ok: Vec<&RunRecord> = cells.iter().filter_map(|c| c.record.as_ref()).filter(|r| r.success).collect();
    let metric = |f: &dyn Fn(&MetricsRecord) -> Option<f64>| {
        let v: Vec<f64> = ok.iter().filter_map(|r| r.metrics.as_ref()).filter_map(f).collect();
        fmt_opt(median(&v))
    };
    let orderings: Vec<f64> = ok.iter().map(|r| r.orderings_tried as f64).collect();
    let mut codes: Vec<&str> = cells.iter().filter_map(|c| c.failure_code()).collect();
    codes.sort_unstable();
    codes.dedup();
    let disconnected: u64 = cells.iter().filter_map(|c| c.record.as_ref()).map(|r| r.indicator_stats.disconnected_calls).sum();
    vec![
        label.to_string(),
        planner.as_str().to_string(),
        scenario.map_or(String::new(), |s| s.robots.starts.len().to_string()),
        scenario.map_or(String::new(), |s| {
            serde_json::to_value(s.environment.complexity).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
        }),
        cells.len().to_string(),
        ok.len().to_string(),
        fmt_opt(median(&orderings)),
        metric(&|m| m.ale),
        metric(&|m| m.mle),
        metric(&|m| Some(m.ad)),
        if scenario.is_some() { disconnected.to_string() } else { String::new() },
        codes.join(";"),
        error.unwrap_or_default(),
    ]
}

/// Runs every cell, writes the tables and returns them with the cells.
pub fn run_benchmark(suite: &Suite, opts: &BenchmarkOptions) -> Result<BenchmarkOutput, BenchError> {
    let seeds = opts.seeds.unwrap_or(suite.seeds).max(1);
    let jobs: Vec<(&Scenario, PlannerKind, usize)> = suite
        .entries
        .iter()
        .filter_map(|e| e.scenario.as_ref().ok())
        .flat_map(|s| suite.planners.iter().flat_map(move |&p| (1..=seeds).map(move |k| (s, p, k))))
        .collect();
    let cells: Vec<CellOutcome> = jobs.par_iter().map(|&(s, p, k)| run_cell(s, p, k, opts)).collect();

    let mut results = Vec::new();
    let mut summary = Vec::new();
    let mut timings = Vec::new();
    for entry in &suite.entries {
        match &entry.scenario {
            Ok(s) => {
                for &p in &suite.planners {
                    let mine: Vec<&CellOutcome> = cells.iter().filter(|c| c.scenario == s.name && c.planner == p).collect();
                    results.extend(mine.iter().map(|c| results_row(c)));
                    for c in &mine {
                        timings.push(vec![
                            c.scenario.clone(),
                            p.as_str().to_string(),
                            c.seed.to_string(),
                            c.record.as_ref().map_or(String::new(), |r| r.planning_time_seconds.to_string()),
                        ]);
                    }
                    summary.push(summary_row(&s.name, p, Some(s), &mine, None));
                }
            }
            Err(e) => {
                let mut row = vec![String::new(); RESULTS_HEADER.len()];
                row[0] = entry.label.clone();
                row[RESULTS_HEADER.len() - 1] = e.to_string();
                results.push(row);
                let mut row = vec![String::new(); SUMMARY_HEADER.len()];
                row[0] = entry.label.clone();
                row[SUMMARY_HEADER.len() - 1] = e.to_string();
                summary.push(row);
            }
        }
    }
    let output = BenchmarkOutput {
        results_csv: csv_bytes(&RESULTS_HEADER, &results),
        summary_csv: csv_bytes(&SUMMARY_HEADER, &summary),
        timings_csv: csv_bytes(&["scenario", "planner", "seed", "planning_time_seconds"], &timings),
        cells,
    };
    write_atomic(&opts.out_dir.join("results.csv"), &output.results_csv)?;
    write_atomic(&opts.out_dir.join("summary.csv"), &output.summary_csv)?;
    write_atomic(&opts.out_dir.join("timings.csv"), &output.timings_csv)?;
    Ok(output)
}

/// Writes the reference scenarios and a suite file listing them.
pub fn write_reference_suite(out_dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    let scenarios = crate::reference::reference_scenarios();
    let mut paths = Vec::new();
    let mut names = Vec::new();
    for s in &scenarios {
        let name = format!("{}.json", file_stem(&s.name));
        let path = out_dir.join(&name);
        let mut text = s.to_json();
        text.push('\n');
        write_atomic(&path, text.as_bytes())?;
        paths.push(path);
        names.push(Value::String(name));
    }
    let suite = SuiteFile { format_version: SUITE_FORMAT_VERSION, scenarios: names, planners: all_planners(), seeds: default_seeds() };
    let path = out_dir.join("suite.json");
    write_json(&path, &suite)?;
    paths.push(path);
    Ok(paths)
}

//! Metrics files: a JSON summary and a per-timestep CSV series.

use serde::{Deserialize, Serialize};

use lcplan::rangeloc::EvaluationReport;

use crate::io::{csv_bytes, fmt_opt};
use crate::record::RunRecord;
use crate::runner::EvaluateOptions;

pub const METRICS_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub format_version: u32,
    pub scenario_digest: String,
    pub planner: String,
    pub planner_seed: u64,
    pub noise_seed: u64,
    pub trials: usize,
    pub noiseless: bool,
    pub ale: Option<f64>,
    pub mle: Option<f64>,
    pub ad: f64,
    pub robot_distances: Vec<f64>,
    pub illposed: bool,
    pub illposed_timesteps: Vec<usize>,
    pub solves: usize,
    pub non_converged: usize,
    pub max_solver_iterations: usize,
}

impl MetricsRecord {
    pub fn new(record: &RunRecord, opts: &EvaluateOptions, report: &EvaluationReport) -> Self {
        Self {
            format_version: METRICS_FORMAT_VERSION,
            scenario_digest: record.scenario_digest.clone(),
            planner: record.planner.clone(),
            planner_seed: record.planner_seed,
            noise_seed: opts.noise_seed,
            trials: opts.trials.max(1),
            noiseless: opts.noiseless,
            ale: report.ale,
            mle: report.mle,
            ad: report.ad,
            robot_distances: report.robot_distances.clone(),
            illposed: report.has_illposed(),
            illposed_timesteps: report.illposed_timesteps.clone(),
            solves: report.diagnostics.solves,
            non_converged: report.diagnostics.non_converged,
            max_solver_iterations: report.diagnostics.max_iterations,
        }
    }
}

/// `format_version,t,mean_error,max_robot_error,n_illposed`; ill-posed
/// timesteps have empty error cells.
pub fn timestep_csv(report: &EvaluationReport) -> Vec<u8> {
    let rows: Vec<Vec<String>> = report
        .per_timestep
        .iter()
        .map(|m| {
            vec![
                METRICS_FORMAT_VERSION.to_string(),
                m.t.to_string(),
                fmt_opt(m.mean_error),
                fmt_opt(m.max_robot_error),
                m.n_illposed.to_string(),
            ]
        })
        .collect();
    csv_bytes(&["format_version", "t", "mean_error", "max_robot_error", "n_illposed"], &rows)
}

//! Running one planner on one scenario and evaluating the result.

use std::time::Instant;

use lcplan::planners::{
    potential_field_baseline, prioritized_astar_baseline, prioritized_rrt_baseline, reorder_and_retry, GraphContext,
    PlanResult, PlannerKind,
};
use lcplan::rangeloc::{evaluate_trajectory, EvaluationConfig, EvaluationReport};

use crate::error::BenchError;
use crate::record::RunRecord;
use crate::scenario::Scenario;

/// Plans with the scenario's selected planner. The returned time covers
/// roadmap construction and every reordering attempt.
pub fn run_planner(scenario: &Scenario, planner_seed: u64) -> Result<(PlanResult, f64), BenchError> {
    let kind = scenario.kind()?;
    let problem = scenario.problem()?;
    let params = scenario.planner_params()?;
    let roadmap_params = scenario.roadmap_params()?;
    let t0 = Instant::now();
    let result = match kind {
        PlannerKind::Lcgp | PlannerKind::PrioritizedAstar => {
            let ctx = GraphContext::build(&problem, &roadmap_params)
                .map_err(|e| BenchError::Schema { field: "roadmap".into(), message: e.to_string() })?;
            if kind == PlannerKind::Lcgp {
                reorder_and_retry(&problem, &ctx, &params.lcgp, scenario.max_orderings, planner_seed)
            } else {
                prioritized_astar_baseline(&problem, &ctx)
            }
        }
        PlannerKind::PrioritizedRrt => prioritized_rrt_baseline(&problem, &params.rrt, planner_seed),
        PlannerKind::PotentialField => potential_field_baseline(&problem, &params.potential),
    };
    Ok((result, t0.elapsed().as_secs_f64()))
}

/// Plans and packages the outcome as a run record. Planner failures are
/// recorded, not returned as errors.
pub fn plan_record(scenario: &Scenario, planner_seed: u64) -> Result<(RunRecord, PlanResult), BenchError> {
    let (result, secs) = run_planner(scenario, planner_seed)?;
    let record = RunRecord::new(scenario, planner_seed, &result, secs, true);
    Ok((record, result))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluateOptions {
    pub trials: usize,
    pub noise_seed: u64,
    pub noiseless: bool,
}

impl EvaluateOptions {
    pub fn from_scenario(scenario: &Scenario) -> Self {
        Self { trials: scenario.trials, noise_seed: scenario.seeds.noise, noiseless: false }
    }
}

/// Re-evaluates the trajectory stored in a run record.
pub fn evaluate_record(record: &RunRecord, opts: &EvaluateOptions) -> Result<EvaluationReport, BenchError> {
    let Some(stored) = &record.plan else {
        return Err(BenchError::Schema { field: "plan".into(), message: "run file has no trajectory".into() });
    };
    if PlannerKind::parse(&record.planner).is_none() {
        return Err(BenchError::Schema { field: "planner".into(), message: format!("unknown planner `{}`", record.planner) });
    }
    let n = record.scenario.robots.starts.len();
    if stored.positions.len() != n || stored.positions.iter().any(|p| p.is_empty() || p.len() != stored.positions[0].len()) {
        return Err(BenchError::Schema { field: "plan.positions".into(), message: "one equal-length path per robot expected".into() });
    }
    let plan = stored.to_plan(record);
    let model = record.scenario.model()?;
    let config = EvaluationConfig {
        trials: opts.trials.max(1),
        seed: opts.noise_seed,
        noiseless: opts.noiseless,
        ..EvaluationConfig::default()
    };
    evaluate_trajectory(&plan, record.scenario.robots.n_anchor, &model, &config)
        .map_err(|e| BenchError::Schema { field: "plan".into(), message: e.to_string() })
}

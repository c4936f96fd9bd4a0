//! Run files: one planner invocation with its trajectory, timing and
//! instrumentation counters, plus the scenario needed to re-evaluate it.

use serde::{Deserialize, Serialize};

use lcplan::csets::IndicatorStats;
use lcplan::planners::{PlanFailure, PlanResult, RobotSetSummary, TrajectoryPlan};
use lcplan::Point2;

use crate::metrics::MetricsRecord;
use crate::scenario::Scenario;

pub const RUN_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub format_version: u32,
    pub tool_version: String,
    pub scenario_digest: String,
    pub scenario: Scenario,
    pub planner: String,
    pub planner_seed: u64,
    pub success: bool,
    pub failure: Option<FailureRecord>,
    pub orderings_tried: usize,
    /// Wall clock, including roadmap construction and reordering.
    pub planning_time_seconds: f64,
    pub indicator_stats: StatsRecord,
    pub plan: Option<PlanRecord>,
    /// Final configuration of a failed continuous planner.
    pub last_positions: Option<Vec<[f64; 2]>>,
    /// Evaluation of the plan, filled in by the benchmark.
    #[serde(default)]
    pub metrics: Option<MetricsRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub code: String,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsRecord {
    pub calls: u64,
    pub disconnected_calls: u64,
    pub cache_hits: u64,
}

impl From<IndicatorStats> for StatsRecord {
    fn from(s: IndicatorStats) -> Self {
        Self { calls: s.calls, disconnected_calls: s.disconnected_calls, cache_hits: s.cache_hits }
    }
}

impl From<StatsRecord> for IndicatorStats {
    fn from(s: StatsRecord) -> Self {
        IndicatorStats { calls: s.calls, disconnected_calls: s.disconnected_calls, cache_hits: s.cache_hits }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetSizesRecord {
    pub robot: usize,
    pub goal_first_valid: usize,
    pub horizon: usize,
    /// `[|R_t|, |V_t|]` per timestep.
    pub sizes: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanRecord {
    /// `positions[robot][t]`.
    pub positions: Vec<Vec<[f64; 2]>>,
    pub nodes: Option<Vec<Vec<usize>>>,
    pub order: Vec<usize>,
    pub set_sizes: Vec<SetSizesRecord>,
}

fn arr(p: Point2) -> [f64; 2] {
    [p.x, p.y]
}

impl PlanRecord {
    pub fn from_plan(plan: &TrajectoryPlan, with_set_sizes: bool) -> Self {
        let set_sizes = if with_set_sizes {
            plan.set_summaries
                .iter()
                .map(|s: &RobotSetSummary| SetSizesRecord {
                    robot: s.robot,
                    goal_first_valid: s.goal_first_valid,
                    horizon: s.horizon,
                    sizes: s.sizes.iter().map(|&(r, v)| [r, v]).collect(),
                })
                .collect()
        } else {
            Vec::new()
        };
        Self {
            positions: plan.positions.iter().map(|p| p.iter().copied().map(arr).collect()).collect(),
            nodes: plan.nodes.clone(),
            order: plan.order.clone(),
            set_sizes,
        }
    }

    /// Rebuilds the in-memory plan from the stored positions.
    pub fn to_plan(&self, record: &RunRecord) -> TrajectoryPlan {
        let kind = lcplan::planners::PlannerKind::parse(&record.planner).expect("run files name a known planner");
        let paths = self.positions.iter().map(|p| p.iter().map(|q| Point2::new(q[0], q[1])).collect()).collect();
        let mut plan = TrajectoryPlan::from_point_paths(kind, paths);
        plan.nodes = self.nodes.clone();
        plan.order = self.order.clone();
        plan.orderings_tried = record.orderings_tried;
        plan.stats = record.indicator_stats.into();
        plan
    }
}

impl RunRecord {
    pub fn new(
        scenario: &Scenario,
        planner_seed: u64,
        result: &PlanResult,
        planning_time_seconds: f64,
        with_set_sizes: bool,
    ) -> Self {
        let (success, failure, orderings, stats, plan, last) = match result {
            Ok(plan) => (
                true,
                None,
                plan.orderings_tried,
                plan.stats,
                Some(PlanRecord::from_plan(plan, with_set_sizes)),
                None,
            ),
            Err(f @ PlanFailure { reason, .. }) => (
                false,
                Some(FailureRecord { code: reason.code().to_string(), detail: reason.to_string() }),
                f.orderings_tried,
                f.stats,
                None,
                f.last_positions.as_ref().map(|v| v.iter().copied().map(arr).collect()),
            ),
        };
        Self {
            format_version: RUN_FORMAT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            scenario_digest: scenario.digest(),
            scenario: scenario.clone(),
            planner: scenario.planner.name.clone(),
            planner_seed,
            success,
            failure,
            orderings_tried: orderings,
            planning_time_seconds,
            indicator_stats: stats.into(),
            plan,
            last_positions: last,
            metrics: None,
        }
    }
}

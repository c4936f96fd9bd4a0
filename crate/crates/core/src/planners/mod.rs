//! Multi-robot planners sharing one problem description and plan format.
//!
//! - [`lcgp`]: localizability-constrained prioritized planning over the
//!   shared roadmap, with reordering on failure.
//! - [`astar`]: unconstrained prioritized A* on the same roadmap.
//! - [`rrt`]: unconstrained prioritized RRT in the continuous plane.
//! - [`potential`]: synchronous potential-field descent with an
//!   E-optimality term.

use alloc::format;
use alloc::vec::Vec;

use crate::csets::{IndicatorStats, SetFailure};
use crate::error::{Error, Result};
use crate::fim::LocalizabilityConstraints;
use crate::geometry::Point2;
use crate::network::MeasurementModel;
use crate::roadmap::{build_roadmap, Environment, Roadmap, RoadmapParams};

pub mod astar;
pub mod lcgp;
pub mod potential;
pub mod rrt;
pub mod search;

pub use astar::prioritized_astar_baseline;
pub use lcgp::{lcgp_plan, reorder_and_retry, LcgpOptions, PlanningOrder};
pub use potential::{potential_field_baseline, PotentialParams};
pub use rrt::{prioritized_rrt_baseline, RrtParams};
pub use search::{astar_path, time_expanded_search};

/// Everything a planner needs besides its own parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanningProblem {
    pub env: Environment,
    /// Anchors first.
    pub starts: Vec<Point2>,
    pub goals: Vec<Point2>,
    pub n_anchor: usize,
    pub model: MeasurementModel,
    pub constraints: LocalizabilityConstraints,
}

impl PlanningProblem {
    pub fn new(
        env: Environment,
        starts: Vec<Point2>,
        goals: Vec<Point2>,
        n_anchor: usize,
        model: MeasurementModel,
        constraints: LocalizabilityConstraints,
    ) -> Result<Self> {
        if starts.len() != goals.len() {
            return Err(Error::Scenario(format!("{} starts but {} goals", starts.len(), goals.len())));
        }
        if n_anchor > starts.len() {
            return Err(Error::Scenario("more anchors than robots".into()));
        }
        for (what, pts) in [("start", &starts), ("goal", &goals)] {
            for (k, p) in pts.iter().enumerate() {
                if !p.is_finite() || !env.is_free(*p) {
                    return Err(Error::Scenario(format!("{what} of robot {k} is not collision-free")));
                }
            }
            for a in 0..pts.len() {
                for b in (a + 1)..pts.len() {
                    if pts[a] == pts[b] && !(a < n_anchor && b < n_anchor) {
                        return Err(Error::Scenario(format!("robots {a} and {b} share a {what} position")));
                    }
                }
            }
        }
        Ok(Self { env, starts, goals, n_anchor, model, constraints })
    }

    pub fn n_robots(&self) -> usize {
        self.starts.len()
    }
}

/// The shared roadmap with every robot's start and goal node.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphContext {
    pub roadmap: Roadmap,
    pub start_nodes: Vec<usize>,
    pub goal_nodes: Vec<usize>,
}

impl GraphContext {
    pub fn build(problem: &PlanningProblem, params: &RoadmapParams) -> Result<Self> {
        let extras: Vec<Point2> = problem.starts.iter().chain(&problem.goals).copied().collect();
        let (roadmap, idx) = build_roadmap(&problem.env, params, &extras)?;
        let n = problem.n_robots();
        Ok(Self { roadmap, start_nodes: idx[..n].to_vec(), goal_nodes: idx[n..].to_vec() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlannerKind {
    Lcgp,
    PrioritizedAstar,
    PrioritizedRrt,
    PotentialField,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 4] =
        [PlannerKind::Lcgp, PlannerKind::PrioritizedRrt, PlannerKind::PrioritizedAstar, PlannerKind::PotentialField];

    pub fn as_str(self) -> &'static str {
        match self {
            PlannerKind::Lcgp => "lcgp",
            PlannerKind::PrioritizedAstar => "astar",
            PlannerKind::PrioritizedRrt => "rrt",
            PlannerKind::PotentialField => "potential_field",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == name)
    }

    pub fn uses_roadmap(self) -> bool {
        matches!(self, PlannerKind::Lcgp | PlannerKind::PrioritizedAstar)
    }
}

/// Set sizes recorded while planning one robot.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotSetSummary {
    pub robot: usize,
    pub goal_first_valid: usize,
    pub horizon: usize,
    /// `(|R_t|, |V_t|)` per timestep.
    pub sizes: Vec<(usize, usize)>,
}

/// One position per robot per timestep, every robot padded to the same
/// horizon by parking at its goal.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPlan {
    pub planner: PlannerKind,
    /// `positions[robot][t]`.
    pub positions: Vec<Vec<Point2>>,
    /// Roadmap node per robot per timestep for graph planners.
    pub nodes: Option<Vec<Vec<usize>>>,
    /// Planning order of the successful attempt (robot ids).
    pub order: Vec<usize>,
    pub orderings_tried: usize,
    pub stats: IndicatorStats,
    pub set_summaries: Vec<RobotSetSummary>,
}

impl TrajectoryPlan {
    /// Pads per-robot point sequences to a common length.
    pub fn from_point_paths(planner: PlannerKind, mut paths: Vec<Vec<Point2>>) -> Self {
        let len = paths.iter().map(Vec::len).max().unwrap_or(1);
        for p in &mut paths {
            let last = *p.last().expect("paths are non-empty");
            p.resize(len, last);
        }
        let n = paths.len();
        Self {
            planner,
            positions: paths,
            nodes: None,
            order: (0..n).collect(),
            orderings_tried: 1,
            stats: IndicatorStats::default(),
            set_summaries: Vec::new(),
        }
    }

    /// Pads per-robot node sequences to a common length.
    pub fn from_node_paths(planner: PlannerKind, roadmap: &Roadmap, mut paths: Vec<Vec<usize>>) -> Self {
        let len = paths.iter().map(Vec::len).max().unwrap_or(1);
        for p in &mut paths {
            let last = *p.last().expect("paths are non-empty");
            p.resize(len, last);
        }
        let positions = paths.iter().map(|p| p.iter().map(|&v| roadmap.node(v)).collect()).collect();
        let mut plan = Self::from_point_paths(planner, positions);
        plan.nodes = Some(paths);
        plan
    }

    pub fn n_robots(&self) -> usize {
        self.positions.len()
    }

    /// Number of timesteps (horizon + 1).
    pub fn n_steps(&self) -> usize {
        self.positions.first().map_or(0, Vec::len)
    }

    pub fn snapshot_at(&self, t: usize) -> Vec<Point2> {
        self.positions.iter().map(|p| p[t]).collect()
    }

    pub fn robot_distance(&self, robot: usize) -> f64 {
        path_length(&self.positions[robot])
    }

    /// Mean over robots of the travelled distance. Waiting costs nothing.
    pub fn average_distance(&self) -> f64 {
        if self.positions.is_empty() {
            return 0.0;
        }
        (0..self.n_robots()).map(|r| self.robot_distance(r)).sum::<f64>() / self.n_robots() as f64
    }
}

pub fn path_length(points: &[Point2]) -> f64 {
    points.windows(2).map(|w| w[0].distance(w[1])).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FailureReason {
    ValidSets { robot: usize, failure: SetFailure },
    /// No roadmap path between start and goal.
    Unreachable { robot: usize },
    IterationCap { robot: Option<usize> },
    LocalMinimum { iteration: usize },
}

impl FailureReason {
    /// Short machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            FailureReason::ValidSets { failure, .. } => match failure {
                SetFailure::Empty { .. } => "empty",
                SetFailure::SteadyState { .. } => "steady_state",
                SetFailure::HorizonCap { .. } => "horizon_cap",
                SetFailure::InvalidStart => "invalid_start",
            },
            FailureReason::Unreachable { .. } => "unreachable",
            FailureReason::IterationCap { .. } => "iteration_cap",
            FailureReason::LocalMinimum { .. } => "local_minimum",
        }
    }
}

impl core::fmt::Display for FailureReason {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FailureReason::ValidSets { robot, failure } => write!(f, "{} (robot {robot}, {failure:?})", self.code()),
            FailureReason::Unreachable { robot } => write!(f, "unreachable (robot {robot})"),
            FailureReason::IterationCap { robot: Some(r) } => write!(f, "iteration_cap (robot {r})"),
            FailureReason::IterationCap { robot: None } => f.write_str("iteration_cap"),
            FailureReason::LocalMinimum { iteration } => write!(f, "local_minimum (iteration {iteration})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanFailure {
    pub planner: PlannerKind,
    pub reason: FailureReason,
    pub orderings_tried: usize,
    pub stats: IndicatorStats,
    /// Last configuration reached, for planners that have one.
    pub last_positions: Option<Vec<Point2>>,
}

impl PlanFailure {
    pub fn new(planner: PlannerKind, reason: FailureReason) -> Self {
        Self { planner, reason, orderings_tried: 1, stats: IndicatorStats::default(), last_positions: None }
    }
}

pub type PlanResult = core::result::Result<TrajectoryPlan, PlanFailure>;

//! Unconstrained prioritized A*: every robot takes its own shortest roadmap
//! path, ignoring the others and the localizability constraints.

use alloc::vec::Vec;

use super::search::astar_path;
use super::{FailureReason, GraphContext, PlanFailure, PlanResult, PlannerKind, PlanningProblem, TrajectoryPlan};

pub fn prioritized_astar_baseline(problem: &PlanningProblem, ctx: &GraphContext) -> PlanResult {
    let mut paths = Vec::with_capacity(problem.n_robots());
    for robot in 0..problem.n_robots() {
        match astar_path(&ctx.roadmap, ctx.start_nodes[robot], ctx.goal_nodes[robot]) {
            Some((path, _)) => paths.push(path),
            None => return Err(PlanFailure::new(PlannerKind::PrioritizedAstar, FailureReason::Unreachable { robot })),
        }
    }
    Ok(TrajectoryPlan::from_node_paths(PlannerKind::PrioritizedAstar, &ctx.roadmap, paths))
}

//! Unconstrained prioritized RRT in the continuous plane.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FailureReason, PlanFailure, PlanResult, PlannerKind, PlanningProblem, TrajectoryPlan};
use crate::geometry::Point2;
use crate::roadmap::Environment;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RrtParams {
    pub step: f64,
    pub goal_bias: f64,
    pub max_iterations: usize,
    /// Longest chord between consecutive timesteps after resampling.
    pub timestep_length: f64,
}

impl Default for RrtParams {
    fn default() -> Self {
        Self { step: 1.0, goal_bias: 0.05, max_iterations: 20_000, timestep_length: 1.0 }
    }
}

/// Per-robot stream derived from the planner seed.
fn robot_rng(seed: u64, robot: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(robot as u64);
    rng
}

/// Grows a tree from `start` until it connects to `goal`. Returns the
/// polyline from start to goal.
pub fn rrt_path<R: Rng + ?Sized>(
    env: &Environment,
    start: Point2,
    goal: Point2,
    params: &RrtParams,
    rng: &mut R,
) -> Option<Vec<Point2>> {
    if start == goal {
        return Some(vec![start]);
    }
    let b = *env.bounds();
    let mut nodes = vec![start];
    let mut parent = vec![usize::MAX];
    let mut reached = None;
    if start.distance(goal) <= params.step && env.segment_free(start, goal) {
        reached = Some(0);
    }
    let mut iter = 0;
    while reached.is_none() && iter < params.max_iterations {
        iter += 1;
        let sample = if rng.random::<f64>() < params.goal_bias {
            goal
        } else {
            Point2::new(rng.random_range(b.min.x..=b.max.x), rng.random_range(b.min.y..=b.max.y))
        };
        let (near, d) = nodes
            .iter()
            .enumerate()
            .map(|(k, p)| (k, p.distance(sample)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("tree is non-empty");
        if d == 0.0 {
            continue;
        }
        let from = nodes[near];
        let new = if d <= params.step { sample } else { from + (sample - from) * (params.step / d) };
        if !env.segment_free(from, new) {
            continue;
        }
        nodes.push(new);
        parent.push(near);
        let k = nodes.len() - 1;
        if new.distance(goal) <= params.step && env.segment_free(new, goal) {
            reached = Some(k);
        }
    }
    let last = reached?;
    let mut path = vec![goal];
    let mut v = last;
    loop {
        if nodes[v] != goal {
            path.push(nodes[v]);
        }
        if v == 0 {
            break;
        }
        v = parent[v];
    }
    path.reverse();
    Some(path)
}

/// Splits every segment into equal pieces no longer than `max_len`.
pub fn resample_polyline(points: &[Point2], max_len: f64) -> Vec<Point2> {
    let mut out = vec![points[0]];
    for w in points.windows(2) {
        let len = w[0].distance(w[1]);
        let k = libm::ceil(len / max_len).max(1.0) as usize;
        for s in 1..=k {
            out.push(if s == k { w[1] } else { w[0].lerp(w[1], s as f64 / k as f64) });
        }
    }
    out
}

pub fn prioritized_rrt_baseline(problem: &PlanningProblem, params: &RrtParams, seed: u64) -> PlanResult {
    let mut paths = Vec::with_capacity(problem.n_robots());
    for robot in 0..problem.n_robots() {
        let mut rng = robot_rng(seed, robot);
        match rrt_path(&problem.env, problem.starts[robot], problem.goals[robot], params, &mut rng) {
            Some(poly) => paths.push(resample_polyline(&poly, params.timestep_length)),
            None => {
                return Err(PlanFailure::new(
                    PlannerKind::PrioritizedRrt,
                    FailureReason::IterationCap { robot: Some(robot) },
                ))
            }
        }
    }
    Ok(TrajectoryPlan::from_point_paths(PlannerKind::PrioritizedRrt, paths))
}

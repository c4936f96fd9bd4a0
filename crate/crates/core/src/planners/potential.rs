//! Synchronous potential-field descent for all robots at once.
//!
//! The potential of robot `k` at `p` is
//!
//! - `k_att/2 · |p - g_k|²` towards its goal,
//! - `k_rep/2 · (1/d - 1/d0)²` for each obstacle closer than `d0`,
//!
//! and the network adds `k_e/2 · max(0, β - λ_min(F))²`, whose gradient is
//! taken by central finite differences of `λ_min`. Each iteration moves every
//! robot by `step · (-∇U)`, clamped in length; moves into or through an
//! obstacle are dropped.

use alloc::vec;
use alloc::vec::Vec;

use super::{FailureReason, PlanFailure, PlanResult, PlannerKind, PlanningProblem, TrajectoryPlan};
use crate::fim::assemble_fim;
use crate::geometry::Point2;
use crate::network::{MeasurementGraph, MeasurementModel, NetworkSnapshot};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    pub k_att: f64,
    pub k_rep: f64,
    pub influence_radius: f64,
    pub k_e: f64,
    pub step: f64,
    /// Longest move of one robot in one iteration.
    pub max_displacement: f64,
    pub goal_tolerance: f64,
    pub stall_window: usize,
    pub stall_threshold: f64,
    pub max_iterations: usize,
    pub fd_step: f64,
}

impl Default for PotentialParams {
    fn default() -> Self {
        Self {
            k_att: 1.0,
            k_rep: 5.0,
            influence_radius: 2.0,
            k_e: 10.0,
            step: 0.05,
            max_displacement: 0.25,
            goal_tolerance: 0.5,
            stall_window: 50,
            stall_threshold: 1e-3,
            max_iterations: 20_000,
            fd_step: 1e-5,
        }
    }
}

/// Smallest eigenvalue of the information matrix, 0 for a network without
/// non-anchors. Coincident pairs are dropped.
pub fn lambda_min_of(positions: &[Point2], n_anchor: usize, model: &MeasurementModel) -> f64 {
    let Ok(snap) = NetworkSnapshot::from_points(positions, n_anchor) else {
        return 0.0;
    };
    if snap.n_nonanchor() == 0 {
        return 0.0;
    }
    let (graph, _) = MeasurementGraph::build_dropping_coincident(&snap, model);
    match assemble_fim(&snap, model, &graph) {
        Ok(f) => f.lambda_min(),
        Err(_) => 0.0,
    }
}

/// Central-difference gradient of `λ_min` with respect to every robot's
/// position.
pub fn lambda_min_gradient(positions: &[Point2], n_anchor: usize, model: &MeasurementModel, h: f64) -> Vec<Point2> {
    let mut work = positions.to_vec();
    let mut grad = vec![Point2::new(0.0, 0.0); positions.len()];
    for k in 0..positions.len() {
        let p = positions[k];
        let mut g = [0.0; 2];
        for (axis, gk) in g.iter_mut().enumerate() {
            let e = if axis == 0 { Point2::new(h, 0.0) } else { Point2::new(0.0, h) };
            work[k] = p + e;
            let up = lambda_min_of(&work, n_anchor, model);
            work[k] = p - e;
            let down = lambda_min_of(&work, n_anchor, model);
            *gk = (up - down) / (2.0 * h);
        }
        work[k] = p;
        grad[k] = Point2::new(g[0], g[1]);
    }
    grad
}

fn descent_direction(
    problem: &PlanningProblem,
    params: &PotentialParams,
    positions: &[Point2],
) -> Vec<Point2> {
    let mut force: Vec<Point2> =
        positions.iter().zip(&problem.goals).map(|(&p, &g)| (g - p) * params.k_att).collect();
    let d0 = params.influence_radius;
    for (f, &p) in force.iter_mut().zip(positions) {
        for obs in problem.env.obstacles() {
            let (d, c) = obs.distance_and_closest(p);
            if d > 0.0 && d < d0 {
                let mag = params.k_rep * (1.0 / d - 1.0 / d0) / (d * d);
                *f = *f + (p - c) * (mag / d);
            }
        }
    }
    let beta = problem.constraints.beta;
    if params.k_e > 0.0 && beta > 0.0 && problem.n_robots() > problem.n_anchor {
        let lam = lambda_min_of(positions, problem.n_anchor, &problem.model);
        let gap = beta - lam;
        if gap > 0.0 {
            let grad = lambda_min_gradient(positions, problem.n_anchor, &problem.model, params.fd_step);
            for (f, g) in force.iter_mut().zip(grad) {
                *f = *f + g * (params.k_e * gap);
            }
        }
    }
    force
}

pub fn potential_field_baseline(problem: &PlanningProblem, params: &PotentialParams) -> PlanResult {
    let n = problem.n_robots();
    let mut paths: Vec<Vec<Point2>> = problem.starts.iter().map(|&p| vec![p]).collect();
    let mut current = problem.starts.clone();
    let fail = |reason, last: Vec<Point2>| {
        let mut f = PlanFailure::new(PlannerKind::PotentialField, reason);
        f.last_positions = Some(last);
        Err(f)
    };
    for iteration in 0..params.max_iterations {
        let near_goal = (0..n).all(|k| {
            current[k].distance(problem.goals[k]) <= params.goal_tolerance
                && problem.env.segment_free(current[k], problem.goals[k])
        });
        if near_goal {
            for (path, &g) in paths.iter_mut().zip(&problem.goals) {
                if *path.last().unwrap() != g {
                    path.push(g);
                }
            }
            return Ok(TrajectoryPlan::from_point_paths(PlannerKind::PotentialField, paths));
        }
        let force = descent_direction(problem, params, &current);
        for k in 0..n {
            let mut delta = force[k] * params.step;
            let len = delta.norm();
            if len > params.max_displacement {
                delta = delta * (params.max_displacement / len);
            }
            let next = current[k] + delta;
            if len > 0.0 && problem.env.is_free(next) && problem.env.segment_free(current[k], next) {
                current[k] = next;
            }
            paths[k].push(current[k]);
        }
        let w = params.stall_window;
        let steps = iteration + 1;
        if steps >= w {
            let moved = paths.iter().map(|p| p[steps].distance(p[steps - w])).fold(0.0, f64::max);
            if moved < params.stall_threshold {
                return fail(FailureReason::LocalMinimum { iteration: steps }, current);
            }
        }
    }
    fail(FailureReason::IterationCap { robot: None }, current)
}

//! Localizability-constrained prioritized planning over the shared roadmap.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::search::time_expanded_search;
use super::{
    FailureReason, GraphContext, PlanFailure, PlanResult, PlannerKind, PlanningProblem, RobotSetSummary,
    TrajectoryPlan,
};
use crate::csets::{construct_valid_sets, IndicatorStats, PlannedTraces, SetRequest};
use crate::error::{Error, Result};

/// Robot ids in planning order. Anchors come first, in id order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlanningOrder(Vec<usize>);

impl PlanningOrder {
    pub fn identity(n_robots: usize) -> Self {
        Self((0..n_robots).collect())
    }

    /// Anchors followed by the given arrangement of non-anchor ids.
    pub fn with_nonanchors(n_anchor: usize, nonanchors: Vec<usize>) -> Result<Self> {
        let mut order: Vec<usize> = (0..n_anchor).collect();
        order.extend(nonanchors);
        Self::new(order, n_anchor)
    }

    /// Checks that `order` is a permutation with the anchors first.
    pub fn new(order: Vec<usize>, n_anchor: usize) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for (pos, &r) in order.iter().enumerate() {
            if r >= n || seen[r] {
                return Err(Error::Contract("planning order must be a permutation"));
            }
            seen[r] = true;
            if pos < n_anchor && r != pos {
                return Err(Error::Contract("anchors must be planned first, in id order"));
            }
        }
        Ok(Self(order))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LcgpOptions {
    /// Per-robot horizon cap. `None` means ten times the roadmap hop
    /// diameter.
    pub max_horizon: Option<usize>,
}

impl LcgpOptions {
    fn resolve(&self, ctx: &GraphContext) -> usize {
        self.max_horizon.unwrap_or_else(|| 10 * ctx.roadmap.hop_diameter()).max(1)
    }
}

/// Plans every robot in `order`, each confined to its valid sets given the
/// robots planned before it.
pub fn lcgp_plan(problem: &PlanningProblem, ctx: &GraphContext, order: &PlanningOrder, opts: &LcgpOptions) -> PlanResult {
    let max_horizon = opts.resolve(ctx);
    plan_with_horizon(problem, ctx, order, max_horizon)
}

fn plan_with_horizon(problem: &PlanningProblem, ctx: &GraphContext, order: &PlanningOrder, max_horizon: usize) -> PlanResult {
    assert_eq!(order.len(), problem.n_robots(), "order covers every robot");
    let mut traces = PlannedTraces::new();
    let mut stats = IndicatorStats::default();
    let mut summaries = Vec::with_capacity(order.len());
    for &robot in order.as_slice() {
        let req = SetRequest {
            robot,
            n_anchor: problem.n_anchor,
            start: ctx.start_nodes[robot],
            goal: ctx.goal_nodes[robot],
            traces: &traces,
            roadmap: &ctx.roadmap,
            model: &problem.model,
            constraints: &problem.constraints,
            max_horizon,
        };
        let sets = match construct_valid_sets(&req) {
            Ok(s) => s,
            Err((failure, s)) => {
                stats.merge(&s);
                let mut f = PlanFailure::new(PlannerKind::Lcgp, FailureReason::ValidSets { robot, failure });
                f.stats = stats;
                return Err(f);
            }
        };
        stats.merge(&sets.stats);
        summaries.push(RobotSetSummary {
            robot,
            goal_first_valid: sets.goal_first_valid,
            horizon: sets.horizon(),
            sizes: sets.set_sizes(),
        });
        traces.push(time_expanded_search(&sets, &ctx.roadmap));
    }

    let mut by_robot = vec![Vec::new(); order.len()];
    for (&robot, trace) in order.as_slice().iter().zip(traces.traces()) {
        by_robot[robot] = trace.clone();
    }
    let mut plan = TrajectoryPlan::from_node_paths(PlannerKind::Lcgp, &ctx.roadmap, by_robot);
    plan.order = order.as_slice().to_vec();
    plan.stats = stats;
    plan.set_summaries = summaries;
    Ok(plan)
}

/// Tries the identity order, then seeded uniform reshuffles of the
/// non-anchors, until one succeeds, `max_orderings` distinct orders have
/// been tried, or every permutation has been.
pub fn reorder_and_retry(
    problem: &PlanningProblem,
    ctx: &GraphContext,
    opts: &LcgpOptions,
    max_orderings: usize,
    seed: u64,
) -> PlanResult {
    assert!(max_orderings >= 1, "at least one ordering");
    let max_horizon = opts.resolve(ctx);
    let n = problem.n_robots();
    let na = problem.n_anchor;
    let budget = max_orderings.min(permutation_count(n - na));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tried: Vec<PlanningOrder> = Vec::new();
    let mut stats = IndicatorStats::default();
    let mut order = PlanningOrder::identity(n);
    loop {
        tried.push(order.clone());
        match plan_with_horizon(problem, ctx, &order, max_horizon) {
            Ok(mut plan) => {
                stats.merge(&plan.stats);
                plan.stats = stats;
                plan.orderings_tried = tried.len();
                return Ok(plan);
            }
            Err(mut f) => {
                stats.merge(&f.stats);
                if tried.len() >= budget {
                    f.stats = stats;
                    f.orderings_tried = tried.len();
                    return Err(f);
                }
            }
        }
        let mut rest: Vec<usize> = (na..n).collect();
        order = loop {
            rest.shuffle(&mut rng);
            let cand = PlanningOrder::with_nonanchors(na, rest.clone()).expect("shuffle keeps a permutation");
            if !tried.contains(&cand) {
                break cand;
            }
        };
    }
}

fn permutation_count(k: usize) -> usize {
    (1..=k).try_fold(1usize, |acc, x| acc.checked_mul(x)).unwrap_or(usize::MAX)
}

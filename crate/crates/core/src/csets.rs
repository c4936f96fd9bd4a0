//! Per-robot, per-timestep constraint sets.
//!
//! For robot `i` planned after robots `0..i` (anchors first):
//!
//! - reachable `R_t = V_{t-1} ∪ Ng(V_{t-1})` (waiting is always allowed),
//! - connected `C_t`: within the sensing radius of some planned robot at `t`,
//! - valid `V_t = R_t` for anchors, `{x ∈ R_t ∩ C_t : lc_indicator(x)}`
//!   otherwise.
//!
//! Only members of `R_t ∩ C_t` are ever passed to the indicator; the
//! [`IndicatorStats`] counters make that checkable.
//!
//! Set construction runs past the first timestep at which the goal becomes
//! valid, until every earlier robot is parked and `V_t` stops changing. From
//! that point the sets are stationary, so a robot parked at its goal stays
//! valid forever and the trajectory search is not limited to minimum-hop
//! paths.

use alloc::vec;
use alloc::vec::Vec;

use crate::fim::{lc_indicator, LocalizabilityConstraints};
use crate::geometry::Point2;
use crate::network::MeasurementModel;
use crate::roadmap::Roadmap;

/// Sorted, duplicate-free roadmap node indices.
pub type NodeSet = Vec<usize>;

/// Node sequences of already-planned robots, in planning order, one node per
/// timestep. A robot stays at its last node once its sequence ends.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlannedTraces {
    traces: Vec<Vec<usize>>,
}

impl PlannedTraces {
    pub fn new() -> Self {
        Self::default()
    }

    /// Panics on an empty trace.
    pub fn push(&mut self, trace: Vec<usize>) {
        assert!(!trace.is_empty(), "a trace holds at least the start node");
        self.traces.push(trace);
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn traces(&self) -> &[Vec<usize>] {
        &self.traces
    }

    /// Node of planned robot `k` at time `t`, parked after its last step.
    pub fn node_at(&self, k: usize, t: usize) -> usize {
        let tr = &self.traces[k];
        tr[t.min(tr.len() - 1)]
    }

    /// Last timestep at which any planned robot still moves.
    pub fn settle_time(&self) -> usize {
        self.traces.iter().map(|t| t.len() - 1).max().unwrap_or(0)
    }

    pub fn positions_at(&self, roadmap: &Roadmap, t: usize) -> Vec<Point2> {
        (0..self.traces.len()).map(|k| roadmap.node(self.node_at(k, t))).collect()
    }
}

/// `prev ∪ Ng(prev)`.
pub fn reachable_step(prev_valid: &[usize], roadmap: &Roadmap) -> NodeSet {
    let mut mark = vec![false; roadmap.len()];
    for &v in prev_valid {
        mark[v] = true;
        for &(w, _) in roadmap.neighbors(v) {
            mark[w] = true;
        }
    }
    mark.iter().enumerate().filter_map(|(k, &m)| m.then_some(k)).collect()
}

/// Within `rho` (inclusive) of at least one planned position.
pub fn connected_predicate(candidate: Point2, planned_positions: &[Point2], rho: f64) -> bool {
    planned_positions.iter().any(|p| candidate.distance(*p) <= rho)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IndicatorStats {
    /// Indicator evaluations actually computed.
    pub calls: u64,
    /// Evaluations whose candidate was outside the connected set. Stays 0.
    pub disconnected_calls: u64,
    /// Stationary-phase lookups answered from the per-node cache.
    pub cache_hits: u64,
}

impl IndicatorStats {
    pub fn merge(&mut self, other: &IndicatorStats) {
        self.calls += other.calls;
        self.disconnected_calls += other.disconnected_calls;
        self.cache_hits += other.cache_hits;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetFailure {
    /// `V_t` became empty.
    Empty { t: usize },
    /// Sets stopped changing without containing the goal.
    SteadyState { t: usize },
    HorizonCap { t: usize },
    /// The start node violates the constraints at `t = 0`.
    InvalidStart,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSets {
    pub robot: usize,
    pub is_anchor: bool,
    pub start: usize,
    pub goal: usize,
    /// `reachable[t]` and `valid[t]` for `t = 0..=horizon`.
    pub reachable: Vec<NodeSet>,
    pub valid: Vec<NodeSet>,
    /// First `t` with the goal in `V_t`.
    pub goal_first_valid: usize,
    pub stats: IndicatorStats,
}

impl ConstraintSets {
    /// Last timestep covered; the sets are stationary from here on.
    pub fn horizon(&self) -> usize {
        self.valid.len() - 1
    }

    pub fn is_valid(&self, v: usize, t: usize) -> bool {
        self.valid[t.min(self.horizon())].binary_search(&v).is_ok()
    }

    pub fn set_sizes(&self) -> Vec<(usize, usize)> {
        self.reachable.iter().zip(&self.valid).map(|(r, v)| (r.len(), v.len())).collect()
    }
}

/// Inputs for one robot's set construction.
#[derive(Debug, Clone, Copy)]
pub struct SetRequest<'a> {
    pub robot: usize,
    pub n_anchor: usize,
    pub start: usize,
    pub goal: usize,
    pub traces: &'a PlannedTraces,
    pub roadmap: &'a Roadmap,
    pub model: &'a MeasurementModel,
    pub constraints: &'a LocalizabilityConstraints,
    pub max_horizon: usize,
}

struct Evaluator<'a> {
    req: &'a SetRequest<'a>,
    stats: IndicatorStats,
    /// Indicator results once all planned robots are parked.
    stationary_cache: Vec<Option<bool>>,
}

impl Evaluator<'_> {
    fn indicator(&mut self, x: Point2, planned: &[Point2]) -> bool {
        self.stats.calls += 1;
        if !connected_predicate(x, planned, self.req.model.sensing_radius()) {
            self.stats.disconnected_calls += 1;
        }
        lc_indicator(x, planned, self.req.n_anchor, self.req.model, self.req.constraints)
    }

    fn filter(&mut self, reachable: &[usize], t: usize) -> NodeSet {
        let planned = self.req.traces.positions_at(self.req.roadmap, t);
        let rho = self.req.model.sensing_radius();
        let stationary = t >= self.req.traces.settle_time();
        let mut out = Vec::new();
        for &v in reachable {
            let x = self.req.roadmap.node(v);
            if !connected_predicate(x, &planned, rho) {
                continue;
            }
            let ok = if stationary {
                match self.stationary_cache[v] {
                    Some(ok) => {
                        self.stats.cache_hits += 1;
                        ok
                    }
                    None => {
                        let ok = self.indicator(x, &planned);
                        self.stationary_cache[v] = Some(ok);
                        ok
                    }
                }
            } else {
                self.indicator(x, &planned)
            };
            if ok {
                out.push(v);
            }
        }
        out
    }
}

/// Builds the valid sets of one robot given the robots planned before it.
pub fn construct_valid_sets(req: &SetRequest<'_>) -> Result<ConstraintSets, (SetFailure, IndicatorStats)> {
    let is_anchor = req.robot < req.n_anchor;
    let mut eval = Evaluator { req, stats: IndicatorStats::default(), stationary_cache: vec![None; req.roadmap.len()] };
    let settle = if is_anchor { 0 } else { req.traces.settle_time() };

    let start_set = vec![req.start];
    if !is_anchor && eval.filter(&start_set, 0).is_empty() {
        return Err((SetFailure::InvalidStart, eval.stats));
    }
    let mut reachable = vec![start_set.clone()];
    let mut valid = vec![start_set];
    let mut goal_first = (req.start == req.goal).then_some(0);

    let mut t = 0;
    loop {
        // Stationary and unchanged: nothing new can ever appear.
        if t > settle && valid[t] == valid[t - 1] {
            return match goal_first.filter(|_| valid[t].binary_search(&req.goal).is_ok()) {
                Some(g) => Ok(ConstraintSets {
                    robot: req.robot,
                    is_anchor,
                    start: req.start,
                    goal: req.goal,
                    reachable,
                    valid,
                    goal_first_valid: g,
                    stats: eval.stats,
                }),
                None => Err((SetFailure::SteadyState { t }, eval.stats)),
            };
        }
        if t >= req.max_horizon {
            return Err((SetFailure::HorizonCap { t }, eval.stats));
        }
        t += 1;
        let r = reachable_step(&valid[t - 1], req.roadmap);
        let v = if is_anchor { r.clone() } else { eval.filter(&r, t) };
        if v.is_empty() {
            return Err((SetFailure::Empty { t }, eval.stats));
        }
        if goal_first.is_none() && v.binary_search(&req.goal).is_ok() {
            goal_first = Some(t);
        }
        reachable.push(r);
        valid.push(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use crate::roadmap::{Complexity, Environment};

    fn env(w: f64, h: f64) -> Environment {
        Environment::new(Rect::new(Point2::new(-1.0, -1.0), Point2::new(w, h)), Vec::new(), Complexity::Low).unwrap()
    }

    /// Unit grid `nx × ny`; node `x * ny + y` at `(x, y)`.
    fn grid(nx: usize, ny: usize) -> Roadmap {
        let nodes = (0..nx).flat_map(|x| (0..ny).map(move |y| Point2::new(x as f64, y as f64))).collect();
        Roadmap::from_nodes(&env(nx as f64, ny as f64), nodes, 1.0)
    }

    fn path_graph(n: usize) -> Roadmap {
        grid(n, 1)
    }

    #[test]
    fn reachable_examples() {
        let isolated = Roadmap::from_nodes(&env(10.0, 10.0), vec![Point2::new(0.0, 0.0), Point2::new(5.0, 5.0)], 1.0);
        assert_eq!(reachable_step(&[0], &isolated), vec![0]);
        let g = grid(3, 3);
        assert_eq!(reachable_step(&[4], &g).len(), 5);
        let p = path_graph(6);
        let r1 = reachable_step(&[0], &p);
        assert_eq!(r1, vec![0, 1]);
        assert_eq!(reachable_step(&r1, &p), vec![0, 1, 2]);
    }

    #[test]
    fn connected_examples() {
        let planned = [Point2::new(0.0, 0.0)];
        assert!(connected_predicate(Point2::new(3.0, 4.0), &planned, 5.0));
        assert!(!connected_predicate(Point2::new(3.0, 4.1), &planned, 5.0));
        let five: Vec<Point2> = (0..5).map(|k| Point2::new(10.0 * k as f64, 0.0)).collect();
        assert!(connected_predicate(Point2::new(20.0, 1.0), &five, 1.5));
        assert!(!connected_predicate(Point2::new(25.0, 1.0), &five, 1.5));
    }

    fn request<'a>(
        robot: usize,
        start: usize,
        goal: usize,
        traces: &'a PlannedTraces,
        roadmap: &'a Roadmap,
        model: &'a MeasurementModel,
        constraints: &'a LocalizabilityConstraints,
    ) -> SetRequest<'a> {
        SetRequest { robot, n_anchor: 3, start, goal, traces, roadmap, model, constraints, max_horizon: 500 }
    }

    #[test]
    fn anchor_sets_are_bfs_balls() {
        let g = grid(6, 4);
        let traces = PlannedTraces::new();
        let m = MeasurementModel::default();
        let c = LocalizabilityConstraints::e_only(0.1).unwrap();
        let goal = 5 * 4 + 3;
        let sets = construct_valid_sets(&request(0, 0, goal, &traces, &g, &m, &c)).unwrap();
        let hops = g.hop_distances(0);
        assert_eq!(sets.goal_first_valid, hops[goal]);
        for (t, v) in sets.valid.iter().enumerate() {
            let ball: Vec<usize> = (0..g.len()).filter(|&k| hops[k] <= t).collect();
            assert_eq!(v, &ball);
            assert_eq!(v, &sets.reachable[t]);
        }
        // Run until the whole grid is covered, then one stationary step.
        assert_eq!(sets.horizon(), hops.iter().max().unwrap() + 1);
        for w in sets.reachable.windows(2) {
            assert!(w[0].iter().all(|v| w[1].binary_search(v).is_ok()));
        }
    }

    #[test]
    fn trivial_constraints_give_reachable_and_connected() {
        let g = grid(12, 3);
        // Three parked anchors at the left end, rho = 4.
        let mut traces = PlannedTraces::new();
        for a in [0, 1, 2] {
            traces.push(vec![a]);
        }
        let m = MeasurementModel::new(crate::network::NoiseKind::Gaussian, 1.0, 4.0).unwrap();
        let c = LocalizabilityConstraints::trivial();
        let sets = construct_valid_sets(&request(3, 4, 10, &traces, &g, &m, &c)).unwrap();
        let planned = traces.positions_at(&g, 0);
        for t in 1..=sets.horizon() {
            let want: Vec<usize> = sets.reachable[t]
                .iter()
                .copied()
                .filter(|&v| connected_predicate(g.node(v), &planned, 4.0))
                .collect();
            assert_eq!(sets.valid[t], want);
        }
        assert_eq!(sets.stats.disconnected_calls, 0);
    }

    #[test]
    fn unreachable_goal_reaches_steady_state() {
        let g = grid(20, 3);
        let mut traces = PlannedTraces::new();
        for a in [0, 1, 2] {
            traces.push(vec![a]);
        }
        let m = MeasurementModel::new(crate::network::NoiseKind::Gaussian, 1.0, 4.0).unwrap();
        let c = LocalizabilityConstraints::e_only(0.1).unwrap();
        // Goal at x = 19, far outside the anchors' sensing radius.
        let goal = 19 * 3 + 1;
        let err = construct_valid_sets(&request(3, 4, goal, &traces, &g, &m, &c)).unwrap_err();
        assert!(matches!(err.0, SetFailure::SteadyState { .. }), "{err:?}");
        assert_eq!(err.1.disconnected_calls, 0);
    }

    #[test]
    fn invalid_start_is_reported() {
        let g = grid(20, 3);
        let mut traces = PlannedTraces::new();
        for a in [0, 1, 2] {
            traces.push(vec![a]);
        }
        let m = MeasurementModel::new(crate::network::NoiseKind::Gaussian, 1.0, 4.0).unwrap();
        let c = LocalizabilityConstraints::e_only(0.1).unwrap();
        let err = construct_valid_sets(&request(3, 15 * 3, 4, &traces, &g, &m, &c)).unwrap_err();
        assert_eq!(err.0, SetFailure::InvalidStart);
    }

    #[test]
    fn nonanchor_valid_members_reverify() {
        let g = grid(10, 6);
        let mut traces = PlannedTraces::new();
        // Anchors walk right along y = 0, 2, 5.
        for y in [0usize, 2, 5] {
            traces.push((0..6).map(|x| x * 6 + y).collect());
        }
        let m = MeasurementModel::new(crate::network::NoiseKind::Gaussian, 1.0, 5.0).unwrap();
        let c = LocalizabilityConstraints::e_only(0.2).unwrap();
        let sets = construct_valid_sets(&request(3, 7, 8 * 6 + 3, &traces, &g, &m, &c)).unwrap();
        for t in 0..=sets.horizon() {
            let planned = traces.positions_at(&g, t);
            for &v in &sets.valid[t] {
                assert!(sets.reachable[t].binary_search(&v).is_ok());
                assert!(lc_indicator(g.node(v), &planned, 3, &m, &c));
            }
        }
        assert!(sets.stats.calls > 0);
        assert_eq!(sets.stats.disconnected_calls, 0);
        assert!(sets.valid[sets.horizon()].binary_search(&(8 * 6 + 3)).is_ok());
    }

    #[test]
    fn horizon_cap() {
        let g = path_graph(30);
        let traces = PlannedTraces::new();
        let m = MeasurementModel::default();
        let c = LocalizabilityConstraints::trivial();
        let mut req = request(0, 0, 29, &traces, &g, &m, &c);
        req.max_horizon = 10;
        let err = construct_valid_sets(&req).unwrap_err();
        assert_eq!(err.0, SetFailure::HorizonCap { t: 10 });
    }
}

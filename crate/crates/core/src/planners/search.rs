//! Graph searches: plain A* on the roadmap and the time-expanded search
//! confined to per-timestep valid sets.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::csets::ConstraintSets;
use crate::roadmap::Roadmap;

#[derive(Debug, Clone, Copy)]
struct Frontier {
    f: f64,
    g: f64,
    node: usize,
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frontier {}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frontier {
    // Min-heap on (f, g, node).
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.g.total_cmp(&self.g))
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Shortest roadmap path by A* with the Euclidean heuristic. Returns the
/// node sequence and its length.
pub fn astar_path(roadmap: &Roadmap, start: usize, goal: usize) -> Option<(Vec<usize>, f64)> {
    let n = roadmap.len();
    let goal_pt = roadmap.node(goal);
    let mut g_best = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut closed = vec![false; n];
    let mut heap = BinaryHeap::new();
    g_best[start] = 0.0;
    heap.push(Frontier { f: roadmap.node(start).distance(goal_pt), g: 0.0, node: start });
    while let Some(Frontier { g, node, .. }) = heap.pop() {
        if closed[node] {
            continue;
        }
        closed[node] = true;
        if node == goal {
            let mut path = vec![goal];
            let mut v = goal;
            while v != start {
                v = parent[v];
                path.push(v);
            }
            path.reverse();
            return Some((path, g));
        }
        for &(w, len) in roadmap.neighbors(node) {
            let cand = g + len;
            if !closed[w] && cand < g_best[w] {
                g_best[w] = cand;
                parent[w] = node;
                heap.push(Frontier { f: cand + roadmap.node(w).distance(goal_pt), g: cand, node: w });
            }
        }
    }
    None
}

/// Cost-to-go in the time-expanded graph: travelled distance, then the
/// absolute arrival time.
#[derive(Debug, Clone, Copy, PartialEq)]
struct ToGo {
    dist: f64,
    arrive: usize,
}

const UNREACHABLE: ToGo = ToGo { dist: f64::INFINITY, arrive: usize::MAX };

fn tie_tol(d: f64) -> f64 {
    1e-12 * d.abs().max(1.0)
}

fn better(a: ToGo, b: ToGo) -> bool {
    if a.dist < b.dist - tie_tol(b.dist) {
        return true;
    }
    libm::fabs(a.dist - b.dist) <= tie_tol(b.dist) && a.arrive < b.arrive
}

fn same(a: ToGo, b: ToGo) -> bool {
    libm::fabs(a.dist - b.dist) <= tie_tol(b.dist) && a.arrive == b.arrive
}

/// Minimum-distance node sequence from the start at `t = 0` to the goal,
/// where the robot at time `t` must occupy a node of `V_t`. Waiting costs
/// nothing; an edge costs its length. The robot may stop at the goal at time
/// `s` only if the goal stays valid for every later timestep.
///
/// Ties on distance go to the earlier arrival, then to the lexicographically
/// smallest node sequence. The returned sequence ends on arrival.
pub fn time_expanded_search(sets: &ConstraintSets, roadmap: &Roadmap) -> Vec<usize> {
    let h = sets.horizon();
    let n = roadmap.len();
    let goal = sets.goal;
    let member: Vec<Vec<bool>> = sets
        .valid
        .iter()
        .map(|v| {
            let mut m = vec![false; n];
            for &k in v {
                m[k] = true;
            }
            m
        })
        .collect();
    let mut goal_ok_from = vec![true; h + 2];
    for s in (0..=h).rev() {
        goal_ok_from[s] = goal_ok_from[s + 1] && member[s][goal];
    }

    let mut togo = vec![vec![UNREACHABLE; n]; h + 1];
    for t in (0..=h).rev() {
        for &v in &sets.valid[t] {
            if v == goal && goal_ok_from[t] {
                togo[t][v] = ToGo { dist: 0.0, arrive: t };
                continue;
            }
            if t == h {
                continue;
            }
            let mut best = UNREACHABLE;
            for (w, len) in successors(roadmap, v) {
                if !member[t + 1][w] {
                    continue;
                }
                let next = togo[t + 1][w];
                if next.dist.is_finite() {
                    let cand = ToGo { dist: len + next.dist, arrive: next.arrive };
                    if better(cand, best) {
                        best = cand;
                    }
                }
            }
            togo[t][v] = best;
        }
    }

    let mut v = sets.start;
    let mut path = vec![v];
    assert!(togo[0][v].dist.is_finite(), "successful set construction guarantees a trajectory");
    let mut t = 0;
    while !(v == goal && goal_ok_from[t]) {
        let target = togo[t][v];
        let next = successors(roadmap, v)
            .find(|&(w, len)| {
                member[t + 1][w] && {
                    let nx = togo[t + 1][w];
                    nx.dist.is_finite() && same(ToGo { dist: len + nx.dist, arrive: nx.arrive }, target)
                }
            })
            .expect("optimal successor exists");
        v = next.0;
        path.push(v);
        t += 1;
    }
    path
}

/// Waiting and the roadmap edges out of `v`, in ascending node order.
fn successors(roadmap: &Roadmap, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
    let adj = roadmap.neighbors(v);
    let split = adj.partition_point(|&(w, _)| w < v);
    adj[..split].iter().copied().chain(core::iter::once((v, 0.0))).chain(adj[split..].iter().copied())
}

//! Obstacle environments and the Halton-sampled probabilistic roadmap.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{segment_obstacle_intersect, Obstacle, Point2, Rect};
use crate::halton::{bases_valid, halton_points};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Complexity {
    Low,
    Medium,
    High,
}

impl Complexity {
    pub fn as_str(self) -> &'static str {
        match self {
            Complexity::Low => "low",
            Complexity::Medium => "medium",
            Complexity::High => "high",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    bounds: Rect,
    obstacles: Vec<Obstacle>,
    complexity: Complexity,
}

impl Environment {
    pub fn new(bounds: Rect, obstacles: Vec<Obstacle>, complexity: Complexity) -> Result<Self> {
        if !(bounds.width() > 0.0 && bounds.height() > 0.0) || !bounds.min.is_finite() || !bounds.max.is_finite() {
            return Err(Error::Scenario("bounds must have positive, finite extent".into()));
        }
        for (k, o) in obstacles.iter().enumerate() {
            if let Obstacle::Circle(c) = o {
                if c.radius.is_nan() || c.radius <= 0.0 {
                    return Err(Error::Scenario(format!("obstacle {k}: radius must be positive")));
                }
            }
            if let Obstacle::Rect(r) = o {
                if !(r.width() >= 0.0 && r.height() >= 0.0) {
                    return Err(Error::Scenario(format!("obstacle {k}: min must not exceed max")));
                }
            }
            if !bounds.contains_rect(&o.bounding_box()) {
                return Err(Error::Scenario(format!("obstacle {k} extends outside the bounds")));
            }
        }
        Ok(Self { bounds, obstacles, complexity })
    }

    pub fn bounds(&self) -> &Rect {
        &self.bounds
    }

    pub fn obstacles(&self) -> &[Obstacle] {
        &self.obstacles
    }

    pub fn complexity(&self) -> Complexity {
        self.complexity
    }

    /// Inside the bounds and outside every obstacle.
    pub fn is_free(&self, p: Point2) -> bool {
        self.bounds.contains(p) && !self.obstacles.iter().any(|o| o.contains(p))
    }

    pub fn segment_free(&self, p: Point2, q: Point2) -> bool {
        !self.obstacles.iter().any(|o| segment_obstacle_intersect(p, q, o))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoadmapParams {
    pub n_samples: usize,
    pub connection_radius: f64,
    pub halton_bases: (u32, u32),
    pub halton_skip: u64,
}

impl Default for RoadmapParams {
    fn default() -> Self {
        Self { n_samples: 1000, connection_radius: 2.0, halton_bases: (2, 3), halton_skip: 0 }
    }
}

/// Undirected roadmap. Adjacency lists are sorted by neighbour index.
#[derive(Debug, Clone, PartialEq)]
pub struct Roadmap {
    nodes: Vec<Point2>,
    adjacency: Vec<Vec<(usize, f64)>>,
    connection_radius: f64,
}

impl Roadmap {
    /// Connects every pair of `nodes` within `connection_radius` whose
    /// segment avoids all obstacles.
    pub fn from_nodes(env: &Environment, nodes: Vec<Point2>, connection_radius: f64) -> Self {
        let n = nodes.len();
        let mut adjacency = vec![Vec::new(); n];
        let cell = connection_radius.max(1e-9);
        let origin = env.bounds().min;
        let key = |p: Point2| {
            (libm::floor((p.x - origin.x) / cell) as i64, libm::floor((p.y - origin.y) / cell) as i64)
        };
        let mut buckets: alloc::collections::BTreeMap<(i64, i64), Vec<usize>> = Default::default();
        for (k, &p) in nodes.iter().enumerate() {
            buckets.entry(key(p)).or_default().push(k);
        }
        for (a, &p) in nodes.iter().enumerate() {
            let (cx, cy) = key(p);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    let Some(bucket) = buckets.get(&(cx + dx, cy + dy)) else { continue };
                    for &b in bucket {
                        if b <= a {
                            continue;
                        }
                        let q = nodes[b];
                        let len = p.distance(q);
                        if len <= connection_radius && env.segment_free(p, q) {
                            adjacency[a].push((b, len));
                            adjacency[b].push((a, len));
                        }
                    }
                }
            }
        }
        for adj in &mut adjacency {
            adj.sort_by_key(|&(b, _)| b);
        }
        Self { nodes, adjacency, connection_radius }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Point2] {
        &self.nodes
    }

    pub fn node(&self, v: usize) -> Point2 {
        self.nodes[v]
    }

    pub fn connection_radius(&self) -> f64 {
        self.connection_radius
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn edge_length(&self, a: usize, b: usize) -> Option<f64> {
        self.adjacency[a]
            .binary_search_by_key(&b, |&(k, _)| k)
            .ok()
            .map(|pos| self.adjacency[a][pos].1)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(a, b, length)` with `a < b`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, adj)| adj.iter().filter(move |(b, _)| *b > a).map(move |&(b, l)| (a, b, l)))
    }

    /// Index of a node exactly at `p`, if any.
    pub fn find_node(&self, p: Point2) -> Option<usize> {
        self.nodes.iter().position(|&q| q == p)
    }

    /// Union of the neighbours of every node in the sorted set `set`.
    pub fn neighbor_union(&self, set: &[usize]) -> Vec<usize> {
        let mut mark = vec![false; self.len()];
        for &v in set {
            for &(w, _) in &self.adjacency[v] {
                mark[w] = true;
            }
        }
        mark.iter().enumerate().filter_map(|(k, &m)| m.then_some(k)).collect()
    }

    /// Hop distances from `source`; `usize::MAX` where unreachable.
    pub fn hop_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &self.adjacency[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Largest finite hop distance between any two nodes.
    pub fn hop_diameter(&self) -> usize {
        (0..self.len())
            .map(|s| self.hop_distances(s).into_iter().filter(|&d| d != usize::MAX).max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }
}

/// Samples `params.n_samples` Halton points over the bounds, keeps the
/// collision-free ones, appends `extra_nodes` (robot starts and goals) and
/// connects the result. Returns the roadmap and the node index of each extra
/// point; an extra point that coincides with an existing node reuses it.
pub fn build_roadmap(
    env: &Environment,
    params: &RoadmapParams,
    extra_nodes: &[Point2],
) -> Result<(Roadmap, Vec<usize>)> {
    if !bases_valid(params.halton_bases) {
        return Err(Error::Scenario("Halton bases must be coprime and at least 2".into()));
    }
    if params.connection_radius.is_nan() || params.connection_radius <= 0.0 {
        return Err(Error::Scenario("connection radius must be positive".into()));
    }
    for (k, &p) in extra_nodes.iter().enumerate() {
        if !p.is_finite() || !env.is_free(p) {
            return Err(Error::Scenario(format!("start/goal point {k} at ({}, {}) is not collision-free", p.x, p.y)));
        }
    }
    let b = env.bounds();
    let mut nodes: Vec<Point2> = halton_points(params.n_samples, params.halton_bases, params.halton_skip)
        .into_iter()
        .map(|(u, v)| Point2::new(b.min.x + u * b.width(), b.min.y + v * b.height()))
        .filter(|&p| env.is_free(p))
        .collect();
    let mut extra_idx = Vec::with_capacity(extra_nodes.len());
    for &p in extra_nodes {
        match nodes.iter().position(|&q| q == p) {
            Some(k) => extra_idx.push(k),
            None => {
                extra_idx.push(nodes.len());
                nodes.push(p);
            }
        }
    }
    Ok((Roadmap::from_nodes(env, nodes, params.connection_radius), extra_idx))
}

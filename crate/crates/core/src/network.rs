//! Robot network snapshots, the sensing-horizon measurement graph and range
//! simulation.
//!
//! Robots are indexed `0..n` with the anchors (known positions) first.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::geometry::Point2;

/// Range noise family. The discriminant is the exponent on the range in the
/// information vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    Gaussian = 1,
    LogNormal = 2,
}

impl NoiseKind {
    pub fn from_gamma(gamma: u8) -> Result<Self> {
        match gamma {
            1 => Ok(NoiseKind::Gaussian),
            2 => Ok(NoiseKind::LogNormal),
            _ => Err(Error::InvalidModel("gamma must be 1 (Gaussian) or 2 (log-normal)")),
        }
    }

    pub fn gamma(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementModel {
    noise: NoiseKind,
    sigma: f64,
    sensing_radius: f64,
}

impl MeasurementModel {
    pub fn new(noise: NoiseKind, sigma: f64, sensing_radius: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidModel("sigma must be positive and finite"));
        }
        if !(sensing_radius > 0.0 && sensing_radius.is_finite()) {
            return Err(Error::InvalidModel("sensing radius must be positive and finite"));
        }
        Ok(Self { noise, sigma, sensing_radius })
    }

    pub fn from_gamma(gamma: u8, sigma: f64, sensing_radius: f64) -> Result<Self> {
        Self::new(NoiseKind::from_gamma(gamma)?, sigma, sensing_radius)
    }

    pub fn noise(&self) -> NoiseKind {
        self.noise
    }

    pub fn gamma(&self) -> u8 {
        self.noise.gamma()
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn sensing_radius(&self) -> f64 {
        self.sensing_radius
    }

    /// Same model with a different noise level.
    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        Self::new(self.noise, sigma, self.sensing_radius)
    }
}

impl Default for MeasurementModel {
    fn default() -> Self {
        Self { noise: NoiseKind::Gaussian, sigma: 1.0, sensing_radius: 6.0 }
    }
}

/// Positions of every robot at one instant, anchors first.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSnapshot {
    dim: usize,
    coords: Vec<f64>,
    n_anchor: usize,
}

impl NetworkSnapshot {
    /// `coords` holds `n * dim` values, robot-major.
    pub fn new(dim: usize, coords: Vec<f64>, n_anchor: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Contract("spatial dimension must be at least 2"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::Contract("coordinate count is not a multiple of the dimension"));
        }
        if n_anchor > coords.len() / dim {
            return Err(Error::Contract("more anchors than robots"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, coords, n_anchor })
    }

    pub fn from_points(points: &[Point2], n_anchor: usize) -> Result<Self> {
        let coords = points.iter().flat_map(|p| [p.x, p.y]).collect();
        Self::new(2, coords, n_anchor)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn n_anchor(&self) -> usize {
        self.n_anchor
    }

    pub fn n_nonanchor(&self) -> usize {
        self.len() - self.n_anchor
    }

    pub fn is_anchor(&self, robot: usize) -> bool {
        robot < self.n_anchor
    }

    pub fn position(&self, robot: usize) -> &[f64] {
        &self.coords[robot * self.dim..(robot + 1) * self.dim]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn point2(&self, robot: usize) -> Point2 {
        let p = self.position(robot);
        Point2::new(p[0], p[1])
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let a = self.position(i);
        let b = self.position(j);
        let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        libm::sqrt(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// Both endpoints are non-anchors.
    NonAnchorPair,
    /// Non-anchor to anchor; the non-anchor is stored first.
    NonAnchorAnchor,
    AnchorPair,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub kind: EdgeKind,
    pub length: f64,
}

/// Undirected graph of robot pairs within the sensing horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementGraph {
    n: usize,
    n_anchor: usize,
    edges: Vec<Edge>,
}

impl MeasurementGraph {
    /// Every pair at distance `<= rho`. Coincident robots are an error unless
    /// both are anchors (those pairs carry no information).
    pub fn build(snapshot: &NetworkSnapshot, model: &MeasurementModel) -> Result<Self> {
        let (graph, coincident) = Self::collect(snapshot, model.sensing_radius());
        match coincident.first() {
            Some(&(i, j)) => Err(Error::DegenerateGeometry { i, j }),
            None => Ok(graph),
        }
    }

    /// Like [`build`](Self::build) but silently drops coincident pairs that
    /// involve a non-anchor, returning them alongside the graph.
    pub fn build_dropping_coincident(
        snapshot: &NetworkSnapshot,
        model: &MeasurementModel,
    ) -> (Self, Vec<(usize, usize)>) {
        Self::collect(snapshot, model.sensing_radius())
    }

    fn collect(snapshot: &NetworkSnapshot, rho: f64) -> (Self, Vec<(usize, usize)>) {
        let n = snapshot.len();
        let na = snapshot.n_anchor();
        let mut edges = Vec::new();
        let mut coincident = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let length = snapshot.distance(i, j);
                if length > rho {
                    continue;
                }
                let kind = match (i < na, j < na) {
                    (true, true) => EdgeKind::AnchorPair,
                    (true, false) => EdgeKind::NonAnchorAnchor,
                    (false, _) => EdgeKind::NonAnchorPair,
                };
                if length == 0.0 && kind != EdgeKind::AnchorPair {
                    coincident.push((i, j));
                    continue;
                }
                let (a, b) = if kind == EdgeKind::NonAnchorAnchor { (j, i) } else { (i, j) };
                edges.push(Edge { i: a, j: b, kind, length });
            }
        }
        (Self { n, n_anchor: na, edges }, coincident)
    }

    pub fn n_robots(&self) -> usize {
        self.n
    }

    pub fn n_anchor(&self) -> usize {
        self.n_anchor
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edges_of_kind(&self, kind: EdgeKind) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.kind == kind)
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.iter().any(|e| (e.i == a && e.j == b) || (e.i == b && e.j == a))
    }

    /// All incident edges, anchor pairs included.
    pub fn neighbor_count(&self, robot: usize) -> Result<usize> {
        self.check(robot)?;
        Ok(self.edges.iter().filter(|e| e.i == robot || e.j == robot).count())
    }

    /// Incident edges that carry information, i.e. excluding anchor pairs.
    /// This is the count the d-neighbor singularity prescreen uses.
    pub fn informative_neighbor_count(&self, robot: usize) -> Result<usize> {
        self.check(robot)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| e.kind != EdgeKind::AnchorPair && (e.i == robot || e.j == robot))
            .count())
    }

    /// Informative degree of every robot in one pass.
    pub fn informative_degrees(&self) -> Vec<usize> {
        let mut deg = alloc::vec![0; self.n];
        for e in self.edges.iter().filter(|e| e.kind != EdgeKind::AnchorPair) {
            deg[e.i] += 1;
            deg[e.j] += 1;
        }
        deg
    }

    fn check(&self, robot: usize) -> Result<()> {
        if robot >= self.n {
            Err(Error::IndexOutOfRange { index: robot, len: self.n })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeObservation {
    pub i: usize,
    pub j: usize,
    pub range: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeObservationSet {
    pub observations: Vec<RangeObservation>,
    pub seed: u64,
}

/// One noisy range per informative measurement edge, deterministic in `seed`.
pub fn simulate_ranges(
    snapshot: &NetworkSnapshot,
    model: &MeasurementModel,
    seed: u64,
) -> Result<RangeObservationSet> {
    let graph = MeasurementGraph::build(snapshot, model)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(RangeObservationSet { observations: draw_ranges(&graph, model, &mut rng), seed })
}

/// Noisy ranges on an existing graph using the caller's generator.
pub fn draw_ranges<R: Rng + ?Sized>(
    graph: &MeasurementGraph,
    model: &MeasurementModel,
    rng: &mut R,
) -> Vec<RangeObservation> {
    // sigma > 0 is a model invariant, so the distribution is always valid.
    let normal = Normal::new(0.0, model.sigma()).expect("sigma validated at construction");
    graph
        .edges()
        .iter()
        .filter(|e| e.kind != EdgeKind::AnchorPair)
        .map(|e| {
            let range = match model.noise() {
                NoiseKind::Gaussian => loop {
                    let r = e.length + normal.sample(rng);
                    if r > 0.0 {
                        break r;
                    }
                },
                NoiseKind::LogNormal => e.length * libm::exp(normal.sample(rng)),
            };
            RangeObservation { i: e.i, j: e.j, range }
        })
        .collect()
}

/// Exact ranges for every informative edge.
pub fn true_ranges(graph: &MeasurementGraph) -> Vec<RangeObservation> {
    graph
        .edges()
        .iter()
        .filter(|e| e.kind != EdgeKind::AnchorPair)
        .map(|e| RangeObservation { i: e.i, j: e.j, range: e.length })
        .collect()
}

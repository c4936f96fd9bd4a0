//! Range-only Fisher information, its optimality measures and the
//! localizability-constraint indicator.
//!
//! For a measurement between robots `i` and `j` with `Δ = x_i - x_j` and
//! `L = |Δ|`, the information direction is `u = Δ / (σ L^γ)`. A measurement
//! between two non-anchors contributes `u uᵀ` to both diagonal blocks and
//! `-u uᵀ` to the two off-diagonal blocks (a weighted Laplacian with the
//! anchor rows and columns removed). A non-anchor to anchor measurement
//! contributes `u uᵀ` to the non-anchor's diagonal block only. Anchor pairs
//! carry no information.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::linalg::SymMatrix;
use crate::network::{EdgeKind, MeasurementGraph, MeasurementModel, NetworkSnapshot};

/// `λ_min <= SINGULAR_REL * max(1, λ_max)` counts as singular.
pub const SINGULAR_REL: f64 = 1e-10;

/// Relative slack around the E-threshold inside which the indicator falls
/// back from the Cholesky test to a full eigen-decomposition.
const CHOLESKY_MARGIN_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// `+u` on robot `i`'s block and `-u` on robot `j`'s (both non-anchors).
    Difference,
    /// `+u` on robot `i`'s block only (`j` may be an anchor).
    Single,
}

fn info_direction(
    snapshot: &NetworkSnapshot,
    model: &MeasurementModel,
    i: usize,
    j: usize,
) -> Result<Vec<f64>> {
    let xi = snapshot.position(i);
    let xj = snapshot.position(j);
    let delta: Vec<f64> = xi.iter().zip(xj).map(|(a, b)| a - b).collect();
    let len = libm::sqrt(delta.iter().map(|d| d * d).sum());
    if len == 0.0 {
        return Err(Error::DegenerateGeometry { i, j });
    }
    let denom = model.sigma() * libm::pow(len, f64::from(model.gamma()));
    Ok(delta.into_iter().map(|d| d / denom).collect())
}

/// The block-structured information vector of one measurement, of length
/// `d * n_nonanchor`.
pub fn pair_vector(
    snapshot: &NetworkSnapshot,
    model: &MeasurementModel,
    i: usize,
    j: usize,
    kind: PairKind,
) -> Result<Vec<f64>> {
    let n = snapshot.len();
    for idx in [i, j] {
        if idx >= n {
            return Err(Error::IndexOutOfRange { index: idx, len: n });
        }
    }
    if snapshot.is_anchor(i) {
        return Err(Error::Contract("first robot of a pair vector must be a non-anchor"));
    }
    if kind == PairKind::Difference && snapshot.is_anchor(j) {
        return Err(Error::Contract("difference vectors need two non-anchors"));
    }
    let d = snapshot.dim();
    let u = info_direction(snapshot, model, i, j)?;
    let mut out = vec![0.0; d * snapshot.n_nonanchor()];
    let bi = (i - snapshot.n_anchor()) * d;
    out[bi..bi + d].copy_from_slice(&u);
    if kind == PairKind::Difference {
        let bj = (j - snapshot.n_anchor()) * d;
        for (o, v) in out[bj..bj + d].iter_mut().zip(&u) {
            *o -= v;
        }
    }
    Ok(out)
}

/// Fisher information matrix of the non-anchor positions with its spectrum.
#[derive(Debug, Clone)]
pub struct Fim {
    dim: usize,
    n_nonanchor: usize,
    matrix: SymMatrix,
    eigenvalues: Vec<f64>,
}

fn assemble_matrix(
    snapshot: &NetworkSnapshot,
    model: &MeasurementModel,
    graph: &MeasurementGraph,
) -> Result<SymMatrix> {
    let d = snapshot.dim();
    let na = snapshot.n_anchor();
    let mut m = SymMatrix::zeros(d * snapshot.n_nonanchor());
    for e in graph.edges() {
        match e.kind {
            EdgeKind::AnchorPair => {}
            EdgeKind::NonAnchorAnchor => {
                let u = info_direction(snapshot, model, e.i, e.j)?;
                let bi = (e.i - na) * d;
                for r in 0..d {
                    for c in 0..d {
                        m.add(bi + r, bi + c, u[r] * u[c]);
                    }
                }
            }
            EdgeKind::NonAnchorPair => {
                let u = info_direction(snapshot, model, e.i, e.j)?;
                let bi = (e.i - na) * d;
                let bj = (e.j - na) * d;
                for r in 0..d {
                    for c in 0..d {
                        let w = u[r] * u[c];
                        m.add(bi + r, bi + c, w);
                        m.add(bj + r, bj + c, w);
                        m.add(bi + r, bj + c, -w);
                        m.add(bj + r, bi + c, -w);
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Builds the information matrix and its full spectrum.
pub fn assemble_fim(
    snapshot: &NetworkSnapshot,
    model: &MeasurementModel,
    graph: &MeasurementGraph,
) -> Result<Fim> {
    let matrix = assemble_matrix(snapshot, model, graph)?;
    Fim::from_matrix(snapshot.dim(), snapshot.n_nonanchor(), matrix)
}

impl Fim {
    pub fn from_matrix(dim: usize, n_nonanchor: usize, matrix: SymMatrix) -> Result<Self> {
        if matrix.dim() != dim * n_nonanchor {
            return Err(Error::Contract("matrix size must be dim * n_nonanchor"));
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let eigenvalues = matrix.eigenvalues();
        Ok(Self { dim, n_nonanchor, matrix, eigenvalues })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_nonanchor(&self) -> usize {
        self.n_nonanchor
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.matrix
    }

    /// Ascending eigenvalues.
    pub fn spectrum(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::INFINITY)
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn is_singular(&self) -> bool {
        !self.eigenvalues.is_empty() && self.lambda_min() <= SINGULAR_REL * self.lambda_max().max(1.0)
    }

    /// `-trace(F⁻¹)`, or `-∞` for a singular matrix. An empty matrix (no
    /// non-anchors) gives 0.
    pub fn a_optimality(&self) -> f64 {
        if self.is_singular() {
            f64::NEG_INFINITY
        } else {
            -self.eigenvalues.iter().map(|l| 1.0 / l).sum::<f64>()
        }
    }

    /// Smallest eigenvalue, 0 when singular. `+∞` with no non-anchors.
    pub fn e_optimality(&self) -> f64 {
        if self.is_singular() {
            0.0
        } else {
            self.lambda_min()
        }
    }

    pub fn report(&self) -> OptimalityReport {
        OptimalityReport {
            a_opt: self.a_optimality(),
            e_opt: self.e_optimality(),
            lambda_min: self.lambda_min(),
            singular: self.is_singular(),
        }
    }
}

pub fn spectrum(fim: &Fim) -> &[f64] {
    fim.spectrum()
}

pub fn a_optimality(fim: &Fim) -> f64 {
    fim.a_optimality()
}

pub fn e_optimality(fim: &Fim) -> f64 {
    fim.e_optimality()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalityReport {
    pub a_opt: f64,
    pub e_opt: f64,
    pub lambda_min: f64,
    pub singular: bool,
}

/// Lower bounds on the A-optimality (`alpha`, may be `-∞`) and
/// E-optimality (`beta >= 0`) measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizabilityConstraints {
    pub alpha: f64,
    pub beta: f64,
}

impl LocalizabilityConstraints {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha.is_nan() || alpha == f64::INFINITY {
            return Err(Error::Contract("alpha must be finite or -inf"));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::Contract("beta must be finite and non-negative"));
        }
        Ok(Self { alpha, beta })
    }

    /// Only an E-optimality bound.
    pub fn e_only(beta: f64) -> Result<Self> {
        Self::new(f64::NEG_INFINITY, beta)
    }

    pub fn trivial() -> Self {
        Self { alpha: f64::NEG_INFINITY, beta: 0.0 }
    }

    pub fn is_nontrivial(&self) -> bool {
        self.alpha > f64::NEG_INFINITY || self.beta > 0.0
    }

    pub fn satisfied_by(&self, report: &OptimalityReport) -> bool {
        report.a_opt >= self.alpha && report.e_opt >= self.beta
    }
}

/// False when some non-anchor has fewer than `d` informative neighbours, in
/// which case the information matrix is necessarily singular. Passing does
/// not imply non-singularity.
pub fn connectivity_prescreen(graph: &MeasurementGraph, snapshot: &NetworkSnapshot) -> bool {
    let deg = graph.informative_degrees();
    deg[snapshot.n_anchor()..].iter().all(|&k| k >= snapshot.dim())
}

/// Whether a whole network meets the constraints. Coincident robots count as
/// a violation.
pub fn network_satisfies(
    snapshot: &NetworkSnapshot,
    model: &MeasurementModel,
    constraints: &LocalizabilityConstraints,
) -> bool {
    if !constraints.is_nontrivial() {
        return true;
    }
    let Ok(graph) = MeasurementGraph::build(snapshot, model) else {
        return false;
    };
    if !connectivity_prescreen(&graph, snapshot) {
        return false;
    }
    let Ok(matrix) = assemble_matrix(snapshot, model, &graph) else {
        return false;
    };
    if matrix.dim() == 0 {
        return true;
    }
    if constraints.alpha == f64::NEG_INFINITY {
        // λ_min(F) >= c  <=>  F - cI is positive semidefinite. Decide with
        // Cholesky on both sides of the threshold; ambiguous cases fall
        // through to the eigen route.
        let scale = matrix.trace().max(1.0);
        let threshold = constraints.beta.max(SINGULAR_REL * scale);
        let margin = CHOLESKY_MARGIN_REL * scale;
        if matrix.cholesky_shifted(threshold + margin).is_some() {
            return true;
        }
        if matrix.cholesky_shifted(threshold - margin).is_none() {
            return false;
        }
    }
    match Fim::from_matrix(snapshot.dim(), snapshot.n_nonanchor(), matrix) {
        Ok(fim) => constraints.satisfied_by(&fim.report()),
        Err(_) => false,
    }
}

/// Indicator of the localizability-constrained set: does placing the next
/// robot at `candidate`, with the robots planned so far at `planned`
/// (anchors first), keep the network within the constraints?
///
/// The candidate is robot `planned.len()`; it must be a non-anchor.
pub fn lc_indicator(
    candidate: Point2,
    planned: &[Point2],
    n_anchor: usize,
    model: &MeasurementModel,
    constraints: &LocalizabilityConstraints,
) -> bool {
    debug_assert!(planned.len() >= n_anchor, "candidate must be a non-anchor");
    if !constraints.is_nontrivial() {
        return true;
    }
    let mut coords = Vec::with_capacity(2 * (planned.len() + 1));
    for p in planned.iter().chain(core::iter::once(&candidate)) {
        coords.push(p.x);
        coords.push(p.y);
    }
    match NetworkSnapshot::new(2, coords, n_anchor) {
        Ok(s) => network_satisfies(&s, model, constraints),
        Err(_) => false,
    }
}

/// Full report for a planar network, computed through the eigen route.
/// Coincident non-anchors are an error.
pub fn evaluate_positions(
    positions: &[Point2],
    n_anchor: usize,
    model: &MeasurementModel,
) -> Result<OptimalityReport> {
    let s = NetworkSnapshot::from_points(positions, n_anchor)?;
    let g = MeasurementGraph::build(&s, model)?;
    Ok(assemble_fim(&s, model, &g)?.report())
}

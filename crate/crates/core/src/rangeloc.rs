//! Range-only localization of the non-anchors by damped Gauss–Newton least
//! squares, and the trajectory error metrics built on it.
//!
//! Residuals are `(r - L)/σ` for Gaussian noise and `(ln r - ln L)/σ` for
//! log-normal noise, where `r` is the measured range and `L` the estimated
//! distance. Anchors are fixed and not estimated.

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::linalg::SymMatrix;
use crate::network::{draw_ranges, true_ranges, MeasurementGraph, MeasurementModel, NetworkSnapshot, NoiseKind, RangeObservation};
use crate::planners::TrajectoryPlan;

/// One snapshot to localize. Observation indices refer to the whole network
/// (anchors are `0..anchors.len()`).
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationProblem {
    pub anchors: Vec<Point2>,
    /// Ground truth of the non-anchors, used only for error metrics.
    pub truth: Vec<Point2>,
    pub observations: Vec<RangeObservation>,
    pub model: MeasurementModel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    pub step_tol: f64,
    pub rel_cost_tol: f64,
    pub initial_damping: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_iterations: 200, step_tol: 1e-10, rel_cost_tol: 1e-12, initial_damping: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub estimate: Vec<Point2>,
    pub iterations: usize,
    /// `Σ r_e²` at the returned estimate.
    pub final_cost: f64,
    pub converged: bool,
}

impl LocalizationProblem {
    pub fn n_anchor(&self) -> usize {
        self.anchors.len()
    }

    pub fn n_nonanchor(&self) -> usize {
        self.truth.len()
    }

    fn position<'a>(&'a self, x: &'a [Point2], k: usize) -> Point2 {
        let na = self.n_anchor();
        if k < na {
            self.anchors[k]
        } else {
            x[k - na]
        }
    }

    /// Number of observations touching each non-anchor.
    pub fn observation_counts(&self) -> Vec<usize> {
        let na = self.n_anchor();
        let mut c = vec![0; self.n_nonanchor()];
        for o in &self.observations {
            for k in [o.i, o.j] {
                if k >= na {
                    c[k - na] += 1;
                }
            }
        }
        c
    }

    /// Fails with [`Error::IllPosed`] naming the first non-anchor with fewer
    /// than two observations.
    pub fn check_well_posed(&self) -> Result<()> {
        match self.observation_counts().iter().position(|&c| c < 2) {
            Some(k) => Err(Error::IllPosed { robot: k + self.n_anchor() }),
            None => Ok(()),
        }
    }

    /// Residual vector at the non-anchor estimate `x`.
    pub fn residuals(&self, x: &[Point2]) -> Vec<f64> {
        let s = self.model.sigma();
        self.observations
            .iter()
            .map(|o| {
                let l = self.position(x, o.i).distance(self.position(x, o.j));
                match self.model.noise() {
                    NoiseKind::Gaussian => (o.range - l) / s,
                    NoiseKind::LogNormal => (libm::log(o.range) - libm::log(l)) / s,
                }
            })
            .collect()
    }

    pub fn cost(&self, x: &[Point2]) -> f64 {
        self.residuals(x).iter().map(|r| r * r).sum()
    }

    /// Row-major Jacobian of [`residuals`](Self::residuals) with respect to
    /// the flattened non-anchor coordinates.
    pub fn jacobian(&self, x: &[Point2]) -> Vec<f64> {
        let na = self.n_anchor();
        let cols = 2 * self.n_nonanchor();
        let s = self.model.sigma();
        let mut jac = vec![0.0; self.observations.len() * cols];
        for (row, o) in self.observations.iter().enumerate() {
            let delta = self.position(x, o.i) - self.position(x, o.j);
            let l = delta.norm();
            let power = match self.model.noise() {
                NoiseKind::Gaussian => l,
                NoiseKind::LogNormal => l * l,
            };
            let g = delta * (-1.0 / (s * power));
            let r = &mut jac[row * cols..(row + 1) * cols];
            if o.i >= na {
                r[2 * (o.i - na)] += g.x;
                r[2 * (o.i - na) + 1] += g.y;
            }
            if o.j >= na {
                r[2 * (o.j - na)] -= g.x;
                r[2 * (o.j - na) + 1] -= g.y;
            }
        }
        jac
    }
}

fn finite_or_inf(c: f64) -> f64 {
    if c.is_finite() {
        c
    } else {
        f64::INFINITY
    }
}

/// Minimizes the residual sum of squares from `initial_guess`.
pub fn solve_snapshot(problem: &LocalizationProblem, initial_guess: &[Point2], opts: &SolverOptions) -> Result<SolveOutcome> {
    if initial_guess.len() != problem.n_nonanchor() {
        return Err(Error::Contract("initial guess must cover every non-anchor"));
    }
    problem.check_well_posed()?;
    let n = 2 * problem.n_nonanchor();
    let m = problem.observations.len();
    let mut x = initial_guess.to_vec();
    let mut cost = finite_or_inf(problem.cost(&x));
    let mut mu = opts.initial_damping;
    let mut converged = n == 0 || cost == 0.0;
    let mut iterations = 0;
    while !converged && iterations < opts.max_iterations {
        iterations += 1;
        let r = problem.residuals(&x);
        let jac = problem.jacobian(&x);
        let mut jtj = SymMatrix::zeros(n);
        let mut jtr = vec![0.0; n];
        for row in 0..m {
            let jr = &jac[row * n..(row + 1) * n];
            jtj.add_outer(jr, 1.0);
            for (g, &v) in jtr.iter_mut().zip(jr) {
                *g -= v * r[row];
            }
        }
        loop {
            let mut a = jtj.clone();
            for k in 0..n {
                a.add(k, k, mu);
            }
            let Some(delta) = a.solve_spd(&jtr) else {
                mu *= 4.0;
                if !mu.is_finite() {
                    converged = true;
                    break;
                }
                continue;
            };
            let step = libm::sqrt(delta.iter().map(|d| d * d).sum());
            let cand: Vec<Point2> =
                x.iter().enumerate().map(|(k, p)| *p + Point2::new(delta[2 * k], delta[2 * k + 1])).collect();
            let new_cost = finite_or_inf(problem.cost(&cand));
            if new_cost < cost {
                let rel = (cost - new_cost) / cost;
                x = cand;
                cost = new_cost;
                mu /= 3.0;
                converged = step < opts.step_tol || rel < opts.rel_cost_tol || cost == 0.0;
            } else {
                mu *= 4.0;
                converged = step < opts.step_tol;
            }
            break;
        }
    }
    Ok(SolveOutcome { estimate: x, iterations, final_cost: cost, converged })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationConfig {
    pub trials: usize,
    pub seed: u64,
    /// Exact ranges and an unperturbed initial guess.
    pub noiseless: bool,
    /// Standard deviation of the t = 0 initial-guess perturbation, in units
    /// of σ.
    pub init_perturbation: f64,
    pub solver: SolverOptions,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        Self { trials: 10, seed: 0, noiseless: false, init_perturbation: 3.0, solver: SolverOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimestepMetrics {
    pub t: usize,
    /// Mean over non-anchors, averaged over trials. `None` when ill-posed.
    pub mean_error: Option<f64>,
    /// Largest trial-averaged single-robot error.
    pub max_robot_error: Option<f64>,
    /// Non-anchors with fewer than two measurements.
    pub n_illposed: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolverDiagnostics {
    pub solves: usize,
    pub total_iterations: usize,
    pub max_iterations: usize,
    pub non_converged: usize,
    pub mean_final_cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    /// Mean error over every evaluated (non-anchor, timestep, trial).
    pub ale: Option<f64>,
    /// Maximum of [`per_timestep`](Self::per_timestep) mean errors.
    pub mle: Option<f64>,
    /// Mean travelled distance over all robots.
    pub ad: f64,
    pub per_timestep: Vec<TimestepMetrics>,
    pub robot_distances: Vec<f64>,
    pub illposed_timesteps: Vec<usize>,
    pub diagnostics: SolverDiagnostics,
}

impl EvaluationReport {
    pub fn has_illposed(&self) -> bool {
        !self.illposed_timesteps.is_empty()
    }
}

/// Localizes every timestep of a plan and aggregates the errors over
/// `trials` noise draws. Each solve starts from the previous estimate shifted
/// by the planned motion since then.
pub fn evaluate_trajectory(
    plan: &TrajectoryPlan,
    n_anchor: usize,
    model: &MeasurementModel,
    config: &EvaluationConfig,
) -> Result<EvaluationReport> {
    let steps = plan.n_steps();
    let nn = plan.n_robots().saturating_sub(n_anchor);
    let trials = config.trials.max(1);

    let mut problems = Vec::with_capacity(steps);
    for t in 0..steps {
        let pts = plan.snapshot_at(t);
        let snap = NetworkSnapshot::from_points(&pts, n_anchor)?;
        let (graph, _) = MeasurementGraph::build_dropping_coincident(&snap, model);
        let p = LocalizationProblem {
            anchors: pts[..n_anchor].to_vec(),
            truth: pts[n_anchor..].to_vec(),
            observations: true_ranges(&graph),
            model: *model,
        };
        let n_ill = p.observation_counts().iter().filter(|&&c| c < 2).count();
        problems.push((graph, p, n_ill));
    }

    let mut err_sum = vec![vec![0.0; nn]; steps];
    let mut diag = SolverDiagnostics::default();
    let mut cost_sum = 0.0;
    let perturb = Normal::new(0.0, config.init_perturbation * model.sigma()).map_err(|_| Error::InvalidModel("perturbation"))?;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(trial as u64);
        let mut estimate: Vec<Point2> = problems.first().map_or(Vec::new(), |(_, p, _)| {
            p.truth
                .iter()
                .map(|&q| {
                    if config.noiseless {
                        q
                    } else {
                        q + Point2::new(perturb.sample(&mut rng), perturb.sample(&mut rng))
                    }
                })
                .collect()
        });
        let mut last_truth: Vec<Point2> = problems.first().map_or(Vec::new(), |(_, p, _)| p.truth.clone());
        for (t, (graph, base, n_ill)) in problems.iter().enumerate() {
            if *n_ill > 0 {
                continue;
            }
            let mut p = base.clone();
            if !config.noiseless {
                p.observations = draw_ranges(graph, model, &mut rng);
            }
            // Predict with the planned displacement since the last solve.
            let guess: Vec<Point2> =
                estimate.iter().zip(p.truth.iter().zip(&last_truth)).map(|(&e, (&now, &then))| e + (now - then)).collect();
            last_truth.clone_from(&p.truth);
            let out = solve_snapshot(&p, &guess, &config.solver)?;
            diag.solves += 1;
            diag.total_iterations += out.iterations;
            diag.max_iterations = diag.max_iterations.max(out.iterations);
            diag.non_converged += usize::from(!out.converged);
            cost_sum += out.final_cost;
            for (k, (e, truth)) in out.estimate.iter().zip(&p.truth).enumerate() {
                err_sum[t][k] += e.distance(*truth);
            }
            estimate = out.estimate;
        }
    }
    if diag.solves > 0 {
        diag.mean_final_cost = cost_sum / diag.solves as f64;
    }

    let mut per_timestep = Vec::with_capacity(steps);
    let mut illposed = Vec::new();
    for (t, (_, _, n_ill)) in problems.iter().enumerate() {
        if *n_ill > 0 {
            illposed.push(t);
            per_timestep.push(TimestepMetrics { t, mean_error: None, max_robot_error: None, n_illposed: *n_ill });
            continue;
        }
        let avg: Vec<f64> = err_sum[t].iter().map(|s| s / trials as f64).collect();
        let (mean, max) = if nn == 0 {
            (0.0, 0.0)
        } else {
            (avg.iter().sum::<f64>() / nn as f64, avg.iter().copied().fold(0.0, f64::max))
        };
        per_timestep.push(TimestepMetrics { t, mean_error: Some(mean), max_robot_error: Some(max), n_illposed: 0 });
    }
    let evaluated: Vec<f64> = per_timestep.iter().filter_map(|m| m.mean_error).collect();
    let ale = (!evaluated.is_empty()).then(|| evaluated.iter().sum::<f64>() / evaluated.len() as f64);
    let mle = evaluated.iter().copied().reduce(f64::max);
    Ok(EvaluationReport {
        ale,
        mle,
        ad: plan.average_distance(),
        per_timestep,
        robot_distances: (0..plan.n_robots()).map(|r| plan.robot_distance(r)).collect(),
        illposed_timesteps: illposed,
        diagnostics: diag,
    })
}

//! Scenario files: JSON with explicit field names, `format_version` 1.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use lcplan::fim::{network_satisfies, LocalizabilityConstraints};
use lcplan::planners::{LcgpOptions, PlannerKind, PlanningProblem, PotentialParams, RrtParams};
use lcplan::roadmap::RoadmapParams;
use lcplan::{Circle, Complexity, Environment, MeasurementModel, NetworkSnapshot, Obstacle, Point2, Rect};

use crate::error::BenchError;

pub const SCENARIO_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub format_version: u32,
    pub name: String,
    pub environment: EnvironmentSpec,
    pub robots: RobotsSpec,
    pub model: ModelSpec,
    pub constraints: ConstraintsSpec,
    pub roadmap: RoadmapSpec,
    pub planner: PlannerSpec,
    pub seeds: SeedsSpec,
    pub max_orderings: usize,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentSpec {
    pub bounds: BoundsSpec,
    pub obstacles: Vec<ObstacleSpec>,
    pub complexity: ComplexitySpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObstacleSpec {
    Rect { min: [f64; 2], max: [f64; 2] },
    Circle { center: [f64; 2], radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplexitySpec {
    Low,
    Medium,
    High,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotsSpec {
    pub n_anchor: usize,
    pub starts: Vec<[f64; 2]>,
    pub goals: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub gamma: u8,
    pub sigma: f64,
    pub rho: f64,
}

/// `alpha: null` stands for no A-optimality bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintsSpec {
    pub alpha: Option<f64>,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoadmapSpec {
    pub n_samples: usize,
    pub connection_radius: f64,
    pub halton: HaltonSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HaltonSpec {
    pub bases: [u32; 2],
    pub skip: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerSpec {
    pub name: String,
    /// Per-planner overrides, e.g. `{"rrt": {"step": 0.5}}`.
    #[serde(default)]
    pub params: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedsSpec {
    pub planner: u64,
    pub noise: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RrtOverrides {
    step: f64,
    goal_bias: f64,
    max_iterations: usize,
    timestep_length: f64,
}

impl Default for RrtOverrides {
    fn default() -> Self {
        let d = RrtParams::default();
        Self { step: d.step, goal_bias: d.goal_bias, max_iterations: d.max_iterations, timestep_length: d.timestep_length }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct PotentialOverrides {
    k_att: f64,
    k_rep: f64,
    influence_radius: f64,
    k_e: f64,
    step: f64,
    max_displacement: f64,
    goal_tolerance: f64,
    stall_window: usize,
    stall_threshold: f64,
    max_iterations: usize,
    fd_step: f64,
}

impl Default for PotentialOverrides {
    fn default() -> Self {
        let d = PotentialParams::default();
        Self {
            k_att: d.k_att,
            k_rep: d.k_rep,
            influence_radius: d.influence_radius,
            k_e: d.k_e,
            step: d.step,
            max_displacement: d.max_displacement,
            goal_tolerance: d.goal_tolerance,
            stall_window: d.stall_window,
            stall_threshold: d.stall_threshold,
            max_iterations: d.max_iterations,
            fd_step: d.fd_step,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct LcgpOverrides {
    max_horizon: Option<usize>,
}

/// Typed parameters of every planner after applying the overrides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerParams {
    pub lcgp: LcgpOptions,
    pub rrt: RrtParams,
    pub potential: PotentialParams,
}

fn point(p: [f64; 2]) -> Point2 {
    Point2::new(p[0], p[1])
}

fn schema(field: &str, msg: impl Into<String>) -> BenchError {
    BenchError::Schema { field: field.to_string(), message: msg.into() }
}

impl Scenario {
    /// Parses and validates a scenario document.
    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        let s: Scenario = serde_json::from_str(text).map_err(BenchError::from_json)?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.format_version != SCENARIO_FORMAT_VERSION {
            return Err(schema("format_version", format!("unsupported version {}", self.format_version)));
        }
        if self.trials == 0 {
            return Err(schema("trials", "must be at least 1"));
        }
        if self.max_orderings == 0 {
            return Err(schema("max_orderings", "must be at least 1"));
        }
        if self.roadmap.n_samples == 0 && self.robots.starts.is_empty() {
            return Err(schema("roadmap.n_samples", "empty roadmap"));
        }
        self.kind()?;
        self.planner_params()?;
        let problem = self.problem()?;
        self.roadmap_params()?;
        let snap = NetworkSnapshot::from_points(&problem.starts, problem.n_anchor)
            .map_err(|err| schema("robots.starts", err.to_string()))?;
        if !network_satisfies(&snap, &problem.model, &problem.constraints) {
            return Err(schema("robots.starts", "start configuration violates the localizability constraints"));
        }
        Ok(())
    }

    pub fn kind(&self) -> Result<PlannerKind, BenchError> {
        PlannerKind::parse(&self.planner.name).ok_or_else(|| schema("planner.name", format!("unknown planner `{}`", self.planner.name)))
    }

    pub fn environment(&self) -> Result<Environment, BenchError> {
        let e = &self.environment;
        let bounds = Rect::new(point(e.bounds.min), point(e.bounds.max));
        let obstacles = e
            .obstacles
            .iter()
            .map(|o| match *o {
                ObstacleSpec::Rect { min, max } => Obstacle::Rect(Rect::new(point(min), point(max))),
                ObstacleSpec::Circle { center, radius } => Obstacle::Circle(Circle::new(point(center), radius)),
            })
            .collect();
        let complexity = match e.complexity {
            ComplexitySpec::Low => Complexity::Low,
            ComplexitySpec::Medium => Complexity::Medium,
            ComplexitySpec::High => Complexity::High,
        };
        Environment::new(bounds, obstacles, complexity).map_err(|err| schema("environment", err.to_string()))
    }

    pub fn model(&self) -> Result<MeasurementModel, BenchError> {
        MeasurementModel::from_gamma(self.model.gamma, self.model.sigma, self.model.rho)
            .map_err(|err| schema("model", err.to_string()))
    }

    pub fn constraints(&self) -> Result<LocalizabilityConstraints, BenchError> {
        let alpha = self.constraints.alpha.unwrap_or(f64::NEG_INFINITY);
        LocalizabilityConstraints::new(alpha, self.constraints.beta).map_err(|err| schema("constraints", err.to_string()))
    }

    pub fn problem(&self) -> Result<PlanningProblem, BenchError> {
        let r = &self.robots;
        PlanningProblem::new(
            self.environment()?,
            r.starts.iter().copied().map(point).collect(),
            r.goals.iter().copied().map(point).collect(),
            r.n_anchor,
            self.model()?,
            self.constraints()?,
        )
        .map_err(|err| schema("robots", err.to_string()))
    }

    pub fn roadmap_params(&self) -> Result<RoadmapParams, BenchError> {
        let r = &self.roadmap;
        if !(r.connection_radius > 0.0 && r.connection_radius.is_finite()) {
            return Err(schema("roadmap.connection_radius", "must be positive"));
        }
        if !lcplan::halton::bases_valid((r.halton.bases[0], r.halton.bases[1])) {
            return Err(schema("roadmap.halton.bases", "need two coprime bases >= 2"));
        }
        Ok(RoadmapParams {
            n_samples: r.n_samples,
            connection_radius: r.connection_radius,
            halton_bases: (r.halton.bases[0], r.halton.bases[1]),
            halton_skip: r.halton.skip,
        })
    }

    pub fn planner_params(&self) -> Result<PlannerParams, BenchError> {
        let obj = match &self.planner.params {
            Value::Null => serde_json::Map::new(),
            Value::Object(m) => m.clone(),
            _ => return Err(schema("planner.params", "must be an object")),
        };
        for key in obj.keys() {
            if !["lcgp", "rrt", "potential_field"].contains(&key.as_str()) {
                return Err(schema("planner.params", format!("unknown planner section `{key}`")));
            }
        }
        fn section<T: for<'de> Deserialize<'de> + Default>(
            obj: &serde_json::Map<String, Value>,
            key: &str,
        ) -> Result<T, BenchError> {
            match obj.get(key) {
                None => Ok(T::default()),
                Some(v) => serde_json::from_value(v.clone()).map_err(|e| schema(&format!("planner.params.{key}"), e.to_string())),
            }
        }
        let l: LcgpOverrides = section(&obj, "lcgp")?;
        let r: RrtOverrides = section(&obj, "rrt")?;
        let p: PotentialOverrides = section(&obj, "potential_field")?;
        Ok(PlannerParams {
            lcgp: LcgpOptions { max_horizon: l.max_horizon },
            rrt: RrtParams {
                step: r.step,
                goal_bias: r.goal_bias,
                max_iterations: r.max_iterations,
                timestep_length: r.timestep_length,
            },
            potential: PotentialParams {
                k_att: p.k_att,
                k_rep: p.k_rep,
                influence_radius: p.influence_radius,
                k_e: p.k_e,
                step: p.step,
                max_displacement: p.max_displacement,
                goal_tolerance: p.goal_tolerance,
                stall_window: p.stall_window,
                stall_threshold: p.stall_threshold,
                max_iterations: p.max_iterations,
                fd_step: p.fd_step,
            },
        })
    }

    /// The same scenario with another planner selected.
    pub fn with_planner(&self, kind: PlannerKind) -> Self {
        let mut s = self.clone();
        s.planner.name = kind.as_str().to_string();
        s
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let bytes = serde_json::to_vec(self).expect("scenario serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

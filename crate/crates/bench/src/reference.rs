//! Five reference scenarios: an open field, two small obstacles, and three
//! layouts of two large walls, with 6, 8, 8, 12 and 20 robots.

use crate::scenario::{
    BoundsSpec, ComplexitySpec, ConstraintsSpec, EnvironmentSpec, HaltonSpec, ModelSpec, ObstacleSpec, PlannerSpec,
    RoadmapSpec, RobotsSpec, Scenario, SeedsSpec, SCENARIO_FORMAT_VERSION,
};

/// Roadmap samples per unit of free area.
const SAMPLE_DENSITY: f64 = 0.6;

/// Formation slots relative to the formation centre. The first three are
/// the anchors.
fn formation(n: usize) -> Vec<[f64; 2]> {
    let mut slots = vec![[-1.0, -1.0], [1.5, -0.5], [0.0, 1.5]];
    let mut lattice = Vec::new();
    for row in -3i32..=3 {
        for col in -3i32..=3 {
            let x = f64::from(col) * 2.2 + if row % 2 == 0 { 0.0 } else { 1.1 };
            let y = f64::from(row) * 1.9;
            lattice.push([x, y]);
        }
    }
    lattice.retain(|p| slots.iter().all(|s: &[f64; 2]| ((p[0] - s[0]).powi(2) + (p[1] - s[1]).powi(2)).sqrt() > 1.0));
    lattice.sort_by(|a, b| {
        let da = a[0].hypot(a[1]);
        let db = b[0].hypot(b[1]);
        da.total_cmp(&db).then(a[0].total_cmp(&b[0])).then(a[1].total_cmp(&b[1]))
    });
    slots.extend(lattice);
    slots.truncate(n);
    slots
}

fn place(center: [f64; 2], slots: &[[f64; 2]]) -> Vec<[f64; 2]> {
    slots.iter().map(|s| [center[0] + s[0], center[1] + s[1]]).collect()
}

fn free_area(bounds: &BoundsSpec, obstacles: &[ObstacleSpec]) -> f64 {
    let total = (bounds.max[0] - bounds.min[0]) * (bounds.max[1] - bounds.min[1]);
    let blocked: f64 = obstacles
        .iter()
        .map(|o| match *o {
            ObstacleSpec::Rect { min, max } => (max[0] - min[0]) * (max[1] - min[1]),
            ObstacleSpec::Circle { radius, .. } => std::f64::consts::PI * radius * radius,
        })
        .sum();
    total - blocked
}

struct Layout {
    name: &'static str,
    n_robots: usize,
    complexity: ComplexitySpec,
    max: [f64; 2],
    obstacles: Vec<ObstacleSpec>,
    start: [f64; 2],
    goal: [f64; 2],
}

fn build(layout: Layout) -> Scenario {
    let bounds = BoundsSpec { min: [0.0, 0.0], max: layout.max };
    let slots = formation(layout.n_robots);
    let area = free_area(&bounds, &layout.obstacles);
    Scenario {
        format_version: SCENARIO_FORMAT_VERSION,
        name: layout.name.to_string(),
        environment: EnvironmentSpec { bounds, obstacles: layout.obstacles, complexity: layout.complexity },
        robots: RobotsSpec { n_anchor: 3, starts: place(layout.start, &slots), goals: place(layout.goal, &slots) },
        model: ModelSpec { gamma: 1, sigma: 0.5, rho: 8.0 },
        constraints: ConstraintsSpec { alpha: None, beta: 0.1 },
        roadmap: RoadmapSpec {
            n_samples: (area * SAMPLE_DENSITY).round() as usize,
            connection_radius: 2.0,
            halton: HaltonSpec { bases: [2, 3], skip: 0 },
        },
        planner: PlannerSpec { name: "lcgp".to_string(), params: serde_json::Value::Null },
        seeds: SeedsSpec { planner: 1, noise: 1 },
        max_orderings: 10,
        trials: 10,
    }
}

fn rect(min: [f64; 2], max: [f64; 2]) -> ObstacleSpec {
    ObstacleSpec::Rect { min, max }
}

/// Cases 1 to 5, in order.
pub fn reference_scenarios() -> Vec<Scenario> {
    vec![
        build(Layout {
            name: "case1",
            n_robots: 6,
            complexity: ComplexitySpec::Low,
            max: [50.0, 30.0],
            obstacles: Vec::new(),
            start: [8.0, 10.0],
            goal: [41.0, 19.0],
        }),
        // Two plates square across the lanes of the formation's outer rows.
        build(Layout {
            name: "case2",
            n_robots: 8,
            complexity: ComplexitySpec::Medium,
            max: [60.0, 40.0],
            obstacles: vec![rect([20.0, 21.0], [22.0, 24.0]), rect([36.0, 16.0], [38.0, 19.0])],
            start: [8.0, 20.0],
            goal: [52.0, 20.0],
        }),
        // Each wall closes one side of the corridor the formation sweeps.
        build(Layout {
            name: "case3",
            n_robots: 8,
            complexity: ComplexitySpec::High,
            max: [100.0, 50.0],
            obstacles: vec![rect([32.0, 26.0], [38.0, 50.0]), rect([62.0, 0.0], [68.0, 23.5])],
            start: [8.0, 25.0],
            goal: [92.0, 25.0],
        }),
        build(Layout {
            name: "case4",
            n_robots: 12,
            complexity: ComplexitySpec::High,
            max: [100.0, 60.0],
            obstacles: vec![rect([28.0, 0.0], [34.0, 28.5]), rect([63.0, 31.5], [69.0, 60.0])],
            start: [8.0, 30.0],
            goal: [92.0, 30.0],
        }),
        build(Layout {
            name: "case5",
            n_robots: 20,
            complexity: ComplexitySpec::High,
            max: [110.0, 60.0],
            obstacles: vec![rect([33.0, 0.0], [39.0, 27.5]), rect([71.0, 32.5], [77.0, 60.0])],
            start: [10.0, 30.0],
            goal: [100.0, 30.0],
        }),
    ]
}

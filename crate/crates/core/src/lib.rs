//! Localizability-constrained planning for networks of robots that localize
//! each other through inter-robot range measurements.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! - [`network`]: robot snapshots, the sensing-horizon measurement graph and
//!   noisy range simulation.
//! - [`fim`]: the range-only Fisher information matrix, its spectrum, the A-
//!   and E-optimality measures and the localizability-constraint indicator.
//! - [`halton`], [`geometry`] and [`roadmap`]: obstacle environments and the
//!   probabilistic roadmap all robots share.
//! - [`csets`]: per-robot reachable / connected / valid constraint sets.
//! - [`planners`]: the constrained prioritized planner and three baselines.
//! - [`rangeloc`]: least-squares range-only localization and trajectory
//!   error metrics.
//!
//! File formats, the command line and wall-clock timing live in the
//! `lcplan-bench` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod csets;
pub mod error;
pub mod fim;
pub mod geometry;
pub mod halton;
pub mod linalg;
pub mod network;
pub mod planners;
pub mod rangeloc;
pub mod roadmap;

pub use error::{Error, Result};
pub use fim::{Fim, LocalizabilityConstraints, OptimalityReport};
pub use geometry::{Circle, Obstacle, Point2, Rect};
pub use network::{MeasurementGraph, MeasurementModel, NetworkSnapshot, NoiseKind};
pub use roadmap::{Complexity, Environment, Roadmap};

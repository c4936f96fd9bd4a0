//! Scenario files, run records, metrics tables and benchmark orchestration
//! for the `lcplan` planners. The `lcplan` binary is a thin wrapper.

pub mod benchmark;
pub mod error;
pub mod io;
pub mod metrics;
pub mod record;
pub mod reference;
pub mod runner;
pub mod scenario;

pub use error::BenchError;
pub use scenario::Scenario;

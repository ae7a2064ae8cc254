//! Monte Carlo simulation and analysis of how a conjunctive screening
//! question is put to a crowd: as one complex question, as simple questions
//! in the same task, or as simple questions in separate tasks.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: shared domain types, config validation, Beta moments
//! * [`datagen`]: synthetic item pools with ground-truth predicate bits
//! * [`worker`]: worker accuracy sampling and noisy votes
//! * [`aggregation`]: majority voting, conjunction, hybrid composition
//! * [`metrics`]: confusion counts and F-beta
//! * [`engine`]: trials, experiments, grid sweeps, result CSV
//! * [`stats`]: Kruskal-Wallis, Dunn, Benjamini-Hochberg
//! * [`ingest`]: judgment logs and per-condition crowd analyses

pub mod aggregation;
pub mod datagen;
pub mod engine;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod stats;
pub mod stream;
pub mod worker;

pub use engine::{run_condition, run_experiment, sweep, ConditionResult, SweepGrid};
pub use model::{SimulationConfig, TaskDesign, TieRule};

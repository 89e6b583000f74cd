//! Experiment harness for the `imoea` optimizer: experiment specs, seeded
//! parallel batches, summary statistics, CSV tables and SVG plots.

pub mod config;
pub mod experiment;
pub mod output;
pub mod plot;
pub mod stats;

pub use config::{Algorithm, ExperimentSpec, Indicator};
pub use experiment::{execute, run_experiment, ExperimentReport, ReferenceFront, RunOutcome};
pub use plot::emit_front_plot;
pub use stats::{aggregate_stats, rank_sum_compare, Sense, Sign, Summary};

//! Many-objective optimization by decomposition with adaptively adjusted
//! weight vectors.
//!
//! The crate provides the optimizer ([`run`]), its building blocks
//! (scalarization, variation, the external archive, weight adaptation),
//! quality indicators, and a registry of benchmark problems.

pub mod adaptation;
pub mod archive;
pub mod decomposition;
pub mod error;
pub mod indicators;
pub mod model;
pub mod optimizer;
pub mod problems;
pub mod variation;

pub use adaptation::{AdaptationConfig, TriggerPolarity};
pub use archive::Archive;
pub use decomposition::{TchebycheffForm, WeightMethod, WeightSet};
pub use error::{Error, Result};
pub use indicators::{hypervolume, igd, HvMethod};
pub use model::{dominates, IdealPoint, Individual, ObjectiveBounds, Problem, RngStream};
pub use optimizer::{default_budget, run, run_observed, GenerationRecord, Replacement, RunConfig, RunTrace, Snapshot};
pub use problems::{parse_problem, Benchmark, ProblemInstance};
pub use variation::VariationConfig;

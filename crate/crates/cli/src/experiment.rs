//! Seeded batch execution of an experiment spec.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use imoea::{hypervolume, igd, HvMethod, ObjectiveBounds, Problem, ProblemInstance, RngStream, RunConfig, RunTrace};
use rayon::prelude::*;

use crate::config::{Algorithm, ExperimentSpec, Indicator};
use crate::output;

/// Stream id of the Monte Carlo hypervolume sampler, kept apart from the
/// optimizer's own stream.
const HV_STREAM: u64 = 0x4856;

/// One finished run with its indicator values.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub cell: usize,
    pub algorithm: Algorithm,
    pub seed: u64,
    /// In the spec's indicator order.
    pub values: Vec<(Indicator, f64)>,
    pub trace: RunTrace,
}

impl RunOutcome {
    pub fn value(&self, indicator: Indicator) -> Option<f64> {
        self.values.iter().find(|(i, _)| *i == indicator).map(|&(_, v)| v)
    }
}

/// Everything an experiment produced.
#[derive(Debug)]
pub struct ExperimentReport {
    /// Ordered by cell, then algorithm, then seed, as listed in the spec.
    pub outcomes: Vec<RunOutcome>,
    pub files: Vec<PathBuf>,
}

impl ExperimentReport {
    /// Indicator values of one cell and algorithm, in seed order.
    pub fn values(&self, cell: usize, algorithm: Algorithm, indicator: Indicator) -> Vec<f64> {
        self.outcomes
            .iter()
            .filter(|o| o.cell == cell && o.algorithm == algorithm)
            .filter_map(|o| o.value(indicator))
            .collect()
    }
}

/// The optimizer configuration for one run of the experiment.
pub fn run_config(spec: &ExperimentSpec, cell: &ProblemInstance, algorithm: Algorithm, seed: u64) -> RunConfig {
    let mut cfg = RunConfig::new(Arc::new(cell.clone()), seed);
    cfg.adaptive = algorithm.adaptive();
    if let Some(n) = spec.population {
        cfg.population_size = n;
    }
    if let Some(e) = spec.evaluations {
        cfg.evaluations = e;
    }
    cfg
}

/// Reference front used for IGD and the HV normalization.
pub struct ReferenceFront {
    pub points: Vec<Vec<f64>>,
    pub bounds: ObjectiveBounds,
}

impl ReferenceFront {
    pub fn sample(problem: &ProblemInstance, n: usize) -> Result<Self> {
        let points = problem.sample_front(n)?;
        let bounds = ObjectiveBounds::from_points(points.iter().map(Vec::as_slice))
            .context("reference front is empty")?;
        Ok(ReferenceFront { points, bounds })
    }

    pub fn igd(&self, solutions: &[Vec<f64>]) -> Result<f64> {
        Ok(igd(solutions, &self.points)?)
    }

    /// Hypervolume after scaling the front's ideal/nadir box to the unit cube,
    /// against the reference point (1.1, ..., 1.1).
    pub fn hv(&self, solutions: &[Vec<f64>], seed: u64) -> Result<f64> {
        let normalized = self.bounds.normalize_all(solutions.iter().map(Vec::as_slice));
        let m = self.points[0].len();
        let reference = vec![1.1; m];
        let mut rng = RngStream::substream(seed, HV_STREAM);
        Ok(hypervolume(&normalized, &reference, HvMethod::default_for(m), &mut rng)?)
    }
}

/// Fails unless files can be created in `dir` (creating it if needed).
pub fn ensure_writable(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let probe = dir.join(".imoea-write-check");
    fs::write(&probe, b"").with_context(|| format!("output directory {} is not writable", dir.display()))?;
    fs::remove_file(&probe).ok();
    Ok(())
}

/// Runs every (cell, algorithm, seed) combination without writing anything.
pub fn execute(spec: &ExperimentSpec) -> Result<Vec<RunOutcome>> {
    spec.validate()?;
    let fronts = spec
        .cells
        .iter()
        .map(|c| ReferenceFront::sample(c, spec.front_samples))
        .collect::<Result<Vec<_>>>()?;
    // Reject bad budgets before spending any evaluations.
    for cell in &spec.cells {
        run_config(spec, cell, spec.algorithms[0], spec.seed).resolve()?;
    }

    let mut tasks = Vec::new();
    for cell in 0..spec.cells.len() {
        for &algorithm in &spec.algorithms {
            for r in 0..spec.runs {
                tasks.push((cell, algorithm, spec.seed.wrapping_add(r as u64)));
            }
        }
    }
    let work = || {
        tasks
            .par_iter()
            .map(|&(cell, algorithm, seed)| {
                let cfg = run_config(spec, &spec.cells[cell], algorithm, seed);
                let mut trace = imoea::run(&cfg)?;
                let front = &fronts[cell];
                let ea = trace.archive_objectives();
                let values = spec
                    .indicators
                    .iter()
                    .map(|&ind| {
                        let v = match ind {
                            Indicator::Igd => front.igd(&ea)?,
                            Indicator::Hv => front.hv(&ea, seed)?,
                        };
                        Ok((ind, v))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if !spec.timing {
                    trace.wall_time = 0.0;
                }
                Ok(RunOutcome { cell, algorithm, seed, values, trace })
            })
            .collect::<Result<Vec<_>>>()
    };
    // `collect` on an indexed parallel iterator keeps task order, so the
    // result does not depend on which worker finished first.
    match spec.threads {
        Some(t) => rayon::ThreadPoolBuilder::new().num_threads(t).build()?.install(work),
        None => work(),
    }
}

/// Executes the experiment and writes raw, summary, trend and front files
/// under `spec.out`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    ensure_writable(&spec.out)?;
    let outcomes = execute(spec)?;
    let files = output::write_all(spec, &outcomes)?;
    Ok(ExperimentReport { outcomes, files })
}

//! The main optimization loop and its fixed-weight baseline.

use std::sync::Arc;
use std::time::Instant;

use crate::adaptation::{adjust_weights, should_adjust, threshold, AdaptationConfig};
use crate::archive::Archive;
use crate::decomposition::{
    build_direction_neighborhoods, generate_weights, ws_transform, Neighborhoods, TchebycheffForm, WeightMethod, WeightSet,
};
use crate::error::{Error, Result};
use crate::indicators::{improvement_rate, r2_new, R2_REFERENCE};
use crate::model::{IdealPoint, Individual, ObjectiveBounds, Problem, RngStream};
use crate::variation::{mating_pool, offspring, VariationConfig};

/// Which population slots an offspring may replace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Replacement {
    /// Only the slot of the subproblem that produced it.
    Slot,
    /// Up to `max` members of the mating pool, visited in random order.
    Neighborhood { max: usize },
}

impl Default for Replacement {
    /// Two replacements per offspring; slot-only replacement stalls on the
    /// multimodal problems.
    fn default() -> Self {
        Replacement::Neighborhood { max: 2 }
    }
}

/// Population size and evaluation budget used when none is given.
pub fn default_budget(m: usize) -> (usize, usize) {
    match m {
        0..=5 => (120, 30_000),
        6..=10 => (169, 30_000),
        _ => (220, 60_000),
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub problem: Arc<dyn Problem>,
    /// Requested population size; the weight generator picks the nearest
    /// size it can produce.
    pub population_size: usize,
    /// Total evaluation budget; Tmax = floor(budget / N).
    pub evaluations: usize,
    /// Neighborhood size T; `None` means ceil(N / 10).
    pub neighborhood_size: Option<usize>,
    /// `None` picks per objective count.
    pub weight_method: Option<WeightMethod>,
    pub variation: VariationConfig,
    pub adaptation: AdaptationConfig,
    pub tchebycheff: TchebycheffForm,
    /// Map the generated weights through the WS-transformation before the
    /// first generation, so that each multiplicative Tchebycheff subproblem
    /// points along its original weight direction.
    pub ws_initial_weights: bool,
    pub replacement: Replacement,
    /// Niche neighbor order for archive trimming; `None` means m.
    pub archive_k: Option<usize>,
    pub seed: u64,
    /// false runs the fixed-weight baseline.
    pub adaptive: bool,
}

impl RunConfig {
    /// Defaults for the problem's objective count.
    pub fn new(problem: Arc<dyn Problem>, seed: u64) -> Self {
        let (population_size, evaluations) = default_budget(problem.num_objectives());
        RunConfig {
            problem,
            population_size,
            evaluations,
            neighborhood_size: None,
            weight_method: None,
            variation: VariationConfig::default(),
            adaptation: AdaptationConfig::default(),
            tchebycheff: TchebycheffForm::default(),
            ws_initial_weights: true,
            replacement: Replacement::default(),
            archive_k: None,
            seed,
            adaptive: true,
        }
    }

    fn validate_basic(&self) -> Result<()> {
        let m = self.problem.num_objectives();
        if m < 2 {
            return Err(Error::Config(format!("need at least 2 objectives, got {m}")));
        }
        if self.population_size < m {
            return Err(Error::Config(format!(
                "population size {} is smaller than the objective count {m}",
                self.population_size
            )));
        }
        if let Some(0) = self.archive_k {
            return Err(Error::Config("archive_k must be positive".into()));
        }
        if let Replacement::Neighborhood { max: 0 } = self.replacement {
            return Err(Error::Config("neighborhood replacement limit must be positive".into()));
        }
        self.variation.validate()
    }

    fn validate_sized(&self, n: usize) -> Result<()> {
        let m = self.problem.num_objectives();
        if self.evaluations < n {
            return Err(Error::Config(format!("budget {} allows no generation with N = {n}", self.evaluations)));
        }
        let t = self.neighborhood_size_for(n);
        if t == 0 || t > n {
            return Err(Error::Config(format!("neighborhood size {t} must be in 1..={n}")));
        }
        if self.adaptive {
            self.adaptation.validate(n, m)?;
        }
        Ok(())
    }

    /// Weight set size N and Tmax this config resolves to, without running.
    pub fn resolve(&self) -> Result<(usize, usize)> {
        self.validate_basic()?;
        let weights = self.initial_weights(&mut RngStream::new(self.seed))?;
        let n = weights.len();
        self.validate_sized(n)?;
        Ok((n, self.evaluations / n))
    }

    pub fn neighborhood_size_for(&self, n: usize) -> usize {
        self.neighborhood_size.unwrap_or_else(|| n.div_ceil(10))
    }

    fn initial_weights(&self, rng: &mut RngStream) -> Result<WeightSet> {
        let m = self.problem.num_objectives();
        let method = self.weight_method.unwrap_or_else(|| WeightMethod::default_for(m));
        let weights = generate_weights(m, self.population_size, method, rng)?;
        if !self.ws_initial_weights {
            return Ok(weights);
        }
        let origin = vec![0.0; m];
        WeightSet::from_vectors(weights.iter().map(|w| ws_transform(w, &origin)).collect())
    }
}

/// One generation's summary.
#[derive(Clone, Debug, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    /// R2new of the archive after the generation.
    pub r2: f64,
    /// Relative change against the previous generation; absent for the first.
    pub rate: Option<f64>,
    pub adjusted: bool,
    pub archive_size: usize,
    pub ideal: Vec<f64>,
    pub evaluations: usize,
}

#[derive(Clone, Debug)]
pub struct RunTrace {
    pub records: Vec<GenerationRecord>,
    /// Objectives of the random initial population.
    pub initial_objectives: Vec<Vec<f64>>,
    pub archive: Vec<Individual>,
    pub population: Vec<Individual>,
    pub weights: Vec<Vec<f64>>,
    pub evaluations: usize,
    pub tmax: usize,
    /// Seconds; the only field that differs between identical runs.
    pub wall_time: f64,
}

impl RunTrace {
    /// Equality of everything except wall time.
    pub fn same_outcome(&self, other: &RunTrace) -> bool {
        self.records == other.records
            && self.initial_objectives == other.initial_objectives
            && self.archive == other.archive
            && self.population == other.population
            && self.weights == other.weights
            && self.evaluations == other.evaluations
            && self.tmax == other.tmax
    }

    pub fn archive_objectives(&self) -> Vec<Vec<f64>> {
        self.archive.iter().map(|i| i.f.clone()).collect()
    }

    pub fn adjustment_count(&self) -> usize {
        self.records.iter().filter(|r| r.adjusted).count()
    }
}

/// Read-only view of the run state at the end of a generation.
pub struct Snapshot<'a> {
    pub record: &'a GenerationRecord,
    pub tmax: usize,
    pub population: &'a [Individual],
    pub weights: &'a WeightSet,
    pub neighborhoods: &'a Neighborhoods,
    pub archive: &'a Archive,
    pub ideal: &'a IdealPoint,
}

pub fn run(cfg: &RunConfig) -> Result<RunTrace> {
    run_observed(cfg, |_| {})
}

/// Runs the optimizer, calling `observer` after every generation.
pub fn run_observed<F>(cfg: &RunConfig, mut observer: F) -> Result<RunTrace>
where
    F: FnMut(&Snapshot<'_>),
{
    let started = Instant::now();
    cfg.validate_basic()?;
    let problem = cfg.problem.as_ref();
    let m = problem.num_objectives();
    let mut rng = RngStream::new(cfg.seed);

    let mut weights = cfg.initial_weights(&mut rng)?;
    let n = weights.len();
    cfg.validate_sized(n)?;
    let tmax = cfg.evaluations / n;
    let t = cfg.neighborhood_size_for(n);
    let archive_cap = 2 * n;
    let archive_k = cfg.archive_k.unwrap_or(m);
    let nus = cfg.adaptation.nus_for(n);
    let k_sparsity = cfg.adaptation.k_for(m);
    let (lower, upper) = (problem.lower().to_vec(), problem.upper().to_vec());

    let mut population = Vec::with_capacity(n);
    for _ in 0..n {
        let x: Vec<f64> = lower.iter().zip(&upper).map(|(&lo, &hi)| rng.range(lo, hi)).collect();
        population.push(Individual::evaluate(problem, x)?);
    }
    let mut evaluations = n;
    let initial_objectives: Vec<Vec<f64>> = population.iter().map(|p| p.f.clone()).collect();
    let mut ideal = IdealPoint::from_points(population.iter().map(|p| p.f.as_slice()))?;
    let mut neighborhoods = build_direction_neighborhoods(&weights, t, cfg.tchebycheff)?;
    let mut archive = Archive::from_individuals(&population);
    if archive.len() > archive_cap {
        archive.trim(archive_cap, archive_k)?;
    }

    let reference = vec![R2_REFERENCE; m];
    let mut records = Vec::with_capacity(tmax);
    let mut last_r2: Option<f64> = None;

    for gen in 0..tmax {
        for i in 0..n {
            let pool = mating_pool(i, &neighborhoods, n, cfg.variation.neighborhood_prob, &mut rng);
            let (a, b) = pool.pick_two(&mut rng);
            let x = offspring(&population[a].x, &population[b].x, &cfg.variation, &lower, &upper, &mut rng);
            let child = Individual::evaluate(problem, x)?;
            evaluations += 1;
            ideal.update(&child.f)?;
            let z = ideal.as_slice();
            match cfg.replacement {
                Replacement::Slot => {
                    let w = weights.get(i);
                    if cfg.tchebycheff.eval(&child.f, w, z) <= cfg.tchebycheff.eval(&population[i].f, w, z) {
                        population[i] = child.clone();
                    }
                }
                Replacement::Neighborhood { max } => {
                    let mut order = pool.to_vec();
                    // Fisher–Yates, drawing from the run stream.
                    for s in (1..order.len()).rev() {
                        order.swap(s, rng.index(s + 1));
                    }
                    let mut replaced = 0;
                    for j in order {
                        if replaced == max {
                            break;
                        }
                        let w = weights.get(j);
                        if cfg.tchebycheff.eval(&child.f, w, z) <= cfg.tchebycheff.eval(&population[j].f, w, z) {
                            population[j] = child.clone();
                            replaced += 1;
                        }
                    }
                }
            }
            archive.insert(child);
        }
        if archive.len() > archive_cap {
            archive.trim(archive_cap, archive_k)?;
        }

        let bounds = ObjectiveBounds::from_points(archive.objectives())
            .ok_or_else(|| Error::Empty("archive emptied during the run".into()))?;
        let normalized = bounds.normalize_all(archive.objectives());
        let r2 = r2_new(&normalized, weights.as_vecs(), &reference, m as f64)?;
        let rate = last_r2.map(|last| improvement_rate(r2, last));
        last_r2 = Some(r2);

        let mut adjusted = false;
        if let (true, Some(rate)) = (cfg.adaptive, rate) {
            let th = threshold(gen, tmax, m, cfg.adaptation.phase_split);
            if should_adjust(gen, tmax, rate, th, &cfg.adaptation) {
                let (nb, _) = adjust_weights(
                    &mut population,
                    &mut weights,
                    &archive,
                    &ideal,
                    nus,
                    k_sparsity,
                    t,
                    cfg.tchebycheff,
                )?;
                neighborhoods = nb;
                adjusted = true;
            }
        }

        records.push(GenerationRecord {
            generation: gen,
            r2,
            rate,
            adjusted,
            archive_size: archive.len(),
            ideal: ideal.as_slice().to_vec(),
            evaluations,
        });
        observer(&Snapshot {
            record: records.last().expect("just pushed"),
            tmax,
            population: &population,
            weights: &weights,
            neighborhoods: &neighborhoods,
            archive: &archive,
            ideal: &ideal,
        });
    }

    Ok(RunTrace {
        records,
        initial_objectives,
        archive: archive.into_members(),
        population,
        weights: weights.as_vecs().to_vec(),
        evaluations,
        tmax,
        wall_time: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::dominates;
    use crate::problems::Benchmark;

    fn small(kind: Benchmark, m: usize, seed: u64) -> RunConfig {
        let mut cfg = RunConfig::new(Arc::new(kind.instance(m).unwrap()), seed);
        cfg.population_size = 20;
        cfg.evaluations = 2_000;
        cfg
    }

    #[test]
    fn degenerate_operators_freeze_the_population() {
        let mut cfg = small(Benchmark::Dtlz1, 3, 5);
        cfg.adaptive = false;
        cfg.neighborhood_size = Some(1);
        cfg.variation.neighborhood_prob = 1.0;
        cfg.variation.crossover_prob = 0.0;
        cfg.variation.mutation_prob = Some(0.0);
        let mut first: Option<Vec<Individual>> = None;
        let trace = run_observed(&cfg, |s| {
            let pop = first.get_or_insert_with(|| s.population.to_vec());
            assert_eq!(pop.as_slice(), s.population);
        })
        .unwrap();
        let initial: Vec<Individual> = trace.initial_objectives.iter().map(|f| Individual::new(vec![], f.clone())).collect();
        let expected = Archive::from_individuals(&initial);
        let got: Vec<&Vec<f64>> = trace.archive.iter().map(|i| &i.f).collect();
        let want: Vec<&Vec<f64>> = expected.members().iter().map(|i| &i.f).collect();
        assert_eq!(got, want);
        assert_eq!(trace.population.iter().map(|p| p.f.clone()).collect::<Vec<_>>(), trace.initial_objectives);
    }

    #[test]
    fn same_seed_same_trace() {
        let cfg = small(Benchmark::Dtlz7, 3, 9);
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert!(a.same_outcome(&b));
        let c = run(&RunConfig { seed: 10, ..cfg }).unwrap();
        assert!(!a.same_outcome(&c));
    }

    #[test]
    fn structural_invariants_hold_every_generation() {
        for kind in [Benchmark::Dtlz5, Benchmark::Idtlz2, Benchmark::Maf9] {
            let cfg = small(kind, 4, 3);
            let (n, tmax) = cfg.resolve().unwrap();
            let mut last_ideal: Option<Vec<f64>> = None;
            let trace = run_observed(&cfg, |s| {
                assert_eq!(s.population.len(), n);
                assert_eq!(s.weights.len(), n);
                assert!(s.archive.len() <= 2 * n);
                let ea = s.archive.members();
                for a in ea {
                    assert!(ea.iter().all(|b| !dominates(&b.f, &a.f)));
                }
                if let Some(prev) = &last_ideal {
                    assert!(s.ideal.as_slice().iter().zip(prev).all(|(a, b)| a <= b));
                }
                last_ideal = Some(s.ideal.as_slice().to_vec());
                let g = s.record.generation as f64;
                if s.record.adjusted {
                    assert!(g >= 0.2 * tmax as f64 && g <= 0.9 * tmax as f64);
                }
            })
            .unwrap();
            assert_eq!(trace.records.len(), tmax);
            assert_eq!(trace.evaluations, n + tmax * n);
            assert!(trace.evaluations <= cfg.evaluations + n);
        }
    }

    #[test]
    fn fixed_baseline_keeps_its_weights() {
        let mut cfg = small(Benchmark::Dtlz5, 3, 1);
        cfg.adaptive = false;
        let mut initial: Option<WeightSet> = None;
        let trace = run_observed(&cfg, |s| {
            let w = initial.get_or_insert_with(|| s.weights.clone());
            assert_eq!(w, s.weights);
        })
        .unwrap();
        assert_eq!(trace.adjustment_count(), 0);
    }

    #[test]
    fn adaptive_run_adjusts_inside_the_window() {
        let cfg = small(Benchmark::Dtlz5, 3, 2);
        let trace = run(&cfg).unwrap();
        assert!(trace.adjustment_count() > 0);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut cfg = small(Benchmark::Dtlz1, 3, 0);
        cfg.evaluations = 5;
        assert!(matches!(run(&cfg), Err(Error::Config(_))));
        let mut cfg = small(Benchmark::Dtlz1, 3, 0);
        cfg.neighborhood_size = Some(1000);
        assert!(run(&cfg).is_err());
        let mut cfg = small(Benchmark::Dtlz1, 3, 0);
        cfg.variation.crossover_prob = 2.0;
        assert!(run(&cfg).is_err());
    }

    #[test]
    fn slot_replacement_runs() {
        let mut cfg = small(Benchmark::Dtlz1, 3, 4);
        cfg.replacement = Replacement::Slot;
        let trace = run(&cfg).unwrap();
        assert!(!trace.archive.is_empty());
    }
}

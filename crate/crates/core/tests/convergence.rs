use std::sync::Arc;

use imoea::{igd, parse_problem, run, Problem, RunConfig};

#[test]
fn dtlz1_archive_beats_the_initial_population() {
    let problem = Arc::new(parse_problem("DTLZ1:m=5", None).unwrap());
    let front = problem.sample_front(2000).unwrap();
    let improved = (0..30)
        .filter(|&seed| {
            let trace = run(&RunConfig::new(problem.clone(), seed)).unwrap();
            let start = igd(&trace.initial_objectives, &front).unwrap();
            let end = igd(&trace.archive_objectives(), &front).unwrap();
            end < start
        })
        .count();
    assert!(improved >= 29, "only {improved}/30 runs improved");
}

#[test]
fn every_registered_problem_runs_at_three_objectives() {
    for kind in imoea::Benchmark::ALL {
        let problem = Arc::new(kind.instance(3).unwrap());
        let cfg = RunConfig {
            population_size: 15,
            evaluations: 450,
            ..RunConfig::new(problem.clone(), 7)
        };
        let trace = run(&cfg).unwrap();
        assert_eq!(trace.records.len(), trace.tmax, "{}", problem.name());
        assert!(!trace.archive.is_empty());
        assert!(trace.archive.iter().all(|i| i.f.iter().all(|v| v.is_finite())));
    }
}

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use imoea::parse_problem;
use imoea_cli::config::{Algorithm, ExperimentSpec, Indicator, OUT_DIR_ENV};
use imoea_cli::output::{read_front_csv, read_raw, sci};
use imoea_cli::stats::{aggregate_stats, rank_sum_compare};
use imoea_cli::{emit_front_plot, run_experiment};

#[derive(Parser)]
#[command(name = "imoea", version, about = "Adaptive-weight many-objective optimizer and experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one problem with one or more algorithms.
    Run {
        /// Benchmark name, optionally with ":m=M".
        #[arg(long)]
        problem: String,
        /// Number of objectives (unless given in --problem).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_delimiter = ',', default_value = "imoea")]
        algo: Vec<Algorithm>,
        #[arg(long, default_value_t = 11)]
        runs: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "igd")]
        indicators: Vec<Indicator>,
        #[arg(long, env = OUT_DIR_ENV, default_value = "results")]
        out: PathBuf,
        /// Evaluation budget; defaults by objective count.
        #[arg(long)]
        evaluations: Option<usize>,
        /// Population size; defaults by objective count.
        #[arg(long)]
        population: Option<usize>,
        /// Record wall time in the raw CSV (makes it non-reproducible).
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run an experiment described by a TOML spec.
    Suite {
        #[arg(long)]
        spec: PathBuf,
        /// Overrides the spec's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a front CSV as parallel coordinates.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare two raw result files cell by cell.
    Stats {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            problem,
            m,
            algo,
            runs,
            seed,
            indicators,
            out,
            evaluations,
            population,
            timing,
            threads,
        } => {
            let mut spec = ExperimentSpec::new(vec![parse_problem(&problem, m)?]);
            spec.algorithms = algo;
            spec.runs = runs;
            spec.seed = seed;
            spec.indicators = indicators;
            spec.out = out;
            spec.evaluations = evaluations;
            spec.population = population;
            spec.timing = timing;
            spec.threads = threads;
            report(&spec)
        }
        Command::Suite { spec, out } => {
            let mut spec = ExperimentSpec::from_file(&spec)?;
            if let Some(out) = out {
                spec.out = out;
            }
            report(&spec)
        }
        Command::Plot { input, out } => {
            let points = read_front_csv(&input)?;
            emit_front_plot(&points, &out)?;
            println!("wrote {} ({} solutions)", out.display(), points.len());
            Ok(())
        }
        Command::Stats { a, b, alpha } => compare_files(&a, &b, alpha),
    }
}

fn report(spec: &ExperimentSpec) -> Result<()> {
    let report = run_experiment(spec)?;
    let summary = spec.out.join("summary.csv");
    print!("{}", std::fs::read_to_string(&summary)?);
    eprintln!("{} runs, {} files under {}", report.outcomes.len(), report.files.len(), spec.out.display());
    Ok(())
}

fn compare_files(a: &std::path::Path, b: &std::path::Path, alpha: f64) -> Result<()> {
    type Key = (String, usize, Indicator);
    let group = |path: &std::path::Path| -> Result<BTreeMap<Key, Vec<f64>>> {
        let mut map: BTreeMap<Key, Vec<f64>> = BTreeMap::new();
        for row in read_raw(path)? {
            map.entry((row.problem, row.m, row.indicator)).or_default().push(row.value);
        }
        Ok(map)
    };
    let (ga, gb) = (group(a)?, group(b)?);
    let mut matched = 0;
    println!("problem,m,indicator,median_a,median_b,sign");
    for (key, va) in &ga {
        let Some(vb) = gb.get(key) else { continue };
        matched += 1;
        let sign = if va.len() >= 2 && vb.len() >= 2 {
            rank_sum_compare(va, vb, alpha, key.2.sense())?.to_string()
        } else {
            String::new()
        };
        println!(
            "{},{},{},{},{},{}",
            key.0,
            key.1,
            key.2,
            sci(aggregate_stats(va)?.median),
            sci(aggregate_stats(vb)?.median),
            sign
        );
    }
    if matched == 0 {
        bail!("{} and {} share no (problem, m, indicator) cell", a.display(), b.display());
    }
    Ok(())
}

//! CSV artifacts.
//!
//! Raw rows go to `<out>/<algorithm>.csv`:
//! `problem,m,algorithm,seed,indicator,value,evaluations,wall_time`.
//! `summary.csv` holds one row per (problem, m, algorithm, indicator) with
//! median, mean, population std and, on the imoea rows, the rank-sum sign
//! against moead-fixed. `trend_<problem>_m<m>.csv` holds the per-generation
//! R2 values and improvement rates, and `fronts/` the final archives.
//! Numbers use scientific notation with five significant digits.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use imoea::Problem;

use crate::config::{Algorithm, ExperimentSpec, Indicator};
use crate::experiment::RunOutcome;
use crate::stats::{aggregate_stats, rank_sum_compare};

pub const RAW_HEADER: [&str; 8] = ["problem", "m", "algorithm", "seed", "indicator", "value", "evaluations", "wall_time"];
pub const SUMMARY_HEADER: [&str; 9] = ["problem", "m", "algorithm", "indicator", "runs", "median", "mean", "std", "vs_fixed"];
pub const TREND_HEADER: [&str; 6] = ["algorithm", "seed", "generation", "r2", "rate", "adjusted"];

/// Significance level of the summary's rank-sum column.
pub const ALPHA: f64 = 0.05;

/// Five significant digits, e.g. `1.9312e-2`.
pub fn sci(x: f64) -> String {
    format!("{x:.4e}")
}

/// One row of a raw results file.
#[derive(Clone, Debug, PartialEq)]
pub struct RawRow {
    pub problem: String,
    pub m: usize,
    pub algorithm: String,
    pub seed: u64,
    pub indicator: Indicator,
    pub value: f64,
    pub evaluations: usize,
    pub wall_time: f64,
}

pub fn raw_path(out: &Path, algorithm: Algorithm) -> PathBuf {
    out.join(format!("{}.csv", algorithm.name()))
}

pub fn trend_path(out: &Path, problem: &str, m: usize) -> PathBuf {
    out.join(format!("trend_{problem}_m{m}.csv"))
}

pub fn front_path(out: &Path, problem: &str, m: usize, algorithm: Algorithm, seed: u64) -> PathBuf {
    out.join("fronts").join(format!("{problem}_m{m}_{}_seed{seed}.csv", algorithm.name()))
}

/// Writes every artifact and returns the paths in creation order.
pub fn write_all(spec: &ExperimentSpec, outcomes: &[RunOutcome]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for &algorithm in &spec.algorithms {
        let path = raw_path(&spec.out, algorithm);
        write_raw(&path, spec, outcomes.iter().filter(|o| o.algorithm == algorithm))?;
        files.push(path);
    }
    let path = spec.out.join("summary.csv");
    write_summary(&path, spec, outcomes)?;
    files.push(path);
    for (c, cell) in spec.cells.iter().enumerate() {
        let name = cell.kind().name();
        let m = cell_m(spec, c);
        let path = trend_path(&spec.out, name, m);
        write_trend(&path, outcomes.iter().filter(|o| o.cell == c))?;
        files.push(path);
    }
    fs::create_dir_all(spec.out.join("fronts"))?;
    for o in outcomes {
        let cell = &spec.cells[o.cell];
        let path = front_path(&spec.out, cell.kind().name(), cell_m(spec, o.cell), o.algorithm, o.seed);
        write_front_csv(&path, &o.trace.archive_objectives())?;
        files.push(path);
    }
    Ok(files)
}

fn cell_m(spec: &ExperimentSpec, cell: usize) -> usize {
    spec.cells[cell].num_objectives()
}

fn write_raw<'a>(path: &Path, spec: &ExperimentSpec, outcomes: impl Iterator<Item = &'a RunOutcome>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(RAW_HEADER)?;
    for o in outcomes {
        let m = cell_m(spec, o.cell);
        for &(indicator, value) in &o.values {
            w.write_record([
                spec.cells[o.cell].kind().name().to_string(),
                m.to_string(),
                o.algorithm.name().to_string(),
                o.seed.to_string(),
                indicator.name().to_string(),
                sci(value),
                o.trace.evaluations.to_string(),
                sci(o.trace.wall_time),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn write_summary(path: &Path, spec: &ExperimentSpec, outcomes: &[RunOutcome]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(SUMMARY_HEADER)?;
    let values = |cell: usize, algorithm: Algorithm, indicator: Indicator| -> Vec<f64> {
        outcomes
            .iter()
            .filter(|o| o.cell == cell && o.algorithm == algorithm)
            .filter_map(|o| o.value(indicator))
            .collect()
    };
    for (c, cell) in spec.cells.iter().enumerate() {
        for &indicator in &spec.indicators {
            let baseline = values(c, Algorithm::MoeadFixed, indicator);
            for &algorithm in &spec.algorithms {
                let v = values(c, algorithm, indicator);
                let s = aggregate_stats(&v)?;
                let sign = if algorithm != Algorithm::MoeadFixed && v.len() >= 2 && baseline.len() >= 2 {
                    rank_sum_compare(&v, &baseline, ALPHA, indicator.sense())?.to_string()
                } else {
                    String::new()
                };
                w.write_record([
                    cell.kind().name().to_string(),
                    cell_m(spec, c).to_string(),
                    algorithm.name().to_string(),
                    indicator.name().to_string(),
                    v.len().to_string(),
                    sci(s.median),
                    sci(s.mean),
                    sci(s.std),
                    sign,
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn write_trend<'a>(path: &Path, outcomes: impl Iterator<Item = &'a RunOutcome>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(TREND_HEADER)?;
    for o in outcomes {
        for r in &o.trace.records {
            w.write_record([
                o.algorithm.name().to_string(),
                o.seed.to_string(),
                r.generation.to_string(),
                sci(r.r2),
                r.rate.map(sci).unwrap_or_default(),
                u8::from(r.adjusted).to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Objective vectors with an `f1,...,fm` header.
pub fn write_front_csv(path: &Path, points: &[Vec<f64>]) -> Result<()> {
    let m = points.first().map_or(0, Vec::len);
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record((1..=m).map(|j| format!("f{j}")))?;
    for p in points {
        w.write_record(p.iter().map(|&v| sci(v)))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a front file; every column must be numeric and rows equally long.
pub fn read_front_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let mut points = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let p = record
            .iter()
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .with_context(|| format!("{}: row {} is not numeric", path.display(), i + 1))?;
        points.push(p);
    }
    Ok(points)
}

pub fn read_raw(path: &Path) -> Result<Vec<RawRow>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != RAW_HEADER {
        bail!("{} does not have the raw results header", path.display());
    }
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let rec = record?;
        let ctx = || format!("{}: row {}", path.display(), i + 1);
        rows.push(RawRow {
            problem: rec[0].to_string(),
            m: rec[1].parse().with_context(ctx)?,
            algorithm: rec[2].to_string(),
            seed: rec[3].parse().with_context(ctx)?,
            indicator: rec[4].parse().with_context(ctx)?,
            value: rec[5].parse().with_context(ctx)?,
            evaluations: rec[6].parse().with_context(ctx)?,
            wall_time: rec[7].parse().with_context(ctx)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_significant_digits() {
        assert_eq!(sci(0.019312345), "1.9312e-2");
        assert_eq!(sci(123456.0), "1.2346e5");
        assert_eq!(sci(0.0), "0.0000e0");
        assert_eq!("1.9312e-2".parse::<f64>().unwrap(), 0.019312);
    }

    #[test]
    fn front_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ea.csv");
        let pts = vec![vec![0.5, 0.25, 1.0], vec![0.125, 2.0, 0.0]];
        write_front_csv(&path, &pts).unwrap();
        assert_eq!(read_front_csv(&path).unwrap(), pts);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("f1,f2,f3\n"));
    }

    #[test]
    fn raw_header_is_checked() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        fs::write(&path, "a,b\n1,2\n").unwrap();
        assert!(read_raw(&path).is_err());
    }
}

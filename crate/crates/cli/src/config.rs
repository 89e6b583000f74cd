//! Experiment specification and its flat TOML file format.
//!
//! ```toml
//! problems = ["DTLZ5:m=5", "MaF9:m=5"]
//! algorithms = ["imoea", "moead-fixed"]   # default: both
//! runs = 11                               # default: 11
//! seed = 42                               # base seed; run r uses seed + r
//! indicators = ["igd", "hv"]              # default: ["igd"]
//! out = "results"                         # default: $IMOEA_OUT_DIR, then "results"
//! evaluations = 30000                     # default: per objective count
//! population = 120                        # default: per objective count
//! front_samples = 10000                   # reference front size for IGD/HV
//! timing = false                          # record wall time in the raw CSV
//! threads = 4                             # worker threads; default: rayon's
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use imoea::{parse_problem, ProblemInstance};
use serde::Deserialize;

use crate::stats::Sense;

/// Environment variable consulted when no output directory is given.
pub const OUT_DIR_ENV: &str = "IMOEA_OUT_DIR";
pub const DEFAULT_RUNS: usize = 11;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_FRONT_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Adaptive weight vectors.
    Imoea,
    /// The same optimizer with its initial weights kept for the whole run.
    MoeadFixed,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Imoea, Algorithm::MoeadFixed];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Imoea => "imoea",
            Algorithm::MoeadFixed => "moead-fixed",
        }
    }

    pub fn adaptive(self) -> bool {
        self == Algorithm::Imoea
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "imoea" => Ok(Algorithm::Imoea),
            "moead-fixed" | "moead" | "fixed" => Ok(Algorithm::MoeadFixed),
            other => bail!("unknown algorithm {other:?}; expected imoea or moead-fixed"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Indicator {
    Igd,
    Hv,
}

impl Indicator {
    pub fn name(self) -> &'static str {
        match self {
            Indicator::Igd => "igd",
            Indicator::Hv => "hv",
        }
    }

    pub fn sense(self) -> Sense {
        match self {
            Indicator::Igd => Sense::Minimize,
            Indicator::Hv => Sense::Maximize,
        }
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Indicator {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "igd" => Ok(Indicator::Igd),
            "hv" => Ok(Indicator::Hv),
            other => bail!("unknown indicator {other:?}; expected igd or hv"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub cells: Vec<ProblemInstance>,
    pub algorithms: Vec<Algorithm>,
    pub runs: usize,
    pub seed: u64,
    pub indicators: Vec<Indicator>,
    pub out: PathBuf,
    pub evaluations: Option<usize>,
    pub population: Option<usize>,
    pub front_samples: usize,
    pub timing: bool,
    pub threads: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    problems: Vec<String>,
    algorithms: Option<Vec<Algorithm>>,
    runs: Option<usize>,
    seed: Option<u64>,
    indicators: Option<Vec<Indicator>>,
    out: Option<PathBuf>,
    evaluations: Option<usize>,
    population: Option<usize>,
    front_samples: Option<usize>,
    timing: Option<bool>,
    threads: Option<usize>,
}

/// `$IMOEA_OUT_DIR` when set, otherwise `results`.
pub fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("results"))
}

impl ExperimentSpec {
    /// A spec with defaults for everything but the cells.
    pub fn new(cells: Vec<ProblemInstance>) -> Self {
        ExperimentSpec {
            cells,
            algorithms: Algorithm::ALL.to_vec(),
            runs: DEFAULT_RUNS,
            seed: DEFAULT_SEED,
            indicators: vec![Indicator::Igd],
            out: default_out_dir(),
            evaluations: None,
            population: None,
            front_samples: DEFAULT_FRONT_SAMPLES,
            timing: false,
            threads: None,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: SpecFile = toml::from_str(text).context("malformed experiment spec")?;
        let cells = file
            .problems
            .iter()
            .map(|p| parse_problem(p, None).with_context(|| format!("problem entry {p:?}")))
            .collect::<Result<Vec<_>>>()?;
        let mut spec = ExperimentSpec::new(cells);
        if let Some(a) = file.algorithms {
            spec.algorithms = a;
        }
        if let Some(i) = file.indicators {
            spec.indicators = i;
        }
        spec.runs = file.runs.unwrap_or(spec.runs);
        spec.seed = file.seed.unwrap_or(spec.seed);
        spec.out = file.out.unwrap_or(spec.out);
        spec.evaluations = file.evaluations;
        spec.population = file.population;
        spec.front_samples = file.front_samples.unwrap_or(spec.front_samples);
        spec.timing = file.timing.unwrap_or(false);
        spec.threads = file.threads;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml_str(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.cells.is_empty() {
            bail!("experiment has no problems");
        }
        if self.runs == 0 {
            bail!("runs must be at least 1");
        }
        if self.algorithms.is_empty() {
            bail!("experiment has no algorithms");
        }
        if self.indicators.is_empty() {
            bail!("experiment has no indicators");
        }
        if self.front_samples == 0 {
            bail!("front_samples must be positive");
        }
        if self.threads == Some(0) {
            bail!("threads must be positive");
        }
        let mut keys: Vec<String> = self.cells.iter().map(|c| c.key()).collect();
        keys.sort();
        if let Some(w) = keys.windows(2).find(|w| w[0] == w[1]) {
            bail!("problem {} listed twice", w[0]);
        }
        let mut algos = self.algorithms.clone();
        algos.sort();
        algos.dedup();
        if algos.len() != self.algorithms.len() {
            bail!("algorithm listed twice");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_spec() {
        let spec = ExperimentSpec::from_toml_str(
            r#"
            problems = ["DTLZ5:m=5", "maf9:m=3"]
            algorithms = ["moead-fixed"]
            runs = 3
            seed = 7
            indicators = ["igd", "hv"]
            out = "somewhere"
            evaluations = 1000
            population = 20
            timing = true
            "#,
        )
        .unwrap();
        assert_eq!(spec.cells.len(), 2);
        assert_eq!(spec.cells[1].key(), "MaF9:m=3");
        assert_eq!(spec.algorithms, vec![Algorithm::MoeadFixed]);
        assert_eq!((spec.runs, spec.seed), (3, 7));
        assert_eq!(spec.indicators, vec![Indicator::Igd, Indicator::Hv]);
        assert_eq!(spec.out, PathBuf::from("somewhere"));
        assert_eq!((spec.evaluations, spec.population), (Some(1000), Some(20)));
        assert!(spec.timing);
    }

    #[test]
    fn defaults() {
        let spec = ExperimentSpec::from_toml_str(r#"problems = ["DTLZ1:m=5"]"#).unwrap();
        assert_eq!(spec.runs, DEFAULT_RUNS);
        assert_eq!(spec.algorithms, Algorithm::ALL.to_vec());
        assert_eq!(spec.indicators, vec![Indicator::Igd]);
        assert!(!spec.timing);
    }

    #[test]
    fn unknown_problem_lists_registry() {
        let err = ExperimentSpec::from_toml_str(r#"problems = ["ZDT1:m=2"]"#).unwrap_err();
        let msg = format!("{err:#}");
        assert!(msg.contains("DTLZ5") && msg.contains("MaF9"), "{msg}");
    }

    #[test]
    fn rejects_bad_specs() {
        for text in [
            r#"problems = []"#,
            r#"problems = ["DTLZ1:m=5"]
               runs = 0"#,
            r#"problems = ["DTLZ1"]"#,
            r#"problems = ["DTLZ1:m=5"]
               colour = "red""#,
            r#"problems = ["DTLZ1:m=5", "dtlz1:m=5"]"#,
            r#"problems = ["DTLZ1:m=5"]
               algorithms = ["nsga2"]"#,
        ] {
            assert!(ExperimentSpec::from_toml_str(text).is_err(), "{text}");
        }
    }

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        for i in [Indicator::Igd, Indicator::Hv] {
            assert_eq!(i.name().parse::<Indicator>().unwrap(), i);
        }
    }
}

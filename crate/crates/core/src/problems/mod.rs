//! Benchmark problems, addressable by name and objective count
//! (`"DTLZ5:m=5"`, or `"MaF9"` plus a separate `m`).

mod dtlz;
mod maf9;
mod wfg;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::Problem;

pub use maf9::Polygon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Benchmark {
    Dtlz1,
    Dtlz3,
    Dtlz5,
    Dtlz7,
    Idtlz2,
    Maf4,
    Maf7,
    Maf9,
    Wfg1,
    Wfg8,
}

impl Benchmark {
    pub const ALL: [Benchmark; 10] = [
        Benchmark::Dtlz1,
        Benchmark::Dtlz3,
        Benchmark::Dtlz5,
        Benchmark::Dtlz7,
        Benchmark::Idtlz2,
        Benchmark::Maf4,
        Benchmark::Maf7,
        Benchmark::Maf9,
        Benchmark::Wfg1,
        Benchmark::Wfg8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Dtlz1 => "DTLZ1",
            Benchmark::Dtlz3 => "DTLZ3",
            Benchmark::Dtlz5 => "DTLZ5",
            Benchmark::Dtlz7 => "DTLZ7",
            Benchmark::Idtlz2 => "IDTLZ2",
            Benchmark::Maf4 => "MaF4",
            Benchmark::Maf7 => "MaF7",
            Benchmark::Maf9 => "MaF9",
            Benchmark::Wfg1 => "WFG1",
            Benchmark::Wfg8 => "WFG8",
        }
    }

    /// Default number of decision variables for `m` objectives.
    pub fn default_dimension(self, m: usize) -> usize {
        match self {
            Benchmark::Dtlz1 => m + 4,
            Benchmark::Dtlz7 | Benchmark::Maf7 => m + 19,
            Benchmark::Maf9 => 2,
            _ => m + 9,
        }
    }

    fn min_dimension(self, m: usize) -> usize {
        match self {
            Benchmark::Maf9 => 2,
            // At least one distance variable.
            _ => m,
        }
    }

    pub fn instance(self, m: usize) -> Result<ProblemInstance> {
        ProblemInstance::new(self, m, self.default_dimension(m))
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                let known: Vec<&str> = Benchmark::ALL.iter().map(|b| b.name()).collect();
                Error::Config(format!("unknown problem {s:?}; known problems: {}", known.join(", ")))
            })
    }
}

#[derive(Debug, Clone)]
pub struct ProblemInstance {
    kind: Benchmark,
    m: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    polygon: Option<Polygon>,
}

impl ProblemInstance {
    pub fn new(kind: Benchmark, m: usize, dim: usize) -> Result<Self> {
        let min_m = if kind == Benchmark::Maf9 { 3 } else { 2 };
        if m < min_m {
            return Err(Error::Config(format!("{kind} needs at least {min_m} objectives, got {m}")));
        }
        if dim < kind.min_dimension(m) {
            return Err(Error::Config(format!("{kind} with m={m} needs at least {} variables, got {dim}", kind.min_dimension(m))));
        }
        if kind == Benchmark::Maf9 && dim != 2 {
            return Err(Error::Config("MaF9 is defined on exactly 2 variables".into()));
        }
        let (lower, upper) = match kind {
            Benchmark::Wfg1 | Benchmark::Wfg8 => (vec![0.0; dim], (1..=dim).map(|i| 2.0 * i as f64).collect()),
            Benchmark::Maf9 => (vec![-maf9::BOUND; 2], vec![maf9::BOUND; 2]),
            _ => (vec![0.0; dim], vec![1.0; dim]),
        };
        let polygon = (kind == Benchmark::Maf9).then(|| Polygon::regular(m));
        Ok(ProblemInstance { kind, m, lower, upper, polygon })
    }

    pub fn kind(&self) -> Benchmark {
        self.kind
    }

    /// Registry key, e.g. `DTLZ5:m=5`.
    pub fn key(&self) -> String {
        format!("{}:m={}", self.kind, self.m)
    }
}

impl Problem for ProblemInstance {
    fn name(&self) -> &str {
        self.kind.name()
    }

    fn num_objectives(&self) -> usize {
        self.m
    }

    fn num_variables(&self) -> usize {
        self.lower.len()
    }

    fn lower(&self) -> &[f64] {
        &self.lower
    }

    fn upper(&self) -> &[f64] {
        &self.upper
    }

    fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_decision(x)?;
        let m = self.m;
        let f = match self.kind {
            Benchmark::Dtlz1 => dtlz::dtlz1(x, m),
            Benchmark::Dtlz3 => dtlz::dtlz3(x, m),
            Benchmark::Dtlz5 => dtlz::dtlz5(x, m),
            Benchmark::Dtlz7 | Benchmark::Maf7 => dtlz::dtlz7(x, m),
            Benchmark::Idtlz2 => dtlz::idtlz2(x, m),
            Benchmark::Maf4 => dtlz::maf4(x, m),
            Benchmark::Maf9 => maf9::maf9(x, self.polygon.as_ref().expect("MaF9 instance carries its polygon")),
            Benchmark::Wfg1 => wfg::wfg1(x, m),
            Benchmark::Wfg8 => wfg::wfg8(x, m),
        };
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::Evaluation(format!("{} produced a non-finite objective at {x:?}", self.kind)));
        }
        Ok(f)
    }

    fn sample_front(&self, n: usize) -> Result<Vec<Vec<f64>>> {
        if n == 0 {
            return Err(Error::Contract("front sample size must be positive".into()));
        }
        let m = self.m;
        Ok(match self.kind {
            Benchmark::Dtlz1 => dtlz::dtlz1_front(m, n),
            Benchmark::Dtlz3 => dtlz::sphere_front(m, n),
            Benchmark::Dtlz5 => dtlz::dtlz5_front(m, n),
            Benchmark::Dtlz7 | Benchmark::Maf7 => dtlz::dtlz7_front(m, n),
            Benchmark::Idtlz2 => dtlz::idtlz2_front(m, n),
            Benchmark::Maf4 => dtlz::maf4_front(m, n),
            Benchmark::Maf9 => maf9::maf9_front(self.polygon.as_ref().expect("MaF9 instance carries its polygon"), n),
            Benchmark::Wfg1 => wfg::wfg1_front(m, n),
            Benchmark::Wfg8 => wfg::wfg8_front(m, n),
        })
    }
}

/// Parses `"NAME:m=M"`; `default_m` applies when the suffix is absent.
pub fn parse_problem(spec: &str, default_m: Option<usize>) -> Result<ProblemInstance> {
    let mut parts = spec.split(':');
    let kind: Benchmark = parts.next().unwrap_or_default().parse()?;
    let mut m = default_m;
    for part in parts {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("malformed problem option {part:?} in {spec:?}")))?;
        match key.trim() {
            "m" | "M" => {
                m = Some(value.trim().parse().map_err(|_| Error::Config(format!("bad objective count in {spec:?}")))?)
            }
            other => return Err(Error::Config(format!("unknown problem option {other:?} in {spec:?}"))),
        }
    }
    let m = m.ok_or_else(|| Error::Config(format!("problem {spec:?} has no objective count")))?;
    kind.instance(m)
}

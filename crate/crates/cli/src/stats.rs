//! Per-cell summaries and the two-sample Wilcoxon rank-sum comparison.

use std::fmt;

use anyhow::{bail, Result};
use statrs::distribution::{ContinuousCDF, Normal};

/// Pooled samples up to this size get the exact null distribution when
/// there are no ties.
const EXACT_LIMIT: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub median: f64,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
}

pub fn aggregate_stats(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        bail!("cannot summarize an empty sample");
    }
    if values.iter().any(|v| v.is_nan()) {
        bail!("sample contains NaN");
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Ok(Summary {
        median: median(values),
        mean,
        std: var.sqrt(),
    })
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Whether smaller or larger indicator values are better.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Outcome of comparing sample `a` against sample `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Better,
    Worse,
    Equivalent,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Better => '+',
            Sign::Worse => '-',
            Sign::Equivalent => '=',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Midranks of the pooled sample (1-based, ties averaged).
pub fn midranks(pooled: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&i, &j| pooled[i].total_cmp(&pooled[j]));
    let mut ranks = vec![0.0; pooled.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && pooled[order[end]] == pooled[order[start]] {
            end += 1;
        }
        // Positions start..end share the average of ranks start+1..=end.
        let rank = (start + end + 1) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = rank;
        }
        start = end;
    }
    ranks
}

/// Two-sided p-value of the rank-sum test.
pub fn rank_sum_p_value(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() < 2 || b.len() < 2 {
        bail!("rank-sum test needs at least two values per sample (got {} and {})", a.len(), b.len());
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        bail!("sample contains NaN");
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let w: f64 = ranks[..a.len()].iter().sum();
    if !has_ties(&pooled) && pooled.len() <= EXACT_LIMIT {
        Ok(exact_p(a.len(), b.len(), w.round() as usize))
    } else {
        Ok(normal_p(a.len(), b.len(), w, &pooled))
    }
}

fn has_ties(pooled: &[f64]) -> bool {
    let mut v = pooled.to_vec();
    v.sort_by(f64::total_cmp);
    v.windows(2).any(|p| p[0] == p[1])
}

/// Counts of n1-subsets of {1..N} by rank sum, as a probability table.
fn exact_distribution(n1: usize, n2: usize) -> Vec<f64> {
    let total = n1 + n2;
    let max_sum = total * (total + 1) / 2;
    // ways[k][s]: subsets of the ranks seen so far with k elements and sum s.
    let mut ways = vec![vec![0.0f64; max_sum + 1]; n1 + 1];
    ways[0][0] = 1.0;
    for r in 1..=total {
        for k in (1..=n1.min(r)).rev() {
            for s in (r..=max_sum).rev() {
                ways[k][s] += ways[k - 1][s - r];
            }
        }
    }
    let count: f64 = ways[n1].iter().sum();
    ways[n1].iter().map(|c| c / count).collect()
}

fn exact_p(n1: usize, n2: usize, w: usize) -> f64 {
    let dist = exact_distribution(n1, n2);
    let lower: f64 = dist[..=w].iter().sum();
    let upper: f64 = dist[w..].iter().sum();
    (2.0 * lower.min(upper)).min(1.0)
}

fn normal_p(n1: usize, n2: usize, w: f64, pooled: &[f64]) -> f64 {
    let (n1f, n2f) = (n1 as f64, n2 as f64);
    let n = n1f + n2f;
    let mut sorted = pooled.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let var = n1f * n2f / 12.0 * (n + 1.0 - tie_term / (n * (n - 1.0)));
    if var <= 0.0 {
        return 1.0;
    }
    let mean = n1f * (n + 1.0) / 2.0;
    // Continuity correction toward the mean.
    let z = ((w - mean).abs() - 0.5).max(0.0) / var.sqrt();
    let normal = Normal::standard();
    (2.0 * (1.0 - normal.cdf(z))).min(1.0)
}

/// Compares `a` against `b`: '+' when `a` is significantly better.
///
/// The direction comes from the medians, then from the rank sum when the
/// medians coincide; with no direction information at all a significant
/// result counts in `a`'s favour.
pub fn rank_sum_compare(a: &[f64], b: &[f64], alpha: f64, sense: Sense) -> Result<Sign> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        bail!("alpha must lie in (0, 1], got {alpha}");
    }
    let p = rank_sum_p_value(a, b)?;
    if p > alpha {
        return Ok(Sign::Equivalent);
    }
    let (ma, mb) = (median(a), median(b));
    let a_lower = if ma != mb {
        Some(ma < mb)
    } else {
        let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
        let w: f64 = midranks(&pooled)[..a.len()].iter().sum();
        let mean = a.len() as f64 * (pooled.len() + 1) as f64 / 2.0;
        (w != mean).then_some(w < mean)
    };
    Ok(match (a_lower, sense) {
        (None, _) => Sign::Better,
        (Some(lower), Sense::Minimize) if lower => Sign::Better,
        (Some(lower), Sense::Maximize) if !lower => Sign::Better,
        _ => Sign::Worse,
    })
}

//! Quality indicators: the R2^new hypervolume approximation and its
//! improvement rate (used inside the optimizer), plus IGD and HV (used by the
//! experiment harness).

use crate::decomposition::modified_tchebycheff;
use crate::error::{Error, Result};
use crate::model::{squared_distance, RngStream};

/// Offset of the R2^new reference point in archive-normalized space.
pub const R2_REFERENCE: f64 = 1.1;

const RATE_FLOOR: f64 = 1e-12;

/// Line-segment hypervolume approximation:
///
/// ```text
/// R2new = 1/|W| Σ_{λ∈W} ( max_{s∈EA} min_j |s_j − r_j| / λ_j )^α
/// ```
pub fn r2_new(points: &[Vec<f64>], directions: &[Vec<f64>], reference: &[f64], alpha: f64) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Empty("R2new needs a non-empty solution set".into()));
    }
    if directions.is_empty() {
        return Err(Error::Empty("R2new needs at least one direction".into()));
    }
    let total: f64 = directions
        .iter()
        .map(|lambda| {
            points
                .iter()
                .map(|s| modified_tchebycheff(s, lambda, reference))
                .fold(f64::NEG_INFINITY, f64::max)
                .powf(alpha)
        })
        .sum();
    Ok(total / directions.len() as f64)
}

/// Relative change between consecutive R2new values.
pub fn improvement_rate(current: f64, last: f64) -> f64 {
    (current - last) / last.abs().max(RATE_FLOOR)
}

/// Inverted generational distance: mean distance from each reference point
/// to its nearest solution.
pub fn igd(solutions: &[Vec<f64>], reference: &[Vec<f64>]) -> Result<f64> {
    if solutions.is_empty() || reference.is_empty() {
        return Err(Error::Empty("IGD needs non-empty solution and reference sets".into()));
    }
    let total: f64 = reference
        .iter()
        .map(|v| {
            solutions
                .iter()
                .map(|p| squared_distance(v, p))
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .sum();
    Ok(total / reference.len() as f64)
}

/// How to compute the hypervolume.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HvMethod {
    Exact2d,
    Exact3d,
    MonteCarlo { samples: usize },
}

impl HvMethod {
    /// Exact where cheap, Monte Carlo above three objectives.
    pub fn default_for(m: usize) -> Self {
        match m {
            2 => HvMethod::Exact2d,
            3 => HvMethod::Exact3d,
            _ => HvMethod::MonteCarlo { samples: 1_000_000 },
        }
    }
}

/// Hypervolume dominated by `points` and bounded by `reference`.
///
/// Points that fail to strictly dominate the reference point in every
/// coordinate are discarded first; an empty remainder has volume 0.
pub fn hypervolume(points: &[Vec<f64>], reference: &[f64], method: HvMethod, rng: &mut RngStream) -> Result<f64> {
    let m = reference.len();
    if let Some(p) = points.iter().find(|p| p.len() != m) {
        return Err(Error::Contract(format!(
            "point of length {} against a {m}-dimensional reference",
            p.len()
        )));
    }
    let inside: Vec<&[f64]> = points
        .iter()
        .map(Vec::as_slice)
        .filter(|p| p.iter().zip(reference).all(|(a, r)| a < r))
        .collect();
    if inside.is_empty() {
        return Ok(0.0);
    }
    match method {
        HvMethod::Exact2d => {
            if m != 2 {
                return Err(Error::Contract(format!("exact 2-D hypervolume on {m} objectives")));
            }
            Ok(hv2d(inside.iter().map(|p| (p[0], p[1])).collect(), reference[0], reference[1]))
        }
        HvMethod::Exact3d => {
            if m != 3 {
                return Err(Error::Contract(format!("exact 3-D hypervolume on {m} objectives")));
            }
            Ok(hv3d(&inside, reference))
        }
        HvMethod::MonteCarlo { samples } => {
            if samples == 0 {
                return Err(Error::Contract("Monte Carlo hypervolume needs samples".into()));
            }
            Ok(hv_monte_carlo(&inside, reference, samples, rng))
        }
    }
}

fn hv2d(mut pts: Vec<(f64, f64)>, r1: f64, r2: f64) -> f64 {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut area = 0.0;
    let mut ceiling = r2;
    for (x, y) in pts {
        if y < ceiling {
            area += (r1 - x) * (ceiling - y);
            ceiling = y;
        }
    }
    area
}

fn hv3d(pts: &[&[f64]], reference: &[f64]) -> f64 {
    let mut order: Vec<&[f64]> = pts.to_vec();
    order.sort_by(|a, b| a[2].total_cmp(&b[2]));
    let mut volume = 0.0;
    let mut slice: Vec<(f64, f64)> = Vec::with_capacity(order.len());
    for (i, p) in order.iter().enumerate() {
        slice.push((p[0], p[1]));
        let top = order.get(i + 1).map_or(reference[2], |q| q[2]);
        let depth = top - p[2];
        if depth > 0.0 {
            volume += depth * hv2d(slice.clone(), reference[0], reference[1]);
        }
    }
    volume
}

fn hv_monte_carlo(pts: &[&[f64]], reference: &[f64], samples: usize, rng: &mut RngStream) -> f64 {
    let m = reference.len();
    let mut lower = pts[0].to_vec();
    for p in pts {
        for (lo, &v) in lower.iter_mut().zip(p.iter()) {
            *lo = lo.min(v);
        }
    }
    let box_volume: f64 = lower.iter().zip(reference).map(|(lo, r)| r - lo).product();
    let mut sample = vec![0.0; m];
    let mut hits = 0usize;
    for _ in 0..samples {
        for ((s, lo), r) in sample.iter_mut().zip(&lower).zip(reference) {
            *s = rng.range(*lo, *r);
        }
        if pts.iter().any(|p| p.iter().zip(&sample).all(|(a, s)| a <= s)) {
            hits += 1;
        }
    }
    box_volume * hits as f64 / samples as f64
}

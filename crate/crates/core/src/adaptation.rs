//! Weight-vector adaptation: simplified-hypervolume sparsity, the
//! delete-then-add adjustment event, and the improvement-rate schedule that
//! decides when an event happens.
//!
//! Sparsity of individual i among a population P (objectives normalized):
//!
//! ```text
//! r_j = max over the k nearest neighbors q of f_j(q)
//! V_i = Π_j max(r_j − f_j(i), 0)      (+∞ for any per-objective minimizer)
//! ```
//!
//! A small V_i means i sits in a crowded region.

use crate::archive::Archive;
use crate::decomposition::{build_direction_neighborhoods, nearly_equal, ws_transform, Neighborhoods, TchebycheffForm, WeightSet};
use crate::error::{Error, Result};
use crate::model::{squared_distance, IdealPoint, Individual, ObjectiveBounds};

/// Whether stagnation or progress triggers adjustment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TriggerPolarity {
    /// Adjust when the improvement rate falls below the threshold.
    #[default]
    BelowThreshold,
    /// Adjust when the improvement rate exceeds the threshold.
    AboveThreshold,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdaptationConfig {
    /// Weights replaced per event; `None` means ceil(0.05·N).
    pub nus: Option<usize>,
    /// Generation fractions of Tmax inside which adjustment may happen.
    pub window: (f64, f64),
    /// Generation fraction where the loose threshold becomes the tight one.
    pub phase_split: f64,
    /// Neighbor count for the sparsity reference point; `None` means m.
    pub k_sparsity: Option<usize>,
    pub polarity: TriggerPolarity,
}

impl Default for AdaptationConfig {
    fn default() -> Self {
        AdaptationConfig {
            nus: None,
            window: (0.2, 0.9),
            phase_split: 0.55,
            k_sparsity: None,
            polarity: TriggerPolarity::default(),
        }
    }
}

impl AdaptationConfig {
    pub fn nus_for(&self, n: usize) -> usize {
        self.nus.unwrap_or_else(|| (0.05 * n as f64).ceil() as usize)
    }

    pub fn k_for(&self, m: usize) -> usize {
        self.k_sparsity.unwrap_or(m)
    }

    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        let (lo, hi) = self.window;
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(Error::Config(format!("adaptation window ({lo}, {hi}) must satisfy 0 ≤ lo ≤ hi ≤ 1")));
        }
        if !(lo..=hi).contains(&self.phase_split) {
            return Err(Error::Config(format!("phase split {} lies outside the window", self.phase_split)));
        }
        let nus = self.nus_for(n);
        let k = self.k_for(m);
        if k == 0 {
            return Err(Error::Config("sparsity neighbor count must be positive".into()));
        }
        if nus == 0 || nus >= n {
            return Err(Error::Config(format!("nus = {nus} must be in 1..{n}")));
        }
        if n - nus <= k {
            return Err(Error::Config(format!(
                "population {n} minus nus {nus} must exceed the sparsity neighbor count {k}"
            )));
        }
        Ok(())
    }
}

/// Componentwise maximum over the k nearest neighbors of `points[i]`
/// (distance ties broken by lower index).
pub fn sparsity_reference_point(i: usize, points: &[Vec<f64>], k: usize) -> Result<Vec<f64>> {
    let n = points.len();
    if k == 0 || n <= k {
        return Err(Error::Contract(format!("sparsity needs more than k = {k} individuals, got {n}")));
    }
    let mut order: Vec<(f64, usize)> = (0..n)
        .filter(|&j| j != i)
        .map(|j| (squared_distance(&points[i], &points[j]), j))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut r = vec![f64::NEG_INFINITY; points[i].len()];
    for &(_, j) in &order[..k] {
        for (rj, &v) in r.iter_mut().zip(&points[j]) {
            *rj = rj.max(v);
        }
    }
    Ok(r)
}

fn is_extreme(i: usize, points: &[Vec<f64>]) -> bool {
    (0..points[i].len()).any(|j| points.iter().all(|p| points[i][j] <= p[j]))
}

/// Simplified hypervolume V_i of `points[i]`; +∞ when it attains the
/// population minimum of some objective.
pub fn simplified_hv(i: usize, points: &[Vec<f64>], k: usize) -> Result<f64> {
    let v = box_volume(i, points, k)?;
    Ok(if is_extreme(i, points) { f64::INFINITY } else { v })
}

/// The box volume behind V_i without the extreme-point rule.
pub fn box_volume(i: usize, points: &[Vec<f64>], k: usize) -> Result<f64> {
    let r = sparsity_reference_point(i, points, k)?;
    Ok(r.iter().zip(&points[i]).map(|(rj, fj)| (rj - fj).max(0.0)).product())
}

/// Loose threshold before the phase split, tight after; m below 5 uses m = 5.
pub fn threshold(gen: usize, tmax: usize, m: usize, phase_split: f64) -> f64 {
    let scale = 1.0 + (m.max(5) - 5) as f64;
    if (gen as f64) < phase_split * tmax as f64 {
        0.1 * scale
    } else {
        0.05 * scale
    }
}

pub fn in_window(gen: usize, tmax: usize, window: (f64, f64)) -> bool {
    let g = gen as f64;
    let t = tmax as f64;
    window.0 * t <= g && g <= window.1 * t
}

pub fn should_adjust(gen: usize, tmax: usize, rate: f64, th: f64, cfg: &AdaptationConfig) -> bool {
    if !in_window(gen, tmax, cfg.window) {
        return false;
    }
    match cfg.polarity {
        TriggerPolarity::BelowThreshold => rate < th,
        TriggerPolarity::AboveThreshold => rate > th,
    }
}

/// What one adjustment event changed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdjustReport {
    /// Slots that lost their member and weight, in deletion order.
    pub deleted: Vec<usize>,
    /// How many freed slots were filled from the archive.
    pub added: usize,
    /// How many freed slots got their deleted pair back.
    pub restored: usize,
}

/// Removes the `nus` most crowded members with their weights, refills the
/// freed slots (ascending) from the sparsest archive regions with
/// WS-transformed weights, and rebuilds neighborhoods of size `t` over the
/// search directions of `form`.
///
/// Sparsity uses objectives normalized over the population and archive
/// together, fixed for the whole event.
#[allow(clippy::too_many_arguments)]
pub fn adjust_weights(
    population: &mut [Individual],
    weights: &mut WeightSet,
    archive: &Archive,
    ideal: &IdealPoint,
    nus: usize,
    k: usize,
    t: usize,
    form: TchebycheffForm,
) -> Result<(Neighborhoods, AdjustReport)> {
    let n = population.len();
    if weights.len() != n {
        return Err(Error::Contract(format!("{} weights for {n} individuals", weights.len())));
    }
    if nus == 0 {
        return Ok((build_direction_neighborhoods(weights, t, form)?, AdjustReport::default()));
    }
    if nus >= n || n - nus <= k {
        return Err(Error::Contract(format!("cannot replace {nus} of {n} members with k = {k}")));
    }
    let bounds = ObjectiveBounds::from_points(
        population.iter().map(|p| p.f.as_slice()).chain(archive.objectives()),
    )
    .ok_or_else(|| Error::Empty("population is empty".into()))?;
    let norm_pop: Vec<Vec<f64>> = population.iter().map(|p| bounds.normalize(&p.f)).collect();

    // Deletion: repeatedly drop the smallest V among survivors.
    let mut alive: Vec<usize> = (0..n).collect();
    let mut deleted: Vec<(usize, f64)> = Vec::with_capacity(nus);
    for _ in 0..nus {
        let pts: Vec<Vec<f64>> = alive.iter().map(|&s| norm_pop[s].clone()).collect();
        let mut best: Option<(usize, f64)> = None;
        for pos in 0..pts.len() {
            let v = simplified_hv(pos, &pts, k)?;
            if best.is_none_or(|(_, bv)| v < bv) {
                best = Some((pos, v));
            }
        }
        let (pos, v) = best.expect("population is nonempty");
        deleted.push((alive.remove(pos), v));
    }

    let mut free: Vec<usize> = deleted.iter().map(|&(s, _)| s).collect();
    free.sort_unstable();
    let mut slots: Vec<Option<(Individual, Vec<f64>)>> = (0..n)
        .map(|s| alive.contains(&s).then(|| (population[s].clone(), weights.get(s).to_vec())))
        .collect();

    // Addition: sparsest archive member not already in the population and
    // not one of the members just deleted.
    let norm_arch: Vec<Vec<f64>> = archive.objectives().map(|f| bounds.normalize(f)).collect();
    let mut used = vec![false; archive.len()];
    let mut free_iter = free.into_iter().peekable();
    let mut added = 0;
    while free_iter.peek().is_some() {
        let occupied: Vec<usize> = (0..n).filter(|&s| slots[s].is_some()).collect();
        let mut pts: Vec<Vec<f64>> = occupied.iter().map(|&s| bounds.normalize(&slots[s].as_ref().unwrap().0.f)).collect();
        let mut best: Option<(usize, f64)> = None;
        for (a, member) in archive.members().iter().enumerate() {
            if used[a]
                || occupied.iter().any(|&s| nearly_equal(&slots[s].as_ref().unwrap().0.f, &member.f))
                || deleted.iter().any(|&(s, _)| nearly_equal(&population[s].f, &member.f))
            {
                continue;
            }
            pts.push(norm_arch[a].clone());
            let v = box_volume(pts.len() - 1, &pts, k)?;
            pts.pop();
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((a, v));
            }
        }
        let Some((a, _)) = best else { break };
        used[a] = true;
        let member = &archive.members()[a];
        let w = ws_transform(&member.f, ideal.as_slice());
        let duplicate = occupied.iter().any(|&s| nearly_equal(&slots[s].as_ref().unwrap().1, &w));
        if duplicate {
            continue;
        }
        let slot = free_iter.next().expect("peeked");
        slots[slot] = Some((member.clone(), w));
        added += 1;
    }

    // Not enough candidates: give back the least crowded deleted pairs.
    let mut restored = 0;
    if free_iter.peek().is_some() {
        let mut back: Vec<(usize, f64)> = deleted.clone();
        back.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        for (s, _) in back {
            let Some(&slot) = free_iter.peek() else { break };
            let w = weights.get(s).to_vec();
            if slots.iter().flatten().any(|(_, other)| nearly_equal(other, &w)) {
                continue;
            }
            slots[slot] = Some((population[s].clone(), w));
            free_iter.next();
            restored += 1;
        }
    }
    if free_iter.peek().is_some() {
        return Err(Error::Contract("adjustment could not restore the population size".into()));
    }

    let mut new_weights = Vec::with_capacity(n);
    for (s, slot) in slots.into_iter().enumerate() {
        let (ind, w) = slot.expect("every slot refilled");
        population[s] = ind;
        new_weights.push(w);
    }
    *weights = WeightSet::from_vectors(new_weights)?;
    let report = AdjustReport {
        deleted: deleted.into_iter().map(|(s, _)| s).collect(),
        added,
        restored,
    };
    Ok((build_direction_neighborhoods(weights, t, form)?, report))
}

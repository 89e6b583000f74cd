//! Bounded external archive of nondominated solutions with niche-based
//! crowding maintenance.
//!
//! Crowding degree of a member p with niche radius r:
//!
//! ```text
//! D(p) = 1 − Π_{q ≠ p} R(p, q),   R(p, q) = d(p, q) / r  if d(p, q) ≤ r, else 1
//! ```
//!
//! Distances are taken on objectives normalized over the archive's own
//! per-objective range.

use crate::error::{Error, Result};
use crate::model::{distance, dominates, Individual, ObjectiveBounds};

const DUPLICATE_TOLERANCE: f64 = 1e-12;
const MIN_RADIUS: f64 = 1e-12;

/// The external archive EA.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Archive {
    members: Vec<Individual>,
}

impl Archive {
    pub fn new() -> Self {
        Self::default()
    }

    /// Archive holding the nondominated subset of `individuals`.
    pub fn from_individuals<'a, I>(individuals: I) -> Self
    where
        I: IntoIterator<Item = &'a Individual>,
    {
        let mut archive = Self::new();
        for ind in individuals {
            archive.insert(ind.clone());
        }
        archive
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn objectives(&self) -> impl Iterator<Item = &[f64]> {
        self.members.iter().map(|m| m.f.as_slice())
    }

    pub fn into_members(self) -> Vec<Individual> {
        self.members
    }

    /// Inserts `ind` unless a member dominates it or shares its objective
    /// vector; members it dominates are dropped. Returns whether it entered.
    pub fn insert(&mut self, ind: Individual) -> bool {
        for m in &self.members {
            if dominates(&m.f, &ind.f) || same_objectives(&m.f, &ind.f) {
                return false;
            }
        }
        self.members.retain(|m| !dominates(&ind.f, &m.f));
        self.members.push(ind);
        true
    }

    /// Objectives normalized over the archive's own range.
    pub fn normalized_objectives(&self) -> Vec<Vec<f64>> {
        match ObjectiveBounds::from_points(self.objectives()) {
            Some(b) => b.normalize_all(self.objectives()),
            None => Vec::new(),
        }
    }

    /// Median k-th nearest neighbor distance in normalized objective space.
    pub fn niche_radius(&self, k: usize) -> Result<f64> {
        niche_radius(&self.normalized_objectives(), k)
    }

    /// Iteratively drops the most crowded member until `target` remain.
    ///
    /// The niche radius and normalization are fixed for the whole call; the
    /// crowding degrees are refreshed after every removal. The best member of
    /// each objective is kept while any other candidate is left.
    pub fn trim(&mut self, target: usize, k: usize) -> Result<()> {
        let n = self.members.len();
        if n <= target {
            return Ok(());
        }
        let m = self.members[0].f.len();
        if target < m {
            return Err(Error::Contract(format!(
                "archive target {target} is smaller than the objective count {m}"
            )));
        }
        let points = self.normalized_objectives();
        let radius = niche_radius(&points, k.min(n - 1).max(1))?.max(MIN_RADIUS);

        let within: Vec<Vec<(usize, f64)>> = (0..n)
            .map(|p| {
                (0..n)
                    .filter(|&q| q != p)
                    .filter_map(|q| {
                        let d = distance(&points[p], &points[q]);
                        (d <= radius).then_some((q, d / radius))
                    })
                    .collect()
            })
            .collect();

        let mut alive = vec![true; n];
        let product = |p: usize, alive: &[bool]| -> f64 {
            within[p]
                .iter()
                .filter(|(q, _)| alive[*q])
                .fold(1.0, |acc, (_, ratio)| acc * ratio)
        };
        let mut prod: Vec<f64> = (0..n).map(|p| product(p, &alive)).collect();

        let mut protected = vec![false; n];
        for j in 0..m {
            let best = (0..n)
                .min_by(|&a, &b| points[a][j].total_cmp(&points[b][j]).then(a.cmp(&b)))
                .expect("archive is non-empty");
            protected[best] = true;
        }

        let mut remaining = n;
        while remaining > target {
            let pick = |allow_protected: bool| {
                (0..n)
                    .filter(|&p| alive[p] && (allow_protected || !protected[p]))
                    .fold(None, |best: Option<(usize, f64)>, p| {
                        let d = 1.0 - prod[p];
                        match best {
                            Some((_, bd)) if bd >= d => best,
                            _ => Some((p, d)),
                        }
                    })
            };
            let (victim, _) = pick(false)
                .or_else(|| pick(true))
                .expect("remaining > target >= 0 implies a live member");
            alive[victim] = false;
            remaining -= 1;
            for &(p, _) in &within[victim] {
                if alive[p] {
                    prod[p] = product(p, &alive);
                }
            }
        }

        let mut idx = 0;
        self.members.retain(|_| {
            let keep = alive[idx];
            idx += 1;
            keep
        });
        Ok(())
    }
}

fn same_objectives(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= DUPLICATE_TOLERANCE)
}

/// Median over all points of the distance to their k-th nearest other point.
/// An even count takes the mean of the two central values.
pub fn niche_radius(points: &[Vec<f64>], k: usize) -> Result<f64> {
    let n = points.len();
    if k == 0 || n <= k {
        return Err(Error::Contract(format!(
            "niche radius needs more than k = {k} points, got {n}"
        )));
    }
    let mut kth: Vec<f64> = (0..n)
        .map(|p| {
            let mut d: Vec<f64> = (0..n)
                .filter(|&q| q != p)
                .map(|q| distance(&points[p], &points[q]))
                .collect();
            d.select_nth_unstable_by(k - 1, f64::total_cmp);
            d[k - 1]
        })
        .collect();
    kth.sort_by(f64::total_cmp);
    Ok(if n % 2 == 1 {
        kth[n / 2]
    } else {
        0.5 * (kth[n / 2 - 1] + kth[n / 2])
    })
}

/// Crowding degree D(p) ∈ [0, 1] of `points[p]` for niche radius `r`.
pub fn crowding_degree(p: usize, points: &[Vec<f64>], r: f64) -> f64 {
    let prod = points
        .iter()
        .enumerate()
        .filter(|&(q, _)| q != p)
        .fold(1.0, |acc, (_, other)| {
            let d = distance(&points[p], other);
            if d <= r {
                acc * (d / r)
            } else {
                acc
            }
        });
    1.0 - prod
}

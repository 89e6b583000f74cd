//! Domain types shared by every part of the optimizer: problems, individuals,
//! the ideal point, Pareto dominance, objective normalization and the seeded
//! random stream.

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ensure_same_len, Error, Result};

/// Spans narrower than this are treated as collapsed objectives.
pub const SPAN_EPSILON: f64 = 1e-12;

/// A box-constrained multi-objective minimization problem.
///
/// Implementations must be pure: the same decision vector always maps to the
/// same objective vector.
pub trait Problem: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    /// Number of objectives (at least two).
    fn num_objectives(&self) -> usize;

    /// Number of decision variables.
    fn num_variables(&self) -> usize;

    fn lower(&self) -> &[f64];

    fn upper(&self) -> &[f64];

    /// Evaluates `x`, which must lie inside the box bounds.
    fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>>;

    /// Returns roughly `n` points on the analytic Pareto front, used as the
    /// reference set for IGD.
    fn sample_front(&self, n: usize) -> Result<Vec<Vec<f64>>>;

    /// Checks that `x` has the right length and lies inside the box.
    fn check_decision(&self, x: &[f64]) -> Result<()> {
        ensure_same_len(x.len(), self.num_variables(), "decision vector")?;
        for (j, ((&v, &lo), &hi)) in x.iter().zip(self.lower()).zip(self.upper()).enumerate() {
            if !(lo..=hi).contains(&v) {
                return Err(Error::Contract(format!(
                    "decision variable {j} = {v} outside [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

/// A decision vector together with its cached objective vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
}

impl Individual {
    pub fn new(x: Vec<f64>, f: Vec<f64>) -> Self {
        Self { x, f }
    }

    /// Evaluates `x` on `problem` and rejects non-finite objective values.
    pub fn evaluate(problem: &dyn Problem, x: Vec<f64>) -> Result<Self> {
        let f = problem.evaluate(&x)?;
        if f.len() != problem.num_objectives() {
            return Err(Error::Evaluation(format!(
                "{} returned {} objectives, expected {}",
                problem.name(),
                f.len(),
                problem.num_objectives()
            )));
        }
        if let Some(v) = f.iter().find(|v| !v.is_finite()) {
            return Err(Error::Evaluation(format!(
                "{} produced a non-finite objective ({v})",
                problem.name()
            )));
        }
        Ok(Self { x, f })
    }
}

/// Pareto dominance under minimization, with a length check.
pub fn pareto_dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    ensure_same_len(a.len(), b.len(), "pareto_dominates")?;
    Ok(dominates(a, b))
}

/// Unchecked dominance for hot loops; callers guarantee equal lengths.
#[inline]
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (&x, &y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Componentwise minimum of every objective vector seen so far.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealPoint(Vec<f64>);

impl IdealPoint {
    /// Builds the ideal point of a non-empty set of objective vectors.
    pub fn from_points<'a, I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut iter = points.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::Empty("ideal point needs at least one vector".into()))?;
        let mut z = IdealPoint(first.to_vec());
        z.check_finite(first)?;
        for f in iter {
            z.update(f)?;
        }
        Ok(z)
    }

    pub fn new(z: Vec<f64>) -> Self {
        Self(z)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// z[i] = min(z[i], f[i]).
    pub fn update(&mut self, f: &[f64]) -> Result<()> {
        ensure_same_len(self.0.len(), f.len(), "update_ideal")?;
        self.check_finite(f)?;
        for (z, &v) in self.0.iter_mut().zip(f) {
            if v < *z {
                *z = v;
            }
        }
        Ok(())
    }

    /// Value-returning form of [`IdealPoint::update`].
    pub fn updated(mut self, f: &[f64]) -> Result<Self> {
        self.update(f)?;
        Ok(self)
    }

    fn check_finite(&self, f: &[f64]) -> Result<()> {
        match f.iter().find(|v| !v.is_finite()) {
            Some(v) => Err(Error::Evaluation(format!(
                "non-finite objective value {v} cannot update the ideal point"
            ))),
            None => Ok(()),
        }
    }
}

/// Maps `f` into the unit box spanned by `zmin` and `zmax`; collapsed spans map to 0.
pub fn normalize(f: &[f64], zmin: &[f64], zmax: &[f64]) -> Vec<f64> {
    f.iter()
        .zip(zmin)
        .zip(zmax)
        .map(|((&v, &lo), &hi)| {
            let span = hi - lo;
            if span < SPAN_EPSILON {
                0.0
            } else {
                (v - lo) / span
            }
        })
        .collect()
}

/// Per-objective minimum and maximum over a point set.
#[derive(Clone, Debug, PartialEq)]
pub struct ObjectiveBounds {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl ObjectiveBounds {
    pub fn from_points<'a, I>(points: I) -> Option<Self>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut iter = points.into_iter();
        let first = iter.next()?;
        let mut min = first.to_vec();
        let mut max = first.to_vec();
        for p in iter {
            for ((lo, hi), &v) in min.iter_mut().zip(max.iter_mut()).zip(p) {
                *lo = lo.min(v);
                *hi = hi.max(v);
            }
        }
        Some(Self { min, max })
    }

    pub fn normalize(&self, f: &[f64]) -> Vec<f64> {
        normalize(f, &self.min, &self.max)
    }

    pub fn normalize_all<'a, I>(&self, points: I) -> Vec<Vec<f64>>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        points.into_iter().map(|p| self.normalize(p)).collect()
    }
}

/// Euclidean distance.
#[inline]
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}

#[inline]
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// The single seeded random stream threaded through a run.
///
/// Backed by ChaCha8 so the sequence is stable across platforms and crate
/// upgrades of `rand`'s default generator.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// An independent stream derived from the same seed, for partitioned work.
    pub fn substream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw in [0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform draw in [lo, hi).
    #[inline]
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform index in 0..n; `n` must be positive.
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dominance_examples() {
        assert!(pareto_dominates(&[1.0, 1.0], &[2.0, 2.0]).unwrap());
        assert!(!pareto_dominates(&[1.0, 2.0], &[2.0, 1.0]).unwrap());
        assert!(!pareto_dominates(&[1.0, 1.0], &[1.0, 1.0]).unwrap());
        assert!(pareto_dominates(&[1.0, 1.0], &[1.0, 2.0]).unwrap());
    }

    #[test]
    fn dominance_rejects_mismatched_lengths() {
        assert!(matches!(
            pareto_dominates(&[1.0], &[1.0, 2.0]),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn ideal_point_updates() {
        let z = IdealPoint::new(vec![0.0, 5.0]).updated(&[1.0, 3.0]).unwrap();
        assert_eq!(z.as_slice(), &[0.0, 3.0]);

        let z = IdealPoint::new(vec![2.0, 2.0]).updated(&[2.0, 2.0]).unwrap();
        assert_eq!(z.as_slice(), &[2.0, 2.0]);

        let z = IdealPoint::new(vec![2.0, 2.0]).updated(&[1.0, 1.0]).unwrap();
        assert_eq!(z.as_slice(), &[1.0, 1.0]);
    }

    #[test]
    fn ideal_point_rejects_non_finite() {
        let mut z = IdealPoint::new(vec![0.0, 0.0]);
        assert!(matches!(
            z.update(&[f64::NAN, 1.0]),
            Err(Error::Evaluation(_))
        ));
        assert!(matches!(
            z.update(&[f64::INFINITY, 1.0]),
            Err(Error::Evaluation(_))
        ));
        assert_eq!(z.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&[3.0], &[1.0], &[5.0]), vec![0.5]);
        assert_eq!(normalize(&[1.0, 2.0], &[1.0, 2.0], &[4.0, 9.0]), vec![0.0, 0.0]);
        assert_eq!(normalize(&[7.0, -3.0], &[2.0, 1.0], &[2.0, 1.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn rng_stream_is_reproducible() {
        let mut a = RngStream::new(7);
        let mut b = RngStream::new(7);
        let xs: Vec<f64> = (0..16).map(|_| a.uniform()).collect();
        let ys: Vec<f64> = (0..16).map(|_| b.uniform()).collect();
        assert_eq!(xs, ys);

        let mut c = RngStream::substream(7, 1);
        assert_ne!(xs[0], c.uniform());
    }

    fn vec3() -> impl Strategy<Value = Vec<f64>> {
        // A coarse grid so that ties and equal components actually occur.
        prop::collection::vec((0..6i32).prop_map(f64::from), 3)
    }

    proptest! {
        #[test]
        fn dominance_is_a_strict_partial_order(a in vec3(), b in vec3(), c in vec3()) {
            prop_assert!(!dominates(&a, &a));
            if dominates(&a, &b) {
                prop_assert!(!dominates(&b, &a));
            }
            if dominates(&a, &b) && dominates(&b, &c) {
                prop_assert!(dominates(&a, &c));
            }
        }

        #[test]
        fn ideal_update_is_order_independent(
            seq in prop::collection::vec(prop::collection::vec(-10.0..10.0f64, 3), 1..12),
            start in prop::collection::vec(-10.0..10.0f64, 3),
        ) {
            let mut forward = IdealPoint::new(start.clone());
            for f in &seq {
                forward.update(f).unwrap();
            }
            let mut backward = IdealPoint::new(start);
            for f in seq.iter().rev() {
                backward.update(f).unwrap();
            }
            prop_assert_eq!(forward, backward);
        }

        #[test]
        fn normalize_is_affine_invariant(
            f in prop::collection::vec(-5.0..5.0f64, 4),
            lo in prop::collection::vec(-6.0..-5.0f64, 4),
            width in prop::collection::vec(10.0..12.0f64, 4),
            a in 0.1..10.0f64,
            b in -100.0..100.0f64,
        ) {
            let hi: Vec<f64> = lo.iter().zip(&width).map(|(l, w)| l + w).collect();
            let base = normalize(&f, &lo, &hi);
            let t = |v: &[f64]| v.iter().map(|x| a * x + b).collect::<Vec<_>>();
            let moved = normalize(&t(&f), &t(&lo), &t(&hi));
            for (x, y) in base.iter().zip(&moved) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }
}

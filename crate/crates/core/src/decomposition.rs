//! Scalarizing functions, weight-vector generation, the WS-transformation and
//! neighborhood construction.

use crate::error::{ensure_same_len, Error, Result};
use crate::model::{squared_distance, RngStream};

/// Floor applied to weight components wherever they appear in a denominator,
/// and to objective gaps in the WS-transformation.
pub const WEIGHT_FLOOR: f64 = 1e-6;

const SIMPLEX_TOLERANCE: f64 = 1e-9;
const DUPLICATE_TOLERANCE: f64 = 1e-12;

/// Which Tchebycheff variant drives subproblem comparison.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TchebycheffForm {
    /// max_i λ_i · |f_i − z_i|
    #[default]
    Multiplicative,
    /// max_i |f_i − z_i| / max(λ_i, 1e-6)
    Divisive,
}

impl TchebycheffForm {
    #[inline]
    pub fn eval(self, f: &[f64], lambda: &[f64], z: &[f64]) -> f64 {
        match self {
            TchebycheffForm::Multiplicative => tchebycheff(f, lambda, z),
            TchebycheffForm::Divisive => f
                .iter()
                .zip(lambda)
                .zip(z)
                .map(|((&fi, &li), &zi)| (fi - zi).abs() / li.max(WEIGHT_FLOOR))
                .fold(0.0, f64::max),
        }
    }
}

impl TchebycheffForm {
    /// Direction from the ideal point along which the subproblem with weight
    /// `lambda` has its optimum: the WS image of λ for the multiplicative
    /// form, λ itself for the divisive one.
    pub fn direction(self, lambda: &[f64]) -> Vec<f64> {
        match self {
            TchebycheffForm::Multiplicative => ws_transform(lambda, &vec![0.0; lambda.len()]),
            TchebycheffForm::Divisive => lambda.to_vec(),
        }
    }
}

/// Weighted Tchebycheff value `max_i λ_i · |f_i − z_i|`.
#[inline]
pub fn tchebycheff(f: &[f64], lambda: &[f64], z: &[f64]) -> f64 {
    f.iter()
        .zip(lambda)
        .zip(z)
        .map(|((&fi, &li), &zi)| li * (fi - zi).abs())
        .fold(0.0, f64::max)
}

/// Length of the line segment from `s` toward the reference point `r` along
/// direction `lambda`: `min_j |s_j − r_j| / max(λ_j, 1e-6)`.
#[inline]
pub fn modified_tchebycheff(s: &[f64], lambda: &[f64], r: &[f64]) -> f64 {
    s.iter()
        .zip(lambda)
        .zip(r)
        .map(|((&sj, &lj), &rj)| (sj - rj).abs() / lj.max(WEIGHT_FLOOR))
        .fold(f64::INFINITY, f64::min)
}

/// Maps a solution to the weight vector for which it is the balanced
/// Tchebycheff optimum: w_i ∝ 1 / max(f_i − z_i, 1e-6).
pub fn ws_transform(f: &[f64], z: &[f64]) -> Vec<f64> {
    let inv: Vec<f64> = f
        .iter()
        .zip(z)
        .map(|(&fi, &zi)| 1.0 / (fi - zi).max(WEIGHT_FLOOR))
        .collect();
    let total: f64 = inv.iter().sum();
    inv.into_iter().map(|v| v / total).collect()
}

/// True when `w` is non-negative and sums to one within 1e-9.
pub fn is_simplex_weight(w: &[f64]) -> bool {
    w.iter().all(|&v| v >= 0.0 && v.is_finite())
        && (w.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOLERANCE
}

pub(crate) fn nearly_equal(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= DUPLICATE_TOLERANCE)
}

/// Ordered weight vectors, one per subproblem.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSet {
    vectors: Vec<Vec<f64>>,
}

impl WeightSet {
    /// Validates every vector and rejects duplicates.
    pub fn from_vectors(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let mut set = WeightSet {
            vectors: Vec::with_capacity(vectors.len()),
        };
        for v in vectors {
            set.push(v)?;
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn num_objectives(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    pub fn get(&self, i: usize) -> &[f64] {
        &self.vectors[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.vectors.iter().map(Vec::as_slice)
    }

    pub fn as_vecs(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// True when some stored vector other than `skip` equals `w` within 1e-12.
    pub fn contains_near(&self, w: &[f64], skip: Option<usize>) -> bool {
        self.vectors
            .iter()
            .enumerate()
            .any(|(i, v)| Some(i) != skip && nearly_equal(v, w))
    }

    pub fn push(&mut self, w: Vec<f64>) -> Result<()> {
        self.validate(&w, None)?;
        self.vectors.push(w);
        Ok(())
    }

    /// Overwrites slot `i`; the new vector may not duplicate any other slot.
    pub fn replace(&mut self, i: usize, w: Vec<f64>) -> Result<()> {
        if i >= self.vectors.len() {
            return Err(Error::Contract(format!(
                "weight index {i} out of range ({})",
                self.vectors.len()
            )));
        }
        self.validate(&w, Some(i))?;
        self.vectors[i] = w;
        Ok(())
    }

    fn validate(&self, w: &[f64], skip: Option<usize>) -> Result<()> {
        if let Some(first) = self.vectors.first() {
            ensure_same_len(first.len(), w.len(), "weight vector")?;
        }
        if !is_simplex_weight(w) {
            return Err(Error::Contract(format!(
                "weight vector {w:?} is not on the unit simplex"
            )));
        }
        if self.contains_near(w, skip) {
            return Err(Error::Contract(format!("duplicate weight vector {w:?}")));
        }
        Ok(())
    }
}

/// Weight initialization strategies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMethod {
    SimplexLattice,
    TwoLayer,
    Random,
}

impl WeightMethod {
    /// Lattice for few objectives, two layers once a single lattice explodes.
    pub fn default_for(m: usize) -> Self {
        if m < 8 {
            WeightMethod::SimplexLattice
        } else {
            WeightMethod::TwoLayer
        }
    }
}

/// Binomial coefficient, saturating on overflow.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Size of the simplex lattice with `h` divisions in `m` objectives.
pub fn lattice_size(m: usize, h: usize) -> usize {
    binomial(h + m - 1, m - 1)
}

/// All compositions of `h` into `m` non-negative parts, divided by `h`.
pub fn simplex_lattice(m: usize, h: usize) -> Vec<Vec<f64>> {
    fn recurse(out: &mut Vec<Vec<f64>>, cur: &mut Vec<usize>, left: usize, m: usize, h: usize) {
        if cur.len() + 1 == m {
            cur.push(left);
            out.push(cur.iter().map(|&c| c as f64 / h as f64).collect());
            cur.pop();
            return;
        }
        for c in (0..=left).rev() {
            cur.push(c);
            recurse(out, cur, left - c, m, h);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(lattice_size(m, h));
    if m == 1 {
        out.push(vec![1.0]);
        return out;
    }
    recurse(&mut out, &mut Vec::with_capacity(m), h, m, h);
    out
}

/// Division count whose lattice size is closest to `n_target`.
pub fn lattice_divisions_for(m: usize, n_target: usize) -> usize {
    let mut h = 1;
    while lattice_size(m, h + 1) <= n_target {
        h += 1;
    }
    let below = lattice_size(m, h);
    let above = lattice_size(m, h + 1);
    if above.abs_diff(n_target) < below.abs_diff(n_target) {
        h + 1
    } else {
        h
    }
}

/// Boundary lattice with `h1` divisions plus an inner lattice with `h2`
/// divisions shrunk halfway toward the centroid, duplicates removed.
pub fn two_layer(m: usize, h1: usize, h2: usize) -> Vec<Vec<f64>> {
    let centroid = 1.0 / m as f64;
    let mut out = simplex_lattice(m, h1);
    for v in simplex_lattice(m, h2) {
        let inner: Vec<f64> = v.iter().map(|&x| 0.5 * x + 0.5 * centroid).collect();
        if !out.iter().any(|w| nearly_equal(w, &inner)) {
            out.push(inner);
        }
    }
    out
}

/// (h1, h2) pair whose two-layer set size is closest to `n_target`; ties go
/// to the larger boundary layer, then the smaller set.
pub fn two_layer_divisions_for(m: usize, n_target: usize) -> (usize, usize) {
    let limit = n_target.saturating_mul(2).max(m + 1);
    let mut best: Option<(usize, usize, usize)> = None;
    let mut h1 = 1;
    while lattice_size(m, h1) <= limit {
        let mut h2 = 1;
        while lattice_size(m, h2) <= limit {
            let count = two_layer(m, h1, h2).len();
            let better = match best {
                None => true,
                Some((bh1, _, bc)) => {
                    let (d, bd) = (count.abs_diff(n_target), bc.abs_diff(n_target));
                    d < bd || (d == bd && (h1 > bh1 || (h1 == bh1 && count < bc)))
                }
            };
            if better {
                best = Some((h1, h2, count));
            }
            h2 += 1;
        }
        h1 += 1;
    }
    let (h1, h2, _) = best.expect("h1 = h2 = 1 is always a candidate");
    (h1, h2)
}

/// Generates an initial weight set. Lattice methods return the closest
/// achievable size, which may differ from `n_target`.
pub fn generate_weights(
    m: usize,
    n_target: usize,
    method: WeightMethod,
    rng: &mut RngStream,
) -> Result<WeightSet> {
    if m < 2 {
        return Err(Error::Contract(format!("need at least 2 objectives, got {m}")));
    }
    if n_target < m {
        return Err(Error::Contract(format!(
            "weight count {n_target} is smaller than the objective count {m}"
        )));
    }
    let vectors = match method {
        WeightMethod::SimplexLattice => simplex_lattice(m, lattice_divisions_for(m, n_target)),
        WeightMethod::TwoLayer => {
            let (h1, h2) = two_layer_divisions_for(m, n_target);
            two_layer(m, h1, h2)
        }
        WeightMethod::Random => {
            let mut out: Vec<Vec<f64>> = Vec::with_capacity(n_target);
            while out.len() < n_target {
                // Normalized exponentials are uniform on the simplex.
                let e: Vec<f64> = (0..m).map(|_| -(1.0 - rng.uniform()).ln()).collect();
                let total: f64 = e.iter().sum();
                let w: Vec<f64> = e.into_iter().map(|v| v / total).collect();
                if !out.iter().any(|v| nearly_equal(v, &w)) {
                    out.push(w);
                }
            }
            out
        }
    };
    WeightSet::from_vectors(vectors)
}

/// For each subproblem, the indices of its `T` closest weight vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighborhoods(Vec<Vec<usize>>);

impl Neighborhoods {
    pub fn get(&self, i: usize) -> &[usize] {
        &self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.0.iter().map(Vec::as_slice)
    }
}

/// Nearest `t` weight vectors by Euclidean distance, ties by lower index.
pub fn build_neighborhoods(weights: &WeightSet, t: usize) -> Result<Neighborhoods> {
    neighborhoods_of(weights.as_vecs(), t)
}

/// Neighborhoods measured between the subproblems' search directions.
pub fn build_direction_neighborhoods(weights: &WeightSet, t: usize, form: TchebycheffForm) -> Result<Neighborhoods> {
    let dirs: Vec<Vec<f64>> = weights.iter().map(|w| form.direction(w)).collect();
    neighborhoods_of(&dirs, t)
}

fn neighborhoods_of(vectors: &[Vec<f64>], t: usize) -> Result<Neighborhoods> {
    let n = vectors.len();
    if t == 0 || t > n {
        return Err(Error::Contract(format!(
            "neighborhood size {t} must be in 1..={n}"
        )));
    }
    let lists = (0..n)
        .map(|i| {
            let wi = &vectors[i];
            let mut order: Vec<(f64, usize)> = (0..n)
                .map(|j| (squared_distance(wi, &vectors[j]), j))
                .collect();
            order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            order.truncate(t);
            order.into_iter().map(|(_, j)| j).collect()
        })
        .collect();
    Ok(Neighborhoods(lists))
}

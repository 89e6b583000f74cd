//! DTLZ-family objective functions (DTLZ1/3/5/7, inverted DTLZ2, MaF4) and
//! their Pareto-front samplers. Decision vectors live in [0, 1]^D.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::decomposition::{lattice_divisions_for, simplex_lattice};

/// Multimodal distance function shared by DTLZ1, DTLZ3 and MaF4.
fn g_rastrigin(tail: &[f64]) -> f64 {
    let s: f64 = tail
        .iter()
        .map(|&x| (x - 0.5).powi(2) - (20.0 * PI * (x - 0.5)).cos())
        .sum();
    100.0 * (tail.len() as f64 + s)
}

fn g_sphere(tail: &[f64]) -> f64 {
    tail.iter().map(|&x| (x - 0.5).powi(2)).sum()
}

/// Unit-radius spherical coordinates: h_1 = Π cos θ_j, ..., h_m = sin θ_1.
fn sphere_shape(theta: &[f64], m: usize) -> Vec<f64> {
    (0..m)
        .map(|i| {
            let cos_part: f64 = theta[..m - 1 - i].iter().map(|t| t.cos()).product();
            if i == 0 {
                cos_part
            } else {
                cos_part * theta[m - 1 - i].sin()
            }
        })
        .collect()
}

fn angles(x: &[f64], m: usize) -> Vec<f64> {
    x[..m - 1].iter().map(|&v| v * FRAC_PI_2).collect()
}

pub fn dtlz1(x: &[f64], m: usize) -> Vec<f64> {
    let g = g_rastrigin(&x[m - 1..]);
    (0..m)
        .map(|i| {
            let prod: f64 = x[..m - 1 - i].iter().product();
            let last = if i == 0 { 1.0 } else { 1.0 - x[m - 1 - i] };
            0.5 * (1.0 + g) * prod * last
        })
        .collect()
}

pub fn dtlz3(x: &[f64], m: usize) -> Vec<f64> {
    let g = g_rastrigin(&x[m - 1..]);
    sphere_shape(&angles(x, m), m)
        .into_iter()
        .map(|h| (1.0 + g) * h)
        .collect()
}

pub fn dtlz5(x: &[f64], m: usize) -> Vec<f64> {
    let g = g_sphere(&x[m - 1..]);
    let mut theta = Vec::with_capacity(m - 1);
    theta.push(x[0] * FRAC_PI_2);
    for &v in &x[1..m - 1] {
        theta.push(PI / (4.0 * (1.0 + g)) * (1.0 + 2.0 * g * v));
    }
    sphere_shape(&theta, m)
        .into_iter()
        .map(|h| (1.0 + g) * h)
        .collect()
}

/// DTLZ7; MaF7 is the same function.
pub fn dtlz7(x: &[f64], m: usize) -> Vec<f64> {
    let tail = &x[m - 1..];
    let g = 1.0 + 9.0 * tail.iter().sum::<f64>() / tail.len() as f64;
    let mut f: Vec<f64> = x[..m - 1].to_vec();
    let h = m as f64
        - f.iter()
            .map(|&fi| fi / (1.0 + g) * (1.0 + (3.0 * PI * fi).sin()))
            .sum::<f64>();
    f.push((1.0 + g) * h);
    f
}

/// Inverted DTLZ2: f_i = (1 + g)(1 − h_i).
pub fn idtlz2(x: &[f64], m: usize) -> Vec<f64> {
    let g = g_sphere(&x[m - 1..]);
    sphere_shape(&angles(x, m), m)
        .into_iter()
        .map(|h| (1.0 + g) * (1.0 - h))
        .collect()
}

/// MaF4: inverted, badly scaled (factor 2^i) and multimodal.
pub fn maf4(x: &[f64], m: usize) -> Vec<f64> {
    let g = g_rastrigin(&x[m - 1..]);
    sphere_shape(&angles(x, m), m)
        .into_iter()
        .enumerate()
        .map(|(i, h)| 2f64.powi(i as i32 + 1) * (1.0 + g) * (1.0 - h))
        .collect()
}

/// Simplex lattice whose size is closest to `n`.
pub(crate) fn lattice_near(m: usize, n: usize) -> Vec<Vec<f64>> {
    simplex_lattice(m, lattice_divisions_for(m, n.max(m)))
}

/// Lattice directions pushed out to the unit sphere.
pub(crate) fn sphere_points(m: usize, n: usize) -> Vec<Vec<f64>> {
    lattice_near(m, n)
        .into_iter()
        .map(|v| {
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / norm).collect()
        })
        .collect()
}

pub fn dtlz1_front(m: usize, n: usize) -> Vec<Vec<f64>> {
    lattice_near(m, n)
        .into_iter()
        .map(|v| v.into_iter().map(|x| 0.5 * x).collect())
        .collect()
}

pub fn sphere_front(m: usize, n: usize) -> Vec<Vec<f64>> {
    sphere_points(m, n)
}

pub fn idtlz2_front(m: usize, n: usize) -> Vec<Vec<f64>> {
    sphere_points(m, n)
        .into_iter()
        .map(|v| v.into_iter().map(|x| 1.0 - x).collect())
        .collect()
}

pub fn maf4_front(m: usize, n: usize) -> Vec<Vec<f64>> {
    sphere_points(m, n)
        .into_iter()
        .map(|v| {
            v.into_iter()
                .enumerate()
                .map(|(i, x)| 2f64.powi(i as i32 + 1) * (1.0 - x))
                .collect()
        })
        .collect()
}

/// The DTLZ5 optimum is the curve where every angle but the first is π/4.
pub fn dtlz5_front(m: usize, n: usize) -> Vec<Vec<f64>> {
    let n = n.max(2);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (0..n)
        .map(|i| {
            let theta = FRAC_PI_2 * i as f64 / (n - 1) as f64;
            let (c, si) = (theta.cos(), theta.sin());
            let mut f = Vec::with_capacity(m);
            f.push(c * s.powi(m as i32 - 2));
            for j in 1..m - 1 {
                f.push(c * s.powi((m - 1 - j) as i32));
            }
            f.push(si);
            f
        })
        .collect()
}

/// Boundaries of the two nondominated intervals of each DTLZ7 position variable.
const DTLZ7_INTERVALS: [f64; 4] = [0.0, 0.251412, 0.631627, 0.859401];

/// Regular grid over the position variables mapped onto the disconnected
/// front pieces.
pub fn dtlz7_front(m: usize, n: usize) -> Vec<Vec<f64>> {
    let dims = m - 1;
    let per_axis = ((n.max(m) as f64).powf(1.0 / dims as f64).round() as usize).max(2);
    let [a0, a1, b0, b1] = DTLZ7_INTERVALS;
    let split = (a1 - a0) / (b1 - b0 + a1 - a0);
    let map = |t: f64| {
        if t <= split {
            a0 + t * (a1 - a0) / split
        } else {
            b0 + (t - split) * (b1 - b0) / (1.0 - split)
        }
    };
    let total = per_axis.pow(dims as u32);
    (0..total)
        .map(|mut code| {
            let mut f: Vec<f64> = (0..dims)
                .map(|_| {
                    let k = code % per_axis;
                    code /= per_axis;
                    map(k as f64 / (per_axis - 1) as f64)
                })
                .collect();
            let h = m as f64 - f.iter().map(|&v| 0.5 * v * (1.0 + (3.0 * PI * v).sin())).sum::<f64>();
            f.push(2.0 * h);
            f
        })
        .collect()
}

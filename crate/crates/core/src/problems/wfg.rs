//! WFG1 and WFG8. Variable i (1-based) ranges over [0, 2i]; the first
//! k = m − 1 variables are position parameters, the rest distance parameters.

use std::f64::consts::{FRAC_PI_2, PI};

use super::dtlz::sphere_points;

/// Transformations can leave values a hair outside [0, 1].
fn clamp01(y: f64) -> f64 {
    y.clamp(0.0, 1.0)
}

fn b_poly(y: f64, alpha: f64) -> f64 {
    clamp01(y.powf(alpha))
}

fn b_flat(y: f64, a: f64, b: f64, c: f64) -> f64 {
    let t1 = (y - b).floor().min(0.0) * a * (b - y) / b;
    let t2 = (c - y).floor().min(0.0) * (1.0 - a) * (y - c) / (1.0 - c);
    clamp01(a + t1 - t2)
}

fn b_param(y: f64, u: f64, a: f64, b: f64, c: f64) -> f64 {
    let v = a - (1.0 - 2.0 * u) * ((0.5 - u).floor() + a).abs();
    clamp01(y.powf(b + (c - b) * v))
}

fn s_linear(y: f64, a: f64) -> f64 {
    clamp01((y - a).abs() / ((a - y).floor() + a).abs())
}

fn r_sum(y: &[f64], w: &[f64]) -> f64 {
    let num: f64 = y.iter().zip(w).map(|(a, b)| a * b).sum();
    clamp01(num / w.iter().sum::<f64>())
}

/// Convex shape functions h_1..h_{m−1} and the mixed shape h_m used by WFG1.
fn wfg1_shape(x: &[f64], m: usize) -> Vec<f64> {
    let mut h = Vec::with_capacity(m);
    for i in 0..m - 1 {
        let mut v: f64 = x[..m - 1 - i].iter().map(|&t| 1.0 - (t * FRAC_PI_2).cos()).product();
        if i > 0 {
            v *= 1.0 - (x[m - 1 - i] * FRAC_PI_2).sin();
        }
        h.push(v);
    }
    let (alpha, a) = (1.0, 5.0);
    h.push((1.0 - x[0] - (2.0 * a * PI * x[0] + FRAC_PI_2).cos() / (2.0 * a * PI)).powf(alpha));
    h
}

fn concave_shape(x: &[f64], m: usize) -> Vec<f64> {
    (0..m)
        .map(|i| {
            let mut v: f64 = x[..m - 1 - i].iter().map(|&t| (t * FRAC_PI_2).sin()).product();
            if i > 0 {
                v *= (x[m - 1 - i] * FRAC_PI_2).cos();
            }
            v
        })
        .collect()
}

fn scaled(h: Vec<f64>, distance: f64) -> Vec<f64> {
    h.into_iter()
        .enumerate()
        .map(|(i, v)| distance + 2.0 * (i + 1) as f64 * v)
        .collect()
}

fn to_unit(z: &[f64]) -> Vec<f64> {
    z.iter().enumerate().map(|(i, &v)| clamp01(v / (2.0 * (i + 1) as f64))).collect()
}

pub fn wfg1(z: &[f64], m: usize) -> Vec<f64> {
    let k = m - 1;
    let n = z.len();
    let mut y = to_unit(z);
    for v in &mut y[k..] {
        *v = s_linear(*v, 0.35);
    }
    for v in &mut y[k..] {
        *v = b_flat(*v, 0.8, 0.75, 0.85);
    }
    for v in &mut y {
        *v = b_poly(*v, 0.02);
    }
    let w: Vec<f64> = (1..=n).map(|j| 2.0 * j as f64).collect();
    // With k = m − 1 every position group holds a single variable.
    let mut t: Vec<f64> = (0..k).map(|i| r_sum(&y[i..i + 1], &w[i..i + 1])).collect();
    let tail = r_sum(&y[k..], &w[k..]);
    t.push(tail);
    scaled(wfg1_shape(&t, m), tail)
}

pub fn wfg8(z: &[f64], m: usize) -> Vec<f64> {
    let k = m - 1;
    let mut y = to_unit(z);
    let a = 0.98 / 49.98;
    let original = y.clone();
    for i in k..y.len() {
        let u = original[..i].iter().sum::<f64>() / i as f64;
        y[i] = b_param(original[i], u, a, 0.02, 50.0);
    }
    for v in &mut y[k..] {
        *v = s_linear(*v, 0.35);
    }
    let mut t: Vec<f64> = y[..k].to_vec();
    let tail = y[k..].iter().sum::<f64>() / (y.len() - k) as f64;
    t.push(tail);
    scaled(concave_shape(&t, m), tail)
}

/// Position-parameter grid mapped through the WFG1 shape (distance 0).
pub fn wfg1_front(m: usize, n: usize) -> Vec<Vec<f64>> {
    let dims = m - 1;
    let per_axis = ((n.max(m) as f64).powf(1.0 / dims as f64).round() as usize).max(2);
    let total = per_axis.pow(dims as u32);
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut x: Vec<f64> = (0..dims)
            .map(|_| {
                let c = code % per_axis;
                code /= per_axis;
                c as f64 / (per_axis - 1) as f64
            })
            .collect();
        x.push(0.0);
        let f = scaled(wfg1_shape(&x, m), 0.0);
        // Corners of the convex shape collapse several grid points together.
        if !out.iter().any(|g| g.iter().zip(&f).all(|(a, b)| (a - b).abs() < 1e-12)) {
            out.push(f);
        }
    }
    out
}

/// Unit sphere quadrant with objective i stretched by 2i.
pub fn wfg8_front(m: usize, n: usize) -> Vec<Vec<f64>> {
    sphere_points(m, n)
        .into_iter()
        .map(|v| v.into_iter().enumerate().map(|(i, x)| 2.0 * (i + 1) as f64 * x).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wfg1_optimal_distance_parameters() {
        // z2 / 4 = 0.35 exactly; the 0.02 power in b_poly would blow up any
        // rounding residue left by a non-dyadic scale.
        let f = wfg1(&[0.0, 1.4], 2);
        assert_eq!(f[0], 0.0);
        assert!((f[1] - 4.0).abs() < 1e-12, "{f:?}");
    }

    #[test]
    fn wfg8_corner_values() {
        let m = 2;
        let n = 11;
        // Any distance vector gives f_i = t_tail + 2i·h_i with h on the unit quadrant.
        let z = vec![0.0; n];
        let f = wfg8(&z, m);
        let tail = f[1] - 4.0;
        assert!((f[0] - tail).abs() < 1e-12);
    }

    #[test]
    fn transforms_stay_in_unit_interval() {
        for i in 0..=100 {
            let y = i as f64 / 100.0;
            for v in [
                b_poly(y, 0.02),
                b_flat(y, 0.8, 0.75, 0.85),
                b_param(y, 0.3, 0.98 / 49.98, 0.02, 50.0),
                s_linear(y, 0.35),
            ] {
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn s_linear_zero_at_optimum() {
        assert_eq!(s_linear(0.35, 0.35), 0.0);
        assert_eq!(b_flat(0.0, 0.8, 0.75, 0.85), 0.0);
    }
}

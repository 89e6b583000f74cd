//! MaF9: objectives are distances from a point in the plane to the edge
//! lines of a regular m-gon. The Pareto set is the polygon itself.
//!
//! Far from the polygon some points are not dominated by any polygon point
//! even though they lie outside it. Instead of resampling them, they get a
//! deterministic penalty: |s(x)| plus twice the distance to the polygon.

use std::f64::consts::{FRAC_PI_2, PI};

pub const BOUND: f64 = 10_000.0;

#[derive(Debug, Clone)]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
    /// Unit inward normal and offset per edge: s_i(y) = n_i · y + c_i.
    edges: Vec<([f64; 2], f64)>,
}

impl Polygon {
    pub fn regular(m: usize) -> Self {
        let vertices: Vec<[f64; 2]> = (1..=m)
            .map(|i| {
                let a = FRAC_PI_2 - i as f64 * 2.0 * PI / m as f64;
                [a.cos(), a.sin()]
            })
            .collect();
        let edges = (0..m)
            .map(|i| {
                let p = vertices[i];
                let q = vertices[(i + 1) % m];
                let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
                let len = dx.hypot(dy);
                let mut n = [-dy / len, dx / len];
                let mut c = -(n[0] * p[0] + n[1] * p[1]);
                // Orient toward the center.
                if c < 0.0 {
                    n = [-n[0], -n[1]];
                    c = -c;
                }
                (n, c)
            })
            .collect();
        Polygon { vertices, edges }
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn signed(&self, y: [f64; 2]) -> Vec<f64> {
        self.edges.iter().map(|(n, c)| n[0] * y[0] + n[1] * y[1] + c).collect()
    }

    pub fn contains(&self, y: [f64; 2]) -> bool {
        self.signed(y).iter().all(|&s| s >= 0.0)
    }

    /// Euclidean distance to the polygon (0 inside).
    pub fn distance(&self, y: [f64; 2]) -> f64 {
        if self.contains(y) {
            return 0.0;
        }
        let m = self.vertices.len();
        (0..m)
            .map(|i| segment_distance(y, self.vertices[i], self.vertices[(i + 1) % m]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether some polygon point y has s_i(y) ≤ t_i for all i.
    pub fn has_point_below(&self, t: &[f64]) -> bool {
        let mut poly: Vec<[f64; 2]> = self.vertices.clone();
        for ((n, c), &ti) in self.edges.iter().zip(t) {
            let bound = ti + 1e-12 * (1.0 + ti);
            poly = clip(&poly, *n, bound - c);
            if poly.is_empty() {
                return false;
            }
        }
        true
    }

    pub fn area(&self) -> f64 {
        let m = self.vertices.len();
        0.5 * (0..m)
            .map(|i| {
                let p = self.vertices[i];
                let q = self.vertices[(i + 1) % m];
                p[0] * q[1] - q[0] * p[1]
            })
            .sum::<f64>()
            .abs()
    }
}

fn segment_distance(y: [f64; 2], p: [f64; 2], q: [f64; 2]) -> f64 {
    let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
    let t = (((y[0] - p[0]) * dx + (y[1] - p[1]) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    (y[0] - p[0] - t * dx).hypot(y[1] - p[1] - t * dy)
}

/// Sutherland–Hodgman clip of a convex polygon against n · y ≤ b.
fn clip(poly: &[[f64; 2]], n: [f64; 2], b: f64) -> Vec<[f64; 2]> {
    let val = |p: [f64; 2]| n[0] * p[0] + n[1] * p[1] - b;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let (vp, vq) = (val(p), val(q));
        if vp <= 0.0 {
            out.push(p);
        }
        if (vp < 0.0 && vq > 0.0) || (vp > 0.0 && vq < 0.0) {
            let t = vp / (vp - vq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

pub fn maf9(x: &[f64], polygon: &Polygon) -> Vec<f64> {
    let y = [x[0], x[1]];
    let s: Vec<f64> = polygon.signed(y).into_iter().map(f64::abs).collect();
    if polygon.contains(y) || polygon.has_point_below(&s) {
        return s;
    }
    let penalty = 2.0 * polygon.distance(y);
    s.into_iter().map(|v| v + penalty).collect()
}

/// Square grid over the polygon interior with roughly `n` points.
pub fn maf9_front(polygon: &Polygon, n: usize) -> Vec<Vec<f64>> {
    let n = n.max(1);
    let step = (polygon.area() / n as f64).sqrt();
    let cells = (1.0 / step).ceil() as i64;
    let mut out = Vec::new();
    for i in -cells..=cells {
        for j in -cells..=cells {
            let y = [i as f64 * step, j as f64 * step];
            if polygon.contains(y) {
                out.push(polygon.signed(y));
            }
        }
    }
    out
}

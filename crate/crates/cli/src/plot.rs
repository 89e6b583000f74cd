//! Parallel-coordinates rendering of a solution set as standalone SVG.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

const AXIS_GAP: f64 = 120.0;
const MARGIN: f64 = 60.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 340.0;
const HEIGHT: f64 = 380.0;

/// One polyline per solution across m vertical axes labeled f1..fm. Each
/// axis is min-max scaled on its own; an axis with no spread puts every
/// value at mid-height.
pub fn front_svg(points: &[Vec<f64>]) -> Result<String> {
    let Some(first) = points.first() else {
        bail!("cannot plot an empty solution set");
    };
    let m = first.len();
    if m < 2 {
        bail!("need at least two objectives to plot, got {m}");
    }
    if let Some(p) = points.iter().find(|p| p.len() != m) {
        bail!("ragged solution set: rows of length {m} and {}", p.len());
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        bail!("solution set contains non-finite values");
    }
    let lo: Vec<f64> = (0..m).map(|j| points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..m).map(|j| points.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let x = |j: usize| MARGIN + AXIS_GAP * j as f64;
    let y = |j: usize, v: f64| {
        let span = hi[j] - lo[j];
        let t = if span > 1e-12 { (v - lo[j]) / span } else { 0.5 };
        BOTTOM - t * (BOTTOM - TOP)
    };
    let width = 2.0 * MARGIN + AXIS_GAP * (m - 1) as f64;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{HEIGHT}" viewBox="0 0 {width} {HEIGHT}">"#
    )?;
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(s, r#"<g fill="none" stroke="steelblue" stroke-opacity="0.5" stroke-width="1">"#)?;
    for p in points {
        let coords: Vec<String> = p.iter().enumerate().map(|(j, &v)| format!("{:.2},{:.2}", x(j), y(j, v))).collect();
        writeln!(s, r#"<polyline points="{}"/>"#, coords.join(" "))?;
    }
    writeln!(s, "</g>")?;
    writeln!(s, r#"<g stroke="black" stroke-width="1" font-family="sans-serif" font-size="12" text-anchor="middle">"#)?;
    for j in 0..m {
        let xj = x(j);
        writeln!(s, r#"<line x1="{xj:.2}" y1="{TOP}" x2="{xj:.2}" y2="{BOTTOM}"/>"#)?;
        writeln!(s, r#"<text x="{xj:.2}" y="{}" stroke="none">f{}</text>"#, BOTTOM + 24.0, j + 1)?;
        writeln!(s, r#"<text x="{xj:.2}" y="{}" stroke="none" font-size="9">{:.3e}</text>"#, TOP - 8.0, hi[j])?;
        writeln!(s, r#"<text x="{xj:.2}" y="{}" stroke="none" font-size="9">{:.3e}</text>"#, BOTTOM + 10.0, lo[j])?;
    }
    writeln!(s, "</g>")?;
    writeln!(s, "</svg>")?;
    Ok(s)
}

pub fn emit_front_plot(points: &[Vec<f64>], path: &Path) -> Result<()> {
    let svg = front_svg(points)?;
    fs::write(path, svg).with_context(|| format!("writing {}", path.display()))
}

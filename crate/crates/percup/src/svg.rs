//! SVG rendering in the upper half-plane: the interval `[a, b]` is drawn at
//! the point `(a, b)`, so everything lives above the diagonal.

use std::fmt::Write;

use percup_core::cup::CupLengthDiagram;
use percup_core::invariants::{Codomain, StepInvariant};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 48.0;

/// Maps grid positions `0..=m+1` to plot coordinates. Position `m` starts
/// the band standing in for `∞`.
struct Frame {
    stops: Vec<f64>,
}

impl Frame {
    fn new(grid: &[f64]) -> Self {
        let (lo, hi) = match (grid.first(), grid.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => (0.0, 1.0),
        };
        let pad = ((hi - lo) * 0.15).max(0.5);
        let mut stops: Vec<f64> = grid.to_vec();
        stops.push(hi + pad);
        stops.push(hi + 1.5 * pad);
        let (s0, s1) = (lo, hi + 1.5 * pad);
        let scale = (SIZE - 2.0 * MARGIN) / (s1 - s0);
        Frame {
            stops: stops
                .into_iter()
                .map(|t| MARGIN + (t - s0) * scale)
                .collect(),
        }
    }

    fn x(&self, k: usize) -> f64 {
        self.stops[k]
    }

    fn y(&self, k: usize) -> f64 {
        SIZE - self.stops[k]
    }

    fn end(&self) -> usize {
        self.stops.len() - 1
    }
}

fn fmt_tick(t: f64) -> String {
    let s = format!("{t:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn label(codomain: Codomain, v: &[u32]) -> String {
    match codomain {
        Codomain::Scalar => v[0].to_string(),
        Codomain::Sequence(_) => format!("{v:?}"),
        Codomain::Matrix { cols, .. } => v
            .chunks(cols.max(1))
            .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join(" | "),
    }
}

fn header(out: &mut String, grid: &[f64], frame: &Frame) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#
    );
    let (a, b) = (frame.x(0), frame.x(frame.end()));
    let (ya, yb) = (frame.y(0), frame.y(frame.end()));
    let _ = writeln!(
        out,
        r#"<line x1="{a:.2}" y1="{ya:.2}" x2="{b:.2}" y2="{ya:.2}" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<line x1="{a:.2}" y1="{ya:.2}" x2="{a:.2}" y2="{yb:.2}" stroke="black"/>"#
    );
    for (k, &t) in grid.iter().enumerate() {
        let (x, y) = (frame.x(k), frame.y(k));
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{ya:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            ya + 4.0,
            ya + 16.0,
            fmt_tick(t)
        );
        let _ = writeln!(
            out,
            r#"<line x1="{a:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            a - 4.0,
            a - 6.0,
            y + 3.0,
            fmt_tick(t)
        );
    }
    if !grid.is_empty() {
        let m = grid.len();
        let y = (frame.y(m) + frame.y(m + 1)) / 2.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">inf</text>"#,
            a - 6.0,
            y + 3.0
        );
    }
}

fn diagonal(out: &mut String, frame: &Frame) {
    let e = frame.end();
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
        frame.x(0),
        frame.y(0),
        frame.x(e),
        frame.y(e)
    );
}

/// Shaded cells of a step invariant, each labeled by its value.
pub fn invariant_svg(inv: &StepInvariant) -> String {
    let grid = inv.grid();
    let frame = Frame::new(grid);
    let mut out = String::new();
    header(&mut out, grid, &frame);
    let weight = |v: &[u32]| v.iter().map(|&x| u64::from(x)).sum::<u64>();
    let max = inv
        .cells()
        .map(|(_, v)| weight(v))
        .max()
        .unwrap_or(0)
        .max(1);
    for (iv, v) in inv.cells() {
        let w = weight(v);
        if w == 0 {
            continue;
        }
        let (x0, x1) = (frame.x(iv.lo), frame.x(iv.lo + 1));
        let (y0, y1) = (frame.y(iv.hi), frame.y(iv.hi + 1));
        let opacity = 0.15 + 0.6 * w as f64 / max as f64;
        let (cx, cy) = if iv.lo == iv.hi {
            let _ = writeln!(
                out,
                r##"<polygon points="{x0:.2},{y0:.2} {x0:.2},{y1:.2} {x1:.2},{y1:.2}" fill="#3b6fb6" fill-opacity="{opacity:.3}"/>"##
            );
            ((2.0 * x0 + x1) / 3.0, (y0 + 2.0 * y1) / 3.0)
        } else {
            let _ = writeln!(
                out,
                r##"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="#3b6fb6" fill-opacity="{opacity:.3}"/>"##,
                x1 - x0,
                y0 - y1
            );
            ((x0 + x1) / 2.0, (y0 + y1) / 2.0)
        };
        let _ = writeln!(
            out,
            r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            cy + 3.0,
            label(inv.codomain(), v)
        );
    }
    diagonal(&mut out, &frame);
    out.push_str("</svg>\n");
    out
}

/// Diagram points as labeled dots at `(birth, death)`.
pub fn diagram_svg(d: &CupLengthDiagram) -> String {
    let grid = &d.grid;
    let m = grid.len();
    let frame = Frame::new(grid);
    let mut out = String::new();
    header(&mut out, grid, &frame);
    diagonal(&mut out, &frame);
    for (iv, l) in &d.entries {
        let x = frame.x(iv.lo);
        let y = if iv.hi == m {
            (frame.y(m) + frame.y(m + 1)) / 2.0
        } else {
            frame.y(iv.hi + 1)
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="crimson"/><text x="{:.2}" y="{:.2}">{l}</text>"#,
            x + 6.0,
            y - 6.0
        );
    }
    out.push_str("</svg>\n");
    out
}

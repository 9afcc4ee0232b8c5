//! Deterministic SVG of solution curves with their dual subdivisions.
//!
//! Each solution gets a panel: the curve in a square world box around its
//! vertices, ends clipped at the box, and an inset with the dual polygon.

use std::fmt::Write as _;

use num_traits::ToPrimitive;

use tropical_refine::lattice::{LatticePolygon, LatticeVector, RatPoint};
use tropical_refine::real::{Endpoint, ParamCurve};
use tropical_refine::solver::TropicalSolution;
use tropical_refine::subdivision::dual_subdivision;

use crate::CliError;

const CURVE: f64 = 320.0;
const PAD: f64 = 20.0;
const INSET: f64 = 120.0;
const PANEL_W: f64 = CURVE + INSET + 3.0 * PAD;
const PANEL_H: f64 = CURVE + 2.0 * PAD + 20.0;
const STROKE: f64 = 1.5;

fn f(p: &RatPoint) -> (f64, f64) {
    (p.x.to_f64().unwrap_or(0.0), p.y.to_f64().unwrap_or(0.0))
}

/// Square world box `(x0, y0, side)` around `points` with a margin.
fn world_box(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let side = (x1 - x0).max(y1 - y0);
    let margin = (0.3 * side).max(1.0);
    let side = side + 2.0 * margin;
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    (cx - side / 2.0, cy - side / 2.0, side)
}

/// Parameter at which the ray `p + t u` leaves the box.
fn exit_time(p: (f64, f64), u: LatticeVector, bx: (f64, f64, f64)) -> f64 {
    let (x0, y0, side) = bx;
    let axis = |start: f64, d: f64, lo: f64| {
        if d > 0.0 {
            (lo + side - start) / d
        } else if d < 0.0 {
            (lo - start) / d
        } else {
            f64::INFINITY
        }
    };
    axis(p.0, u.x as f64, x0).min(axis(p.1, u.y as f64, y0))
}

fn panel(out: &mut String, index: usize, sol: &TropicalSolution, polygon: &LatticePolygon) {
    let curve = ParamCurve::from_solution(sol);
    let pts: Vec<(f64, f64)> = curve.vertices.iter().map(f).collect();
    let bx = world_box(&pts);
    let top = index as f64 * PANEL_H;
    let scale = CURVE / bx.2;
    let screen = |(x, y): (f64, f64)| {
        (
            PAD + (x - bx.0) * scale,
            top + PAD + (bx.1 + bx.2 - y) * scale,
        )
    };
    writeln!(out, r#"<g id="solution-{}">"#, index + 1).unwrap();
    writeln!(
        out,
        r##"<rect x="{:.2}" y="{:.2}" width="{CURVE:.2}" height="{CURVE:.2}" fill="none" stroke="#bbbbbb"/>"##,
        PAD,
        top + PAD
    )
    .unwrap();
    for edge in &curve.edges {
        let a = pts[edge.tail];
        let b = match edge.head {
            Endpoint::Vertex(h) => pts[h],
            Endpoint::End { .. } => {
                let t = exit_time(a, edge.slope, bx);
                (a.0 + t * edge.slope.x as f64, a.1 + t * edge.slope.y as f64)
            }
        };
        let weight = edge.slope.lattice_length();
        let (sa, sb) = (screen(a), screen(b));
        writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="{:.2}"/>"#,
            sa.0,
            sa.1,
            sb.0,
            sb.1,
            STROKE * weight as f64
        )
        .unwrap();
        if weight >= 2 {
            let (lx, ly) = (0.4 * sa.0 + 0.6 * sb.0 + 4.0, 0.4 * sa.1 + 0.6 * sb.1 - 4.0);
            writeln!(
                out,
                r#"<text x="{lx:.2}" y="{ly:.2}" font-size="11">{weight}</text>"#
            )
            .unwrap();
        }
    }
    for &p in &pts {
        let (x, y) = screen(p);
        writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.50" fill="black"/>"#
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12">{}: {} mq = {}</text>"#,
        PAD,
        top + PAD + CURVE + 16.0,
        index + 1,
        sol.combinatorial_type(),
        sol.refined_multiplicity()
    )
    .unwrap();
    inset(out, &curve, polygon, (2.0 * PAD + CURVE, top + PAD));
    writeln!(out, "</g>").unwrap();
}

fn inset(out: &mut String, curve: &ParamCurve, polygon: &LatticePolygon, origin: (f64, f64)) {
    let pv = polygon.vertices();
    let (mut x0, mut x1, mut y0, mut y1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for &(x, y) in pv {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let unit = INSET / ((x1 - x0).max(y1 - y0).max(1) as f64);
    let map = |(x, y): (i64, i64)| {
        (
            origin.0 + (x - x0) as f64 * unit,
            origin.1 + (y1 - y) as f64 * unit,
        )
    };
    let points = |vs: &[(i64, i64)]| {
        vs.iter()
            .map(|&v| {
                let (x, y) = map(v);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(out, r#"<g class="dual">"#).unwrap();
    // cells are placed relative to their own minimum; align with the polygon's
    if let Ok(sub) = dual_subdivision(curve) {
        let min = sub
            .cells
            .iter()
            .flat_map(|c| c.vertices.iter().copied())
            .min()
            .unwrap_or((0, 0));
        let anchor = pv.iter().copied().min().unwrap_or((0, 0));
        for cell in &sub.cells {
            let shifted: Vec<(i64, i64)> = cell
                .vertices
                .iter()
                .map(|&(x, y)| (x - min.0 + anchor.0, y - min.1 + anchor.1))
                .collect();
            let fill = if cell.is_node { "#f3d9a4" } else { "#dce9f5" };
            writeln!(
                out,
                r##"<polygon points="{}" fill="{fill}" stroke="#336699" stroke-width="0.75"/>"##,
                points(&shifted)
            )
            .unwrap();
        }
    }
    writeln!(
        out,
        r#"<polygon points="{}" fill="none" stroke="black" stroke-width="1.25"/>"#,
        points(pv)
    )
    .unwrap();
    writeln!(out, "</g>").unwrap();
}

/// One panel per solution, stacked vertically.
pub fn render_svg(
    solutions: &[TropicalSolution],
    polygon: &LatticePolygon,
) -> Result<String, CliError> {
    if solutions.is_empty() {
        return Err(CliError::EmptyPlot);
    }
    let height = PANEL_H * solutions.len() as f64;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PANEL_W:.0}" height="{height:.0}" viewBox="0 0 {PANEL_W:.0} {height:.0}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (i, sol) in solutions.iter().enumerate() {
        panel(&mut out, i, sol, polygon);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

//! DOT and SVG figures of labeled torus grids.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::labeling::Labeling;
use crate::torus::{diagonal_of_edge, EdgeRef, GridDims, Orientation, VertexRef};
use crate::verify::vertex_weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Dot,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Annotate {
    /// Edge labels only.
    Labels,
    /// Edge labels, plus each vertex's weight.
    Weights,
    /// Edge labels, plus each vertex's HV and VH partial weights.
    Corners,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderSpec {
    pub format: Format,
    pub annotate: Annotate,
    pub highlight_diagonals: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec { format: Format::Dot, annotate: Annotate::Labels, highlight_diagonals: false }
    }
}

/// HV and VH partial weights at `v`. The HV corner enters along
/// `H(i, j-1)` and leaves along `V(i, j)`; the VH corner enters along
/// `V(i-1, j)` and leaves along `H(i, j)`. This does not depend on where
/// the diagonals are taken to start.
pub fn corner_partials(lab: &Labeling, v: VertexRef) -> (u64, u64) {
    let g = lab.dims();
    let w = |e| lab.get(e) as u64;
    let hv = w(EdgeRef::h(v.i, g.col(v.j as i64 - 1))) + w(EdgeRef::v(v.i, v.j));
    let vh = w(EdgeRef::v(g.row(v.i as i64 - 1), v.j)) + w(EdgeRef::h(v.i, v.j));
    (hv, vh)
}

fn vertex_caption(lab: &Labeling, v: VertexRef, annotate: Annotate) -> Option<String> {
    match annotate {
        Annotate::Labels => None,
        Annotate::Weights => Some(vertex_weight(lab, v).to_string()),
        Annotate::Corners => {
            let (hv, vh) = corner_partials(lab, v);
            Some(format!("{hv}+{vh}"))
        }
    }
}

/// Evenly spaced hue for diagonal `j` of `d`, in `[0, 1)`.
fn hue(j: usize, d: usize) -> f64 {
    (j - 1) as f64 / d as f64
}

fn dot_color(e: EdgeRef, g: &GridDims) -> String {
    format!("{:.3} 0.750 0.800", hue(diagonal_of_edge(e, g).diag, g.d))
}

fn svg_color(e: EdgeRef, g: &GridDims) -> String {
    format!("hsl({:.0},70%,42%)", 360.0 * hue(diagonal_of_edge(e, g).diag, g.d))
}

pub fn render(lab: &Labeling, spec: &RenderSpec) -> String {
    match spec.format {
        Format::Dot => render_dot(lab, spec),
        Format::Svg => render_svg(lab, spec),
    }
}

fn render_dot(lab: &Labeling, spec: &RenderSpec) -> String {
    let g = *lab.dims();
    let mut out = String::new();
    writeln!(out, "graph torus_{}x{} {{", g.n, g.m).unwrap();
    writeln!(out, "  layout=neato;").unwrap();
    writeln!(out, "  node [shape=circle, fontsize=10];").unwrap();
    for v in g.vertices() {
        let caption = vertex_caption(lab, v, spec.annotate).map(|c| format!("\\n{c}")).unwrap_or_default();
        writeln!(
            out,
            "  x_{i}_{j} [label=\"x{i},{j}{caption}\", pos=\"{x},{y}!\"];",
            i = v.i,
            j = v.j,
            x = 1.5 * (v.j - 1) as f64,
            y = -1.5 * (v.i - 1) as f64,
        )
        .unwrap();
    }
    for (e, label) in lab.iter() {
        let (a, b) = g.endpoints(e);
        let color = if spec.highlight_diagonals { format!(", color=\"{}\"", dot_color(e, &g)) } else { String::new() };
        writeln!(out, "  x_{}_{} -- x_{}_{} [label=\"{label}\"{color}];", a.i, a.j, b.i, b.j).unwrap();
    }
    out.push_str("}\n");
    out
}

const CELL: f64 = 72.0;
const MARGIN: f64 = 60.0;

fn render_svg(lab: &Labeling, spec: &RenderSpec) -> String {
    let g = *lab.dims();
    let width = 2.0 * MARGIN + CELL * (g.m - 1) as f64;
    let height = 2.0 * MARGIN + CELL * (g.n - 1) as f64;
    let at = |v: VertexRef| (MARGIN + CELL * (v.j - 1) as f64, MARGIN + CELL * (v.i - 1) as f64);
    let stub = CELL / 2.0;

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\">"
    )
    .unwrap();
    writeln!(out, "  <title>C_{} x C_{}</title>", g.n, g.m).unwrap();

    let line = |out: &mut String, x1: f64, y1: f64, x2: f64, y2: f64, color: &str, dashed: bool| {
        let dash = if dashed { " stroke-dasharray=\"4 3\"" } else { "" };
        writeln!(
            out,
            "  <line class=\"edge\" x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"{color}\" stroke-width=\"2\"{dash}/>"
        )
        .unwrap();
    };
    let text = |out: &mut String, x: f64, y: f64, size: u32, s: &str| {
        writeln!(out, "  <text x=\"{x:.1}\" y=\"{y:.1}\" font-size=\"{size}\" text-anchor=\"middle\">{s}</text>")
            .unwrap();
    };

    for (e, label) in lab.iter() {
        let color = if spec.highlight_diagonals { svg_color(e, &g) } else { "#222".to_string() };
        let (a, b) = g.endpoints(e);
        let (ax, ay) = at(a);
        let (bx, by) = at(b);
        let wraps = match e.orient {
            Orientation::H => e.j == g.m,
            Orientation::V => e.i == g.n,
        };
        let label = label.to_string();
        if !wraps {
            line(&mut out, ax, ay, bx, by, &color, false);
            let (dx, dy) = match e.orient {
                Orientation::H => (0.0, -5.0),
                Orientation::V => (-12.0, 4.0),
            };
            text(&mut out, (ax + bx) / 2.0 + dx, (ay + by) / 2.0 + dy, 11, &label);
            continue;
        }
        // wrap-around edges leave through one margin and re-enter through the other
        match e.orient {
            Orientation::H => {
                line(&mut out, ax, ay, ax + stub, ay, &color, true);
                line(&mut out, bx - stub, by, bx, by, &color, true);
                text(&mut out, ax + stub / 2.0, ay - 5.0, 11, &label);
            }
            Orientation::V => {
                line(&mut out, ax, ay, ax, ay + stub, &color, true);
                line(&mut out, bx, by - stub, bx, by, &color, true);
                text(&mut out, ax - 12.0, ay + stub / 2.0 + 4.0, 11, &label);
            }
        }
    }
    for v in g.vertices() {
        let (x, y) = at(v);
        writeln!(
            out,
            "  <circle class=\"vertex\" cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"13\" fill=\"white\" stroke-width=\"1.5\" stroke=\"black\"/>"
        )
        .unwrap();
        match vertex_caption(lab, v, spec.annotate) {
            Some(caption) => text(&mut out, x, y + 4.0, 9, &caption),
            None => text(&mut out, x, y + 4.0, 9, &format!("{},{}", v.i, v.j)),
        }
    }
    out.push_str("</svg>\n");
    out
}

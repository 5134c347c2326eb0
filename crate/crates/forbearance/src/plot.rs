//! Phase-portrait rendering: SVG quiver plots and CSV grids.
//!
//! Output is plain string building with fixed float formatting, so identical
//! inputs produce byte-identical documents.

use std::fmt::Write as _;
use std::path::Path;

use crate::dynamics::{
    equilibrium_point, integrate_trajectory, vector_field, GridSpec, LinearSystem2x2,
    VectorFieldGrid,
};
use crate::econ::ProductionParams;
use crate::Result;

const CANVAS: f64 = 720.0;
const MARGIN: f64 = 48.0;

/// Default integration window for sampled trajectories.
const TRAJECTORY_T_END: f64 = 50.0;
const TRAJECTORY_DT: f64 = 0.01;
/// Keep every k-th integration point in the polyline.
const TRAJECTORY_STRIDE: usize = 10;

/// Iso-output curves of a degree-one technology, drawn over the phase grid
/// with the horizontal axis as the first input and the vertical as the
/// second.
#[derive(Debug, Clone)]
pub struct LevelSetOverlay {
    pub production: ProductionParams,
    pub levels: Vec<f64>,
}

/// CSV document of a sampled vector field with header `x,y,dx,dy`.
pub fn vector_field_csv(field: &VectorFieldGrid) -> String {
    let mut out = String::from("x,y,dx,dy\n");
    for a in &field.arrows {
        let _ = writeln!(out, "{},{},{},{}", a.x, a.y, a.dx, a.dy);
    }
    out
}

struct Frame {
    x0: f64,
    y0: f64,
    sx: f64,
    sy: f64,
}

impl Frame {
    fn new(grid: &GridSpec) -> Self {
        let span = CANVAS - 2.0 * MARGIN;
        Frame {
            x0: grid.x_range.0,
            y0: grid.y_range.0,
            sx: span / (grid.x_range.1 - grid.x_range.0),
            sy: span / (grid.y_range.1 - grid.y_range.0),
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) * self.sx
    }

    /// Screen y grows downward.
    fn py(&self, y: f64) -> f64 {
        CANVAS - MARGIN - (y - self.y0) * self.sy
    }
}

fn fmt(v: f64) -> String {
    format!("{:.2}", v)
}

/// Renders the phase portrait as an SVG 1.1 document: the sampled field as
/// arrows scaled to the grid cell, sample trajectories as polylines, the
/// equilibrium (when it exists) as a marked point, and optional iso-output
/// curves.
pub fn render_phase_svg(
    sys: &LinearSystem2x2,
    field: &VectorFieldGrid,
    sample_starts: &[[f64; 2]],
    overlay: Option<&LevelSetOverlay>,
) -> String {
    let grid = &field.spec;
    let frame = Frame::new(grid);
    let cell = ((CANVAS - 2.0 * MARGIN) / (grid.nx - 1) as f64)
        .min((CANVAS - 2.0 * MARGIN) / (grid.ny - 1) as f64);
    let max_speed = field
        .arrows
        .iter()
        .map(|a| (a.dx * a.dx + a.dy * a.dy).sqrt())
        .fold(0.0, f64::max);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
        c = CANVAS
    );
    let _ = writeln!(svg, r#"<rect width="{c}" height="{c}" fill="white"/>"#, c = CANVAS);
    let _ = writeln!(
        svg,
        r#"<rect x="{m}" y="{m}" width="{w}" height="{w}" fill="none" stroke="#333" stroke-width="1"/>"#,
        m = MARGIN,
        w = CANVAS - 2.0 * MARGIN
    );

    // vector field
    let _ = writeln!(svg, r#"<g stroke="#555" stroke-width="1" fill="#555">"#);
    for a in &field.arrows {
        let speed = (a.dx * a.dx + a.dy * a.dy).sqrt();
        if max_speed <= 0.0 || speed == 0.0 {
            let _ = writeln!(
                svg,
                r#"<circle cx="{}" cy="{}" r="1.5"/>"#,
                fmt(frame.px(a.x)),
                fmt(frame.py(a.y))
            );
            continue;
        }
        let len = 0.45 * cell * (speed / max_speed);
        let ux = a.dx / speed;
        let uy = a.dy / speed;
        let x1 = frame.px(a.x);
        let y1 = frame.py(a.y);
        // screen y is flipped
        let x2 = x1 + len * ux;
        let y2 = y1 - len * uy;
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            fmt(x1),
            fmt(y1),
            fmt(x2),
            fmt(y2)
        );
        // arrow head: two short back-strokes
        let head = (0.3 * len).min(4.0).max(1.5);
        for side in [-1.0, 1.0] {
            // rotate the reversed direction by +-30 degrees
            let angle = side * 0.5236_f64;
            let (sin, cos) = angle.sin_cos();
            let bx = -ux * cos + uy * sin * side * 0.0 - uy * sin; // see below
            let _ = bx; // placeholder removed in favor of explicit rotation
            let rx = (-ux) * cos - (-(-uy)) * 0.0 - (-uy) * sin;
            let _ = rx;
            // direction on screen: (ux, -uy); reversed: (-ux, uy)
            let dxs = -ux * cos - uy * sin * side;
            let dys = uy * cos - ux * sin * side;
            let hx = x2 + head * dxs;
            let hy = y2 - head * dys * -1.0 - 2.0 * head * dys * 0.0 + 0.0;
            let _ = (hx, hy);
            let sx2 = x2 + head * (-ux * cos + uy * sin * side);
            let sy2 = y2 + head * (uy * cos + ux * sin * side);
            let _ = writeln!(
                svg,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                fmt(x2),
                fmt(y2),
                fmt(sx2),
                fmt(sy2)
            );
        }
    }
    let _ = writeln!(svg, "</g>");

    // iso-output overlay
    if let Some(ov) = overlay {
        let p = &ov.production;
        if p.omega > 0.0 {
            let _ = writeln!(
                svg,
                r#"<g stroke="#2a7" stroke-width="1.2" fill="none" stroke-dasharray="6 4">"#
            );
            for &level in &ov.levels {
                if level <= 0.0 {
                    continue;
                }
                let mut points = String::new();
                let steps = 200;
                for k in 0..=steps {
                    let x = grid.x_range.0
                        + (grid.x_range.1 - grid.x_range.0) * k as f64 / steps as f64;
                    if x <= 0.0 {
                        continue;
                    }
                    // level = tfp * x^alpha * y^omega  =>  y = (level / (tfp x^alpha))^(1/omega)
                    let y = (level / (p.tfp * x.powf(p.alpha))).powf(1.0 / p.omega);
                    if !y.is_finite() || y < grid.y_range.0 || y > grid.y_range.1 {
                        continue;
                    }
                    let _ = write!(points, "{},{} ", fmt(frame.px(x)), fmt(frame.py(y)));
                }
                if !points.is_empty() {
                    let _ = writeln!(svg, r#"<polyline points="{}"/>"#, points.trim_end());
                }
            }
            let _ = writeln!(svg, "</g>");
        }
    }

    // sample trajectories
    if !sample_starts.is_empty() {
        let _ = writeln!(svg, r#"<g stroke="#1565c0" stroke-width="1.5" fill="none">"#);
        for start in sample_starts {
            if let Ok(traj) = integrate_trajectory(sys, *start, TRAJECTORY_T_END, TRAJECTORY_DT)
            {
                let mut points = String::new();
                for (i, s) in traj.states.iter().enumerate() {
                    if i % TRAJECTORY_STRIDE != 0 && i != traj.states.len() - 1 {
                        continue;
                    }
                    let _ = write!(points, "{},{} ", fmt(frame.px(s[0])), fmt(frame.py(s[1])));
                }
                let _ = writeln!(svg, r#"<polyline points="{}"/>"#, points.trim_end());
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{}" cy="{}" r="3" fill="#1565c0" stroke="none"/>"#,
                    fmt(frame.px(start[0])),
                    fmt(frame.py(start[1]))
                );
            }
        }
        let _ = writeln!(svg, "</g>");
    }

    // equilibrium marker
    if let Ok(eq) = equilibrium_point(sys) {
        let x = frame.px(eq[0]);
        let y = frame.py(eq[1]);
        let _ = writeln!(
            svg,
            r#"<circle cx="{}" cy="{}" r="5" fill="none" stroke="#c62828" stroke-width="2"/>"#,
            fmt(x),
            fmt(y)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#c62828" stroke-width="1"/>"#,
            fmt(x - 8.0),
            fmt(y),
            fmt(x + 8.0),
            fmt(y)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#c62828" stroke-width="1"/>"#,
            fmt(x),
            fmt(y - 8.0),
            fmt(x),
            fmt(y + 8.0)
        );
    }

    let _ = writeln!(svg, "</svg>");
    svg
}

/// Renders and writes the phase portrait: the SVG document to `svg_path` and,
/// when given, the raw grid CSV to `csv_path`.
pub fn phase_portrait_export(
    sys: &LinearSystem2x2,
    grid: &GridSpec,
    sample_starts: &[[f64; 2]],
    overlay: Option<&LevelSetOverlay>,
    svg_path: &Path,
    csv_path: Option<&Path>,
) -> Result<()> {
    let field = vector_field(sys, grid);
    std::fs::write(svg_path, render_phase_svg(sys, &field, sample_starts, overlay))?;
    if let Some(path) = csv_path {
        std::fs::write(path, vector_field_csv(&field))?;
    }
    Ok(())
}

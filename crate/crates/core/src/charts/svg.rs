//! Standalone SVG rendering of chart layouts.

use std::fmt::Write;

use super::ChartLayout;
use crate::geometry::{ray_extent_unchecked, sector_arc_angle, Orientation, Point2};
use crate::Scalar;

pub const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f",
    "#bab0ac",
];

const CELL: f64 = 2.2;
const ORIGIN: f64 = -1.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SvgOptions {
    /// Percentage text inside each sector.
    pub labels: bool,
    /// Cells per row; 0 picks `min(count, 3)`.
    pub columns: usize,
    /// Pixel width of one cell.
    pub cell_px: u32,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            labels: true,
            columns: 0,
            cell_px: 240,
        }
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn pt(p: Point2<f64>) -> String {
    format!("{} {}", num(p.x), num(p.y))
}

fn to_f64<T: Scalar>(p: Point2<T>) -> Point2<f64> {
    Point2::new(p.x.to_f64_lossy(), p.y.to_f64_lossy())
}

/// Renders layouts on a grid. Shapes are drawn in math coordinates inside a
/// `scale(1,-1)` group, so a counterclockwise arc has sweep flag 1.
pub fn render_svg<T: Scalar>(layouts: &[ChartLayout<T>], opts: &SvgOptions) -> String {
    let count = layouts.len().max(1);
    let cols = if opts.columns == 0 { count.min(3) } else { opts.columns };
    let rows = count.div_ceil(cols);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        opts.cell_px as usize * cols,
        opts.cell_px as usize * rows,
        num(ORIGIN),
        num(ORIGIN),
        num(CELL * cols as f64),
        num(CELL * rows as f64),
    );
    for (k, layout) in layouts.iter().enumerate() {
        let (r, c) = (k / cols, k % cols);
        let _ = writeln!(
            out,
            r#"<g transform="translate({} {})">"#,
            num(CELL * c as f64),
            num(CELL * r as f64)
        );
        cell(&mut out, layout, opts);
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn cell<T: Scalar>(out: &mut String, layout: &ChartLayout<T>, opts: &SvgOptions) {
    let apex = to_f64(layout.apex);
    let pts: Vec<Point2<f64>> = layout.boundary_points.iter().map(|&p| to_f64(p)).collect();
    let n = pts.len();
    let sweep_flag = match layout.orientation {
        Orientation::Counterclockwise => 1,
        Orientation::Clockwise => 0,
    };
    out.push_str("<g transform=\"scale(1 -1)\">\n");
    if n == 1 {
        let _ = writeln!(
            out,
            r#"<circle class="sector" cx="0" cy="0" r="1" fill="{}"/>"#,
            PALETTE[0]
        );
    } else {
        for i in 0..n {
            let beta = layout
                .sector(i)
                .and_then(|s| sector_arc_angle(&s))
                .map(|b| b.to_f64_lossy())
                .unwrap_or(0.0);
            let large = u8::from(beta > std::f64::consts::PI);
            let _ = writeln!(
                out,
                r#"<path class="sector" d="M {} L {} A 1 1 0 {large} {sweep_flag} {} L {} Z" fill="{}" stroke="white" stroke-width="0.01"/>"#,
                pt(apex),
                pt(pts[i]),
                pt(pts[(i + 1) % n]),
                pt(apex),
                PALETTE[i % PALETTE.len()],
            );
        }
    }
    for p in &pts {
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="0.008"/>"#,
            num(apex.x),
            num(apex.y),
            num(p.x),
            num(p.y)
        );
    }
    out.push_str("<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"black\" stroke-width=\"0.01\"/>\n");
    let _ = writeln!(
        out,
        r#"<circle class="apex" cx="{}" cy="{}" r="0.02" fill="black"/>"#,
        num(apex.x),
        num(apex.y)
    );
    out.push_str("</g>\n");
    if opts.labels {
        out.push_str("<g font-family=\"sans-serif\" font-size=\"0.11\" text-anchor=\"middle\" dominant-baseline=\"middle\">\n");
        for i in 0..n {
            let mid = layout.ray_angles[i] + layout.orientation.sign::<T>() * layout.sweep(i) / T::lit(2.0);
            let r = ray_extent_unchecked(layout.apex, mid).to_f64_lossy();
            let mid = mid.to_f64_lossy();
            let at = apex.add(Point2::unit(mid).scale(0.6 * r));
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}">{:.1}%</text>"#,
                num(at.x),
                num(-at.y),
                layout.shares[i].to_f64_lossy() * 100.0
            );
        }
        out.push_str("</g>\n");
    }
}

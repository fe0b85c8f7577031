//! SVG drawings of planar oriented graphs.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::orientation::OrientedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RenderOptions {
    /// Width and height of the square canvas in pixels.
    pub size: f64,
    pub stroke_width: f64,
    pub point_radius: f64,
    pub margin: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            size: 800.0,
            stroke_width: 1.0,
            point_radius: 3.0,
            margin: 20.0,
        }
    }
}

fn fmt(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

/// Draws the points as dots and every edge `u -> v` as a line ending in an
/// arrowhead at `v`. Coordinates are scaled uniformly into the canvas, with
/// the y axis pointing up.
pub fn render_svg(ps: &PointSet, g: &OrientedGraph, opts: &RenderOptions) -> Result<String> {
    if ps.dim() != 2 {
        return Err(Error::NotPlanar(ps.dim()));
    }
    if g.len() != ps.len() {
        return Err(Error::InvalidParameter(format!(
            "graph has {} vertices but there are {} points",
            g.len(),
            ps.len()
        )));
    }
    if !(opts.size > 2.0 * opts.margin && opts.stroke_width > 0.0 && opts.point_radius >= 0.0) {
        return Err(Error::InvalidParameter("bad render options".into()));
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in ps.iter() {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let inner = opts.size - 2.0 * opts.margin;
    let scale = if span > 0.0 { inner / span } else { 1.0 };
    let at = |i: usize| {
        let p = ps.point(i);
        (
            opts.margin + (p[0] - lo[0]) * scale,
            opts.size - opts.margin - (p[1] - lo[1]) * scale,
        )
    };

    let mut s = String::new();
    let size = fmt(opts.size);
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )
    .unwrap();
    writeln!(
        s,
        r##"<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="8" markerHeight="8" markerUnits="userSpaceOnUse" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#333"/></marker></defs>"##
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r##"<g stroke="#333" stroke-width="{}" marker-end="url(#arrow)">"##,
        fmt(opts.stroke_width)
    )
    .unwrap();
    for (u, v) in g.edges() {
        let (x1, y1) = at(u);
        let (x2, y2) = at(v);
        // stop the arrow at the rim of the target dot
        let len = (x2 - x1).hypot(y2 - y1);
        let cut = if len > 0.0 { (opts.point_radius / len).min(0.5) } else { 0.0 };
        let (x2, y2) = (x2 - (x2 - x1) * cut, y2 - (y2 - y1) * cut);
        writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            fmt(x1),
            fmt(y1),
            fmt(x2),
            fmt(y2)
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();
    writeln!(s, r##"<g fill="#c0392b">"##).unwrap();
    for i in 0..ps.len() {
        let (x, y) = at(i);
        writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="{}"/>"#,
            fmt(x),
            fmt(y),
            fmt(opts.point_radius)
        )
        .unwrap();
    }
    writeln!(s, "</g>\n</svg>").unwrap();
    Ok(s)
}

//! Browser bindings. Exports take typed arrays and return JSON strings; the
//! `*_json` functions hold the logic and run natively in tests.

use std::sync::Arc;

use oriented_spanner::dilation::all_pairs_dijkstra;
use oriented_spanner::gen::{generate, Distribution};
use oriented_spanner::*;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn points(flat: &[f64]) -> Result<PointSet, String> {
    if !flat.len().is_multiple_of(2) {
        return Err("expected x, y pairs".into());
    }
    PointSet::from_flat(2, flat.to_vec()).map_err(|e| e.to_string())
}

fn real(v: f64) -> serde_json::Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!("unbounded")
    }
}

/// Seeded points in the unit square as `[x0, y0, x1, y1, ...]`.
pub fn random_points_flat(n: usize, clustered: bool, seed: u64) -> Result<Vec<f64>, String> {
    let dist = if clustered {
        Distribution::Clustered
    } else {
        Distribution::UniformCube
    };
    Ok(generate(n, 2, dist, seed).map_err(|e| e.to_string())?.flat().to_vec())
}

/// Spanner edges, stats and exact dilation.
pub fn spanner_json(flat: &[f64], eps: f64, practical: bool) -> Result<String, String> {
    let ps = points(flat)?;
    let cfg = if practical {
        SpannerConfig::practical(eps)
    } else {
        SpannerConfig::theorem(eps)
    }
    .map_err(|e| e.to_string())?;
    let sp = build_oriented_spanner(&ps, &cfg).map_err(|e| e.to_string())?;
    let edges: Vec<[usize; 2]> = sp.graph.edges().map(|(u, v)| [u, v]).collect();
    let (dilation, witness) = if ps.len() >= 3 {
        let apsp = all_pairs_dijkstra(&ps, &sp.graph);
        let r = dilation::exact_oriented_dilation_with(&ps, &apsp).map_err(|e| e.to_string())?;
        (real(r.value), r.witness.map(|w| [w.p, w.q, w.r]))
    } else {
        (json!(null), None)
    };
    Ok(json!({
        "edges": edges,
        "stats": sp.stats,
        "bound": 2.0 + cfg.eps,
        "dilation": dilation,
        "witness": witness,
    })
    .to_string())
}

/// Approximate and exact minimum-perimeter triangles through `p` and `q`.
pub fn min_triangle_json(flat: &[f64], p: usize, q: usize, eps1: f64) -> Result<String, String> {
    let ps = Arc::new(points(flat)?);
    let cfg = TriangleQueryConfig::new(eps1, 2).map_err(|e| e.to_string())?;
    let mut index = AnnIndex::build(ps.clone());
    let got = min_triangle::approx_min_triangle_detailed(&mut index, p, q, &cfg).map_err(|e| e.to_string())?;
    let best = exact_min_triangle(ps.as_ref(), p, q).map_err(|e| e.to_string())?;
    Ok(json!({
        "approximate": got.triple,
        "exact": best,
        "ratio": got.triple.perimeter / best.perimeter,
        "ann_queries": got.ann_queries,
    })
    .to_string())
}

/// Exact and approximate oriented dilation of the graph `edges`
/// (`[u0, v0, u1, v1, ...]`).
pub fn dilation_json(flat: &[f64], edges: &[u32], eps: f64) -> Result<String, String> {
    let ps = points(flat)?;
    if !edges.len().is_multiple_of(2) {
        return Err("expected u, v pairs".into());
    }
    let g = OrientedGraph::from_edges(
        ps.len(),
        edges.chunks(2).map(|e| (e[0] as usize, e[1] as usize)),
    )
    .map_err(|e| e.to_string())?;
    let exact = exact_oriented_dilation(&ps, &g).map_err(|e| e.to_string())?;
    let cfg = ApproxDilationConfig::theorem(eps).map_err(|e| e.to_string())?;
    let approx = approx_oriented_dilation(&ps, &g, &cfg, &mut dijkstra_oracle(&g, &ps)).map_err(|e| e.to_string())?;
    Ok(json!({
        "exact": real(exact.value),
        "exact_pairs": exact.pairs_examined,
        "approx": real(approx.value),
        "approx_pairs": approx.pairs_examined,
        "witness": approx.witness.map(|w| [w.p, w.q, w.r]),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn random_points(n: usize, clustered: bool, seed: u32) -> Result<Vec<f64>, JsError> {
    random_points_flat(n, clustered, seed as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn build_spanner(points: &[f64], eps: f64, practical: bool) -> Result<String, JsError> {
    spanner_json(points, eps, practical).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn min_triangle(points: &[f64], p: usize, q: usize, eps1: f64) -> Result<String, JsError> {
    min_triangle_json(points, p, q, eps1).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn compare_dilation(points: &[f64], edges: &[u32], eps: f64) -> Result<String, JsError> {
    dilation_json(points, edges, eps).map_err(|e| JsError::new(&e))
}

//! Brute-force references: exhaustive orientation search, Bellman–Ford
//! all-pairs distances and a second minimum-triangle scan. None of these
//! share code paths with the routines they are used to check.

use serde::Serialize;

use crate::dilation::DistanceMatrix;
use crate::error::{Error, Result};
use crate::geometry::{Metric, TriangleTriple};
use crate::orientation::OrientedGraph;

/// Largest edge count accepted by [`exhaustive_best_orientation`].
pub const MAX_EXHAUSTIVE_EDGES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrientationSearchResult {
    pub best_value: f64,
    /// For each input edge `(u, v)`: `true` when kept as `u -> v`.
    pub orientation: Vec<bool>,
    pub enumerated: u64,
}

impl OrientationSearchResult {
    pub fn graph(&self, n: usize, edges: &[(usize, usize)]) -> Result<OrientedGraph> {
        OrientedGraph::from_edges(
            n,
            edges
                .iter()
                .zip(&self.orientation)
                .map(|(&(u, v), &fwd)| if fwd { (u, v) } else { (v, u) }),
        )
    }
}

/// Minimum oriented dilation over all `2^m` orientations of `edges`.
/// Orientations are enumerated as bitmasks (bit `i` set flips edge `i`); the
/// lowest mask wins ties.
pub fn exhaustive_best_orientation<M: Metric + ?Sized>(
    metric: &M,
    edges: &[(usize, usize)],
) -> Result<OrientationSearchResult> {
    let n = metric.len();
    if edges.len() > MAX_EXHAUSTIVE_EDGES {
        return Err(Error::TooManyEdges {
            count: edges.len(),
            cap: MAX_EXHAUSTIVE_EDGES,
        });
    }
    if n < 3 {
        return Err(Error::DilationUndefined(n));
    }
    let mut seen = std::collections::HashSet::new();
    for &(u, v) in edges {
        if u >= n || v >= n || u == v || !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::InvalidEdge(u, v));
        }
    }

    let mut denominators = Vec::with_capacity(n * (n - 1) / 2);
    for p in 0..n {
        for q in p + 1..n {
            denominators.push((p, q, scan_min_triangle(metric, p, q)?.perimeter));
        }
    }

    let total = 1u64 << edges.len();
    let mut best = (f64::INFINITY, 0u64);
    for mask in 0..total {
        let oriented = edges.iter().enumerate().map(|(i, &(u, v))| {
            if mask >> i & 1 == 0 {
                (u, v)
            } else {
                (v, u)
            }
        });
        let g = OrientedGraph::from_edges(n, oriented)?;
        let d = bellman_ford_apsp(metric, &g);
        let value = denominators
            .iter()
            .map(|&(p, q, per)| (d.get(p, q) + d.get(q, p)) / per)
            .fold(f64::NEG_INFINITY, f64::max);
        if value < best.0 || mask == 0 {
            best = (value, mask);
        }
    }
    Ok(OrientationSearchResult {
        best_value: best.0,
        orientation: (0..edges.len()).map(|i| best.1 >> i & 1 == 0).collect(),
        enumerated: total,
    })
}

/// All-pairs directed distances by Bellman–Ford from every source.
pub fn bellman_ford_apsp<M: Metric + ?Sized>(metric: &M, g: &OrientedGraph) -> DistanceMatrix {
    let n = g.len();
    let edges: Vec<(usize, usize, f64)> = g.edges().map(|(u, v)| (u, v, metric.dist(u, v))).collect();
    let mut out = DistanceMatrix::new(n);
    let mut dist = vec![f64::INFINITY; n];
    for src in 0..n {
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        dist[src] = 0.0;
        for _ in 1..n.max(2) {
            let mut changed = false;
            for &(u, v, w) in &edges {
                if dist[u] + w < dist[v] {
                    dist[v] = dist[u] + w;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for (t, &d) in dist.iter().enumerate() {
            out.set(src, t, d);
        }
    }
    out
}

/// Minimum-perimeter triangle through `p` and `q` by a descending scan; ties
/// resolve to the lowest third index.
pub fn scan_min_triangle<M: Metric + ?Sized>(metric: &M, p: usize, q: usize) -> Result<TriangleTriple> {
    let n = metric.len();
    if n < 3 {
        return Err(Error::NoTriangle(n));
    }
    if p >= n || q >= n {
        return Err(Error::IndexOutOfRange { index: p.max(q), len: n });
    }
    if p == q {
        return Err(Error::SamePoint(p));
    }
    let mut best: Option<TriangleTriple> = None;
    for x in (0..n).rev() {
        if x == p || x == q {
            continue;
        }
        let per = metric.perimeter(p, q, x);
        if best.is_none_or(|b| per <= b.perimeter) {
            best = Some(TriangleTriple { p, q, r: x, perimeter: per });
        }
    }
    Ok(best.expect("a third point exists"))
}

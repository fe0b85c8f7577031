//! Oriented graphs and the greedy orientation of a triangle list.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::{PointSet, TriangleTriple};

/// A directed graph on `0..n` with no self-loops that never holds both
/// `(u, v)` and `(v, u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedGraph {
    out: Vec<Vec<usize>>,
    edges: usize,
}

impl OrientedGraph {
    pub fn empty(n: usize) -> Self {
        OrientedGraph {
            out: vec![Vec::new(); n],
            edges: 0,
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = OrientedGraph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `(u, v)`. Re-adding an existing edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.out.len();
        if u >= n || v >= n || u == v {
            return Err(Error::InvalidEdge(u, v));
        }
        if self.has_edge(v, u) {
            return Err(Error::AntiParallel(u, v));
        }
        if let Err(pos) = self.out[u].binary_search(&v) {
            self.out[u].insert(pos, v);
            self.edges += 1;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out.get(u).is_some_and(|o| o.binary_search(&v).is_ok())
    }

    pub fn out_neighbours(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    /// Edges sorted by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    /// The undirected support as `(min, max)` pairs, sorted.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut s: Vec<_> = self.edges().map(|(u, v)| (u.min(v), u.max(v))).collect();
        s.sort_unstable();
        s
    }
}

/// Direction of an undirected edge `{lo, hi}`: `true` means `lo -> hi`.
type Orientation = BTreeMap<(usize, usize), Option<bool>>;

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

fn direction(map: &Orientation, u: usize, v: usize) -> Option<bool> {
    // Some(true) when oriented u -> v
    map[&key(u, v)].map(|low_to_high| low_to_high == (u < v))
}

fn set(map: &mut Orientation, u: usize, v: usize) {
    map.insert(key(u, v), Some(u < v));
}

/// Orients the union of the triangles in `triples` greedily.
///
/// Triangles are processed by increasing perimeter (stable on ties). A
/// triangle with no oriented edge becomes a directed 3-cycle whose `(p, q)`
/// edge runs from the lower to the higher index; otherwise it is completed to
/// a directed 3-cycle when its oriented edges all agree with one, and skipped
/// if not. Edges still unoriented at the end run from lower to higher index.
///
/// When every triple satisfies `|pqr| <= (1 + eps1) |pq*|`, the result has
/// `odil(p, q) <= 2 + 2 eps1` for each triple.
pub fn greedy_orient(ps: &PointSet, eps1: f64, triples: &[TriangleTriple]) -> Result<OrientedGraph> {
    if !(eps1 > 0.0) {
        return Err(Error::InvalidParameter(format!("eps1 must be positive, got {eps1}")));
    }
    let n = ps.len();
    let mut map: Orientation = BTreeMap::new();
    for t in triples {
        for i in t.vertices() {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
        }
        if t.p == t.q || t.q == t.r || t.p == t.r {
            return Err(Error::InvalidParameter(format!(
                "triple ({}, {}; {}) has repeated vertices",
                t.p, t.q, t.r
            )));
        }
        for (u, v) in [(t.p, t.q), (t.q, t.r), (t.r, t.p)] {
            map.insert(key(u, v), None);
        }
    }

    let mut order: Vec<usize> = (0..triples.len()).collect();
    order.sort_by(|&a, &b| triples[a].perimeter.total_cmp(&triples[b].perimeter));

    for &i in &order {
        let TriangleTriple { p, q, r, .. } = triples[i];
        let forward = [(p, q), (q, r), (r, p)];
        let backward = [(q, p), (r, q), (p, r)];
        let oriented: Vec<Option<bool>> = forward.iter().map(|&(u, v)| direction(&map, u, v)).collect();
        let cycle = if oriented.iter().all(Option::is_none) {
            if p < q {
                forward
            } else {
                backward
            }
        } else if oriented.iter().all(|d| d.is_none_or(|d| d)) {
            forward
        } else if oriented.iter().all(|d| d.is_none_or(|d| !d)) {
            backward
        } else {
            continue;
        };
        for (u, v) in cycle {
            set(&mut map, u, v);
        }
    }

    let mut g = OrientedGraph::empty(n);
    for (&(lo, hi), dir) in &map {
        match dir {
            Some(false) => g.add_edge(hi, lo)?,
            _ => g.add_edge(lo, hi)?,
        }
    }
    Ok(g)
}

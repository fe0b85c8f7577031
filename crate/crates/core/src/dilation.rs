//! Oriented dilation: the exact all-pairs computation and the WSPD-based
//! approximation driven by a pluggable shortest-path oracle.
//!
//! The shortest closed walk through `p` and `q` has length `d(p, q) + d(q, p)`
//! where `d` is the directed shortest-path distance: walks may repeat
//! vertices, so any closed walk through both splits into a `p -> q` walk and a
//! `q -> p` walk, and joining two shortest paths is itself a closed walk.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::ann::AnnIndex;
use crate::error::{Error, Result};
use crate::geometry::{exact_min_triangle, Metric, PointSet};
use crate::io::ser_real;
use crate::min_triangle::{approx_min_triangle, TriangleQueryConfig};
use crate::orientation::OrientedGraph;
use crate::wspd::{compute_wspd, pick_representatives, SplitTree};

/// Dense `n x n` matrix of directed distances; unreachable entries are `inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(n: usize) -> Self {
        let mut d = vec![f64::INFINITY; n * n];
        for i in 0..n {
            d[i * n + i] = 0.0;
        }
        DistanceMatrix { n, d }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.d[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }
}

fn check_sizes<M: Metric + ?Sized>(metric: &M, g: &OrientedGraph) -> Result<()> {
    if metric.len() != g.len() {
        return Err(Error::InvalidParameter(format!(
            "graph has {} vertices but the point set has {}",
            g.len(),
            metric.len()
        )));
    }
    Ok(())
}

/// All-pairs directed shortest paths by Floyd–Warshall.
pub fn floyd_warshall<M: Metric + ?Sized>(metric: &M, g: &OrientedGraph) -> DistanceMatrix {
    let n = g.len();
    let mut m = DistanceMatrix::new(n);
    for (u, v) in g.edges() {
        m.set(u, v, metric.dist(u, v));
    }
    for k in 0..n {
        for i in 0..n {
            let dik = m.get(i, k);
            if dik == f64::INFINITY {
                continue;
            }
            for j in 0..n {
                let via = dik + m.get(k, j);
                if via < m.get(i, j) {
                    m.set(i, j, via);
                }
            }
        }
    }
    m
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source directed shortest-path distances.
pub fn dijkstra<M: Metric + ?Sized>(metric: &M, g: &OrientedGraph, src: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.len()];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Entry(0.0, src));
    while let Some(Entry(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &v in g.out_neighbours(u) {
            let nd = d + metric.dist(u, v);
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Entry(nd, v));
            }
        }
    }
    dist
}

/// All-pairs distances from one Dijkstra run per source.
pub fn all_pairs_dijkstra<M: Metric + ?Sized>(metric: &M, g: &OrientedGraph) -> DistanceMatrix {
    let n = g.len();
    let mut m = DistanceMatrix::new(n);
    for s in 0..n {
        m.d[s * n..(s + 1) * n].copy_from_slice(&dijkstra(metric, g, s));
    }
    m
}

/// Length of the shortest closed walk through `p` and `q`, `inf` when either
/// direction is unreachable.
pub fn closed_walk_length(apsp: &DistanceMatrix, p: usize, q: usize) -> f64 {
    apsp.get(p, q) + apsp.get(q, p)
}

/// Answers directed shortest-path queries within a factor `k`: the returned
/// value lies in `[d(u, v), k d(u, v)]`.
pub trait DistanceOracle {
    fn distance(&mut self, u: usize, v: usize) -> f64;

    /// The advertised approximation factor `k >= 1`.
    fn factor(&self) -> f64;

    fn cost_class(&self) -> &'static str;
}

/// Exact oracle running (and caching) one Dijkstra search per source.
pub struct DijkstraOracle<'a, M: Metric + ?Sized> {
    metric: &'a M,
    graph: &'a OrientedGraph,
    cache: HashMap<usize, Vec<f64>>,
}

impl<'a, M: Metric + ?Sized> DijkstraOracle<'a, M> {
    pub fn new(graph: &'a OrientedGraph, metric: &'a M) -> Self {
        DijkstraOracle {
            metric,
            graph,
            cache: HashMap::new(),
        }
    }
}

pub fn dijkstra_oracle<'a>(graph: &'a OrientedGraph, ps: &'a PointSet) -> DijkstraOracle<'a, PointSet> {
    DijkstraOracle::new(graph, ps)
}

impl<M: Metric + ?Sized> DistanceOracle for DijkstraOracle<'_, M> {
    fn distance(&mut self, u: usize, v: usize) -> f64 {
        let (metric, graph) = (self.metric, self.graph);
        self.cache.entry(u).or_insert_with(|| dijkstra(metric, graph, u))[v]
    }

    fn factor(&self) -> f64 {
        1.0
    }

    fn cost_class(&self) -> &'static str {
        "dijkstra, O(m log n) per new source"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DilationMode {
    Exact,
    Approximate { eps: f64, eps1: f64, s: f64, k: f64 },
}

/// The pair attaining the reported dilation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub p: usize,
    pub q: usize,
    /// Third vertex of the triangle used as denominator.
    pub r: usize,
    #[serde(serialize_with = "ser_real")]
    pub walk_length: f64,
    pub triangle_perimeter: f64,
    /// Decomposition pair that produced it (approximate mode only).
    pub wspd_pair: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilationReport {
    /// `inf` when some pair has no closed walk.
    #[serde(serialize_with = "ser_real")]
    pub value: f64,
    pub witness: Option<Witness>,
    pub mode: DilationMode,
    pub pairs_examined: usize,
}

impl DilationReport {
    pub fn is_unbounded(&self) -> bool {
        self.value.is_infinite()
    }
}

/// Exact oriented dilation: the maximum over all unordered pairs of
/// `(d(p, q) + d(q, p)) / |pq*|`, with the minimum triangle found by a full
/// scan. Works for any finite metric, not just Euclidean points.
pub fn exact_oriented_dilation<M: Metric + ?Sized>(metric: &M, g: &OrientedGraph) -> Result<DilationReport> {
    check_sizes(metric, g)?;
    if g.len() < 3 {
        return Err(Error::DilationUndefined(g.len()));
    }
    exact_oriented_dilation_with(metric, &all_pairs_dijkstra(metric, g))
}

/// As [`exact_oriented_dilation`], with precomputed all-pairs distances.
pub fn exact_oriented_dilation_with<M: Metric + ?Sized>(metric: &M, apsp: &DistanceMatrix) -> Result<DilationReport> {
    let n = apsp.len();
    if n != metric.len() {
        return Err(Error::InvalidParameter("distance matrix size differs from the metric".into()));
    }
    if n < 3 {
        return Err(Error::DilationUndefined(n));
    }
    let mut value = f64::NEG_INFINITY;
    let mut witness = None;
    let mut examined = 0;
    'outer: for p in 0..n {
        for q in p + 1..n {
            examined += 1;
            let walk = closed_walk_length(apsp, p, q);
            let tri = exact_min_triangle(metric, p, q)?;
            let ratio = walk / tri.perimeter;
            if ratio > value {
                value = ratio;
                witness = Some(Witness {
                    p,
                    q,
                    r: tri.r,
                    walk_length: walk,
                    triangle_perimeter: tri.perimeter,
                    wspd_pair: None,
                });
                if ratio.is_infinite() {
                    break 'outer;
                }
            }
        }
    }
    if value < 1.0 - 1e-9 {
        return Err(Error::Invariant(format!("oriented dilation {value} below 1")));
    }
    Ok(DilationReport {
        value,
        witness,
        mode: DilationMode::Exact,
        pairs_examined: examined,
    })
}

/// Oriented dilation of the single pair `{p, q}`.
pub fn pair_dilation<M: Metric + ?Sized>(metric: &M, apsp: &DistanceMatrix, p: usize, q: usize) -> Result<f64> {
    Ok(closed_walk_length(apsp, p, q) / exact_min_triangle(metric, p, q)?.perimeter)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxDilationConfig {
    pub eps: f64,
    pub eps1: f64,
    pub s: f64,
    pub alpha: Option<f64>,
}

impl ApproxDilationConfig {
    /// `eps1 = eps / 2`, `s = 28 / eps`, giving a value within
    /// `[(1 - eps) odil, k odil]`.
    pub fn theorem(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 4.0) {
            return Err(Error::InvalidParameter(format!("eps must lie in (0, 4), got {eps}")));
        }
        Ok(ApproxDilationConfig {
            eps,
            eps1: eps / 2.0,
            s: 28.0 / eps,
            alpha: None,
        })
    }
}

/// Approximates the oriented dilation from `O(n)` sampled point pairs: for
/// each WSPD pair, every picked point of one side is matched with every
/// picked point of the other, the closed walk is measured by `oracle` and the
/// minimum triangle approximated. The running maximum starts at 1.
pub fn approx_oriented_dilation(
    ps: &PointSet,
    g: &OrientedGraph,
    cfg: &ApproxDilationConfig,
    oracle: &mut dyn DistanceOracle,
) -> Result<DilationReport> {
    check_sizes(ps, g)?;
    let n = ps.len();
    if n < 3 {
        return Err(Error::DilationUndefined(n));
    }
    let mut tri_cfg = TriangleQueryConfig::new(cfg.eps1, ps.dim())?;
    if let Some(a) = cfg.alpha {
        tri_cfg = tri_cfg.with_alpha(a)?;
    }
    let tree = SplitTree::build(ps)?;
    let pairs = compute_wspd(&tree, cfg.s)?;
    let mut index = AnnIndex::build(Arc::new(ps.clone()));

    let mut value = 1.0;
    let mut witness = None;
    let mut examined = 0;
    'outer: for (i, pair) in pairs.iter().enumerate() {
        let (side_a, side_b) = pick_representatives(&tree, pair);
        for &a in &side_a {
            for &b in &side_b {
                examined += 1;
                let walk = oracle.distance(a, b) + oracle.distance(b, a);
                let tri = approx_min_triangle(&mut index, a, b, &tri_cfg)?;
                let ratio = walk / tri.perimeter;
                if ratio > value {
                    value = ratio;
                    witness = Some(Witness {
                        p: a,
                        q: b,
                        r: tri.r,
                        walk_length: walk,
                        triangle_perimeter: tri.perimeter,
                        wspd_pair: Some(i),
                    });
                    if ratio.is_infinite() {
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(DilationReport {
        value,
        witness,
        mode: DilationMode::Approximate {
            eps: cfg.eps,
            eps1: cfg.eps1,
            s: cfg.s,
            k: oracle.factor(),
        },
        pairs_examined: examined,
    })
}

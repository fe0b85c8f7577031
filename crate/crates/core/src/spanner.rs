//! End-to-end construction of a sparse oriented `(2 + eps)`-spanner.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::ann::AnnIndex;
use crate::error::{Error, Result};
use crate::geometry::{PointSet, TriangleTriple};
use crate::min_triangle::{approx_min_triangle, TriangleQueryConfig};
use crate::orientation::{greedy_orient, OrientedGraph};
use crate::wspd::{compute_wspd, pick_representatives, SplitTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// `eps1 = eps / 4`, `s = 96 / eps`: the dilation bound `2 + eps` holds.
    TheoremDefaults,
    /// `eps1 = 0.1`, `s = 4`: much faster, no proven bound.
    Practical,
    /// Constants set by hand.
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpannerConfig {
    pub eps: f64,
    pub eps1: f64,
    pub s: f64,
    /// Overrides the far-neighbour threshold of the triangle queries.
    pub alpha: Option<f64>,
    pub mode: Mode,
}

/// Phase timer. The clock is unavailable on wasm32, where timings read 0.
struct Clock(Option<Instant>);

impl Clock {
    fn start() -> Self {
        Clock(if cfg!(target_arch = "wasm32") { None } else { Some(Instant::now()) })
    }

    fn secs(&self) -> f64 {
        self.0.map_or(0.0, |t| t.elapsed().as_secs_f64())
    }
}

pub const PRACTICAL_S: f64 = 4.0;
pub const PRACTICAL_EPS1: f64 = 0.1;

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("eps must lie in (0, 2), got {eps}")))
    }
}

impl SpannerConfig {
    pub fn theorem(eps: f64) -> Result<Self> {
        check_eps(eps)?;
        Ok(SpannerConfig {
            eps,
            eps1: eps / 4.0,
            s: 96.0 / eps,
            alpha: None,
            mode: Mode::TheoremDefaults,
        })
    }

    pub fn practical(eps: f64) -> Result<Self> {
        check_eps(eps)?;
        Ok(SpannerConfig {
            eps,
            eps1: PRACTICAL_EPS1,
            s: PRACTICAL_S,
            alpha: None,
            mode: Mode::Practical,
        })
    }

    pub fn with_eps1(mut self, eps1: f64) -> Self {
        self.eps1 = eps1;
        self.mode = Mode::Custom;
        self
    }

    pub fn with_s(mut self, s: f64) -> Self {
        self.s = s;
        self.mode = Mode::Custom;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self.mode = Mode::Custom;
        self
    }

    pub fn triangle_config(&self, dim: usize) -> Result<TriangleQueryConfig> {
        let cfg = TriangleQueryConfig::new(self.eps1, dim)?;
        match self.alpha {
            Some(a) => cfg.with_alpha(a),
            None => Ok(cfg),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct PhaseTimings {
    pub wspd_secs: f64,
    pub index_secs: f64,
    pub triangles_secs: f64,
    pub orient_secs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpannerStats {
    pub points: usize,
    pub wspd_pairs: usize,
    pub triples: usize,
    pub edges: usize,
    #[serde(skip)]
    pub timings: PhaseTimings,
}

#[derive(Debug, Clone)]
pub struct Spanner {
    pub graph: OrientedGraph,
    /// The triangle list handed to the orientation step.
    pub triples: Vec<TriangleTriple>,
    pub stats: SpannerStats,
}

/// Builds an oriented spanner: an `s`-WSPD is computed, up to two points are
/// picked from each side of every pair, an approximate minimum triangle is
/// found for every pair of picked points, and the resulting triangle list is
/// oriented greedily.
///
/// Two points yield the single edge `0 -> 1`.
pub fn build_oriented_spanner(ps: &PointSet, cfg: &SpannerConfig) -> Result<Spanner> {
    let n = ps.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("a spanner needs at least 2 points, got {n}")));
    }
    check_eps(cfg.eps)?;
    if !(cfg.s > 0.0 && cfg.s.is_finite()) {
        return Err(Error::InvalidParameter(format!("s must be positive, got {}", cfg.s)));
    }
    let tri_cfg = cfg.triangle_config(ps.dim())?;
    if n == 2 {
        return Ok(Spanner {
            graph: OrientedGraph::from_edges(2, [(0, 1)])?,
            triples: Vec::new(),
            stats: SpannerStats {
                points: 2,
                wspd_pairs: 1,
                triples: 0,
                edges: 1,
                timings: PhaseTimings::default(),
            },
        });
    }

    let mut timings = PhaseTimings::default();
    let t0 = Clock::start();
    let tree = SplitTree::build(ps)?;
    let pairs = compute_wspd(&tree, cfg.s)?;
    timings.wspd_secs = t0.secs();

    let t0 = Clock::start();
    let mut index = AnnIndex::build(Arc::new(ps.clone()));
    timings.index_secs = t0.secs();

    let t0 = Clock::start();
    let mut triples = Vec::with_capacity(pairs.len() * 2);
    for pair in &pairs {
        let (a, b) = pick_representatives(&tree, pair);
        let picked: Vec<usize> = a.into_iter().chain(b).collect();
        for i in 0..picked.len() {
            for j in i + 1..picked.len() {
                triples.push(approx_min_triangle(&mut index, picked[i], picked[j], &tri_cfg)?);
            }
        }
    }
    timings.triangles_secs = t0.secs();

    let t0 = Clock::start();
    let graph = greedy_orient(ps, cfg.eps1, &triples)?;
    timings.orient_secs = t0.secs();

    let stats = SpannerStats {
        points: n,
        wspd_pairs: pairs.len(),
        triples: triples.len(),
        edges: graph.edge_count(),
        timings,
    };
    if stats.edges > 3 * stats.triples || stats.triples > 6 * stats.wspd_pairs {
        return Err(Error::Invariant(format!("inconsistent spanner stats {stats:?}")));
    }
    Ok(Spanner { graph, triples, stats })
}

//! `(1 + eps1)`-approximate minimum-perimeter triangle through two query
//! points, answered with approximate nearest-neighbour queries.
//!
//! With `p` and `q` removed from the index, let `r` be an approximate nearest
//! neighbour of `p`. If `r` is far away compared to `|pq|` the triangle `pqr`
//! is already good enough. Otherwise a hypercube of side `3 alpha |pq|`
//! centred at `p` is cut into cells of side `eps3 |pq|`, and the nearest
//! neighbour of every cell centre is tried as third vertex.
//!
//! Cells are visited in row-major order. A cell (or a whole slab of cells) is
//! skipped when no point inside it could form a triangle shorter than the
//! best one found so far, which leaves the approximation bound intact: the
//! cell holding the optimal third vertex is either visited or already beaten.

use crate::ann::AnnIndex;
use crate::error::{Error, Result};
use crate::geometry::{Metric, PointSet, TriangleTriple};

/// Constants of the triangle query. `new` derives them from `eps1`; the
/// `with_*` overrides void the approximation guarantee unless chosen with care.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleQueryConfig {
    pub eps1: f64,
    /// Approximation of the nearest-neighbour queries, `eps1 / 2`.
    pub eps2: f64,
    /// Far-neighbour threshold, `4 / eps1`.
    pub alpha: f64,
    /// Relative cell side, `2 eps1 / (3 sqrt(d))`.
    pub eps3: f64,
}

impl TriangleQueryConfig {
    pub fn new(eps1: f64, dim: usize) -> Result<Self> {
        if !(eps1 > 0.0 && eps1 < 2.0) {
            return Err(Error::InvalidParameter(format!("eps1 must lie in (0, 2), got {eps1}")));
        }
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(TriangleQueryConfig {
            eps1,
            eps2: eps1 / 2.0,
            alpha: 4.0 / eps1,
            eps3: 2.0 * eps1 / (3.0 * (dim as f64).sqrt()),
        })
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        if !(alpha > 2.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must exceed 2, got {alpha}")));
        }
        self.alpha = alpha;
        Ok(self)
    }

    pub fn with_eps2(mut self, eps2: f64) -> Result<Self> {
        if !(eps2 >= 0.0 && eps2.is_finite()) {
            return Err(Error::InvalidParameter(format!("eps2 must be >= 0, got {eps2}")));
        }
        self.eps2 = eps2;
        Ok(self)
    }

    pub fn with_eps3(mut self, eps3: f64) -> Result<Self> {
        if !(eps3 > 0.0 && eps3.is_finite()) {
            return Err(Error::InvalidParameter(format!("eps3 must be positive, got {eps3}")));
        }
        self.eps3 = eps3;
        Ok(self)
    }

    /// Number of grid cells along each axis of the hypercube.
    pub fn cells_per_axis(&self) -> usize {
        (3.0 * self.alpha / self.eps3).ceil() as usize
    }

    /// Upper bound on index operations (queries plus the four updates) of a
    /// single call: `1 + (3 alpha / eps3)^d + 4`.
    pub fn max_ann_queries(&self, dim: usize) -> f64 {
        1.0 + (3.0 * self.alpha / self.eps3).powi(dim as i32) + 4.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleCase {
    /// The nearest neighbour of `p` was farther than `alpha |pq|`.
    FarNeighbour,
    /// The grid around `p` was searched.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleQuery {
    pub triple: TriangleTriple,
    pub case: TriangleCase,
    pub ann_queries: u64,
    /// Index deletions plus reinsertions performed.
    pub updates: u64,
}

/// Approximates the minimum-perimeter triangle through `p` and `q`.
///
/// `index` must contain `p` and `q`; both are removed for the duration of the
/// call and reinserted on every exit path.
pub fn approx_min_triangle(
    index: &mut AnnIndex,
    p: usize,
    q: usize,
    cfg: &TriangleQueryConfig,
) -> Result<TriangleTriple> {
    approx_min_triangle_detailed(index, p, q, cfg).map(|t| t.triple)
}

pub fn approx_min_triangle_detailed(
    index: &mut AnnIndex,
    p: usize,
    q: usize,
    cfg: &TriangleQueryConfig,
) -> Result<TriangleQuery> {
    let ps = std::sync::Arc::clone(index.point_set());
    let n = ps.len();
    if n < 3 {
        return Err(Error::NoTriangle(n));
    }
    ps.check_index(p)?;
    ps.check_index(q)?;
    if p == q {
        return Err(Error::SamePoint(p));
    }
    if !index.contains(p) {
        return Err(Error::NotPresent(p));
    }
    if !index.contains(q) {
        return Err(Error::NotPresent(q));
    }
    index.delete(p)?;
    if let Err(e) = index.delete(q) {
        index.insert(p)?;
        return Err(e);
    }
    let result = query_without(index, &ps, p, q, cfg);
    index.insert(p)?;
    index.insert(q)?;
    result.map(|mut t| {
        t.updates = 4;
        t
    })
}

fn query_without(
    index: &AnnIndex,
    ps: &PointSet,
    p: usize,
    q: usize,
    cfg: &TriangleQueryConfig,
) -> Result<TriangleQuery> {
    let r = match index.query(ps.point(p), cfg.eps2) {
        Ok(r) => r,
        Err(Error::NoNeighbour) => return Err(Error::NoTriangle(index.len() + 2)),
        Err(e) => return Err(e),
    };
    let pq = ps.dist(p, q);
    let first = TriangleTriple::new(ps, p, q, r)?;
    if ps.dist(p, r) > cfg.alpha * pq {
        return Ok(TriangleQuery {
            triple: first,
            case: TriangleCase::FarNeighbour,
            ann_queries: 1,
            updates: 0,
        });
    }

    let k = cfg.cells_per_axis();
    let h = cfg.eps3 * pq;
    let dim = ps.dim();
    let origin: Vec<f64> = ps.point(p).iter().map(|c| c - 0.5 * k as f64 * h).collect();
    let mut grid = Grid {
        index,
        ps,
        p,
        q,
        pq,
        eps2: cfg.eps2,
        k,
        h,
        origin,
        lo: vec![0.0; dim],
        hi: vec![0.0; dim],
        best: first,
        queries: 1,
    };
    for j in 0..dim {
        grid.lo[j] = grid.origin[j];
        grid.hi[j] = grid.origin[j] + k as f64 * h;
    }
    grid.scan(0);
    Ok(TriangleQuery {
        triple: grid.best,
        case: TriangleCase::Grid,
        ann_queries: grid.queries,
        updates: 0,
    })
}

struct Grid<'a> {
    index: &'a AnnIndex,
    ps: &'a PointSet,
    p: usize,
    q: usize,
    pq: f64,
    eps2: f64,
    k: usize,
    h: f64,
    origin: Vec<f64>,
    /// Current partial box: axes before the scan depth are pinned to one cell.
    lo: Vec<f64>,
    hi: Vec<f64>,
    best: TriangleTriple,
    queries: u64,
}

impl Grid<'_> {
    /// Lower bound on the perimeter of any triangle `pqx` with `x` in the
    /// current box.
    fn lower_bound(&self) -> f64 {
        self.pq + box_dist(self.ps.point(self.p), &self.lo, &self.hi)
            + box_dist(self.ps.point(self.q), &self.lo, &self.hi)
    }

    fn scan(&mut self, axis: usize) {
        let dim = self.lo.len();
        if axis == dim {
            self.visit_cell();
            return;
        }
        // any improving x lies within best/2 of both p and q
        let reach = 0.5 * self.best.perimeter;
        let (a, b) = (self.ps.point(self.p)[axis], self.ps.point(self.q)[axis]);
        let from = a.max(b) - reach;
        let to = a.min(b) + reach;
        if from > to {
            return;
        }
        let cell_of = |x: f64| ((x - self.origin[axis]) / self.h).floor();
        let first = (cell_of(from) - 1.0).max(0.0) as usize;
        let last = (cell_of(to) + 1.0).min(self.k as f64 - 1.0);
        if last < 0.0 {
            return;
        }
        let (saved_lo, saved_hi) = (self.lo[axis], self.hi[axis]);
        for i in first..=last as usize {
            self.lo[axis] = self.origin[axis] + i as f64 * self.h;
            self.hi[axis] = self.origin[axis] + (i + 1) as f64 * self.h;
            if self.lower_bound() >= self.best.perimeter {
                continue;
            }
            self.scan(axis + 1);
        }
        self.lo[axis] = saved_lo;
        self.hi[axis] = saved_hi;
    }

    fn visit_cell(&mut self) {
        let centre: Vec<f64> = self.lo.iter().zip(&self.hi).map(|(l, h)| 0.5 * (l + h)).collect();
        self.queries += 1;
        let Ok(x) = self.index.query(&centre, self.eps2) else {
            return;
        };
        if x == self.p || x == self.q {
            return;
        }
        let per = self.ps.perimeter(self.p, self.q, x);
        if per < self.best.perimeter {
            self.best = TriangleTriple {
                p: self.p,
                q: self.q,
                r: x,
                perimeter: per,
            };
        }
    }
}

fn box_dist(x: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
    let mut acc = 0.0;
    for ((&c, &l), &h) in x.iter().zip(lo).zip(hi) {
        let d = if c < l {
            l - c
        } else if c > h {
            c - h
        } else {
            0.0
        };
        acc += d * d;
    }
    acc.sqrt()
}

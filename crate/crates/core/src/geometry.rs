//! Points, the Euclidean metric, triangle perimeters and the exact
//! minimum-perimeter triangle through two given points.

use std::collections::HashMap;
use std::ops::Deref;

use serde::Serialize;

use crate::error::{Error, Result};

/// A point in `R^d` with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite(0));
        }
        Ok(Point(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Euclidean distance between two coordinate slices of equal length.
pub fn distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(euclid(a, b))
}

/// Unchecked Euclidean distance. Squared differences are summed in axis
/// order, so `euclid(a, b)` and `euclid(b, a)` agree bit for bit.
#[inline]
pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    euclid_sq(a, b).sqrt()
}

#[inline]
pub(crate) fn euclid_sq(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc
}

/// Sum of three side lengths, added smallest first so the result does not
/// depend on the order of the vertices.
#[inline]
pub fn perimeter_from_sides(x: f64, y: f64, z: f64) -> f64 {
    let (lo, mid, hi) = sort3(x, y, z);
    (lo + mid) + hi
}

#[inline]
fn sort3(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let (b, c) = if b <= c { (b, c) } else { (c, b) };
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    (a, b, c)
}

/// Perimeter `|ab| + |bc| + |ca|` of the (possibly degenerate) triangle `abc`.
pub fn triangle_perimeter(a: &[f64], b: &[f64], c: &[f64]) -> Result<f64> {
    Ok(perimeter_from_sides(
        distance(a, b)?,
        distance(b, c)?,
        distance(c, a)?,
    ))
}

/// A finite metric space on points `0..len()`.
pub trait Metric {
    fn len(&self) -> usize;

    fn dist(&self, i: usize, j: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn perimeter(&self, i: usize, j: usize, k: usize) -> f64 {
        perimeter_from_sides(self.dist(i, j), self.dist(j, k), self.dist(k, i))
    }
}

/// An indexed set of distinct points sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    /// Builds a point set from rows, rejecting non-finite coordinates,
    /// inconsistent dimensions and duplicate points.
    pub fn new(dim: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            if row.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite(i));
            }
            coords.extend_from_slice(row);
        }
        let ps = PointSet { dim, coords };
        if let Some((a, b)) = ps.find_duplicate() {
            return Err(Error::DuplicateIndex(a, b));
        }
        Ok(ps)
    }

    pub fn from_points(points: &[Point]) -> Result<Self> {
        let dim = points.first().map(Point::dim).ok_or(Error::EmptyPointSet)?;
        PointSet::new(dim, points.iter().map(|p| p.to_vec()).collect())
    }

    /// Builds from a flat coordinate buffer of `n * dim` values.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: coords.len() % dim,
            });
        }
        PointSet::new(dim, coords.chunks(dim).map(<[f64]>::to_vec).collect())
    }

    fn find_duplicate(&self) -> Option<(usize, usize)> {
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::with_capacity(self.len());
        for i in 0..self.len() {
            // +0.0 folds -0.0 onto 0.0
            let key: Vec<u64> = self.point(i).iter().map(|c| (c + 0.0).to_bits()).collect();
            if let Some(&j) = seen.get(&key) {
                return Some((j, i));
            }
            seen.insert(key, i);
        }
        None
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks(self.dim)
    }

    pub fn flat(&self) -> &[f64] {
        &self.coords
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            })
        }
    }
}

impl Metric for PointSet {
    fn len(&self) -> usize {
        PointSet::len(self)
    }

    #[inline]
    fn dist(&self, i: usize, j: usize) -> f64 {
        euclid(self.point(i), self.point(j))
    }
}

/// A point triple `(p, q; r)`: the triangle on `p`, `q` and a third point `r`
/// chosen for the pair `{p, q}`, with its cached perimeter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleTriple {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub perimeter: f64,
}

impl TriangleTriple {
    pub fn new<M: Metric + ?Sized>(metric: &M, p: usize, q: usize, r: usize) -> Result<Self> {
        let n = metric.len();
        for i in [p, q, r] {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
        }
        if p == q || q == r || p == r {
            return Err(Error::InvalidParameter(format!(
                "triple ({p}, {q}; {r}) has repeated vertices"
            )));
        }
        Ok(TriangleTriple {
            p,
            q,
            r,
            perimeter: metric.perimeter(p, q, r),
        })
    }

    pub fn vertices(&self) -> [usize; 3] {
        [self.p, self.q, self.r]
    }
}

/// The minimum-perimeter triangle containing `p` and `q`: scans every other
/// point and keeps the smallest perimeter, ties going to the lowest index.
pub fn exact_min_triangle<M: Metric + ?Sized>(metric: &M, p: usize, q: usize) -> Result<TriangleTriple> {
    let n = metric.len();
    if n < 3 {
        return Err(Error::NoTriangle(n));
    }
    for i in [p, q] {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
    }
    if p == q {
        return Err(Error::SamePoint(p));
    }
    let pq = metric.dist(p, q);
    let mut best: Option<(usize, f64)> = None;
    for x in (0..n).filter(|&x| x != p && x != q) {
        let per = perimeter_from_sides(pq, metric.dist(q, x), metric.dist(x, p));
        if best.is_none_or(|(_, b)| per < b) {
            best = Some((x, per));
        }
    }
    let (r, perimeter) = best.expect("n >= 3 leaves a third point");
    Ok(TriangleTriple { p, q, r, perimeter })
}

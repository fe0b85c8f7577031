//! Fair-split tree and the s-well-separated pair decomposition built on it.

use crate::error::{Error, Result};
use crate::geometry::{euclid, PointSet};

pub type NodeId = usize;

#[derive(Debug, Clone)]
pub struct SplitNode {
    /// Range into [`SplitTree::order`] holding this node's points.
    pub start: usize,
    pub end: usize,
    pub children: Option<(NodeId, NodeId)>,
    /// Stored representative: the point itself for a leaf, the left child's
    /// representative otherwise.
    pub rep: usize,
    min_idx: usize,
    second_min: Option<usize>,
    centre: Vec<f64>,
    radius: f64,
}

impl SplitNode {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    /// Centre of the bounding box.
    pub fn centre(&self) -> &[f64] {
        &self.centre
    }

    /// Radius of the ball circumscribing the bounding box.
    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Fair-split tree: every internal node halves its bounding box across the
/// longest side (lowest axis on ties).
#[derive(Debug, Clone)]
pub struct SplitTree {
    nodes: Vec<SplitNode>,
    order: Vec<usize>,
    bounds: Vec<(Vec<f64>, Vec<f64>)>,
}

impl SplitTree {
    pub fn build(ps: &PointSet) -> Result<Self> {
        if ps.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let mut tree = SplitTree {
            nodes: Vec::with_capacity(2 * ps.len()),
            order: (0..ps.len()).collect(),
            bounds: Vec::with_capacity(2 * ps.len()),
        };
        tree.build_node(ps, 0, ps.len());
        Ok(tree)
    }

    fn build_node(&mut self, ps: &PointSet, start: usize, end: usize) -> NodeId {
        let dim = ps.dim();
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for &i in &self.order[start..end] {
            for (k, &c) in ps.point(i).iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        let centre: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let radius = 0.5 * euclid(&lo, &hi);
        let id = self.nodes.len();
        self.nodes.push(SplitNode {
            start,
            end,
            children: None,
            rep: self.order[start],
            min_idx: self.order[start],
            second_min: None,
            centre,
            radius,
        });
        self.bounds.push((lo.clone(), hi.clone()));
        if end - start == 1 {
            return id;
        }

        let axis = (0..dim)
            .max_by(|&a, &b| {
                (hi[a] - lo[a])
                    .partial_cmp(&(hi[b] - lo[b]))
                    .unwrap()
                    .then(b.cmp(&a))
            })
            .unwrap();
        let mid = 0.5 * (lo[axis] + hi[axis]);
        let slice = &mut self.order[start..end];
        let mut split = partition(slice, |&i| ps.point(i)[axis] < mid);
        if split == 0 || split == slice.len() {
            // midpoint collapsed onto an endpoint in floating point
            slice.sort_by(|&a, &b| ps.point(a)[axis].total_cmp(&ps.point(b)[axis]).then(a.cmp(&b)));
            split = slice.len() / 2;
        }
        let left = self.build_node(ps, start, start + split);
        let right = self.build_node(ps, start + split, end);

        let (l, r) = (&self.nodes[left], &self.nodes[right]);
        let mut mins = [Some(l.min_idx), l.second_min, Some(r.min_idx), r.second_min]
            .into_iter()
            .flatten()
            .collect::<Vec<_>>();
        mins.sort_unstable();
        let rep = l.rep;
        let node = &mut self.nodes[id];
        node.children = Some((left, right));
        node.rep = rep;
        node.min_idx = mins[0];
        node.second_min = mins.get(1).copied();
        id
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &SplitNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[SplitNode] {
        &self.nodes
    }

    /// Point indices held by a node.
    pub fn points(&self, id: NodeId) -> &[usize] {
        let n = &self.nodes[id];
        &self.order[n.start..n.end]
    }

    /// Tight bounding box `(lo, hi)` of a node.
    pub fn bounds(&self, id: NodeId) -> (&[f64], &[f64]) {
        let (lo, hi) = &self.bounds[id];
        (lo, hi)
    }

    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].is_leaf())
    }

    /// Picks at most two points from a node: its representative, plus the
    /// lowest-index other point when the node holds two or more.
    pub fn pick(&self, id: NodeId) -> Vec<usize> {
        let n = &self.nodes[id];
        let mut picked = vec![n.rep];
        if n.len() >= 2 {
            let other = if n.min_idx != n.rep {
                n.min_idx
            } else {
                n.second_min.expect("node with two points has a second minimum")
            };
            picked.push(other);
        }
        picked
    }
}

fn partition<T, F: Fn(&T) -> bool>(slice: &mut [T], pred: F) -> usize {
    let mut k = 0;
    for i in 0..slice.len() {
        if pred(&slice[i]) {
            slice.swap(i, k);
            k += 1;
        }
    }
    k
}

/// One pair `{A, B}` of the decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellSeparatedPair {
    pub a: NodeId,
    pub b: NodeId,
    pub s: f64,
    /// Common ball radius certifying the separation.
    pub radius: f64,
}

// Slightly inflated radius so that rounding in the bounding-box ball never
// lets a pair through that fails the separation in exact arithmetic.
const RADIUS_SLACK: f64 = 1.0 + 1e-12;

fn separated(tree: &SplitTree, u: NodeId, v: NodeId, s: f64) -> Option<f64> {
    let (a, b) = (tree.node(u), tree.node(v));
    let rho = a.radius.max(b.radius) * RADIUS_SLACK;
    let gap = euclid(&a.centre, &b.centre) - 2.0 * rho;
    (gap >= s * rho).then_some(rho)
}

/// Computes an `s`-well-separated pair decomposition: every unordered pair of
/// distinct points is split across exactly one emitted pair.
pub fn compute_wspd(tree: &SplitTree, s: f64) -> Result<Vec<WellSeparatedPair>> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("separation s must be positive, got {s}")));
    }
    let mut out = Vec::new();
    let mut stack: Vec<(NodeId, NodeId)> = tree
        .nodes
        .iter()
        .filter_map(|n| n.children)
        .collect();
    stack.reverse();
    while let Some((u, v)) = stack.pop() {
        if let Some(radius) = separated(tree, u, v, s) {
            out.push(WellSeparatedPair { a: u, b: v, s, radius });
            continue;
        }
        // split the node with the larger ball
        let (big, other) = if tree.node(u).radius >= tree.node(v).radius {
            (u, v)
        } else {
            (v, u)
        };
        let (l, r) = tree
            .node(big)
            .children
            .expect("two leaves are always separated");
        stack.push((r, other));
        stack.push((l, other));
    }
    Ok(out)
}

/// Picked points of both sides of a pair, per side.
pub fn pick_representatives(tree: &SplitTree, pair: &WellSeparatedPair) -> (Vec<usize>, Vec<usize>) {
    (tree.pick(pair.a), tree.pick(pair.b))
}

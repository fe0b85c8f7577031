//! Dynamic approximate nearest-neighbour index over a subset of a point set.
//!
//! A kd-style box tree is built over the current members. Deletions are lazy:
//! a point is flagged dead and the alive counters on its root path are
//! decremented, so empty subtrees are skipped during search. Points inserted
//! after the last build live in a small side list that is scanned linearly.
//! The tree is rebuilt once more than half of it is dead or the side list
//! grows past half the tree size.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{euclid_sq, PointSet};

const LEAF_SIZE: usize = 8;
const NONE: usize = usize::MAX;

#[derive(Debug, Clone)]
struct Node {
    lo: Vec<f64>,
    hi: Vec<f64>,
    start: usize,
    end: usize,
    left: usize,
    right: usize,
    parent: usize,
    alive: usize,
}

#[derive(Debug, Clone)]
pub struct AnnIndex {
    ps: Arc<PointSet>,
    member: Vec<bool>,
    members: usize,
    nodes: Vec<Node>,
    /// Tree order of the points that were members at the last build.
    order: Vec<usize>,
    /// Leaf holding each point, or `NONE` when it is not in the tree.
    leaf_of: Vec<usize>,
    dead_in_tree: usize,
    pending: Vec<usize>,
}

impl AnnIndex {
    /// Index containing every point of `ps`.
    pub fn build(ps: Arc<PointSet>) -> Self {
        let all = (0..ps.len()).collect();
        Self::with_members(ps, all)
    }

    /// Index containing only `members` (indices into `ps`).
    pub fn with_members(ps: Arc<PointSet>, members: Vec<usize>) -> Self {
        let n = ps.len();
        let mut member = vec![false; n];
        for &i in &members {
            member[i] = true;
        }
        let mut idx = AnnIndex {
            ps,
            member,
            members: 0,
            nodes: Vec::new(),
            order: Vec::new(),
            leaf_of: vec![NONE; n],
            dead_in_tree: 0,
            pending: Vec::new(),
        };
        idx.rebuild();
        idx
    }

    pub fn point_set(&self) -> &Arc<PointSet> {
        &self.ps
    }

    pub fn len(&self) -> usize {
        self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.member.get(i).copied().unwrap_or(false)
    }

    /// Current members in increasing index order.
    pub fn members(&self) -> Vec<usize> {
        (0..self.member.len()).filter(|&i| self.member[i]).collect()
    }

    fn rebuild(&mut self) {
        self.order = self.members();
        self.members = self.order.len();
        self.leaf_of.iter_mut().for_each(|l| *l = NONE);
        self.nodes.clear();
        self.pending.clear();
        self.dead_in_tree = 0;
        if !self.order.is_empty() {
            self.build_node(0, self.order.len(), NONE);
        }
    }

    fn build_node(&mut self, start: usize, end: usize, parent: usize) -> usize {
        let dim = self.ps.dim();
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for &i in &self.order[start..end] {
            for (k, &c) in self.ps.point(i).iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            lo: lo.clone(),
            hi: hi.clone(),
            start,
            end,
            left: NONE,
            right: NONE,
            parent,
            alive: end - start,
        });
        if end - start <= LEAF_SIZE {
            for k in start..end {
                self.leaf_of[self.order[k]] = id;
            }
            return id;
        }
        let axis = (0..dim)
            .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])).then(b.cmp(&a)))
            .unwrap();
        let mid = (end - start) / 2;
        let ps = Arc::clone(&self.ps);
        self.order[start..end]
            .select_nth_unstable_by(mid, |&a, &b| ps.point(a)[axis].total_cmp(&ps.point(b)[axis]));
        let left = self.build_node(start, start + mid, id);
        let right = self.build_node(start + mid, end, id);
        self.nodes[id].left = left;
        self.nodes[id].right = right;
        id
    }

    fn adjust_counts(&mut self, leaf: usize, up: bool) {
        let mut v = leaf;
        while v != NONE {
            let node = &mut self.nodes[v];
            if up {
                node.alive += 1;
            } else {
                node.alive -= 1;
            }
            v = node.parent;
        }
    }

    pub fn insert(&mut self, i: usize) -> Result<()> {
        self.ps.check_index(i)?;
        if self.member[i] {
            return Err(Error::AlreadyPresent(i));
        }
        self.member[i] = true;
        self.members += 1;
        let leaf = self.leaf_of[i];
        if leaf != NONE {
            self.dead_in_tree -= 1;
            self.adjust_counts(leaf, true);
        } else {
            self.pending.push(i);
            if self.pending.len() > LEAF_SIZE.max(self.order.len() / 2) {
                self.rebuild();
            }
        }
        Ok(())
    }

    pub fn delete(&mut self, i: usize) -> Result<()> {
        self.ps.check_index(i)?;
        if !self.member[i] {
            return Err(Error::NotPresent(i));
        }
        self.member[i] = false;
        self.members -= 1;
        let leaf = self.leaf_of[i];
        if leaf != NONE {
            self.dead_in_tree += 1;
            self.adjust_counts(leaf, false);
            if self.dead_in_tree > LEAF_SIZE.max(self.order.len() / 2) {
                self.rebuild();
            }
        } else {
            let pos = self.pending.iter().position(|&j| j == i).expect("pending member");
            self.pending.swap_remove(pos);
        }
        Ok(())
    }

    /// Returns a member `r` with `|qr| <= (1 + eps) * |q q*|`, where `q*` is
    /// the exact nearest member.
    pub fn query(&self, q: &[f64], eps: f64) -> Result<usize> {
        if q.len() != self.ps.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ps.dim(),
                found: q.len(),
            });
        }
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParameter(format!("eps must be >= 0, got {eps}")));
        }
        if self.members == 0 {
            return Err(Error::NoNeighbour);
        }
        // prune a box when (1+eps)|q box| > best; the factor is shaded down
        // so rounding can only make the search more thorough
        let factor = if eps == 0.0 {
            1.0
        } else {
            (1.0 + eps) * (1.0 + eps) * (1.0 - 1e-12)
        };
        let mut best = (f64::INFINITY, NONE);
        for &i in &self.pending {
            consider(&mut best, euclid_sq(q, self.ps.point(i)), i);
        }
        if !self.nodes.is_empty() && self.nodes[0].alive > 0 {
            self.search(0, q, factor, &mut best);
        }
        debug_assert!(best.1 != NONE);
        Ok(best.1)
    }

    fn search(&self, v: usize, q: &[f64], factor: f64, best: &mut (f64, usize)) {
        let node = &self.nodes[v];
        if node.left == NONE {
            for &i in &self.order[node.start..node.end] {
                if self.member[i] {
                    consider(best, euclid_sq(q, self.ps.point(i)), i);
                }
            }
            return;
        }
        let (l, r) = (node.left, node.right);
        let dl = box_dist_sq(q, &self.nodes[l]);
        let dr = box_dist_sq(q, &self.nodes[r]);
        let order = if dl <= dr { [(l, dl), (r, dr)] } else { [(r, dr), (l, dl)] };
        for (child, d) in order {
            if self.nodes[child].alive > 0 && d * factor <= best.0 {
                self.search(child, q, factor, best);
            }
        }
    }
}

#[inline]
fn consider(best: &mut (f64, usize), d: f64, i: usize) {
    if d < best.0 || (d == best.0 && i < best.1) {
        *best = (d, i);
    }
}

#[inline]
fn box_dist_sq(q: &[f64], node: &Node) -> f64 {
    let mut acc = 0.0;
    for ((&x, &lo), &hi) in q.iter().zip(&node.lo).zip(&node.hi) {
        let d = if x < lo {
            lo - x
        } else if x > hi {
            x - hi
        } else {
            0.0
        };
        acc += d * d;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::euclid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_set(n: usize, seed: u64) -> Arc<PointSet> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Arc::new(PointSet::new(2, (0..n).map(|_| vec![rng.random(), rng.random()]).collect()).unwrap())
    }

    fn linear_nn(ps: &PointSet, members: &[usize], q: &[f64]) -> f64 {
        members
            .iter()
            .map(|&i| euclid(q, ps.point(i)))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn empty_index_has_no_neighbour() {
        let ps = Arc::new(PointSet::new(2, vec![]).unwrap());
        let idx = AnnIndex::build(ps);
        assert_eq!(idx.query(&[0.0, 0.0], 0.0), Err(Error::NoNeighbour));
    }

    #[test]
    fn delete_everything() {
        let ps = random_set(50, 1);
        let mut idx = AnnIndex::build(ps);
        for i in 0..50 {
            idx.delete(i).unwrap();
        }
        assert!(idx.is_empty());
        assert_eq!(idx.query(&[0.5, 0.5], 0.0), Err(Error::NoNeighbour));
    }

    #[test]
    fn self_query_returns_self() {
        let ps = random_set(300, 2);
        let idx = AnnIndex::build(Arc::clone(&ps));
        for i in 0..ps.len() {
            assert_eq!(idx.query(ps.point(i), 0.0).unwrap(), i);
        }
    }

    #[test]
    fn cannot_cross_a_wide_gap() {
        let ps = Arc::new(PointSet::new(2, vec![vec![0.0, 0.0], vec![10.0, 0.0]]).unwrap());
        let idx = AnnIndex::build(ps);
        for eps in [0.0, 0.5, 2.0] {
            assert_eq!(idx.query(&[1.0, 0.0], eps).unwrap(), 0);
        }
    }

    #[test]
    fn membership_errors() {
        let ps = random_set(5, 3);
        let mut idx = AnnIndex::build(ps);
        assert_eq!(idx.insert(2), Err(Error::AlreadyPresent(2)));
        idx.delete(2).unwrap();
        assert_eq!(idx.delete(2), Err(Error::NotPresent(2)));
        assert!(idx.insert(9).is_err());
        idx.insert(2).unwrap();
        assert_eq!(idx.len(), 5);
    }

    #[test]
    fn deleted_point_is_not_returned() {
        let ps = random_set(100, 4);
        let mut idx = AnnIndex::build(Arc::clone(&ps));
        idx.delete(17).unwrap();
        let got = idx.query(ps.point(17), 0.0).unwrap();
        assert_ne!(got, 17);
        let members = idx.members();
        assert_eq!(euclid(ps.point(17), ps.point(got)), linear_nn(&ps, &members, ps.point(17)));
    }

    #[test]
    fn delete_reinsert_restores_answers() {
        let ps = random_set(200, 5);
        let mut idx = AnnIndex::build(Arc::clone(&ps));
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let queries: Vec<[f64; 2]> = (0..100).map(|_| [rng.random(), rng.random()]).collect();
        let before: Vec<usize> = queries.iter().map(|q| idx.query(q, 0.3).unwrap()).collect();
        for i in (0..200).step_by(3) {
            idx.delete(i).unwrap();
        }
        for i in (0..200).step_by(3) {
            idx.insert(i).unwrap();
        }
        let after: Vec<usize> = queries.iter().map(|q| idx.query(q, 0.3).unwrap()).collect();
        assert_eq!(before, after);
    }

    #[test]
    fn random_ops_against_linear_scan() {
        let ps = random_set(500, 7);
        let mut idx = AnnIndex::build(Arc::clone(&ps));
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut member = vec![true; 500];
        for _ in 0..4000 {
            let i = rng.random_range(0..500);
            match rng.random_range(0..3) {
                0 if member[i] => {
                    idx.delete(i).unwrap();
                    member[i] = false;
                }
                1 if !member[i] => {
                    idx.insert(i).unwrap();
                    member[i] = true;
                }
                _ => {
                    let members: Vec<usize> = (0..500).filter(|&j| member[j]).collect();
                    if members.is_empty() {
                        continue;
                    }
                    let q = [rng.random::<f64>() * 1.2 - 0.1, rng.random::<f64>() * 1.2 - 0.1];
                    for eps in [0.0, 0.5] {
                        let r = idx.query(&q, eps).unwrap();
                        assert!(member[r]);
                        let best = linear_nn(&ps, &members, &q);
                        assert!(euclid(&q, ps.point(r)) <= (1.0 + eps) * best);
                    }
                }
            }
        }
        assert_eq!(idx.members(), (0..500).filter(|&j| member[j]).collect::<Vec<_>>());
    }
}

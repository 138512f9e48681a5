//! Ordinal tree navigation over any provider of the primitive contract.
//!
//! A node is identified by the position of its opening parenthesis. The
//! root has depth 1, and `is_ancestor` is reflexive. Relatives that do not
//! exist (the parent of a root, the next sibling of a last child, ...) are
//! reported as `None`; positions that are not opening parentheses are
//! argument errors.
//!
//! The underlying sequence may encode a forest; operations that would cross
//! between top-level trees answer `None`.

use crate::error::{Error, Result};
use crate::primitives::Primitives;

/// Position of a node's opening parenthesis.
pub type NodeId = usize;

/// A balanced parentheses sequence viewed as an ordinal tree.
#[derive(Debug, Clone)]
pub struct OrdinalTree<P> {
    prim: P,
}

impl<P: Primitives> OrdinalTree<P> {
    /// Wraps `prim`, checking that its sequence is balanced.
    pub fn new(prim: P) -> Result<Self> {
        let n = prim.len();
        if n > 0 {
            let s = prim.range_summary(0, n - 1);
            if s.min < 0 || prim.excess_at(n - 1) != 0 {
                return Err(Error::Unbalanced(
                    "tree navigation needs a balanced sequence".into(),
                ));
            }
        }
        Ok(Self { prim })
    }

    pub fn primitives(&self) -> &P {
        &self.prim
    }

    pub fn into_inner(self) -> P {
        self.prim
    }

    pub fn node_count(&self) -> usize {
        self.prim.len() / 2
    }

    pub fn is_node(&self, v: usize) -> bool {
        v < self.prim.len() && self.prim.bit(v)
    }

    fn node(&self, v: usize) -> Result<()> {
        if self.is_node(v) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "position {v} is not an opening parenthesis"
            )))
        }
    }

    fn close_of(&self, v: usize) -> usize {
        self.prim
            .find_first_eq(v, self.prim.excess_at(v) - 1)
            .expect("balanced sequence")
    }

    fn open_of(&self, c: usize) -> usize {
        self.prim
            .bwd_search(c, 0)
            .ok()
            .flatten()
            .expect("balanced sequence")
    }

    /// Matching closing parenthesis of `v`.
    pub fn find_close(&self, v: NodeId) -> Result<usize> {
        self.node(v)?;
        Ok(self.close_of(v))
    }

    /// Matching opening parenthesis of the closing parenthesis at `c`.
    pub fn find_open(&self, c: usize) -> Result<NodeId> {
        if c >= self.prim.len() || self.prim.bit(c) {
            return Err(Error::InvalidArgument(format!(
                "position {c} is not a closing parenthesis"
            )));
        }
        Ok(self.open_of(c))
    }

    /// Tightest enclosing node; an error for top-level nodes.
    pub fn enclose(&self, v: NodeId) -> Result<NodeId> {
        self.node(v)?;
        self.prim.bwd_search(v, 2)?.ok_or(Error::NoParent)
    }

    pub fn parent(&self, v: NodeId) -> Result<Option<NodeId>> {
        self.node(v)?;
        self.prim.bwd_search(v, 2)
    }

    pub fn depth(&self, v: NodeId) -> Result<usize> {
        self.node(v)?;
        Ok(self.prim.excess_at(v) as usize)
    }

    pub fn subtree_size(&self, v: NodeId) -> Result<usize> {
        self.node(v)?;
        Ok((self.close_of(v) - v).div_ceil(2))
    }

    pub fn is_leaf(&self, v: NodeId) -> Result<bool> {
        self.node(v)?;
        Ok(!self.prim.bit(v + 1))
    }

    /// Whether `u` is an ancestor of `v` (every node is its own ancestor).
    pub fn is_ancestor(&self, u: NodeId, v: NodeId) -> Result<bool> {
        self.node(u)?;
        self.node(v)?;
        Ok(u <= v && v <= self.close_of(u))
    }

    pub fn first_child(&self, v: NodeId) -> Result<Option<NodeId>> {
        self.node(v)?;
        Ok(self.prim.bit(v + 1).then_some(v + 1))
    }

    pub fn last_child(&self, v: NodeId) -> Result<Option<NodeId>> {
        self.node(v)?;
        if !self.prim.bit(v + 1) {
            return Ok(None);
        }
        Ok(Some(self.open_of(self.close_of(v) - 1)))
    }

    pub fn next_sibling(&self, v: NodeId) -> Result<Option<NodeId>> {
        self.node(v)?;
        let c = self.close_of(v);
        Ok((c + 1 < self.prim.len() && self.prim.bit(c + 1)).then_some(c + 1))
    }

    pub fn prev_sibling(&self, v: NodeId) -> Result<Option<NodeId>> {
        self.node(v)?;
        if v == 0 || self.prim.bit(v - 1) {
            return Ok(None);
        }
        Ok(Some(self.open_of(v - 1)))
    }

    /// 1-based preorder number.
    pub fn pre_rank(&self, v: NodeId) -> Result<usize> {
        self.node(v)?;
        self.prim.rank1(v)
    }

    pub fn pre_select(&self, q: usize) -> Result<NodeId> {
        self.prim.select1(q)
    }

    /// 1-based postorder number.
    pub fn post_rank(&self, v: NodeId) -> Result<usize> {
        self.node(v)?;
        self.prim.rank0(self.close_of(v))
    }

    pub fn post_select(&self, q: usize) -> Result<NodeId> {
        let c = self.prim.select0(q)?;
        Ok(self.open_of(c))
    }

    /// Ancestor `d` levels above `v`; `d = 0` is `v` itself.
    pub fn level_ancestor(&self, v: NodeId, d: usize) -> Result<Option<NodeId>> {
        self.node(v)?;
        self.prim.bwd_search(v, d as i64 + 1)
    }

    /// Next node to the right at the same depth.
    pub fn level_next(&self, v: NodeId) -> Result<Option<NodeId>> {
        self.node(v)?;
        let c = self.close_of(v);
        Ok(self.prim.fwd_search(c, 0)?.filter(|&j| self.prim.bit(j)))
    }

    /// Previous node to the left at the same depth.
    pub fn level_prev(&self, v: NodeId) -> Result<Option<NodeId>> {
        self.node(v)?;
        Ok(match self.prim.bwd_search(v, 0)? {
            Some(j) if !self.prim.bit(j) => Some(self.open_of(j)),
            _ => None,
        })
    }

    /// Leftmost node at depth `d`.
    pub fn level_lmost(&self, d: usize) -> Result<Option<NodeId>> {
        if d == 0 || self.prim.is_empty() {
            return Ok(None);
        }
        Ok(self
            .prim
            .fwd_search(0, d as i64)?
            .filter(|&j| self.prim.bit(j)))
    }

    /// Rightmost node at depth `d`.
    pub fn level_rmost(&self, d: usize) -> Result<Option<NodeId>> {
        if d == 0 || self.prim.is_empty() {
            return Ok(None);
        }
        let n = self.prim.len();
        Ok(match self.prim.bwd_search(n - 1, -(d as i64))? {
            Some(j) if !self.prim.bit(j) => Some(self.open_of(j)),
            _ => None,
        })
    }

    /// Lowest common ancestor; `None` when the nodes lie in different
    /// top-level trees.
    pub fn lca(&self, u: NodeId, v: NodeId) -> Result<Option<NodeId>> {
        self.node(u)?;
        self.node(v)?;
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        if v <= self.close_of(u) {
            return Ok(Some(u));
        }
        let (m, _) = self.prim.rmqi(u, v)?;
        self.prim.bwd_search(m + 1, 2)
    }

    /// Leftmost deepest node of the subtree of `v`.
    pub fn deepest_node(&self, v: NodeId) -> Result<NodeId> {
        self.node(v)?;
        Ok(self.prim.rmqi_max(v, self.close_of(v))?.0)
    }

    /// Distance from `v` to its deepest descendant.
    pub fn height(&self, v: NodeId) -> Result<usize> {
        self.node(v)?;
        let (_, max) = self.prim.rmqi_max(v, self.close_of(v))?;
        Ok((max - self.prim.excess_at(v)) as usize)
    }

    pub fn degree(&self, v: NodeId) -> Result<usize> {
        self.node(v)?;
        if !self.prim.bit(v + 1) {
            return Ok(0);
        }
        self.prim.min_count(v + 1, self.close_of(v) - 1)
    }

    /// The `q`-th (1-based) child of `v`.
    pub fn child(&self, v: NodeId, q: usize) -> Result<NodeId> {
        let deg = self.degree(v)?;
        if q == 0 || q > deg {
            return Err(Error::InvalidArgument(format!(
                "child rank {q} outside 1..={deg}"
            )));
        }
        if q == 1 {
            return Ok(v + 1);
        }
        Ok(self.prim.min_select(v + 1, self.close_of(v) - 1, q - 1)? + 1)
    }

    /// Position of `v` among its siblings (1-based); `None` for roots.
    pub fn child_rank(&self, v: NodeId) -> Result<Option<usize>> {
        match self.parent(v)? {
            None => Ok(None),
            Some(p) => Ok(Some(self.prim.min_count(p, v - 1)?)),
        }
    }

    /// Number of leaves up to and including `v` in preorder.
    pub fn leaf_rank(&self, v: NodeId) -> Result<usize> {
        self.node(v)?;
        self.prim.rank_p1(v)
    }

    pub fn leaf_select(&self, q: usize) -> Result<NodeId> {
        self.prim.select_p1(q)
    }

    pub fn lmost_leaf(&self, v: NodeId) -> Result<NodeId> {
        self.node(v)?;
        let before = if v == 0 { 0 } else { self.prim.rank_p1(v - 1)? };
        self.prim.select_p1(before + 1)
    }

    pub fn rmost_leaf(&self, v: NodeId) -> Result<NodeId> {
        self.node(v)?;
        let q = self.prim.rank_p1(self.close_of(v))?;
        self.prim.select_p1(q)
    }

    /// Smallest inorder number of `v`; `None` unless `v` has two or more
    /// children.
    pub fn in_rank(&self, v: NodeId) -> Result<Option<usize>> {
        self.node(v)?;
        if !self.prim.bit(v + 1) {
            return Ok(None);
        }
        let c = self.close_of(v + 1);
        if !self.prim.bit(c + 1) {
            return Ok(None);
        }
        Ok(Some(self.prim.rank_p2(c)?))
    }

    /// Node owning inorder number `q`.
    pub fn in_select(&self, q: usize) -> Result<NodeId> {
        let b = self.prim.select_p2(q)?;
        self.prim.bwd_search(b + 1, 2)?.ok_or(Error::NoParent)
    }
}

impl<T: Primitives + ?Sized> Primitives for &T {
    fn len(&self) -> usize {
        (**self).len()
    }
    fn bit(&self, i: usize) -> bool {
        (**self).bit(i)
    }
    fn excess_at(&self, i: usize) -> i64 {
        (**self).excess_at(i)
    }
    fn find_first_eq(&self, from: usize, target: i64) -> Option<usize> {
        (**self).find_first_eq(from, target)
    }
    fn find_last_eq(&self, to: usize, target: i64) -> Option<usize> {
        (**self).find_last_eq(to, target)
    }
    fn range_summary(&self, i: usize, j: usize) -> crate::primitives::RangeSummary {
        (**self).range_summary(i, j)
    }
    fn nth_min(&self, i: usize, j: usize, min: i64, q: usize) -> usize {
        (**self).nth_min(i, j, min, q)
    }
    fn ones_through(&self, i: usize) -> usize {
        (**self).ones_through(i)
    }
    fn select_bit(&self, bit: bool, q: usize) -> Option<usize> {
        (**self).select_bit(bit, q)
    }
    fn pattern_through(&self, pat: crate::primitives::Pattern, i: usize) -> usize {
        (**self).pattern_through(pat, i)
    }
    fn select_pattern(&self, pat: crate::primitives::Pattern, q: usize) -> Option<usize> {
        (**self).select_pattern(pat, q)
    }
}

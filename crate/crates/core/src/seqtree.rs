//! Join-based AVL tree over leaf segments.
//!
//! Data lives only in the leaves; internal nodes cache a summary of their
//! subtree. Every structural edit is expressed through `split` and `join`,
//! which keeps attach/detach and single-bit edits on the same code path.
//! Positions are measured in "units" (bits for parentheses, codes for code
//! sequences); leaf sizes are balanced by "weight" (bits of storage).

// Nodes are passed boxed so that splitting reuses their allocations.
#![allow(clippy::boxed_local)]

use std::fmt::Debug;

pub(crate) trait Summary: Copy + Debug + PartialEq {
    fn combine(&self, right: &Self) -> Self;
    fn units(&self) -> usize;
}

pub(crate) trait Segment: Clone + Debug {
    type Summary: Summary;
    type Ctx;

    fn summarize(&self, ctx: &Self::Ctx) -> Self::Summary;
    fn weight(&self) -> usize;
    /// Keeps units `[0, at)` and returns the rest.
    fn split_units(&mut self, at: usize, ctx: &Self::Ctx) -> Self;
    /// Splits near `target` weight, keeping both parts non-empty when the
    /// segment holds more than one unit.
    fn split_weight(&mut self, target: usize, ctx: &Self::Ctx) -> Self;
    fn append(&mut self, other: Self, ctx: &Self::Ctx);
}

#[derive(Debug, Clone)]
pub(crate) struct Node<S: Segment> {
    pub sum: S::Summary,
    pub height: u32,
    pub kind: Kind<S>,
}

#[derive(Debug, Clone)]
pub(crate) enum Kind<S: Segment> {
    Leaf(S),
    Inner(Box<Node<S>>, Box<Node<S>>),
}

pub(crate) type Tree<S> = Option<Box<Node<S>>>;

/// Leaf weight bounds `[lo, hi]` enforced by `reassemble`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Bounds {
    pub lo: usize,
    pub hi: usize,
}

pub(crate) fn leaf<S: Segment>(seg: S, ctx: &S::Ctx) -> Box<Node<S>> {
    Box::new(Node {
        sum: seg.summarize(ctx),
        height: 1,
        kind: Kind::Leaf(seg),
    })
}

fn make<S: Segment>(a: Box<Node<S>>, b: Box<Node<S>>) -> Box<Node<S>> {
    Box::new(Node {
        sum: a.sum.combine(&b.sum),
        height: 1 + a.height.max(b.height),
        kind: Kind::Inner(a, b),
    })
}

fn children<S: Segment>(n: Box<Node<S>>) -> (Box<Node<S>>, Box<Node<S>>) {
    match n.kind {
        Kind::Inner(a, b) => (a, b),
        Kind::Leaf(_) => unreachable!("taller side is never a leaf"),
    }
}

/// Builds `a ++ b` when their heights differ by at most 2.
fn balance<S: Segment>(a: Box<Node<S>>, b: Box<Node<S>>) -> Box<Node<S>> {
    if a.height > b.height + 1 {
        let (x, y) = children(a);
        if x.height >= y.height {
            make(x, make(y, b))
        } else {
            let (y1, y2) = children(y);
            make(make(x, y1), make(y2, b))
        }
    } else if b.height > a.height + 1 {
        let (x, y) = children(b);
        if y.height >= x.height {
            make(make(a, x), y)
        } else {
            let (x1, x2) = children(x);
            make(make(a, x1), make(x2, y))
        }
    } else {
        make(a, b)
    }
}

fn join_nodes<S: Segment>(a: Box<Node<S>>, b: Box<Node<S>>) -> Box<Node<S>> {
    if a.height > b.height + 1 {
        let (x, y) = children(a);
        balance(x, join_nodes(y, b))
    } else if b.height > a.height + 1 {
        let (x, y) = children(b);
        balance(join_nodes(a, x), y)
    } else {
        make(a, b)
    }
}

pub(crate) fn join<S: Segment>(a: Tree<S>, b: Tree<S>) -> Tree<S> {
    match (a, b) {
        (None, t) | (t, None) => t,
        (Some(a), Some(b)) => Some(join_nodes(a, b)),
    }
}

/// Splits into units `[0, pos)` and `[pos, ..)`. Boundary leaves may end up
/// under-full; callers repair them with `reassemble`.
pub(crate) fn split<S: Segment>(t: Tree<S>, pos: usize, ctx: &S::Ctx) -> (Tree<S>, Tree<S>) {
    let Some(n) = t else {
        return (None, None);
    };
    if pos == 0 {
        return (None, Some(n));
    }
    if pos >= n.sum.units() {
        return (Some(n), None);
    }
    match n.kind {
        Kind::Leaf(mut seg) => {
            let right = seg.split_units(pos, ctx);
            (Some(leaf(seg, ctx)), Some(leaf(right, ctx)))
        }
        Kind::Inner(a, b) => {
            let au = a.sum.units();
            if pos <= au {
                let (l, r) = split(Some(a), pos, ctx);
                (l, join(r, Some(b)))
            } else {
                let (l, r) = split(Some(b), pos - au, ctx);
                (join(Some(a), l), r)
            }
        }
    }
}

/// Detaches the leaf holding unit `pos` (the last leaf when `pos` equals the
/// total). Returns the trees left and right of it, the leaf and the offset
/// of `pos` inside it.
pub(crate) fn split_around<S: Segment>(
    n: Box<Node<S>>,
    pos: usize,
) -> (Tree<S>, S, usize, Tree<S>) {
    match n.kind {
        Kind::Leaf(seg) => (None, seg, pos, None),
        Kind::Inner(a, b) => {
            let au = a.sum.units();
            if pos < au {
                let (l, s, off, r) = split_around(a, pos);
                (l, s, off, join(r, Some(b)))
            } else {
                let (l, s, off, r) = split_around(b, pos - au);
                (join(Some(a), l), s, off, r)
            }
        }
    }
}

pub(crate) fn pop_first<S: Segment>(n: Box<Node<S>>) -> (S, Tree<S>) {
    match n.kind {
        Kind::Leaf(seg) => (seg, None),
        Kind::Inner(a, b) => {
            let (s, rest) = pop_first(a);
            (s, join(rest, Some(b)))
        }
    }
}

pub(crate) fn pop_last<S: Segment>(n: Box<Node<S>>) -> (Tree<S>, S) {
    match n.kind {
        Kind::Leaf(seg) => (None, seg),
        Kind::Inner(a, b) => {
            let (rest, s) = pop_last(b);
            (join(Some(a), rest), s)
        }
    }
}

/// Joins `left ++ mid ++ right`, borrowing whole neighbour leaves while `mid`
/// is under-full and cutting it into near-equal pieces while it is over-full.
pub(crate) fn reassemble<S: Segment>(
    mut left: Tree<S>,
    mut mid: S,
    mut right: Tree<S>,
    bounds: Bounds,
    ctx: &S::Ctx,
) -> Tree<S> {
    while mid.weight() < bounds.lo {
        if let Some(l) = left.take() {
            let (rest, mut prev) = pop_last(l);
            prev.append(mid, ctx);
            mid = prev;
            left = rest;
        } else if let Some(r) = right.take() {
            let (next, rest) = pop_first(r);
            mid.append(next, ctx);
            right = rest;
        } else {
            break;
        }
    }
    if mid.weight() == 0 {
        return join(left, right);
    }
    let mut acc = left;
    let pieces = mid.weight().div_ceil(bounds.hi);
    for k in 0..pieces.saturating_sub(1) {
        let target = mid.weight() / (pieces - k);
        let rest = mid.split_weight(target, ctx);
        acc = join(acc, Some(leaf(mid, ctx)));
        mid = rest;
    }
    acc = join(acc, Some(leaf(mid, ctx)));
    join(acc, right)
}

/// Balanced tree over `segs` in order.
pub(crate) fn build<S: Segment>(segs: Vec<S>, ctx: &S::Ctx) -> Tree<S> {
    fn go<S: Segment>(segs: &mut std::vec::IntoIter<S>, n: usize, ctx: &S::Ctx) -> Box<Node<S>> {
        if n == 1 {
            return leaf(segs.next().unwrap(), ctx);
        }
        let a = go(segs, n / 2, ctx);
        let b = go(segs, n - n / 2, ctx);
        make(a, b)
    }
    let n = segs.len();
    if n == 0 {
        return None;
    }
    Some(go(&mut segs.into_iter(), n, ctx))
}

pub(crate) fn for_each_leaf<'a, S: Segment, F: FnMut(&'a S)>(t: &'a Tree<S>, f: &mut F) {
    fn go<'a, S: Segment, F: FnMut(&'a S)>(n: &'a Node<S>, f: &mut F) {
        match &n.kind {
            Kind::Leaf(s) => f(s),
            Kind::Inner(a, b) => {
                go(a, f);
                go(b, f);
            }
        }
    }
    if let Some(n) = t {
        go(n, f);
    }
}

pub(crate) fn leaf_count<S: Segment>(t: &Tree<S>) -> usize {
    let mut c = 0;
    for_each_leaf(t, &mut |_| c += 1);
    c
}

pub(crate) fn node_count<S: Segment>(t: &Tree<S>) -> usize {
    let leaves = leaf_count(t);
    if leaves == 0 {
        0
    } else {
        2 * leaves - 1
    }
}

/// Why an audit failed: the preorder index of the offending tree node and
/// what was wrong with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditFailure {
    pub node: usize,
    pub reason: String,
}

impl std::fmt::Display for AuditFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "node {}: {}", self.node, self.reason)
    }
}

impl std::error::Error for AuditFailure {}

/// Recomputes every cached field and checks AVL balance and leaf bounds.
/// A sole leaf is exempt from the lower bound.
pub(crate) fn audit<S: Segment>(
    t: &Tree<S>,
    bounds: Bounds,
    ctx: &S::Ctx,
) -> std::result::Result<(), AuditFailure> {
    fn go<S: Segment>(
        n: &Node<S>,
        id: &mut usize,
        bounds: Bounds,
        sole: bool,
        ctx: &S::Ctx,
    ) -> std::result::Result<(), AuditFailure> {
        let me = *id;
        *id += 1;
        let fail = |reason: String| Err(AuditFailure { node: me, reason });
        match &n.kind {
            Kind::Leaf(s) => {
                if n.height != 1 {
                    return fail(format!("leaf height {}", n.height));
                }
                let w = s.weight();
                if w > bounds.hi || (w < bounds.lo && !sole) || w == 0 {
                    return fail(format!(
                        "leaf weight {w} outside [{}, {}]",
                        bounds.lo, bounds.hi
                    ));
                }
                let fresh = s.summarize(ctx);
                if fresh != n.sum {
                    return fail(format!("cached {:?}, recomputed {:?}", n.sum, fresh));
                }
            }
            Kind::Inner(a, b) => {
                go(a, id, bounds, false, ctx)?;
                go(b, id, bounds, false, ctx)?;
                if n.height != 1 + a.height.max(b.height) {
                    return fail(format!(
                        "height {} with children {} and {}",
                        n.height, a.height, b.height
                    ));
                }
                if a.height.abs_diff(b.height) > 1 {
                    return fail(format!("unbalanced children {} and {}", a.height, b.height));
                }
                let fresh = a.sum.combine(&b.sum);
                if fresh != n.sum {
                    return fail(format!("cached {:?}, recomputed {:?}", n.sum, fresh));
                }
            }
        }
        Ok(())
    }
    match t {
        None => Ok(()),
        Some(n) => go(n, &mut 0, bounds, matches!(n.kind, Kind::Leaf(_)), ctx),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Plain vector segment; summary is (len, sum).
    #[derive(Debug, Clone)]
    struct VecSeg(Vec<u32>);

    #[derive(Debug, Clone, Copy, PartialEq)]
    struct LenSum(usize, u64);

    impl Summary for LenSum {
        fn combine(&self, r: &Self) -> Self {
            LenSum(self.0 + r.0, self.1 + r.1)
        }
        fn units(&self) -> usize {
            self.0
        }
    }

    impl Segment for VecSeg {
        type Summary = LenSum;
        type Ctx = ();
        fn summarize(&self, _: &()) -> LenSum {
            LenSum(self.0.len(), self.0.iter().map(|&x| x as u64).sum())
        }
        fn weight(&self) -> usize {
            self.0.len()
        }
        fn split_units(&mut self, at: usize, _: &()) -> Self {
            VecSeg(self.0.split_off(at))
        }
        fn split_weight(&mut self, target: usize, _: &()) -> Self {
            let at = target.clamp(1, self.0.len().max(2) - 1);
            VecSeg(self.0.split_off(at))
        }
        fn append(&mut self, mut other: Self, _: &()) {
            self.0.append(&mut other.0);
        }
    }

    const B: Bounds = Bounds { lo: 4, hi: 8 };

    fn flatten(t: &Tree<VecSeg>) -> Vec<u32> {
        let mut v = Vec::new();
        for_each_leaf(t, &mut |s: &VecSeg| v.extend_from_slice(&s.0));
        v
    }

    fn insert(t: Tree<VecSeg>, pos: usize, x: u32) -> Tree<VecSeg> {
        match t {
            None => Some(leaf(VecSeg(vec![x]), &())),
            Some(n) => {
                let (l, mut s, off, r) = split_around(n, pos);
                s.0.insert(off, x);
                reassemble(l, s, r, B, &())
            }
        }
    }

    fn remove(t: Tree<VecSeg>, pos: usize) -> Tree<VecSeg> {
        let (l, mut s, off, r) = split_around(t.unwrap(), pos);
        s.0.remove(off);
        reassemble(l, s, r, B, &())
    }

    #[test]
    fn random_edits_keep_invariants() {
        let mut rng = StdRng::seed_from_u64(7);
        let mut t: Tree<VecSeg> = None;
        let mut model: Vec<u32> = Vec::new();
        for step in 0..4000 {
            if model.is_empty() || rng.random_bool(0.6) {
                let pos = rng.random_range(0..=model.len());
                let x = rng.random_range(0..100);
                t = insert(t, pos, x);
                model.insert(pos, x);
            } else {
                let pos = rng.random_range(0..model.len());
                t = remove(t, pos);
                model.remove(pos);
            }
            if step % 50 == 0 {
                audit(&t, B, &()).unwrap();
                assert_eq!(flatten(&t), model);
            }
        }
        audit(&t, B, &()).unwrap();
        assert_eq!(flatten(&t), model);
    }

    #[test]
    fn split_and_join_round_trip() {
        let segs: Vec<VecSeg> = (0..50)
            .map(|k| VecSeg((k * 6..k * 6 + 6).collect()))
            .collect();
        let t = build(segs, &());
        audit(&t, B, &()).unwrap();
        let all = flatten(&t);
        for pos in [0, 1, 5, 6, 7, 150, 299, 300] {
            let (l, r) = split(t.clone(), pos, &());
            assert_eq!(flatten(&l), all[..pos]);
            assert_eq!(flatten(&r), all[pos..]);
            let j = join(l, r);
            assert_eq!(flatten(&j), all);
            // heights stay AVL even though boundary leaves may be small
            audit(&j, Bounds { lo: 0, hi: 8 }, &()).unwrap();
        }
    }

    #[test]
    fn join_of_very_different_heights() {
        let big = build((0..200).map(|k| VecSeg(vec![k; 5])).collect(), &());
        let small = build(vec![VecSeg(vec![9; 5])], &());
        let t = join(small.clone(), join(big.clone(), small));
        audit(&t, B, &()).unwrap();
        assert_eq!(t.as_ref().unwrap().sum.units(), 1010);
    }
}

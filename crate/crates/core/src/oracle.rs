//! Brute-force reference implementations and random balanced sequences.
//!
//! Everything here is evaluated by direct linear scans or on an explicit
//! pointer tree, independently of the range min-max machinery, and serves as
//! the ground truth for tests.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::paren::ParenBitVector;

/// Linear-scan evaluation of the primitive set.
#[derive(Debug, Clone)]
pub struct NaivePrimitives {
    bits: Vec<bool>,
    excess: Vec<i64>,
}

fn out_of_range(index: usize, len: usize) -> Error {
    Error::OutOfRange { index, len }
}

impl NaivePrimitives {
    pub fn new(p: &ParenBitVector) -> Self {
        let bits: Vec<bool> = p.iter().collect();
        let mut e = 0;
        let excess = bits
            .iter()
            .map(|&b| {
                e += if b { 1 } else { -1 };
                e
            })
            .collect();
        Self { bits, excess }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(out_of_range(i, self.len()))
        }
    }

    fn check_range(&self, i: usize, j: usize) -> Result<()> {
        self.check(j)?;
        if i > j {
            return Err(Error::InvalidArgument("empty range".into()));
        }
        Ok(())
    }

    fn pi(&self, k: usize) -> i64 {
        if self.bits[k] {
            1
        } else {
            -1
        }
    }

    pub fn get(&self, i: usize) -> Result<bool> {
        self.check(i)?;
        Ok(self.bits[i])
    }

    pub fn excess(&self, i: usize) -> Result<i64> {
        self.check(i)?;
        Ok(self.excess[i])
    }

    /// `sum(P, pi, i, j)` by direct summation.
    pub fn sum(&self, i: usize, j: usize) -> Result<i64> {
        self.check_range(i, j)?;
        Ok((i..=j).map(|k| self.pi(k)).sum())
    }

    pub fn fwd_search(&self, i: usize, d: i64) -> Result<Option<usize>> {
        self.check(i)?;
        let mut s = 0;
        for j in i..self.len() {
            s += self.pi(j);
            if s == d {
                return Ok(Some(j));
            }
        }
        Ok(None)
    }

    pub fn bwd_search(&self, i: usize, d: i64) -> Result<Option<usize>> {
        self.check(i)?;
        let mut s = 0;
        for j in (0..=i).rev() {
            s += self.pi(j);
            if s == d {
                return Ok(Some(j));
            }
        }
        Ok(None)
    }

    pub fn rmqi(&self, i: usize, j: usize) -> Result<(usize, i64)> {
        self.check_range(i, j)?;
        let mut best = i;
        for k in i..=j {
            if self.excess[k] < self.excess[best] {
                best = k;
            }
        }
        Ok((best, self.excess[best]))
    }

    pub fn rmqi_max(&self, i: usize, j: usize) -> Result<(usize, i64)> {
        self.check_range(i, j)?;
        let mut best = i;
        for k in i..=j {
            if self.excess[k] > self.excess[best] {
                best = k;
            }
        }
        Ok((best, self.excess[best]))
    }

    fn minima(&self, i: usize, j: usize) -> Vec<usize> {
        let m = self.excess[i..=j].iter().min().copied().unwrap();
        (i..=j).filter(|&k| self.excess[k] == m).collect()
    }

    pub fn min_count(&self, i: usize, j: usize) -> Result<usize> {
        self.check_range(i, j)?;
        Ok(self.minima(i, j).len())
    }

    pub fn min_select(&self, i: usize, j: usize, q: usize) -> Result<usize> {
        self.check_range(i, j)?;
        let m = self.minima(i, j);
        if q == 0 || q > m.len() {
            return Err(Error::InvalidArgument("min_select rank".into()));
        }
        Ok(m[q - 1])
    }

    fn rank_by<F: Fn(usize) -> bool>(&self, i: usize, f: F) -> Result<usize> {
        self.check(i)?;
        Ok((0..=i).filter(|&k| f(k)).count())
    }

    fn select_by<F: Fn(usize) -> bool>(&self, q: usize, f: F) -> Result<usize> {
        (0..self.len())
            .filter(|&k| f(k))
            .nth(q.wrapping_sub(1))
            .ok_or_else(|| Error::InvalidArgument("select beyond population".into()))
    }

    fn next_bit(&self, k: usize) -> bool {
        self.bits.get(k + 1).copied().unwrap_or(false)
    }

    /// `P1[k] = 1` iff `P[k] = 1` and `P[k+1] = 0` (a virtual `0` follows the end).
    pub fn p1(&self, k: usize) -> bool {
        self.bits[k] && !self.next_bit(k)
    }

    /// `P2[k] = 1` iff `P[k] = 0` and `P[k+1] = 1`.
    pub fn p2(&self, k: usize) -> bool {
        !self.bits[k] && self.next_bit(k)
    }

    pub fn rank1(&self, i: usize) -> Result<usize> {
        self.rank_by(i, |k| self.bits[k])
    }
    pub fn rank0(&self, i: usize) -> Result<usize> {
        self.rank_by(i, |k| !self.bits[k])
    }
    pub fn select1(&self, q: usize) -> Result<usize> {
        self.select_by(q, |k| self.bits[k])
    }
    pub fn select0(&self, q: usize) -> Result<usize> {
        self.select_by(q, |k| !self.bits[k])
    }
    pub fn rank_p1(&self, i: usize) -> Result<usize> {
        self.rank_by(i, |k| self.p1(k))
    }
    pub fn select_p1(&self, q: usize) -> Result<usize> {
        self.select_by(q, |k| self.p1(k))
    }
    pub fn rank_p2(&self, i: usize) -> Result<usize> {
        self.rank_by(i, |k| self.p2(k))
    }
    pub fn select_p2(&self, q: usize) -> Result<usize> {
        self.select_by(q, |k| self.p2(k))
    }
}

#[derive(Debug, Clone)]
struct NaiveNode {
    open: usize,
    close: usize,
    parent: Option<usize>,
    children: Vec<usize>,
    depth: usize,
}

/// Explicit pointer tree (or forest) built from a balanced sequence.
/// Nodes are indexed in preorder and identified externally by the position
/// of their opening parenthesis.
#[derive(Debug, Clone)]
pub struct NaiveTree {
    nodes: Vec<NaiveNode>,
    by_open: Vec<Option<usize>>,
    by_close: Vec<Option<usize>>,
    len: usize,
    // orders derived once from the node list
    post: Vec<usize>,
    leaf_ids: Vec<usize>,
    inorder: Vec<usize>,
}

impl NaiveTree {
    pub fn new(p: &ParenBitVector) -> Result<Self> {
        if !p.is_balanced() {
            return Err(Error::Unbalanced("sequence is not balanced".into()));
        }
        let len = p.len();
        let mut nodes: Vec<NaiveNode> = Vec::new();
        let mut by_open = vec![None; len];
        let mut by_close = vec![None; len];
        let mut stack: Vec<usize> = Vec::new();
        for (i, b) in p.iter().enumerate() {
            if b {
                let id = nodes.len();
                let parent = stack.last().copied();
                if let Some(par) = parent {
                    nodes[par].children.push(id);
                }
                nodes.push(NaiveNode {
                    open: i,
                    close: usize::MAX,
                    parent,
                    children: Vec::new(),
                    depth: stack.len() + 1,
                });
                by_open[i] = Some(id);
                stack.push(id);
            } else {
                let id = stack.pop().expect("balanced");
                nodes[id].close = i;
                by_close[i] = Some(id);
            }
        }
        let mut t = Self {
            nodes,
            by_open,
            by_close,
            len,
            post: Vec::new(),
            leaf_ids: Vec::new(),
            inorder: Vec::new(),
        };
        t.post = t.postorder();
        t.leaf_ids = t.leaves();
        t.inorder = t.inorders();
        Ok(t)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Opening positions of all nodes, in preorder.
    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().map(|n| n.open)
    }

    /// Rebuilds the parentheses string.
    pub fn to_parens(&self) -> ParenBitVector {
        ParenBitVector::from_bits((0..self.len).map(|i| self.by_open[i].is_some()))
    }

    fn id(&self, v: usize) -> Result<usize> {
        self.by_open
            .get(v)
            .copied()
            .flatten()
            .ok_or_else(|| Error::InvalidArgument(format!("{v} is not a node")))
    }

    fn pos(&self, id: usize) -> usize {
        self.nodes[id].open
    }

    pub fn find_close(&self, v: usize) -> Result<usize> {
        Ok(self.nodes[self.id(v)?].close)
    }

    pub fn find_open(&self, c: usize) -> Result<usize> {
        let id =
            self.by_close.get(c).copied().flatten().ok_or_else(|| {
                Error::InvalidArgument(format!("{c} is not a closing parenthesis"))
            })?;
        Ok(self.nodes[id].open)
    }

    pub fn enclose(&self, v: usize) -> Result<usize> {
        self.parent(v)?.ok_or(Error::NoParent)
    }

    pub fn depth(&self, v: usize) -> Result<usize> {
        let mut id = self.id(v)?;
        let mut d = 1;
        while let Some(p) = self.nodes[id].parent {
            id = p;
            d += 1;
        }
        Ok(d)
    }

    pub fn parent(&self, v: usize) -> Result<Option<usize>> {
        Ok(self.nodes[self.id(v)?].parent.map(|p| self.pos(p)))
    }

    pub fn subtree_size(&self, v: usize) -> Result<usize> {
        fn count(t: &NaiveTree, id: usize) -> usize {
            1 + t.nodes[id]
                .children
                .iter()
                .map(|&c| count(t, c))
                .sum::<usize>()
        }
        Ok(count(self, self.id(v)?))
    }

    pub fn is_leaf(&self, v: usize) -> Result<bool> {
        Ok(self.nodes[self.id(v)?].children.is_empty())
    }

    pub fn is_ancestor(&self, u: usize, v: usize) -> Result<bool> {
        let target = self.id(u)?;
        let mut cur = Some(self.id(v)?);
        while let Some(id) = cur {
            if id == target {
                return Ok(true);
            }
            cur = self.nodes[id].parent;
        }
        Ok(false)
    }

    pub fn first_child(&self, v: usize) -> Result<Option<usize>> {
        Ok(self.nodes[self.id(v)?]
            .children
            .first()
            .map(|&c| self.pos(c)))
    }

    pub fn last_child(&self, v: usize) -> Result<Option<usize>> {
        Ok(self.nodes[self.id(v)?]
            .children
            .last()
            .map(|&c| self.pos(c)))
    }

    fn siblings(&self, id: usize) -> Vec<usize> {
        match self.nodes[id].parent {
            Some(p) => self.nodes[p].children.clone(),
            None => (0..self.nodes.len())
                .filter(|&x| self.nodes[x].parent.is_none())
                .collect(),
        }
    }

    pub fn next_sibling(&self, v: usize) -> Result<Option<usize>> {
        let id = self.id(v)?;
        let sibs = self.siblings(id);
        let k = sibs.iter().position(|&s| s == id).unwrap();
        Ok(sibs.get(k + 1).map(|&s| self.pos(s)))
    }

    pub fn prev_sibling(&self, v: usize) -> Result<Option<usize>> {
        let id = self.id(v)?;
        let sibs = self.siblings(id);
        let k = sibs.iter().position(|&s| s == id).unwrap();
        Ok(k.checked_sub(1).map(|j| self.pos(sibs[j])))
    }

    pub fn pre_rank(&self, v: usize) -> Result<usize> {
        Ok(self.id(v)? + 1)
    }

    pub fn pre_select(&self, q: usize) -> Result<usize> {
        q.checked_sub(1)
            .and_then(|k| self.nodes.get(k))
            .map(|n| n.open)
            .ok_or_else(|| Error::InvalidArgument("pre_select rank".into()))
    }

    fn postorder(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.nodes.len()).collect();
        ids.sort_by_key(|&id| self.nodes[id].close);
        ids
    }

    pub fn post_rank(&self, v: usize) -> Result<usize> {
        let id = self.id(v)?;
        Ok(self.post.iter().position(|&x| x == id).unwrap() + 1)
    }

    pub fn post_select(&self, q: usize) -> Result<usize> {
        q.checked_sub(1)
            .and_then(|k| self.post.get(k).copied())
            .map(|id| self.pos(id))
            .ok_or_else(|| Error::InvalidArgument("post_select rank".into()))
    }

    /// Ancestor `d` levels above `v` (`d = 0` is `v` itself).
    pub fn level_ancestor(&self, v: usize, d: usize) -> Result<Option<usize>> {
        let mut cur = Some(self.id(v)?);
        for _ in 0..d {
            cur = cur.and_then(|id| self.nodes[id].parent);
        }
        Ok(cur.map(|id| self.pos(id)))
    }

    fn depth_of(&self, id: usize) -> usize {
        self.nodes[id].depth
    }

    pub fn level_next(&self, v: usize) -> Result<Option<usize>> {
        let id = self.id(v)?;
        let d = self.depth_of(id);
        Ok((id + 1..self.nodes.len())
            .find(|&x| self.depth_of(x) == d)
            .map(|x| self.pos(x)))
    }

    pub fn level_prev(&self, v: usize) -> Result<Option<usize>> {
        let id = self.id(v)?;
        let d = self.depth_of(id);
        Ok((0..id)
            .rev()
            .find(|&x| self.depth_of(x) == d)
            .map(|x| self.pos(x)))
    }

    pub fn level_lmost(&self, d: usize) -> Option<usize> {
        (0..self.nodes.len())
            .find(|&x| self.depth_of(x) == d)
            .map(|x| self.pos(x))
    }

    pub fn level_rmost(&self, d: usize) -> Option<usize> {
        (0..self.nodes.len())
            .rev()
            .find(|&x| self.depth_of(x) == d)
            .map(|x| self.pos(x))
    }

    /// Deepest common ancestor, by intersecting ancestor lists.
    pub fn lca(&self, u: usize, v: usize) -> Result<Option<usize>> {
        let chain = |mut id: usize| {
            let mut c = vec![id];
            while let Some(p) = self.nodes[id].parent {
                c.push(p);
                id = p;
            }
            c
        };
        let a = chain(self.id(u)?);
        let b = chain(self.id(v)?);
        Ok(a.iter().find(|x| b.contains(x)).map(|&id| self.pos(id)))
    }

    fn subtree_ids(&self, id: usize) -> std::ops::Range<usize> {
        id..id + {
            fn count(t: &NaiveTree, id: usize) -> usize {
                1 + t.nodes[id]
                    .children
                    .iter()
                    .map(|&c| count(t, c))
                    .sum::<usize>()
            }
            count(self, id)
        }
    }

    /// First node in preorder among the deepest of the subtree.
    pub fn deepest_node(&self, v: usize) -> Result<usize> {
        let id = self.id(v)?;
        let range = self.subtree_ids(id);
        let max = range.clone().map(|x| self.depth_of(x)).max().unwrap();
        let best = range
            .into_iter()
            .find(|&x| self.depth_of(x) == max)
            .unwrap();
        Ok(self.pos(best))
    }

    pub fn height(&self, v: usize) -> Result<usize> {
        let id = self.id(v)?;
        let max = self
            .subtree_ids(id)
            .map(|x| self.depth_of(x))
            .max()
            .unwrap();
        Ok(max - self.depth_of(id))
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        Ok(self.nodes[self.id(v)?].children.len())
    }

    pub fn child(&self, v: usize, q: usize) -> Result<usize> {
        let id = self.id(v)?;
        q.checked_sub(1)
            .and_then(|k| self.nodes[id].children.get(k))
            .map(|&c| self.pos(c))
            .ok_or_else(|| Error::InvalidArgument("child rank".into()))
    }

    pub fn child_rank(&self, v: usize) -> Result<Option<usize>> {
        let id = self.id(v)?;
        Ok(self.nodes[id].parent.map(|p| {
            self.nodes[p]
                .children
                .iter()
                .position(|&c| c == id)
                .unwrap()
                + 1
        }))
    }

    fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&x| self.nodes[x].children.is_empty())
            .collect()
    }

    pub fn leaf_rank(&self, v: usize) -> Result<usize> {
        let id = self.id(v)?;
        Ok(self.leaf_ids.iter().filter(|&&x| x <= id).count())
    }

    pub fn leaf_select(&self, q: usize) -> Result<usize> {
        q.checked_sub(1)
            .and_then(|k| self.leaf_ids.get(k).copied())
            .map(|id| self.pos(id))
            .ok_or_else(|| Error::InvalidArgument("leaf_select rank".into()))
    }

    pub fn lmost_leaf(&self, v: usize) -> Result<usize> {
        let id = self.id(v)?;
        let r = self.subtree_ids(id);
        Ok(self.pos(
            r.into_iter()
                .find(|&x| self.nodes[x].children.is_empty())
                .unwrap(),
        ))
    }

    pub fn rmost_leaf(&self, v: usize) -> Result<usize> {
        let id = self.id(v)?;
        let r = self.subtree_ids(id);
        Ok(self.pos(
            r.rev()
                .find(|&x| self.nodes[x].children.is_empty())
                .unwrap(),
        ))
    }

    /// Inorder numbers assigned by a depth-first traversal: each node with
    /// `q` children receives `q - 1` of them, one between consecutive
    /// children. Returns `(inorder, node id)` pairs in increasing order.
    fn inorders(&self) -> Vec<usize> {
        fn walk(t: &NaiveTree, id: usize, out: &mut Vec<usize>) {
            let ch = &t.nodes[id].children;
            for (k, &c) in ch.iter().enumerate() {
                walk(t, c, out);
                if k + 1 < ch.len() {
                    out.push(id);
                }
            }
        }
        let mut out = Vec::new();
        for id in 0..self.nodes.len() {
            if self.nodes[id].parent.is_none() {
                walk(self, id, &mut out);
            }
        }
        out
    }

    pub fn in_rank(&self, v: usize) -> Result<Option<usize>> {
        let id = self.id(v)?;
        Ok(self.inorder.iter().position(|&x| x == id).map(|k| k + 1))
    }

    pub fn in_select(&self, q: usize) -> Result<usize> {
        q.checked_sub(1)
            .and_then(|k| self.inorder.get(k).copied())
            .map(|id| self.pos(id))
            .ok_or_else(|| Error::InvalidArgument("in_select rank".into()))
    }
}

/// A uniformly random Dyck word with `pairs` pairs, via the cycle lemma:
/// a random arrangement of `pairs` opens and `pairs + 1` closes has exactly
/// one rotation whose proper prefixes never go negative; dropping its final
/// close yields the word.
fn random_dyck(pairs: usize, rng: &mut StdRng) -> Vec<bool> {
    let mut steps: Vec<bool> = std::iter::repeat_n(true, pairs)
        .chain(std::iter::repeat_n(false, pairs + 1))
        .collect();
    steps.shuffle(rng);
    let (mut e, mut min, mut at) = (0i64, 0i64, 0usize);
    for (k, &b) in steps.iter().enumerate() {
        e += if b { 1 } else { -1 };
        if e < min {
            min = e;
            at = k;
        }
    }
    steps.rotate_left(at + 1);
    steps.pop();
    steps
}

/// Uniformly random single-rooted tree with `n_nodes` nodes.
pub fn gen_balanced(n_nodes: usize, seed: u64) -> ParenBitVector {
    assert!(n_nodes >= 1, "a tree has at least one node");
    let mut rng = StdRng::seed_from_u64(seed);
    let inner = random_dyck(n_nodes - 1, &mut rng);
    ParenBitVector::from_bits(
        std::iter::once(true)
            .chain(inner)
            .chain(std::iter::once(false)),
    )
}

/// Uniformly random forest with `n_nodes` nodes.
pub fn gen_forest(n_nodes: usize, seed: u64) -> ParenBitVector {
    let mut rng = StdRng::seed_from_u64(seed);
    ParenBitVector::from_bits(random_dyck(n_nodes, &mut rng))
}

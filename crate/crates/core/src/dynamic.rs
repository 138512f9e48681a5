//! Dynamic range min-max tree.
//!
//! The sequence is cut into segments of `L..=2L` bits held in the leaves of
//! a height-balanced binary tree. Every node caches the size, total excess,
//! minimum and maximum prefix excess (relative to the node start), the
//! number of minima, the popcount, the internal `10` and `01` pair counts
//! and its boundary bits. Edits split the tree around the touched leaf and
//! join it back, so insertion, deletion, attach and detach all cost
//! `O(log n)` node visits plus `O(L)` work in the touched leaves.

use crate::bits::BitBuf;
use crate::error::{check_index, Error, Result};
use crate::paren::{ParenBitVector, WORD_BITS};
use crate::primitives::{Pattern, Primitives, RangeSummary};
use crate::scan;
use crate::seqtree::{self, AuditFailure, Bounds, Kind, Node, Segment, Summary, Tree};

pub const DEFAULT_SEGMENT_BITS: usize = 1024;

/// Cached subtree summary. Excess values are relative to the subtree start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DynSummary {
    pub size: usize,
    pub e: i64,
    pub m: i64,
    pub max: i64,
    pub n: usize,
    pub ones: usize,
    pub p1: usize,
    pub p2: usize,
    pub first_bit: bool,
    pub last_bit: bool,
}

impl Summary for DynSummary {
    fn combine(&self, r: &Self) -> Self {
        let l = self;
        let rm = l.e + r.m;
        let (m, n) = match l.m.cmp(&rm) {
            std::cmp::Ordering::Less => (l.m, l.n),
            std::cmp::Ordering::Greater => (rm, r.n),
            std::cmp::Ordering::Equal => (l.m, l.n + r.n),
        };
        let seam = |pat: Pattern| pat.matches(l.last_bit, r.first_bit) as usize;
        DynSummary {
            size: l.size + r.size,
            e: l.e + r.e,
            m,
            max: l.max.max(l.e + r.max),
            n,
            ones: l.ones + r.ones,
            p1: l.p1 + r.p1 + seam(Pattern::OneZero),
            p2: l.p2 + r.p2 + seam(Pattern::ZeroOne),
            first_bit: l.first_bit,
            last_bit: r.last_bit,
        }
    }

    fn units(&self) -> usize {
        self.size
    }
}

#[derive(Debug, Clone)]
pub(crate) struct BitSeg(BitBuf);

impl Segment for BitSeg {
    type Summary = DynSummary;
    type Ctx = ();

    fn summarize(&self, _: &()) -> DynSummary {
        let (w, len) = (self.0.words(), self.0.len());
        debug_assert!(len > 0);
        let s = scan::stats(w, 0, len);
        DynSummary {
            size: len,
            e: s.total as i64,
            m: s.min_prefix as i64,
            max: s.max_prefix as i64,
            n: s.min_count as usize,
            ones: s.ones as usize,
            p1: scan::count_pattern(w, 0, len - 1, Pattern::OneZero),
            p2: scan::count_pattern(w, 0, len - 1, Pattern::ZeroOne),
            first_bit: self.0.get(0),
            last_bit: self.0.get(len - 1),
        }
    }

    fn weight(&self) -> usize {
        self.0.len()
    }

    fn split_units(&mut self, at: usize, _: &()) -> Self {
        BitSeg(self.0.split_off(at))
    }

    fn split_weight(&mut self, target: usize, _: &()) -> Self {
        BitSeg(self.0.split_off(target))
    }

    fn append(&mut self, other: Self, _: &()) {
        self.0.append(&other.0);
    }
}

type DNode = Node<BitSeg>;

/// A parentheses sequence supporting the primitive contract together with
/// node insertion, deletion, attach and detach.
#[derive(Debug, Clone)]
pub struct DynamicRmm {
    root: Tree<BitSeg>,
    segment_bits: usize,
}

impl Default for DynamicRmm {
    fn default() -> Self {
        Self::new()
    }
}

impl DynamicRmm {
    /// Empty sequence with the default segment size.
    pub fn new() -> Self {
        Self::with_segment_bits(DEFAULT_SEGMENT_BITS).unwrap()
    }

    /// Empty sequence with leaves of `l..=2l` bits; `l` must be at least 64.
    pub fn with_segment_bits(l: usize) -> Result<Self> {
        if l < WORD_BITS {
            return Err(Error::Contract(format!(
                "segment size {l} below {WORD_BITS}"
            )));
        }
        Ok(Self {
            root: None,
            segment_bits: l,
        })
    }

    pub fn from_bits(p: &ParenBitVector) -> Self {
        Self::from_bits_with(p, DEFAULT_SEGMENT_BITS).unwrap()
    }

    pub fn from_bits_with(p: &ParenBitVector, l: usize) -> Result<Self> {
        let mut d = Self::with_segment_bits(l)?;
        d.root = d.build_tree(p.words(), p.len());
        Ok(d)
    }

    pub fn from_parens(text: &str) -> Result<Self> {
        Ok(Self::from_bits(&ParenBitVector::parse(text)?))
    }

    fn build_tree(&self, words: &[u64], len: usize) -> Tree<BitSeg> {
        if len == 0 {
            return None;
        }
        // near 1.5 L per leaf, leaving room on both sides
        let pieces = (len / (self.segment_bits * 3 / 2)).max(1);
        let segs = (0..pieces)
            .map(|k| {
                let (lo, hi) = (k * len / pieces, (k + 1) * len / pieces);
                let mut b = BitBuf::from_range(words, lo, hi);
                b.reserve_bits(2 * self.segment_bits);
                BitSeg(b)
            })
            .collect();
        seqtree::build(segs, &())
    }

    fn bounds(&self) -> Bounds {
        Bounds {
            lo: self.segment_bits,
            hi: 2 * self.segment_bits,
        }
    }

    pub fn segment_bits(&self) -> usize {
        self.segment_bits
    }

    pub fn to_bits(&self) -> ParenBitVector {
        let mut b = BitBuf::with_capacity(self.len());
        seqtree::for_each_leaf(&self.root, &mut |s: &BitSeg| b.append(&s.0));
        let len = b.len();
        ParenBitVector::from_words(b.words().to_vec(), len).expect("consistent length")
    }

    pub fn to_paren_string(&self) -> String {
        self.to_bits().to_paren_string()
    }

    /// Summary of the whole sequence, if non-empty.
    pub fn summary(&self) -> Option<DynSummary> {
        self.root.as_ref().map(|n| n.sum)
    }

    pub fn is_balanced(&self) -> bool {
        self.summary().is_none_or(|s| s.e == 0 && s.m >= 0)
    }

    /// Height of the balanced tree (0 when empty, 1 for a single leaf).
    pub fn height(&self) -> usize {
        self.root.as_ref().map_or(0, |n| n.height as usize)
    }

    pub fn leaf_count(&self) -> usize {
        seqtree::leaf_count(&self.root)
    }

    /// Allocated heap bytes: node records plus leaf buffers.
    pub fn heap_bytes(&self) -> usize {
        let mut buf = 0;
        seqtree::for_each_leaf(&self.root, &mut |s: &BitSeg| buf += s.0.capacity_bits() / 8);
        buf + seqtree::node_count(&self.root) * std::mem::size_of::<DNode>()
    }

    /// Recomputes every cached field from the leaves and checks leaf sizes
    /// and balance; reports the first offending node in preorder.
    pub fn audit(&self) -> std::result::Result<(), AuditFailure> {
        seqtree::audit(&self.root, self.bounds(), &())
    }

    fn insert_bit(&mut self, pos: usize, bit: bool) {
        let bounds = self.bounds();
        self.root = match self.root.take() {
            None => {
                let mut b = BitBuf::with_capacity(2 * self.segment_bits);
                b.push(bit);
                Some(seqtree::leaf(BitSeg(b), &()))
            }
            Some(n) => {
                let (l, mut seg, off, r) = seqtree::split_around(n, pos);
                seg.0.insert_bits(off, bit as u64, 1);
                seqtree::reassemble(l, seg, r, bounds, &())
            }
        };
    }

    fn remove_bit(&mut self, pos: usize) {
        let bounds = self.bounds();
        let n = self.root.take().expect("non-empty");
        let (l, mut seg, off, r) = seqtree::split_around(n, pos);
        seg.0.remove_bits(off, 1);
        self.root = seqtree::reassemble(l, seg, r, bounds, &());
    }

    /// Inserts `(` before position `i` and `)` before position `j`, both
    /// referring to the sequence before the edit. Afterwards the new node
    /// opens at `i` and closes at `j + 1`. The enclosed segment `[i, j)` must
    /// itself be balanced so that the new parentheses match.
    pub fn insert_pair(&mut self, i: usize, j: usize) -> Result<()> {
        let n = self.len();
        if j > n {
            return Err(Error::OutOfRange {
                index: j,
                len: n + 1,
            });
        }
        if i > j {
            return Err(Error::InvalidArgument(format!("open {i} after close {j}")));
        }
        if i < j {
            let s = self.range_summary(i, j - 1);
            let rel = self.excess_before(i);
            if self.excess_before(j) != rel || s.min < rel {
                return Err(Error::Unbalanced(format!(
                    "segment [{i}, {j}) is not balanced, the new pair would not match"
                )));
            }
        }
        self.insert_bit(j, false);
        self.insert_bit(i, true);
        Ok(())
    }

    /// Removes node `v` and its closing parenthesis; its children move up
    /// to its parent.
    pub fn delete_node(&mut self, v: usize) -> Result<()> {
        let c = self.matching_close(v)?;
        self.remove_bit(c);
        self.remove_bit(v);
        Ok(())
    }

    fn matching_close(&self, v: usize) -> Result<usize> {
        if v >= self.len() || !self.bit(v) {
            return Err(Error::InvalidArgument(format!(
                "position {v} is not an opening parenthesis"
            )));
        }
        self.find_first_eq(v, self.excess_at(v) - 1)
            .ok_or_else(|| Error::Unbalanced(format!("node {v} has no closing parenthesis")))
    }

    /// Splices the balanced sequence `s` in so that it starts at position
    /// `p` (`0 <= p <= len`). Consumes `s`.
    pub fn attach(&mut self, p: usize, s: DynamicRmm) -> Result<()> {
        let n = self.len();
        if p > n {
            return Err(Error::OutOfRange {
                index: p,
                len: n + 1,
            });
        }
        if !s.is_balanced() {
            return Err(Error::Unbalanced(
                "attached sequence is not balanced".into(),
            ));
        }
        let Some(sroot) = s.root else {
            return Ok(());
        };
        let (a, b) = seqtree::split(self.root.take(), p, &());
        let mid = self.seam(a, Some(sroot));
        self.root = self.seam(mid, b);
        Ok(())
    }

    /// Removes the subtree rooted at `v` and returns it as a new structure
    /// with the same segment size.
    pub fn detach(&mut self, v: usize) -> Result<DynamicRmm> {
        let c = self.matching_close(v)?;
        let (a, rest) = seqtree::split(self.root.take(), v, &());
        let (sub, b) = seqtree::split(rest, c - v + 1, &());
        self.root = self.seam(a, b);
        let mut out = DynamicRmm {
            root: None,
            segment_bits: self.segment_bits,
        };
        out.root = out.seam(sub, None);
        Ok(out)
    }

    /// Joins two trees whose facing leaves may be under-full, repairing
    /// leaf sizes at the seam and at both outer ends.
    fn seam(&self, a: Tree<BitSeg>, b: Tree<BitSeg>) -> Tree<BitSeg> {
        let bounds = self.bounds();
        let t = match (a, b) {
            (None, t) | (t, None) => t,
            (Some(a), Some(b)) => {
                let (a, mut x) = seqtree::pop_last(a);
                let (y, b) = seqtree::pop_first(b);
                x.append(y, &());
                seqtree::reassemble(a, x, b, bounds, &())
            }
        };
        let t = {
            let n = t?;
            let (f, rest) = seqtree::pop_first(n);
            seqtree::reassemble(None, f, rest, bounds, &())
        };
        t.map(|n| {
            let (rest, l) = seqtree::pop_last(n);
            seqtree::reassemble(rest, l, None, bounds, &()).expect("non-empty")
        })
    }

    fn root(&self) -> &DNode {
        self.root.as_deref().expect("non-empty sequence")
    }
}

// ---- descents ----

/// Leaf holding `i`, with the leaf start and the excess before it.
fn locate(mut n: &DNode, mut i: usize) -> (&BitBuf, usize, i64) {
    let (mut start, mut base) = (0, 0);
    loop {
        match &n.kind {
            Kind::Leaf(s) => return (&s.0, start, base),
            Kind::Inner(a, b) => {
                if i < a.sum.size {
                    n = a;
                } else {
                    i -= a.sum.size;
                    start += a.sum.size;
                    base += a.sum.e;
                    n = b;
                }
            }
        }
    }
}

fn first_eq(n: &DNode, start: usize, base: i64, from: usize, target: i64) -> Option<usize> {
    let end = start + n.sum.size;
    if end <= from {
        return None;
    }
    if from <= start && (target < base + n.sum.m || target > base + n.sum.max) {
        return None;
    }
    match &n.kind {
        Kind::Leaf(s) => {
            let lo = from.saturating_sub(start);
            let w = s.0.words();
            let cur = base + scan::excess(w, 0, lo);
            scan::find_first(w, lo, s.0.len(), cur, target).map(|p| start + p)
        }
        Kind::Inner(a, b) => first_eq(a, start, base, from, target)
            .or_else(|| first_eq(b, start + a.sum.size, base + a.sum.e, from, target)),
    }
}

fn last_eq(n: &DNode, start: usize, base: i64, to: usize, target: i64) -> Option<usize> {
    if start > to {
        return None;
    }
    let end = start + n.sum.size;
    if end - 1 <= to && (target < base + n.sum.m || target > base + n.sum.max) {
        return None;
    }
    match &n.kind {
        Kind::Leaf(s) => {
            let hi = (to - start + 1).min(s.0.len());
            scan::find_last(s.0.words(), 0, hi, base, target).map(|p| start + p)
        }
        Kind::Inner(a, b) => last_eq(b, start + a.sum.size, base + a.sum.e, to, target)
            .or_else(|| last_eq(a, start, base, to, target)),
    }
}

fn summary_over(
    n: &DNode,
    start: usize,
    base: i64,
    i: usize,
    j: usize,
    acc: &mut Option<RangeSummary>,
) {
    let end = start + n.sum.size;
    if end <= i || start > j {
        return;
    }
    let push = |acc: &mut Option<RangeSummary>, s: RangeSummary| {
        *acc = Some(match acc.take() {
            None => s,
            Some(a) => a.merge(s),
        });
    };
    if i <= start && end - 1 <= j {
        push(
            acc,
            RangeSummary {
                min: base + n.sum.m,
                min_count: n.sum.n,
                max: base + n.sum.max,
            },
        );
        return;
    }
    match &n.kind {
        Kind::Leaf(s) => {
            let w = s.0.words();
            let lo = i.max(start) - start;
            let hi = j.min(end - 1) - start + 1;
            let cur = base + scan::excess(w, 0, lo);
            let st = scan::stats(w, lo, hi);
            push(
                acc,
                RangeSummary {
                    min: cur + st.min_prefix as i64,
                    min_count: st.min_count as usize,
                    max: cur + st.max_prefix as i64,
                },
            );
        }
        Kind::Inner(a, b) => {
            summary_over(a, start, base, i, j, acc);
            summary_over(b, start + a.sum.size, base + a.sum.e, i, j, acc);
        }
    }
}

/// Finds the `need`-th occurrence of `min` in `[i, j]`, decrementing `need`
/// by the occurrences skipped.
fn nth_min_in(
    n: &DNode,
    start: usize,
    base: i64,
    i: usize,
    j: usize,
    min: i64,
    need: &mut usize,
) -> Option<usize> {
    let end = start + n.sum.size;
    if end <= i || start > j {
        return None;
    }
    let full = i <= start && end - 1 <= j;
    if full {
        if base + n.sum.m != min {
            return None;
        }
        if n.sum.n < *need {
            *need -= n.sum.n;
            return None;
        }
    }
    match &n.kind {
        Kind::Leaf(s) => {
            let w = s.0.words();
            let lo = i.max(start) - start;
            let hi = j.min(end - 1) - start + 1;
            let cur = base + scan::excess(w, 0, lo);
            match scan::nth_min(w, lo, hi, cur, min, *need) {
                Ok(p) => Some(start + p),
                Err(seen) => {
                    *need -= seen;
                    None
                }
            }
        }
        Kind::Inner(a, b) => nth_min_in(a, start, base, i, j, min, need)
            .or_else(|| nth_min_in(b, start + a.sum.size, base + a.sum.e, i, j, min, need)),
    }
}

impl Primitives for DynamicRmm {
    fn len(&self) -> usize {
        self.root.as_ref().map_or(0, |n| n.sum.size)
    }

    fn bit(&self, i: usize) -> bool {
        let (b, start, _) = locate(self.root(), i);
        b.get(i - start)
    }

    fn excess_at(&self, i: usize) -> i64 {
        let (b, start, base) = locate(self.root(), i);
        base + scan::excess(b.words(), 0, i - start + 1)
    }

    fn find_first_eq(&self, from: usize, target: i64) -> Option<usize> {
        first_eq(self.root.as_deref()?, 0, 0, from, target)
    }

    fn find_last_eq(&self, to: usize, target: i64) -> Option<usize> {
        last_eq(self.root.as_deref()?, 0, 0, to, target)
    }

    fn range_summary(&self, i: usize, j: usize) -> RangeSummary {
        let mut acc = None;
        summary_over(self.root(), 0, 0, i, j, &mut acc);
        acc.expect("non-empty range")
    }

    fn nth_min(&self, i: usize, j: usize, min: i64, q: usize) -> usize {
        let mut need = q;
        nth_min_in(self.root(), 0, 0, i, j, min, &mut need).expect("enough minima in range")
    }

    fn ones_through(&self, i: usize) -> usize {
        let mut n = self.root();
        let (mut rem, mut acc) = (i, 0);
        loop {
            match &n.kind {
                Kind::Leaf(s) => return acc + scan::ones(s.0.words(), 0, rem + 1),
                Kind::Inner(a, b) => {
                    if rem < a.sum.size {
                        n = a;
                    } else {
                        rem -= a.sum.size;
                        acc += a.sum.ones;
                        n = b;
                    }
                }
            }
        }
    }

    fn select_bit(&self, bit: bool, q: usize) -> Option<usize> {
        let count = |s: &DynSummary| if bit { s.ones } else { s.size - s.ones };
        let mut n = self.root.as_deref()?;
        if q == 0 || q > count(&n.sum) {
            return None;
        }
        let (mut need, mut start) = (q, 0);
        loop {
            match &n.kind {
                Kind::Leaf(s) => {
                    let p = scan::select(s.0.words(), 0, s.0.len(), bit, need).ok()?;
                    return Some(start + p);
                }
                Kind::Inner(a, b) => {
                    let c = count(&a.sum);
                    if need <= c {
                        n = a;
                    } else {
                        need -= c;
                        start += a.sum.size;
                        n = b;
                    }
                }
            }
        }
    }

    fn pattern_through(&self, pat: Pattern, i: usize) -> usize {
        // pairs (x, x+1) with x + 1 <= i, then the pair starting at i
        let internal = |s: &DynSummary| match pat {
            Pattern::OneZero => s.p1,
            Pattern::ZeroOne => s.p2,
        };
        let mut n = self.root();
        let (mut rem, mut acc) = (i, 0);
        loop {
            match &n.kind {
                Kind::Leaf(s) => {
                    acc += scan::count_pattern(s.0.words(), 0, rem, pat);
                    break;
                }
                Kind::Inner(a, b) => {
                    if rem < a.sum.size {
                        n = a;
                    } else {
                        rem -= a.sum.size;
                        acc += internal(&a.sum)
                            + pat.matches(a.sum.last_bit, b.sum.first_bit) as usize;
                        n = b;
                    }
                }
            }
        }
        let next = i + 1 < self.len() && self.bit(i + 1);
        acc + pat.matches(self.bit(i), next) as usize
    }

    fn select_pattern(&self, pat: Pattern, q: usize) -> Option<usize> {
        let internal = |s: &DynSummary| match pat {
            Pattern::OneZero => s.p1,
            Pattern::ZeroOne => s.p2,
        };
        let mut n = self.root.as_deref()?;
        if q == 0 {
            return None;
        }
        let total = internal(&n.sum);
        if q > total {
            let tail = pat.matches(n.sum.last_bit, false);
            return (q == total + 1 && tail).then(|| n.sum.size - 1);
        }
        let (mut need, mut start) = (q, 0);
        loop {
            match &n.kind {
                Kind::Leaf(s) => {
                    let b = &s.0;
                    let p = scan::select_pattern(b.words(), 0, b.len() - 1, pat, need).ok()?;
                    return Some(start + p);
                }
                Kind::Inner(a, b) => {
                    let c = internal(&a.sum);
                    if need <= c {
                        n = a;
                        continue;
                    }
                    let seam = pat.matches(a.sum.last_bit, b.sum.first_bit) as usize;
                    if seam == 1 && need == c + 1 {
                        return Some(start + a.sum.size - 1);
                    }
                    need -= c + seam;
                    start += a.sum.size;
                    n = b;
                }
            }
        }
    }
}

impl DynamicRmm {
    /// Checked bit access, mirroring [`ParenBitVector::bit_at`].
    pub fn bit_at(&self, i: usize) -> Result<bool> {
        check_index(i, self.len())?;
        Ok(self.bit(i))
    }
}

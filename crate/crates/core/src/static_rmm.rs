//! Immutable range min-max tree.
//!
//! The sequence is cut into chunks of `chunk_bits` bits; a complete
//! `arity`-ary tree is laid over the chunks and stored level by level in heap
//! order (root first, chunks last). Each node keeps, for the bits it covers:
//!
//! * `e`   the global excess at its right boundary,
//! * `m`/`M` the global minimum/maximum excess,
//! * `n`   how many positions attain the minimum,
//! * popcount and the `10`/`01` pattern counts (patterns are attributed to
//!   the position of their first bit, looking past the node boundary; the
//!   bit after the end of the sequence reads as `0`).
//!
//! Searches scan the starting chunk through byte tables, climb through
//! right (or left) siblings testing `m <= target <= M`, and descend into the
//! first node that contains the target.

use crate::error::{Error, Result};
use crate::paren::ParenBitVector;
use crate::primitives::{Pattern, Primitives, RangeSummary};
use crate::scan;

/// Shape parameters of a [`StaticRmm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StaticRmmConfig {
    /// Bits per chunk; a power of two, at least 64.
    pub chunk_bits: usize,
    /// Tree arity; a power of two, at least 2.
    pub arity: usize,
}

impl Default for StaticRmmConfig {
    fn default() -> Self {
        Self {
            chunk_bits: 512,
            arity: 32,
        }
    }
}

impl StaticRmmConfig {
    pub fn new(chunk_bits: usize, arity: usize) -> Result<Self> {
        let cfg = Self { chunk_bits, arity };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.chunk_bits < 64 || !self.chunk_bits.is_power_of_two() {
            return Err(Error::Contract(format!(
                "chunk_bits must be a power of two >= 64, got {}",
                self.chunk_bits
            )));
        }
        if self.arity < 2 || !self.arity.is_power_of_two() {
            return Err(Error::Contract(format!(
                "arity must be a power of two >= 2, got {}",
                self.arity
            )));
        }
        Ok(())
    }
}

/// A summary array stored at 32 bits when values fit, 64 otherwise.
#[derive(Debug, Clone)]
enum Column {
    Narrow(Box<[i32]>),
    Wide(Box<[i64]>),
}

impl Column {
    fn new(values: Vec<i64>, narrow: bool) -> Self {
        if narrow {
            Column::Narrow(values.into_iter().map(|v| v as i32).collect())
        } else {
            Column::Wide(values.into_boxed_slice())
        }
    }

    #[inline]
    fn get(&self, i: usize) -> i64 {
        match self {
            Column::Narrow(v) => v[i] as i64,
            Column::Wide(v) => v[i],
        }
    }

    fn heap_bytes(&self) -> usize {
        match self {
            Column::Narrow(v) => v.len() * 4,
            Column::Wide(v) => v.len() * 8,
        }
    }
}

/// Field values of one tree node, used during construction.
#[derive(Debug, Clone, Copy)]
struct NodeRecord {
    e: i64,
    min: i64,
    max: i64,
    min_count: i64,
    ones: i64,
    p10: i64,
    p01: i64,
}

impl NodeRecord {
    fn absorb(&mut self, next: &NodeRecord) {
        self.e = next.e;
        match next.min.cmp(&self.min) {
            std::cmp::Ordering::Less => {
                self.min = next.min;
                self.min_count = next.min_count;
            }
            std::cmp::Ordering::Equal => self.min_count += next.min_count,
            std::cmp::Ordering::Greater => {}
        }
        self.max = self.max.max(next.max);
        self.ones += next.ones;
        self.p10 += next.p10;
        self.p01 += next.p01;
    }
}

/// Node fields of one tree node, as stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeFields {
    pub e: i64,
    pub min: i64,
    pub max: i64,
    pub min_count: i64,
    pub ones: i64,
    pub p10: i64,
    pub p01: i64,
}

/// Immutable range min-max tree over a parentheses sequence.
#[derive(Debug, Clone)]
pub struct StaticRmm {
    bits: ParenBitVector,
    config: StaticRmmConfig,
    num_chunks: usize,
    /// Nodes per level; level 0 holds the chunks, the last level the root.
    level_len: Vec<usize>,
    /// Heap offset of each level (root level at offset 0).
    level_offset: Vec<usize>,
    e: Column,
    min: Column,
    max: Column,
    min_count: Column,
    ones: Column,
    p10: Column,
    p01: Column,
}

impl StaticRmm {
    /// Builds the tree in one pass over the chunks plus one pass per level.
    pub fn build(bits: ParenBitVector, config: StaticRmmConfig) -> Result<Self> {
        config.validate()?;
        if bits.is_empty() {
            return Err(Error::Contract(
                "cannot build over an empty sequence".into(),
            ));
        }
        let s = config.chunk_bits;
        let k = config.arity;
        let len = bits.len();
        let words = bits.words();
        let num_chunks = len.div_ceil(s);

        let mut levels: Vec<Vec<NodeRecord>> = Vec::new();
        let mut leaves = Vec::with_capacity(num_chunks);
        let mut base = 0i64;
        for c in 0..num_chunks {
            let (lo, hi) = (c * s, ((c + 1) * s).min(len));
            let st = scan::stats(words, lo, hi);
            leaves.push(NodeRecord {
                e: base + st.total as i64,
                min: base + st.min_prefix as i64,
                max: base + st.max_prefix as i64,
                min_count: st.min_count as i64,
                ones: st.ones as i64,
                p10: scan::count_pattern(words, lo, hi, Pattern::OneZero) as i64,
                p01: scan::count_pattern(words, lo, hi, Pattern::ZeroOne) as i64,
            });
            base += st.total as i64;
        }
        levels.push(leaves);
        while levels.last().unwrap().len() > 1 {
            let below = levels.last().unwrap();
            let parents = below
                .chunks(k)
                .map(|group| {
                    let mut acc = group[0];
                    for child in &group[1..] {
                        acc.absorb(child);
                    }
                    acc
                })
                .collect();
            levels.push(parents);
        }

        let level_len: Vec<usize> = levels.iter().map(Vec::len).collect();
        let mut level_offset = vec![0; levels.len()];
        let mut off = 0;
        for l in (0..levels.len()).rev() {
            level_offset[l] = off;
            off += level_len[l];
        }
        let heap: Vec<NodeRecord> = levels.into_iter().rev().flatten().collect();
        let narrow = len < (1usize << 31);
        let column = |f: fn(&NodeRecord) -> i64| Column::new(heap.iter().map(f).collect(), narrow);
        Ok(Self {
            e: column(|r| r.e),
            min: column(|r| r.min),
            max: column(|r| r.max),
            min_count: column(|r| r.min_count),
            ones: column(|r| r.ones),
            p10: column(|r| r.p10),
            p01: column(|r| r.p01),
            bits,
            config,
            num_chunks,
            level_len,
            level_offset,
        })
    }

    pub fn from_parens(text: &str) -> Result<Self> {
        Self::build(ParenBitVector::parse(text)?, StaticRmmConfig::default())
    }

    pub fn bits(&self) -> &ParenBitVector {
        &self.bits
    }

    pub fn config(&self) -> StaticRmmConfig {
        self.config
    }

    pub fn into_bits(self) -> ParenBitVector {
        self.bits
    }

    pub fn height(&self) -> usize {
        self.level_len.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.level_len.iter().sum()
    }

    #[inline]
    fn top(&self) -> usize {
        self.level_len.len() - 1
    }

    #[inline]
    fn idx(&self, level: usize, x: usize) -> usize {
        self.level_offset[level] + x
    }

    /// Fields of node `x` at `level` (level 0 = chunks).
    pub fn node(&self, level: usize, x: usize) -> NodeFields {
        let h = self.idx(level, x);
        NodeFields {
            e: self.e.get(h),
            min: self.min.get(h),
            max: self.max.get(h),
            min_count: self.min_count.get(h),
            ones: self.ones.get(h),
            p10: self.p10.get(h),
            p01: self.p01.get(h),
        }
    }

    /// Fields of the root.
    pub fn root(&self) -> NodeFields {
        self.node(self.top(), 0)
    }

    /// Bit range `[lo, hi)` covered by node `x` at `level`.
    fn span(&self, level: usize, x: usize) -> (usize, usize) {
        let width = self.config.arity.pow(level as u32);
        let c0 = x * width;
        let c1 = ((x + 1) * width).min(self.num_chunks);
        let len = self.bits.len();
        (
            c0 * self.config.chunk_bits,
            (c1 * self.config.chunk_bits).min(len),
        )
    }

    #[inline]
    fn chunk_range(&self, c: usize) -> (usize, usize) {
        let s = self.config.chunk_bits;
        (c * s, ((c + 1) * s).min(self.bits.len()))
    }

    /// Excess just before chunk `c`.
    #[inline]
    fn chunk_base(&self, c: usize) -> i64 {
        if c == 0 {
            0
        } else {
            self.e.get(self.idx(0, c - 1))
        }
    }

    #[inline]
    fn contains(&self, h: usize, t: i64) -> bool {
        self.min.get(h) <= t && t <= self.max.get(h)
    }

    #[inline]
    fn children(&self, level: usize, x: usize) -> std::ops::Range<usize> {
        let k = self.config.arity;
        x * k..((x + 1) * k).min(self.level_len[level - 1])
    }

    fn descend_first(&self, mut level: usize, mut x: usize, t: i64) -> usize {
        while level > 0 {
            x = self
                .children(level, x)
                .find(|&y| self.contains(self.idx(level - 1, y), t))
                .expect("child containing target");
            level -= 1;
        }
        let (lo, hi) = self.chunk_range(x);
        scan::find_first(self.bits.words(), lo, hi, self.chunk_base(x), t)
            .expect("chunk containing target")
    }

    fn descend_last(&self, mut level: usize, mut x: usize, t: i64) -> usize {
        while level > 0 {
            x = self
                .children(level, x)
                .rev()
                .find(|&y| self.contains(self.idx(level - 1, y), t))
                .expect("child containing target");
            level -= 1;
        }
        let (lo, hi) = self.chunk_range(x);
        scan::find_last(self.bits.words(), lo, hi, self.chunk_base(x), t)
            .expect("chunk containing target")
    }

    /// Nodes exactly covering chunks `a..=b`, left to right.
    fn cover(&self, a: usize, b: usize) -> Vec<(usize, usize)> {
        let k = self.config.arity;
        let mut left = Vec::new();
        let mut right = Vec::new();
        let (mut lo, mut hi, mut level) = (a, b + 1, 0usize);
        // [lo, hi) at the current level
        while lo < hi {
            if level == self.top() {
                left.extend((lo..hi).map(|x| (level, x)));
                break;
            }
            while lo < hi && lo % k != 0 {
                left.push((level, lo));
                lo += 1;
            }
            while lo < hi && hi % k != 0 && hi != self.level_len[level] {
                hi -= 1;
                right.push((level, hi));
            }
            if lo >= hi {
                break;
            }
            lo /= k;
            hi = hi.div_ceil(k);
            level += 1;
        }
        left.extend(right.into_iter().rev());
        left
    }

    fn summary_of(&self, level: usize, x: usize) -> RangeSummary {
        let h = self.idx(level, x);
        RangeSummary {
            min: self.min.get(h),
            min_count: self.min_count.get(h) as usize,
            max: self.max.get(h),
        }
    }

    fn partial_summary(&self, lo: usize, hi: usize) -> RangeSummary {
        let start = self.excess_before(lo);
        let st = scan::stats(self.bits.words(), lo, hi);
        RangeSummary {
            min: start + st.min_prefix as i64,
            min_count: st.min_count as usize,
            max: start + st.max_prefix as i64,
        }
    }

    fn descend_nth_min(&self, mut level: usize, mut x: usize, min: i64, mut q: usize) -> usize {
        while level > 0 {
            let mut next = None;
            for y in self.children(level, x) {
                let h = self.idx(level - 1, y);
                if self.min.get(h) == min {
                    let n = self.min_count.get(h) as usize;
                    if n >= q {
                        next = Some(y);
                        break;
                    }
                    q -= n;
                }
            }
            x = next.expect("child holding the q-th minimum");
            level -= 1;
        }
        let (lo, hi) = self.chunk_range(x);
        scan::nth_min(self.bits.words(), lo, hi, self.chunk_base(x), min, q)
            .expect("chunk holding the q-th minimum")
    }

    fn pattern_column(&self, pat: Pattern) -> &Column {
        match pat {
            Pattern::OneZero => &self.p10,
            Pattern::ZeroOne => &self.p01,
        }
    }

    /// Recomputes every node from the bits and compares with the stored
    /// arrays. Returns the first mismatching `(level, index)`.
    pub fn audit(&self) -> std::result::Result<(), (usize, usize)> {
        let fresh = StaticRmm::build(self.bits.clone(), self.config).expect("valid config");
        for level in 0..self.level_len.len() {
            for x in 0..self.level_len[level] {
                if fresh.node(level, x) != self.node(level, x) {
                    return Err((level, x));
                }
            }
        }
        Ok(())
    }

    /// Bytes held by the bit vector and the summary arrays.
    pub fn heap_bytes(&self) -> usize {
        self.bits.words().len() * 8
            + [
                &self.e,
                &self.min,
                &self.max,
                &self.min_count,
                &self.ones,
                &self.p10,
                &self.p01,
            ]
            .iter()
            .map(|c| c.heap_bytes())
            .sum::<usize>()
            + (self.level_len.len() + self.level_offset.len()) * std::mem::size_of::<usize>()
    }

    /// Resident size in bits, including the fixed struct.
    pub fn size_in_bits(&self) -> usize {
        (self.heap_bytes() + std::mem::size_of::<Self>()) * 8
    }

    /// Total bits per tree node (two parentheses per node).
    pub fn bits_per_node(&self) -> f64 {
        self.size_in_bits() as f64 / (self.bits.len() as f64 / 2.0)
    }
}

impl Primitives for StaticRmm {
    #[inline]
    fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    fn bit(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    fn excess_at(&self, i: usize) -> i64 {
        let c = i / self.config.chunk_bits;
        self.chunk_base(c) + scan::excess(self.bits.words(), c * self.config.chunk_bits, i + 1)
    }

    fn find_first_eq(&self, from: usize, t: i64) -> Option<usize> {
        let k = self.config.arity;
        let c = from / self.config.chunk_bits;
        let (lo, hi) = self.chunk_range(c);
        let words = self.bits.words();
        let start = self.chunk_base(c) + scan::excess(words, lo, from);
        if let Some(p) = scan::find_first(words, from, hi, start, t) {
            return Some(p);
        }
        let (mut level, mut x) = (0, c);
        loop {
            let group_end = ((x / k + 1) * k).min(self.level_len[level]);
            for y in x + 1..group_end {
                if self.contains(self.idx(level, y), t) {
                    return Some(self.descend_first(level, y, t));
                }
            }
            if level == self.top() {
                return None;
            }
            x /= k;
            level += 1;
        }
    }

    fn find_last_eq(&self, to: usize, t: i64) -> Option<usize> {
        let k = self.config.arity;
        let c = to / self.config.chunk_bits;
        let (lo, _) = self.chunk_range(c);
        if let Some(p) = scan::find_last(self.bits.words(), lo, to + 1, self.chunk_base(c), t) {
            return Some(p);
        }
        let (mut level, mut x) = (0, c);
        loop {
            let group_start = x / k * k;
            for y in (group_start..x).rev() {
                if self.contains(self.idx(level, y), t) {
                    return Some(self.descend_last(level, y, t));
                }
            }
            if level == self.top() {
                return None;
            }
            x /= k;
            level += 1;
        }
    }

    fn range_summary(&self, i: usize, j: usize) -> RangeSummary {
        let s = self.config.chunk_bits;
        let (ci, cj) = (i / s, j / s);
        if ci == cj {
            return self.partial_summary(i, j + 1);
        }
        let mut acc = self.partial_summary(i, self.chunk_range(ci).1);
        if ci + 1 < cj {
            for (level, x) in self.cover(ci + 1, cj - 1) {
                acc = acc.merge(self.summary_of(level, x));
            }
        }
        acc.merge(self.partial_summary(cj * s, j + 1))
    }

    fn nth_min(&self, i: usize, j: usize, min: i64, mut q: usize) -> usize {
        let s = self.config.chunk_bits;
        let words = self.bits.words();
        let (ci, cj) = (i / s, j / s);
        let left_hi = if ci == cj {
            j + 1
        } else {
            self.chunk_range(ci).1
        };
        match scan::nth_min(words, i, left_hi, self.excess_before(i), min, q) {
            Ok(p) => return p,
            Err(seen) => q -= seen,
        }
        if ci + 1 < cj {
            for (level, x) in self.cover(ci + 1, cj - 1) {
                let h = self.idx(level, x);
                if self.min.get(h) == min {
                    let n = self.min_count.get(h) as usize;
                    if n >= q {
                        return self.descend_nth_min(level, x, min, q);
                    }
                    q -= n;
                }
            }
        }
        scan::nth_min(words, cj * s, j + 1, self.chunk_base(cj), min, q)
            .expect("q within the range's minimum count")
    }

    #[inline]
    fn ones_through(&self, i: usize) -> usize {
        ((i as i64 + 1 + self.excess_at(i)) / 2) as usize
    }

    fn select_bit(&self, bit: bool, q: usize) -> Option<usize> {
        let count = |level: usize, x: usize| {
            let ones = self.ones.get(self.idx(level, x)) as usize;
            if bit {
                ones
            } else {
                let (lo, hi) = self.span(level, x);
                hi - lo - ones
            }
        };
        let (mut level, mut x) = (self.top(), 0);
        if q == 0 || q > count(level, x) {
            return None;
        }
        let mut q = q;
        while level > 0 {
            let mut next = None;
            for y in self.children(level, x) {
                let c = count(level - 1, y);
                if c >= q {
                    next = Some(y);
                    break;
                }
                q -= c;
            }
            x = next?;
            level -= 1;
        }
        let (lo, hi) = self.chunk_range(x);
        scan::select(self.bits.words(), lo, hi, bit, q).ok()
    }

    fn pattern_through(&self, pat: Pattern, i: usize) -> usize {
        let c = i / self.config.chunk_bits;
        let col = self.pattern_column(pat);
        let mut n = 0;
        if c > 0 {
            for (level, x) in self.cover(0, c - 1) {
                n += col.get(self.idx(level, x)) as usize;
            }
        }
        n + scan::count_pattern(self.bits.words(), self.chunk_range(c).0, i + 1, pat)
    }

    fn select_pattern(&self, pat: Pattern, q: usize) -> Option<usize> {
        let col = self.pattern_column(pat);
        let (mut level, mut x) = (self.top(), 0);
        if q == 0 || q > col.get(self.idx(level, x)) as usize {
            return None;
        }
        let mut q = q;
        while level > 0 {
            let mut next = None;
            for y in self.children(level, x) {
                let c = col.get(self.idx(level - 1, y)) as usize;
                if c >= q {
                    next = Some(y);
                    break;
                }
                q -= c;
            }
            x = next?;
            level -= 1;
        }
        let (lo, hi) = self.chunk_range(x);
        scan::select_pattern(self.bits.words(), lo, hi, pat, q).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const REF: &str = "(()(()()))";

    fn small(text: &str) -> StaticRmm {
        StaticRmm::from_parens(text).unwrap()
    }

    #[test]
    fn build_root_fields() {
        let t = small("()");
        let r = t.root();
        assert_eq!((r.e, r.min, r.max, r.min_count), (0, 0, 1, 1));
        let t = small(REF);
        let r = t.root();
        assert_eq!((r.e, r.min, r.max, r.min_count), (0, 0, 3, 1));
        let t = small("((");
        assert_eq!((t.root().e, t.root().min), (2, 1));
        assert!(matches!(
            StaticRmm::build(ParenBitVector::new(), StaticRmmConfig::default()),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn config_bounds() {
        assert!(StaticRmmConfig::new(32, 4).is_err());
        assert!(StaticRmmConfig::new(96, 4).is_err());
        assert!(StaticRmmConfig::new(64, 1).is_err());
        assert!(StaticRmmConfig::new(64, 3).is_err());
        assert!(StaticRmmConfig::new(64, 2).is_ok());
    }

    #[test]
    fn reference_searches() {
        let t = small(REF);
        assert_eq!(t.fwd_search(0, 0).unwrap(), Some(9));
        assert_eq!(t.fwd_search(3, 0).unwrap(), Some(8));
        assert_eq!(small("()").fwd_search(1, -1).unwrap(), Some(1));
        assert_eq!(small("()").fwd_search(1, 0).unwrap(), None);
        assert_eq!(t.bwd_search(8, 0).unwrap(), Some(3));
        assert_eq!(t.bwd_search(4, 2).unwrap(), Some(3));
        assert_eq!(small("()").bwd_search(1, 0).unwrap(), Some(0));
        assert_eq!(t.excess(4).unwrap(), 3);
        assert_eq!(t.sum(3, 8).unwrap(), 0);
        assert_eq!(t.sum(0, 9).unwrap(), t.root().e);
    }

    #[test]
    fn reference_range_queries() {
        let t = small(REF);
        assert_eq!(t.rmqi(1, 8).unwrap(), (2, 1));
        assert_eq!(t.rmqi_max(0, 9).unwrap(), (4, 3));
        assert_eq!(t.rmqi(5, 5).unwrap(), (5, 2));
        assert_eq!(t.min_count(1, 8).unwrap(), 2);
        assert_eq!(t.min_select(1, 8, 2).unwrap(), 8);
        assert_eq!(t.min_count(4, 4).unwrap(), 1);
        assert!(t.min_select(1, 8, 3).is_err());
        assert!(t.rmqi(3, 2).is_err());
        assert!(t.rmqi(3, 10).is_err());
    }

    #[test]
    fn reference_rank_select() {
        let t = small(REF);
        assert_eq!(t.rank1(4).unwrap(), 4);
        assert_eq!(t.select0(2).unwrap(), 5);
        for q in 1..=5 {
            assert_eq!(t.rank1(t.select1(q).unwrap()).unwrap(), q);
        }
        assert!(t.select1(6).is_err());
        assert!(t.select1(0).is_err());
        assert_eq!(t.rank_p1(4).unwrap(), 2);
        assert_eq!(t.select_p1(3).unwrap(), 6);
        assert_eq!(t.select_p2(2).unwrap(), 5);
        assert_eq!(t.rank_p1(9).unwrap(), 3);
    }

    #[test]
    fn trailing_open_counts_as_leaf_pattern() {
        let t = small("(()(");
        assert_eq!(t.rank_p1(3).unwrap(), 2);
        assert_eq!(t.select_p1(2).unwrap(), 3);
    }

    #[test]
    fn multi_level_tree_matches_scans() {
        let text: String = "(()((()())())".repeat(40);
        let bits = ParenBitVector::parse(&text).unwrap();
        let t = StaticRmm::build(bits.clone(), StaticRmmConfig::new(64, 2).unwrap()).unwrap();
        assert!(t.height() > 3);
        assert!(t.audit().is_ok());
        let e: Vec<i64> = bits
            .iter()
            .scan(0i64, |acc, b| {
                *acc += if b { 1 } else { -1 };
                Some(*acc)
            })
            .collect();
        for i in (0..bits.len()).step_by(7) {
            assert_eq!(t.excess(i).unwrap(), e[i]);
            for d in -3..=3 {
                let want = (i..bits.len()).find(|&j| e[j] - if i == 0 { 0 } else { e[i - 1] } == d);
                assert_eq!(t.fwd_search(i, d).unwrap(), want, "fwd {i} {d}");
            }
        }
    }
}

//! Searchable partial sums over a dynamic sequence of self-delimiting codes.
//!
//! Codes are concatenated into leaf segments of roughly `L..=2L` bits (a
//! code never straddles two leaves) under a height-balanced tree whose
//! nodes cache the code count, bit count and the summed weight of their
//! subtree. Indices are 1-based, matching `sum(i)` being the total weight
//! of the first `i` codes.

use std::marker::PhantomData;

use crate::bits::BitBuf;
use crate::codes::{Codec, Weight};
use crate::error::{Error, Result};
use crate::seqtree::{self, AuditFailure, Bounds, Kind, Node, Segment, Summary, Tree};

pub const DEFAULT_SEGMENT_BITS: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CodeSummary<W> {
    pub codes: usize,
    pub bits: usize,
    pub weight: W,
}

impl<W: Weight> Summary for CodeSummary<W> {
    fn combine(&self, r: &Self) -> Self {
        CodeSummary {
            codes: self.codes + r.codes,
            bits: self.bits + r.bits,
            weight: self.weight + r.weight,
        }
    }

    fn units(&self) -> usize {
        self.codes
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CodeSeg<C> {
    buf: BitBuf,
    count: usize,
    _codec: PhantomData<C>,
}

impl<C: Codec> CodeSeg<C> {
    fn new(capacity_bits: usize) -> Self {
        Self {
            buf: BitBuf::with_capacity(capacity_bits),
            count: 0,
            _codec: PhantomData,
        }
    }

    /// Decodes the code at bit `pos`: value and length.
    #[inline]
    fn decode_at(&self, pos: usize, codec: &C) -> (C::Value, usize) {
        let lo = self.buf.read(pos, 64) as u128;
        let hi = self.buf.read(pos + 64, 64) as u128;
        codec.decode(lo | (hi << 64))
    }

    /// Bit offset of code `k` (0-based; `k == count` gives the end).
    fn offset_of(&self, k: usize, codec: &C) -> usize {
        let mut pos = 0;
        for _ in 0..k {
            pos += self.decode_at(pos, codec).1;
        }
        pos
    }

    fn push(&mut self, code: (u128, usize)) {
        self.buf.push_wide(code.0, code.1);
        self.count += 1;
    }

    fn split_at_bits(&mut self, pos: usize, codes_before: usize) -> Self {
        let tail = CodeSeg {
            buf: self.buf.split_off(pos),
            count: self.count - codes_before,
            _codec: PhantomData,
        };
        self.count = codes_before;
        tail
    }
}

impl<C: Codec> Segment for CodeSeg<C> {
    type Summary = CodeSummary<C::Weight>;
    type Ctx = C;

    fn summarize(&self, codec: &C) -> Self::Summary {
        let mut weight = C::Weight::default();
        let mut pos = 0;
        for _ in 0..self.count {
            let (v, len) = self.decode_at(pos, codec);
            weight = weight + codec.weight(&v);
            pos += len;
        }
        CodeSummary {
            codes: self.count,
            bits: self.buf.len(),
            weight,
        }
    }

    fn weight(&self) -> usize {
        self.buf.len()
    }

    fn split_units(&mut self, at: usize, codec: &C) -> Self {
        let pos = self.offset_of(at, codec);
        self.split_at_bits(pos, at)
    }

    /// Cuts at the code boundary nearest to `target`, keeping at least one
    /// code on each side.
    fn split_weight(&mut self, target: usize, codec: &C) -> Self {
        let (mut pos, mut k) = (0, 0);
        while k + 1 < self.count {
            let len = self.decode_at(pos, codec).1;
            if k > 0 && pos + len / 2 >= target {
                break;
            }
            pos += len;
            k += 1;
            if pos >= target {
                break;
            }
        }
        self.split_at_bits(pos, k)
    }

    fn append(&mut self, other: Self, _: &C) {
        self.buf.append(&other.buf);
        self.count += other.count;
    }
}

type CNode<C> = Node<CodeSeg<C>>;

/// A dynamic sequence of codes with prefix sums and search over a weight.
#[derive(Debug, Clone)]
pub struct CodeSequence<C: Codec> {
    root: Tree<CodeSeg<C>>,
    codec: C,
    segment_bits: usize,
}

impl<C: Codec> CodeSequence<C> {
    pub fn new(codec: C) -> Self {
        Self::with_segment_bits(codec, DEFAULT_SEGMENT_BITS).expect("default segment size")
    }

    /// Empty sequence with leaves of about `l..=2l` bits; `l` must be at
    /// least four times the longest code.
    pub fn with_segment_bits(codec: C, l: usize) -> Result<Self> {
        if l < 4 * codec.max_code_bits() {
            return Err(Error::Contract(format!(
                "segment size {l} below four codes of {} bits",
                codec.max_code_bits()
            )));
        }
        Ok(Self {
            root: None,
            codec,
            segment_bits: l,
        })
    }

    pub fn from_values(codec: C, values: &[C::Value]) -> Result<Self> {
        let l = DEFAULT_SEGMENT_BITS;
        Self::from_values_filled(codec, l, values, l * 3 / 2)
    }

    /// Bulk build with leaves filled to about `fill` bits.
    pub(crate) fn from_values_filled(
        codec: C,
        l: usize,
        values: &[C::Value],
        fill: usize,
    ) -> Result<Self> {
        let mut s = Self::with_segment_bits(codec, l)?;
        let fill = fill.clamp(l, 2 * l - s.codec.max_code_bits());
        let mut segs = Vec::new();
        let mut cur = CodeSeg::new(fill);
        for v in values {
            let code = s.codec.encode(v)?;
            if cur.buf.len() + code.1 > fill {
                segs.push(std::mem::replace(&mut cur, CodeSeg::new(fill)));
            }
            cur.push(code);
        }
        if cur.count > 0 {
            segs.push(cur);
        }
        for seg in &mut segs {
            seg.buf.shrink_to_fit();
        }
        s.root = seqtree::build(segs, &s.codec);
        // a short final leaf is repaired like any edit
        if let Some(n) = s.root.take() {
            let (rest, last) = seqtree::pop_last(n);
            s.root = seqtree::reassemble(rest, last, None, s.bounds(), &s.codec);
        }
        Ok(s)
    }

    pub fn codec(&self) -> &C {
        &self.codec
    }

    pub fn segment_bits(&self) -> usize {
        self.segment_bits
    }

    fn bounds(&self) -> Bounds {
        Bounds {
            lo: self.segment_bits,
            hi: 2 * self.segment_bits - self.codec.max_code_bits(),
        }
    }

    /// Number of codes.
    pub fn len(&self) -> usize {
        self.root.as_ref().map_or(0, |n| n.sum.codes)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Total code bits.
    pub fn code_bits(&self) -> usize {
        self.root.as_ref().map_or(0, |n| n.sum.bits)
    }

    pub fn total(&self) -> C::Weight {
        self.root
            .as_ref()
            .map_or_else(C::Weight::default, |n| n.sum.weight)
    }

    pub fn height(&self) -> usize {
        self.root.as_ref().map_or(0, |n| n.height as usize)
    }

    pub fn leaf_count(&self) -> usize {
        seqtree::leaf_count(&self.root)
    }

    pub fn node_count(&self) -> usize {
        seqtree::node_count(&self.root)
    }

    /// Bytes of one tree node record.
    pub fn node_record_bytes() -> usize {
        std::mem::size_of::<CNode<C>>()
    }

    /// Allocated leaf buffer bits.
    pub fn buffer_bits(&self) -> usize {
        let mut b = 0;
        seqtree::for_each_leaf(&self.root, &mut |s: &CodeSeg<C>| b += s.buf.capacity_bits());
        b
    }

    /// Checks cached sums, balance, and leaf sizes (`L - max_code` up to `2L`).
    pub fn audit(&self) -> std::result::Result<(), AuditFailure> {
        let b = Bounds {
            lo: self.segment_bits - self.codec.max_code_bits(),
            hi: 2 * self.segment_bits,
        };
        seqtree::audit(&self.root, b, &self.codec)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.len() {
            return Err(Error::OutOfRange {
                index: i,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// Leaf holding code `k` (0-based), the index of its first code, and the
    /// weight before it.
    fn locate(&self, mut k: usize) -> (&CodeSeg<C>, usize, C::Weight) {
        let mut n = self.root.as_deref().expect("non-empty");
        let (mut first, mut w) = (0, C::Weight::default());
        loop {
            match &n.kind {
                Kind::Leaf(s) => return (s, first, w),
                Kind::Inner(a, b) => {
                    if k < a.sum.codes {
                        n = a;
                    } else {
                        k -= a.sum.codes;
                        first += a.sum.codes;
                        w = w + a.sum.weight;
                        n = b;
                    }
                }
            }
        }
    }

    /// Value of code `i` (1-based).
    pub fn access(&self, i: usize) -> Result<C::Value> {
        self.check_index(i)?;
        let (seg, first, _) = self.locate(i - 1);
        let pos = seg.offset_of(i - 1 - first, &self.codec);
        Ok(seg.decode_at(pos, &self.codec).0)
    }

    /// Values of codes `i..=j` (1-based).
    pub fn access_range(&self, i: usize, j: usize) -> Result<Vec<C::Value>> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i > j {
            return Err(Error::InvalidArgument(format!("empty range {i}..={j}")));
        }
        let mut out = Vec::with_capacity(j - i + 1);
        let mut k = i - 1;
        while k < j {
            let (seg, first, _) = self.locate(k);
            let mut pos = seg.offset_of(k - first, &self.codec);
            while k < j && k - first < seg.count {
                let (v, len) = seg.decode_at(pos, &self.codec);
                out.push(v);
                pos += len;
                k += 1;
            }
        }
        Ok(out)
    }

    /// Sum of the weights of the first `i` codes.
    pub fn sum(&self, i: usize) -> Result<C::Weight> {
        if i > self.len() {
            return Err(Error::OutOfRange {
                index: i,
                len: self.len(),
            });
        }
        if i == 0 {
            return Ok(C::Weight::default());
        }
        let (seg, first, mut w) = self.locate(i - 1);
        let mut pos = 0;
        for _ in first..i {
            let (v, len) = seg.decode_at(pos, &self.codec);
            w = w + self.codec.weight(&v);
            pos += len;
        }
        Ok(w)
    }

    /// First code whose inclusive prefix weight has `key > s`: its 1-based
    /// index, the weight before it and its value. `key` must be monotone
    /// along prefix sums.
    pub fn locate_by<K: Fn(&C::Weight) -> u64>(
        &self,
        key: K,
        s: u64,
    ) -> Option<(usize, C::Weight, C::Value)> {
        let mut n = self.root.as_deref()?;
        if key(&n.sum.weight) <= s {
            return None;
        }
        let (mut idx, mut w) = (0, C::Weight::default());
        loop {
            match &n.kind {
                Kind::Leaf(seg) => {
                    let mut pos = 0;
                    for _ in 0..seg.count {
                        let (v, len) = seg.decode_at(pos, &self.codec);
                        let next = w + self.codec.weight(&v);
                        idx += 1;
                        if key(&next) > s {
                            return Some((idx, w, v));
                        }
                        w = next;
                        pos += len;
                    }
                    unreachable!("cached weight promised a hit");
                }
                Kind::Inner(a, b) => {
                    let wa = w + a.sum.weight;
                    if key(&wa) > s {
                        n = a;
                    } else {
                        idx += a.sum.codes;
                        w = wa;
                        n = b;
                    }
                }
            }
        }
    }

    /// Largest `i` with `key(sum(i)) <= s`.
    pub fn search_by<K: Fn(&C::Weight) -> u64>(&self, key: K, s: u64) -> usize {
        match self.locate_by(key, s) {
            Some((i, _, _)) => i - 1,
            None => self.len(),
        }
    }

    fn edit_leaf<F: FnOnce(&mut CodeSeg<C>, usize, &C) -> Result<()>>(
        &mut self,
        k: usize,
        f: F,
    ) -> Result<()> {
        let bounds = self.bounds();
        let n = self.root.take().expect("non-empty");
        let (l, mut seg, off, r) = seqtree::split_around(n, k);
        let res = f(&mut seg, off, &self.codec);
        self.root = seqtree::reassemble(l, seg, r, bounds, &self.codec);
        res
    }

    /// Replaces code `i` (1-based) by `v`.
    pub fn update(&mut self, i: usize, v: C::Value) -> Result<()> {
        self.check_index(i)?;
        let code = self.codec.encode(&v)?;
        self.edit_leaf(i - 1, |seg, off, codec| {
            let pos = seg.offset_of(off, codec);
            let old = seg.decode_at(pos, codec).1;
            seg.buf.remove_bits(pos, old);
            seg.buf.insert_wide(pos, code.0, code.1);
            Ok(())
        })
    }

    /// Inserts `v` so that it becomes code `i` (`1 <= i <= len + 1`).
    pub fn insert(&mut self, i: usize, v: C::Value) -> Result<()> {
        if i == 0 || i > self.len() + 1 {
            return Err(Error::OutOfRange {
                index: i,
                len: self.len() + 1,
            });
        }
        let code = self.codec.encode(&v)?;
        if self.root.is_none() {
            let mut seg = CodeSeg::new(2 * self.segment_bits);
            seg.push(code);
            self.root = Some(seqtree::leaf(seg, &self.codec));
            return Ok(());
        }
        self.edit_leaf(i - 1, |seg, off, codec| {
            let pos = seg.offset_of(off, codec);
            seg.buf.insert_wide(pos, code.0, code.1);
            seg.count += 1;
            Ok(())
        })
    }

    /// Removes code `i` (1-based) and returns its value.
    pub fn delete(&mut self, i: usize) -> Result<C::Value> {
        self.check_index(i)?;
        let mut out = None;
        self.edit_leaf(i - 1, |seg, off, codec| {
            let pos = seg.offset_of(off, codec);
            let (v, len) = seg.decode_at(pos, codec);
            seg.buf.remove_bits(pos, len);
            seg.count -= 1;
            out = Some(v);
            Ok(())
        })?;
        Ok(out.expect("deleted"))
    }

    /// All values in order.
    pub fn to_vec(&self) -> Vec<C::Value> {
        let mut out = Vec::with_capacity(self.len());
        seqtree::for_each_leaf(&self.root, &mut |s: &CodeSeg<C>| {
            let mut pos = 0;
            for _ in 0..s.count {
                let (v, len) = s.decode_at(pos, &self.codec);
                out.push(v);
                pos += len;
            }
        });
        out
    }
}

impl<C: Codec<Weight = u64>> CodeSequence<C> {
    /// Largest `i` with `sum(i) <= s`.
    pub fn search(&self, s: u64) -> usize {
        self.search_by(|w| *w, s)
    }
}

//! Packed parentheses sequences and per-chunk summaries.
//!
//! An opening parenthesis is stored as `1`, a closing one as `0`. Bits are
//! packed LSB-first: bit `i` of the sequence is bit `i % 64` of word `i / 64`.
//! The excess array `E[i]` (opens minus closes in `P[0..=i]`) is never stored;
//! it is derived on demand by the scanning routines in this module.

use std::fmt;

use crate::error::{check_index, Error, Result};

pub const WORD_BITS: usize = 64;

/// A packed bit sequence encoding parentheses (`(` = 1, `)` = 0).
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ParenBitVector {
    words: Vec<u64>,
    len: usize,
}

impl ParenBitVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            words: Vec::with_capacity(bits.div_ceil(WORD_BITS)),
            len: 0,
        }
    }

    /// Builds a vector from raw words, clearing any bits at or beyond `len`.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Result<Self> {
        let needed = len.div_ceil(WORD_BITS);
        if words.len() < needed {
            return Err(Error::InvalidArgument(format!(
                "{} words cannot hold {len} bits",
                words.len()
            )));
        }
        words.truncate(needed);
        if !len.is_multiple_of(WORD_BITS) {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % WORD_BITS)) - 1;
        }
        Ok(Self { words, len })
    }

    /// Parses a string of `(`/`)` or `1`/`0` characters. Whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut bv = Self::with_capacity(text.len());
        for (pos, ch) in text.char_indices() {
            match ch {
                '(' | '1' => bv.push(true),
                ')' | '0' => bv.push(false),
                c if c.is_whitespace() => {}
                c => {
                    return Err(Error::Format(format!(
                        "unexpected character {c:?} at byte {pos}"
                    )))
                }
            }
        }
        Ok(bv)
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut bv = Self::new();
        for b in bits {
            bv.push(b);
        }
        bv
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD_BITS) {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / WORD_BITS] |= 1 << (self.len % WORD_BITS);
        }
        self.len += 1;
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn into_words(self) -> Vec<u64> {
        self.words
    }

    /// Bit `i`, or a range error.
    pub fn bit_at(&self, i: usize) -> Result<bool> {
        check_index(i, self.len)?;
        Ok(self.get(i))
    }

    /// Unchecked read; panics if `i` is past the allocated words.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        get_bit(&self.words, i)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True when every prefix has non-negative excess and the total is zero.
    pub fn is_balanced(&self) -> bool {
        self.first_violation().is_none()
    }

    /// Position of the first closing parenthesis that drives the excess
    /// negative, or `len` if the sequence never goes negative but does not
    /// end at excess zero.
    pub fn first_violation(&self) -> Option<usize> {
        let mut excess = 0i64;
        for (i, b) in self.iter().enumerate() {
            excess += if b { 1 } else { -1 };
            if excess < 0 {
                return Some(i);
            }
        }
        (excess != 0).then_some(self.len)
    }

    pub fn to_paren_string(&self) -> String {
        self.iter().map(|b| if b { '(' } else { ')' }).collect()
    }

    /// Heap bytes owned by the vector.
    pub fn heap_bytes(&self) -> usize {
        self.words.capacity() * 8
    }
}

impl fmt::Debug for ParenBitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParenBitVector({:?})", self.to_paren_string())
    }
}

impl fmt::Display for ParenBitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_paren_string())
    }
}

#[inline]
pub(crate) fn get_bit(words: &[u64], i: usize) -> bool {
    (words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
}

/// Summary of a run of bits, treating `1` as +1 and `0` as -1.
///
/// `min_prefix`/`max_prefix` range over the prefix excesses at every
/// position of the run (so an empty run has no meaningful extrema and uses
/// the neutral values `i32::MAX`/`i32::MIN`). Pattern counts only include
/// pairs lying fully inside the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChunkStats {
    pub width: u32,
    pub total: i32,
    pub min_prefix: i32,
    pub max_prefix: i32,
    pub min_count: u32,
    pub ones: u32,
    pub pat10: u32,
    pub pat01: u32,
    pub first_bit: bool,
    pub last_bit: bool,
}

impl ChunkStats {
    pub const EMPTY: ChunkStats = ChunkStats {
        width: 0,
        total: 0,
        min_prefix: i32::MAX,
        max_prefix: i32::MIN,
        min_count: 0,
        ones: 0,
        pat10: 0,
        pat01: 0,
        first_bit: false,
        last_bit: false,
    };

    const fn single(bit: bool) -> ChunkStats {
        let step = if bit { 1 } else { -1 };
        ChunkStats {
            width: 1,
            total: step,
            min_prefix: step,
            max_prefix: step,
            min_count: 1,
            ones: bit as u32,
            pat10: 0,
            pat01: 0,
            first_bit: bit,
            last_bit: bit,
        }
    }

    /// Stats of the concatenation `self` followed by `right`.
    pub const fn concat(&self, right: &ChunkStats) -> ChunkStats {
        if self.width == 0 {
            return *right;
        }
        if right.width == 0 {
            return *self;
        }
        let shifted_min = self.total + right.min_prefix;
        let shifted_max = self.total + right.max_prefix;
        let (min_prefix, min_count) = if self.min_prefix < shifted_min {
            (self.min_prefix, self.min_count)
        } else if self.min_prefix > shifted_min {
            (shifted_min, right.min_count)
        } else {
            (self.min_prefix, self.min_count + right.min_count)
        };
        ChunkStats {
            width: self.width + right.width,
            total: self.total + right.total,
            min_prefix,
            max_prefix: if self.max_prefix >= shifted_max {
                self.max_prefix
            } else {
                shifted_max
            },
            min_count,
            ones: self.ones + right.ones,
            pat10: self.pat10 + right.pat10 + (self.last_bit && !right.first_bit) as u32,
            pat01: self.pat01 + right.pat01 + (!self.last_bit && right.first_bit) as u32,
            first_bit: self.first_bit,
            last_bit: right.last_bit,
        }
    }

    pub fn zeros(&self) -> u32 {
        self.width - self.ones
    }
}

const fn byte_stats(byte: u8) -> ChunkStats {
    let mut acc = ChunkStats::EMPTY;
    let mut bit = 0;
    while bit < 8 {
        acc = acc.concat(&ChunkStats::single((byte >> bit) & 1 == 1));
        bit += 1;
    }
    acc
}

const fn build_byte_table() -> [ChunkStats; 256] {
    let mut table = [ChunkStats::EMPTY; 256];
    let mut b = 0;
    while b < 256 {
        table[b] = byte_stats(b as u8);
        b += 1;
    }
    table
}

/// Per-byte stats for all 256 byte values (LSB is the first bit).
pub(crate) static BYTE_STATS: [ChunkStats; 256] = build_byte_table();

/// Summary of the low `width` bits of `word`.
pub fn chunk_stats(word: u64, width: usize) -> Result<ChunkStats> {
    if width == 0 || width > WORD_BITS {
        return Err(Error::Contract(format!(
            "chunk width must be in 1..=64, got {width}"
        )));
    }
    Ok(crate::scan::stats(&[word], 0, width))
}

/// Scan direction for [`scan_chunk`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// In-chunk step of a forward or backward excess search.
///
/// Forward: the smallest `p` in `0..width` with
/// `start_excess + sum(0..=p) == target`. Backward: the largest `p` with
/// `start_excess + sum(p..width) == target`, accumulating from the right end.
pub fn scan_chunk(
    word: u64,
    width: usize,
    dir: Direction,
    start_excess: i64,
    target: i64,
) -> Result<Option<usize>> {
    if width == 0 || width > WORD_BITS {
        return Err(Error::Contract(format!(
            "chunk width must be in 1..=64, got {width}"
        )));
    }
    let words = [word];
    Ok(match dir {
        Direction::Forward => crate::scan::find_first(&words, 0, width, start_excess, target),
        Direction::Backward => {
            // start_excess + sum(p..width) == target  <=>  E'(p-1) == E'(width-1) - (target - start_excess)
            // where E' is the prefix excess from the chunk start.
            let total = crate::scan::excess(&words, 0, width);
            let want = total - (target - start_excess);
            if let Some(k) = crate::scan::find_last(&words, 0, width - 1, 0, want) {
                Some(k + 1)
            } else if want == 0 {
                Some(0)
            } else {
                None
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word_of(s: &str) -> (u64, usize) {
        let bv = ParenBitVector::parse(s).unwrap();
        (bv.words().first().copied().unwrap_or(0), bv.len())
    }

    fn naive_stats(word: u64, width: usize) -> ChunkStats {
        let mut acc = ChunkStats::EMPTY;
        for i in 0..width {
            acc = acc.concat(&ChunkStats::single((word >> i) & 1 == 1));
        }
        acc
    }

    fn naive_prefix(word: u64, width: usize) -> Vec<i64> {
        let mut e = 0;
        (0..width)
            .map(|i| {
                e += if (word >> i) & 1 == 1 { 1 } else { -1 };
                e
            })
            .collect()
    }

    #[test]
    fn bit_at_reads_encoding() {
        let p = ParenBitVector::parse("(()").unwrap();
        assert!(p.bit_at(0).unwrap());
        assert!(!p.bit_at(2).unwrap());
        assert_eq!(p.bit_at(3), Err(Error::OutOfRange { index: 3, len: 3 }));
        let q = ParenBitVector::parse("(()(()()))").unwrap();
        assert!(!q.bit_at(5).unwrap());
    }

    #[test]
    fn parse_accepts_digits_and_whitespace() {
        let a = ParenBitVector::parse("( ( ) )\n").unwrap();
        let b = ParenBitVector::parse("1100").unwrap();
        assert_eq!(a, b);
        assert!(ParenBitVector::parse("(x)").is_err());
    }

    #[test]
    fn tail_bits_are_cleared() {
        let bv = ParenBitVector::from_words(vec![u64::MAX], 5).unwrap();
        assert_eq!(bv.words()[0], 0b11111);
        assert_eq!(bv.count_ones(), 5);
    }

    #[test]
    fn chunk_stats_examples() {
        let (w, n) = word_of("((");
        let s = chunk_stats(w, n).unwrap();
        assert_eq!(
            (s.total, s.min_prefix, s.max_prefix, s.min_count),
            (2, 1, 2, 1)
        );
        assert_eq!((s.ones, s.pat10, s.pat01), (2, 0, 0));

        let (w, n) = word_of("()");
        let s = chunk_stats(w, n).unwrap();
        assert_eq!(
            (s.total, s.min_prefix, s.max_prefix, s.min_count, s.pat10),
            (0, 0, 1, 1, 1)
        );

        // "(()(()" plus the following ')' of the reference tree.
        let (w, n) = word_of("(()(())");
        let s = chunk_stats(w, n).unwrap();
        assert_eq!(
            (s.total, s.min_prefix, s.max_prefix, s.min_count),
            (1, 1, 3, 3)
        );

        assert!(matches!(chunk_stats(0, 0), Err(Error::Contract(_))));
    }

    #[test]
    fn chunk_stats_exhaustive_16_bits() {
        for width in 1..=16usize {
            for word in 0u64..(1 << width) {
                assert_eq!(chunk_stats(word, width).unwrap(), naive_stats(word, width));
            }
        }
    }

    #[test]
    fn scan_chunk_examples() {
        let (w, n) = word_of("()");
        assert_eq!(scan_chunk(w, n, Direction::Forward, 0, 0).unwrap(), Some(1));
        let (w, n) = word_of("((");
        assert_eq!(scan_chunk(w, n, Direction::Forward, 0, 0).unwrap(), None);
        // findclose(3) in "(()(()()" searched from offset 3 inside the chunk:
        // the match is at 8, outside this 8-bit chunk.
        let (w, _) = word_of("(()(()()");
        assert_eq!(
            scan_chunk(w >> 3, 5, Direction::Forward, 0, 0).unwrap(),
            None
        );
        // backward: ")" at the end of "()" matches its open at 0.
        let (w, n) = word_of("()");
        assert_eq!(
            scan_chunk(w, n, Direction::Backward, 0, 0).unwrap(),
            Some(0)
        );
    }

    #[test]
    fn scan_chunk_forward_exhaustive() {
        for width in [1usize, 5, 12, 16] {
            for word in 0u64..(1 << width) {
                let e = naive_prefix(word, width);
                for target in -3..=3 {
                    let want = e.iter().position(|&x| x == target);
                    assert_eq!(
                        scan_chunk(word, width, Direction::Forward, 0, target).unwrap(),
                        want
                    );
                }
            }
        }
    }

    #[test]
    fn scan_chunk_backward_exhaustive() {
        for width in [1usize, 7, 16] {
            for word in 0u64..(1 << width) {
                for target in -3..=3i64 {
                    let want = (0..width).rev().find(|&p| {
                        let s: i64 = (p..width)
                            .map(|k| if (word >> k) & 1 == 1 { 1 } else { -1 })
                            .sum();
                        s == target
                    });
                    assert_eq!(
                        scan_chunk(word, width, Direction::Backward, 0, target).unwrap(),
                        want
                    );
                }
            }
        }
    }
}

//! Compressed dynamic bitmap.
//!
//! The bitmap is cut into chunks of at most `b_max` bits. A chunk of width
//! `b` holding `c` ones is stored as the triple `(b, c, o)`, where `o` is the
//! rank of its bit pattern among all `b`-bit patterns with `c` ones in
//! lexicographic order (first bitmap position = most significant character).
//! `b` and `c` take 7 bits each and `o` takes `ceil(log2 C(b, c))` bits, so
//! the payload tracks the zero-order entropy. Triples live in a
//! [`CodeSequence`] summing widths and popcounts, which gives positional and
//! rank navigation. Any two adjacent chunks satisfy `b_i + b_{i+1} > b_max`.

use std::ops::{Add, Sub};

use crate::codes::{Codec, Weight};
use crate::error::{Error, Result};
use crate::partial_sums::CodeSequence;
use crate::scan::select_in_word;

pub const MAX_CHUNK_BITS: usize = 64;
pub const DEFAULT_SEGMENT_BITS: usize = 8192;
const FIELD_BITS: usize = 7;

const fn binomials() -> [[u64; 65]; 65] {
    let mut t = [[0u64; 65]; 65];
    let mut n = 0;
    while n <= 64 {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOM: [[u64; 65]; 65] = binomials();

/// `C(n, k)` for `n <= 64`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        0
    } else {
        BINOM[n][k]
    }
}

/// Bits needed for an offset in a class of `C(b, c)` patterns.
pub fn offset_bits(b: usize, c: usize) -> usize {
    let classes = binomial(b, c);
    if classes <= 1 {
        0
    } else {
        64 - (classes - 1).leading_zeros() as usize
    }
}

/// Lexicographic rank of the `b`-bit pattern `bits` (bit 0 is the first
/// character) among patterns with `c` ones.
pub fn encode_offset(bits: u64, b: usize, c: usize) -> Result<u64> {
    if b == 0 || b > MAX_CHUNK_BITS {
        return Err(Error::InvalidArgument(format!(
            "chunk width {b} outside 1..=64"
        )));
    }
    let bits = bits & crate::bits::low_mask(b);
    if bits.count_ones() as usize != c {
        return Err(Error::InvalidArgument(format!(
            "pattern has {} ones, expected {c}",
            bits.count_ones()
        )));
    }
    let (mut o, mut left) = (0, c);
    for t in 0..b {
        if (bits >> t) & 1 == 1 {
            o += binomial(b - 1 - t, left);
            left -= 1;
        }
    }
    Ok(o)
}

/// Inverse of [`encode_offset`].
pub fn decode_offset(mut o: u64, b: usize, c: usize) -> Result<u64> {
    if b == 0 || b > MAX_CHUNK_BITS || c > b || o >= binomial(b, c) {
        return Err(Error::InvalidArgument(format!(
            "no pattern {o} in class ({b}, {c})"
        )));
    }
    let (mut bits, mut left) = (0u64, c);
    for t in 0..b {
        if left == 0 {
            break;
        }
        let zeros_here = binomial(b - 1 - t, left);
        if o >= zeros_here {
            bits |= 1 << t;
            o -= zeros_here;
            left -= 1;
        }
    }
    Ok(bits)
}

/// Width and popcount sums.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BitCount {
    pub bits: u64,
    pub ones: u64,
}

impl Add for BitCount {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        BitCount {
            bits: self.bits + r.bits,
            ones: self.ones + r.ones,
        }
    }
}

impl Sub for BitCount {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        BitCount {
            bits: self.bits - r.bits,
            ones: self.ones - r.ones,
        }
    }
}

impl Weight for BitCount {}

/// A chunk `(b, c, o)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triple {
    pub b: u8,
    pub c: u8,
    pub o: u64,
}

impl Triple {
    pub fn from_pattern(bits: u64, b: usize) -> Self {
        let bits = bits & crate::bits::low_mask(b);
        let c = bits.count_ones() as usize;
        Triple {
            b: b as u8,
            c: c as u8,
            o: encode_offset(bits, b, c).expect("valid pattern"),
        }
    }

    pub fn pattern(&self) -> u64 {
        decode_offset(self.o, self.b as usize, self.c as usize).expect("valid triple")
    }

    pub fn code_bits(&self) -> usize {
        2 * FIELD_BITS + offset_bits(self.b as usize, self.c as usize)
    }
}

/// Codec for triples: 7-bit `b`, 7-bit `c`, then the offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleCodec {
    b_max: usize,
}

impl Codec for TripleCodec {
    type Value = Triple;
    type Weight = BitCount;

    fn encode(&self, t: &Triple) -> Result<(u128, usize)> {
        let (b, c) = (t.b as usize, t.c as usize);
        if b == 0 || b > self.b_max || c > b || t.o >= binomial(b, c) {
            return Err(Error::InvalidArgument(format!("invalid chunk {t:?}")));
        }
        let bits = b as u128 | (c as u128) << FIELD_BITS | (t.o as u128) << (2 * FIELD_BITS);
        Ok((bits, t.code_bits()))
    }

    fn decode(&self, w: u128) -> (Triple, usize) {
        let b = (w & 0x7f) as usize;
        let c = ((w >> FIELD_BITS) & 0x7f) as usize;
        let ob = offset_bits(b, c);
        let o = ((w >> (2 * FIELD_BITS)) as u64) & crate::bits::low_mask(ob);
        let o = if ob == 0 { 0 } else { o };
        (
            Triple {
                b: b as u8,
                c: c as u8,
                o,
            },
            2 * FIELD_BITS + ob,
        )
    }

    fn max_code_bits(&self) -> usize {
        2 * FIELD_BITS + offset_bits(self.b_max, self.b_max / 2)
    }

    fn weight(&self, t: &Triple) -> BitCount {
        BitCount {
            bits: t.b as u64,
            ones: t.c as u64,
        }
    }
}

/// Space accounting in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceReport {
    pub len: usize,
    pub ones: usize,
    /// Sum of all triple code lengths.
    pub payload_bits: usize,
    /// Tree node records plus unused leaf buffer capacity.
    pub overhead_bits: usize,
    /// `n H0(B)` from the global ones/zeros counts.
    pub h0_bits: f64,
}

impl SpaceReport {
    pub fn total_bits(&self) -> usize {
        self.payload_bits + self.overhead_bits
    }
}

/// Dynamic bitmap stored in zero-order compressed form.
#[derive(Debug, Clone)]
pub struct CompressedDynBitmap {
    chunks: CodeSequence<TripleCodec>,
    b_max: usize,
}

impl Default for CompressedDynBitmap {
    fn default() -> Self {
        Self::new()
    }
}

impl CompressedDynBitmap {
    pub fn new() -> Self {
        Self::with_params(MAX_CHUNK_BITS, DEFAULT_SEGMENT_BITS).expect("default parameters")
    }

    /// Empty bitmap with chunks of at most `b_max` bits and tree leaves of
    /// `segment_bits` code bits.
    pub fn with_params(b_max: usize, segment_bits: usize) -> Result<Self> {
        if !(2..=MAX_CHUNK_BITS).contains(&b_max) {
            return Err(Error::Contract(format!("b_max {b_max} outside 2..=64")));
        }
        Ok(Self {
            chunks: CodeSequence::with_segment_bits(TripleCodec { b_max }, segment_bits)?,
            b_max,
        })
    }

    /// Bulk load of `len` bits packed LSB-first in `words`.
    pub fn from_words(words: &[u64], len: usize) -> Result<Self> {
        Self::from_words_with(words, len, MAX_CHUNK_BITS, DEFAULT_SEGMENT_BITS)
    }

    pub fn from_words_with(
        words: &[u64],
        len: usize,
        b_max: usize,
        segment_bits: usize,
    ) -> Result<Self> {
        if len > words.len() * 64 {
            return Err(Error::InvalidArgument(format!(
                "{len} bits but {} words",
                words.len()
            )));
        }
        let empty = Self::with_params(b_max, segment_bits)?;
        let triples: Vec<Triple> = (0..len.div_ceil(b_max))
            .map(|k| {
                let lo = k * b_max;
                let b = b_max.min(len - lo);
                Triple::from_pattern(crate::bits::read_bits(words, lo, b), b)
            })
            .collect();
        let codec = TripleCodec { b_max };
        let fill = 2 * segment_bits - codec.max_code_bits();
        Ok(Self {
            chunks: CodeSequence::from_values_filled(codec, segment_bits, &triples, fill)?,
            ..empty
        })
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Result<Self> {
        let mut buf = crate::bits::BitBuf::default();
        for b in bits {
            buf.push(b);
        }
        Self::from_words(buf.words(), buf.len())
    }

    pub fn b_max(&self) -> usize {
        self.b_max
    }

    pub fn len(&self) -> usize {
        self.chunks.total().bits as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn count_ones(&self) -> usize {
        self.chunks.total().ones as usize
    }

    pub fn chunk_count(&self) -> usize {
        self.chunks.len()
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::OutOfRange {
                index: i,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// Chunk holding bit `i`: 1-based chunk index, counts before it, chunk.
    fn chunk_of(&self, i: usize) -> (usize, BitCount, Triple) {
        self.chunks
            .locate_by(|w| w.bits, i as u64)
            .expect("position inside the bitmap")
    }

    pub fn access(&self, i: usize) -> Result<bool> {
        self.check(i)?;
        let (_, before, t) = self.chunk_of(i);
        Ok((t.pattern() >> (i - before.bits as usize)) & 1 == 1)
    }

    /// Ones in `B[0..=i]`.
    pub fn rank1(&self, i: usize) -> Result<usize> {
        self.check(i)?;
        let (_, before, t) = self.chunk_of(i);
        let off = i - before.bits as usize;
        let mine = (t.pattern() & crate::bits::low_mask(off + 1)).count_ones() as usize;
        Ok(before.ones as usize + mine)
    }

    pub fn rank0(&self, i: usize) -> Result<usize> {
        Ok(i + 1 - self.rank1(i)?)
    }

    /// Position of the `q`-th (1-based) one.
    pub fn select1(&self, q: usize) -> Result<usize> {
        if q == 0 || q > self.count_ones() {
            return Err(Error::InvalidArgument(format!(
                "select1 argument {q} exceeds population"
            )));
        }
        let (_, before, t) = self
            .chunks
            .locate_by(|w| w.ones, q as u64 - 1)
            .expect("enough ones");
        Ok(before.bits as usize + select_in_word(t.pattern(), q - before.ones as usize))
    }

    /// Position of the `q`-th (1-based) zero.
    pub fn select0(&self, q: usize) -> Result<usize> {
        if q == 0 || q > self.len() - self.count_ones() {
            return Err(Error::InvalidArgument(format!(
                "select0 argument {q} exceeds population"
            )));
        }
        let (_, before, t) = self
            .chunks
            .locate_by(|w| w.bits - w.ones, q as u64 - 1)
            .expect("enough zeros");
        let zeros = !t.pattern() & crate::bits::low_mask(t.b as usize);
        let need = q - (before.bits - before.ones) as usize;
        Ok(before.bits as usize + select_in_word(zeros, need))
    }

    /// Inserts `bit` so that it becomes `B[i]` (`0 <= i <= len`).
    pub fn insert(&mut self, i: usize, bit: bool) -> Result<()> {
        let n = self.len();
        if i > n {
            return Err(Error::OutOfRange {
                index: i,
                len: n + 1,
            });
        }
        if n == 0 {
            return self.chunks.insert(1, Triple::from_pattern(bit as u64, 1));
        }
        let (k, before, t) = if i == n {
            let k = self.chunks.len();
            let t = self.chunks.access(k)?;
            (
                k,
                BitCount {
                    bits: (n - t.b as usize) as u64,
                    ones: 0,
                },
                t,
            )
        } else {
            self.chunk_of(i)
        };
        let off = i - before.bits as usize;
        let b = t.b as usize + 1;
        let old = t.pattern() as u128;
        let low = old & ((1u128 << off) - 1);
        let pat = low | ((bit as u128) << off) | ((old >> off) << (off + 1));
        if b <= self.b_max {
            self.chunks.update(k, Triple::from_pattern(pat as u64, b))?;
            return Ok(());
        }
        let h = b / 2;
        let first = Triple::from_pattern(pat as u64, h);
        let second = Triple::from_pattern((pat >> h) as u64, b - h);
        self.chunks.update(k, first)?;
        self.chunks.insert(k + 1, second)?;
        self.merge_around(k.saturating_sub(1).max(1), k + 2)
    }

    /// Removes `B[i]` and returns it.
    pub fn delete(&mut self, i: usize) -> Result<bool> {
        self.check(i)?;
        let (k, before, t) = self.chunk_of(i);
        let off = i - before.bits as usize;
        let pat = t.pattern();
        let bit = (pat >> off) & 1 == 1;
        let b = t.b as usize - 1;
        if b == 0 {
            self.chunks.delete(k)?;
            self.merge_around(k.saturating_sub(1).max(1), k)?;
        } else {
            let low = pat & crate::bits::low_mask(off);
            let high = if off + 1 >= 64 { 0 } else { pat >> (off + 1) };
            self.chunks
                .update(k, Triple::from_pattern(low | (high << off), b))?;
            self.merge_around(k.saturating_sub(1).max(1), k + 1)?;
        }
        Ok(bit)
    }

    /// Restores `b_j + b_{j+1} > b_max` for chunks `lo..=hi`, merging the
    /// leftmost offending pair first.
    fn merge_around(&mut self, lo: usize, hi: usize) -> Result<()> {
        let mut hi = hi.min(self.chunks.len());
        'scan: loop {
            let mut j = lo;
            while j < hi {
                let (a, b) = (self.chunks.access(j)?, self.chunks.access(j + 1)?);
                let w = a.b as usize + b.b as usize;
                if w <= self.b_max {
                    let pat = a.pattern() | (b.pattern() << a.b);
                    self.chunks.update(j, Triple::from_pattern(pat, w))?;
                    self.chunks.delete(j + 1)?;
                    hi -= 1;
                    continue 'scan;
                }
                j += 1;
            }
            return Ok(());
        }
    }

    /// Every chunk in order.
    pub fn chunks(&self) -> Vec<Triple> {
        self.chunks.to_vec()
    }

    pub fn to_bits(&self) -> Vec<bool> {
        let mut out = Vec::with_capacity(self.len());
        for t in self.chunks() {
            let p = t.pattern();
            out.extend((0..t.b).map(|k| (p >> k) & 1 == 1));
        }
        out
    }

    /// Tree and chunk consistency, including the adjacency invariant.
    pub fn audit(&self) -> std::result::Result<(), String> {
        self.chunks.audit().map_err(|e| e.to_string())?;
        let chunks = self.chunks();
        for (j, w) in chunks.windows(2).enumerate() {
            if w[0].b as usize + w[1].b as usize <= self.b_max {
                return Err(format!(
                    "chunks {} and {} have widths {} + {} <= {}",
                    j + 1,
                    j + 2,
                    w[0].b,
                    w[1].b,
                    self.b_max
                ));
            }
        }
        Ok(())
    }

    pub fn space_report(&self) -> SpaceReport {
        let (n, ones) = (self.len(), self.count_ones());
        let h0 = if n == 0 || ones == 0 || ones == n {
            0.0
        } else {
            let p = ones as f64 / n as f64;
            -(n as f64) * (p * p.log2() + (1.0 - p) * (1.0 - p).log2())
        };
        let payload = self.chunks.code_bits();
        let records =
            self.chunks.node_count() * CodeSequence::<TripleCodec>::node_record_bytes() * 8;
        let slack = self.chunks.buffer_bits() - payload;
        SpaceReport {
            len: n,
            ones,
            payload_bits: payload,
            overhead_bits: records + slack + 8 * std::mem::size_of::<Self>(),
            h0_bits: h0,
        }
    }

    /// Raw form: little-endian `u64` bit length, then the bits packed
    /// LSB-first into little-endian `u64` words.
    pub fn to_raw_bytes(&self) -> Vec<u8> {
        let n = self.len();
        let mut words = vec![0u64; n.div_ceil(64)];
        let mut pos = 0;
        for t in self.chunks() {
            let p = t.pattern();
            let (wi, off) = (pos / 64, pos % 64);
            words[wi] |= p << off;
            if off + t.b as usize > 64 {
                words[wi + 1] |= p >> (64 - off);
            }
            pos += t.b as usize;
        }
        let mut out = Vec::with_capacity(8 + 8 * words.len());
        out.extend_from_slice(&(n as u64).to_le_bytes());
        for w in words {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn from_raw_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 8 {
            return Err(Error::Format("raw bitmap shorter than its header".into()));
        }
        let n = u64::from_le_bytes(bytes[..8].try_into().unwrap()) as usize;
        let body = &bytes[8..];
        if body.len() != n.div_ceil(64) * 8 {
            return Err(Error::Format(format!(
                "raw bitmap of {n} bits needs {} payload bytes, found {}",
                n.div_ceil(64) * 8,
                body.len()
            )));
        }
        let words: Vec<u64> = body
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Self::from_words(&words, n)
    }
}

//! Growable LSB-first bit buffer used by the leaves of the dynamic trees.

use crate::paren::WORD_BITS;

#[inline]
pub(crate) fn low_mask(width: usize) -> u64 {
    if width >= WORD_BITS {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Reads `width <= 64` bits starting at `pos`; bits past the slice read as 0.
#[inline]
pub(crate) fn read_bits(words: &[u64], pos: usize, width: usize) -> u64 {
    if width == 0 {
        return 0;
    }
    let (wi, off) = (pos / WORD_BITS, pos % WORD_BITS);
    let mut v = words.get(wi).copied().unwrap_or(0) >> off;
    if off != 0 && off + width > WORD_BITS {
        v |= words.get(wi + 1).copied().unwrap_or(0) << (WORD_BITS - off);
    }
    v & low_mask(width)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct BitBuf {
    words: Vec<u64>,
    len: usize,
}

impl BitBuf {
    pub fn with_capacity(bits: usize) -> Self {
        Self {
            words: Vec::with_capacity(bits.div_ceil(WORD_BITS)),
            len: 0,
        }
    }

    pub fn from_range(words: &[u64], lo: usize, hi: usize) -> Self {
        let mut b = Self::with_capacity(hi - lo);
        b.extend_from(words, lo, hi);
        b
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn read(&self, pos: usize, width: usize) -> u64 {
        read_bits(&self.words, pos, width)
    }

    pub fn capacity_bits(&self) -> usize {
        self.words.capacity() * WORD_BITS
    }

    pub fn reserve_bits(&mut self, bits: usize) {
        let need = bits.div_ceil(WORD_BITS);
        if need > self.words.len() {
            self.words.reserve(need - self.words.len());
        }
    }

    pub fn shrink_to_fit(&mut self) {
        self.words.shrink_to_fit();
    }

    /// Appends the low `width` bits of `value`.
    pub fn push_bits(&mut self, value: u64, width: usize) {
        if width == 0 {
            return;
        }
        let value = value & low_mask(width);
        let off = self.len % WORD_BITS;
        if off == 0 {
            self.words.push(value);
        } else {
            *self.words.last_mut().unwrap() |= value << off;
            if off + width > WORD_BITS {
                self.words.push(value >> (WORD_BITS - off));
            }
        }
        self.len += width;
    }

    /// Appends the low `width <= 128` bits of `value`.
    pub fn push_wide(&mut self, value: u128, width: usize) {
        let lo = width.min(WORD_BITS);
        self.push_bits(value as u64, lo);
        self.push_bits((value >> 64) as u64, width - lo);
    }

    pub fn insert_wide(&mut self, pos: usize, value: u128, width: usize) {
        let tail = self.split_off(pos);
        self.push_wide(value, width);
        self.append(&tail);
    }

    pub fn push(&mut self, bit: bool) {
        self.push_bits(bit as u64, 1);
    }

    /// Appends bits `[lo, hi)` of `src`.
    pub fn extend_from(&mut self, src: &[u64], lo: usize, hi: usize) {
        let mut p = lo;
        while p < hi {
            let w = (hi - p).min(WORD_BITS);
            self.push_bits(read_bits(src, p, w), w);
            p += w;
        }
    }

    pub fn append(&mut self, other: &BitBuf) {
        self.extend_from(&other.words, 0, other.len);
    }

    pub fn truncate(&mut self, len: usize) {
        if len >= self.len {
            return;
        }
        self.words.truncate(len.div_ceil(WORD_BITS));
        if !len.is_multiple_of(WORD_BITS) {
            *self.words.last_mut().unwrap() &= low_mask(len % WORD_BITS);
        }
        self.len = len;
    }

    /// Keeps `[0, at)` and returns `[at, len)`.
    pub fn split_off(&mut self, at: usize) -> BitBuf {
        let tail = BitBuf::from_range(&self.words, at, self.len);
        self.truncate(at);
        tail
    }

    /// Inserts the low `width` bits of `value` so they start at `pos`.
    pub fn insert_bits(&mut self, pos: usize, value: u64, width: usize) {
        let tail = self.split_off(pos);
        self.push_bits(value, width);
        self.append(&tail);
    }

    pub fn remove_bits(&mut self, pos: usize, width: usize) {
        let tail = BitBuf::from_range(&self.words, pos + width, self.len);
        self.truncate(pos);
        self.append(&tail);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn to_vec(b: &BitBuf) -> Vec<bool> {
        (0..b.len()).map(|i| b.get(i)).collect()
    }

    fn from_vec(v: &[bool]) -> BitBuf {
        let mut b = BitBuf::default();
        for &x in v {
            b.push(x);
        }
        b
    }

    proptest! {
        #[test]
        fn splice_matches_vec(
            v in prop::collection::vec(any::<bool>(), 0..300),
            ins in prop::collection::vec(any::<bool>(), 0..70),
            a in 0usize..300,
            w in 0usize..70,
        ) {
            let pos = a.min(v.len());
            let mut b = from_vec(&v);
            let value = ins.iter().rev().fold(0u64, |acc, &x| (acc << 1) | x as u64);
            let ins = &ins[..ins.len().min(64)];
            let value = value & low_mask(ins.len());
            b.insert_bits(pos, value, ins.len());
            let mut expect = v.clone();
            expect.splice(pos..pos, ins.iter().copied());
            prop_assert_eq!(to_vec(&b), expect.clone());

            let w = w.min(expect.len() - pos);
            b.remove_bits(pos, w);
            expect.drain(pos..pos + w);
            prop_assert_eq!(to_vec(&b), expect.clone());

            let mut c = b.clone();
            let tail = c.split_off(pos.min(c.len()));
            c.append(&tail);
            prop_assert_eq!(c, b);
        }
    }

    #[test]
    fn read_across_words() {
        let mut b = BitBuf::default();
        b.push_bits(0, 60);
        b.push_bits(0b1011_0110, 8);
        assert_eq!(b.read(60, 8), 0b1011_0110);
        assert_eq!(b.read(62, 4), 0b1101);
        assert_eq!(b.read(66, 64), 0b10);
    }
}

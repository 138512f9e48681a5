//! Excess scans over bit ranges of a word slice.
//!
//! Every routine works on the half-open bit range `[lo, hi)` of `words`
//! (LSB-first packing) and processes whole bytes through the byte tables,
//! falling back to single bits at unaligned edges. `start` is always the
//! excess just before `lo`; "E(p)" below means `start + sum(lo..=p)`.

use crate::paren::{get_bit, ChunkStats, BYTE_STATS, WORD_BITS};

#[inline]
fn byte_at(words: &[u64], pos: usize) -> u8 {
    debug_assert_eq!(pos % 8, 0);
    (words[pos / WORD_BITS] >> (pos % WORD_BITS)) as u8
}

#[inline]
fn step(bit: bool) -> i64 {
    if bit {
        1
    } else {
        -1
    }
}

/// Walks `[lo, hi)` as a sequence of units: single bits at unaligned edges
/// and whole bytes in between. Calls `f(unit_start, unit_width, byte)`.
/// For single bits, `byte` holds the bit in its LSB.
#[inline]
fn for_units<F: FnMut(usize, usize, u8) -> bool>(words: &[u64], lo: usize, hi: usize, mut f: F) {
    let mut p = lo;
    while p < hi && !p.is_multiple_of(8) {
        if !f(p, 1, get_bit(words, p) as u8) {
            return;
        }
        p += 1;
    }
    while p + 8 <= hi {
        if !f(p, 8, byte_at(words, p)) {
            return;
        }
        p += 8;
    }
    while p < hi {
        if !f(p, 1, get_bit(words, p) as u8) {
            return;
        }
        p += 1;
    }
}

#[inline]
fn unit_stats(width: usize, byte: u8) -> ChunkStats {
    if width == 8 {
        BYTE_STATS[byte as usize]
    } else {
        let s = step(byte & 1 == 1) as i32;
        ChunkStats {
            width: 1,
            total: s,
            min_prefix: s,
            max_prefix: s,
            min_count: 1,
            ones: (byte & 1) as u32,
            pat10: 0,
            pat01: 0,
            first_bit: byte & 1 == 1,
            last_bit: byte & 1 == 1,
        }
    }
}

/// Full summary of `[lo, hi)`.
pub fn stats(words: &[u64], lo: usize, hi: usize) -> ChunkStats {
    let mut acc = ChunkStats::EMPTY;
    for_units(words, lo, hi, |_, w, b| {
        acc = acc.concat(&unit_stats(w, b));
        true
    });
    acc
}

/// Number of ones in `[lo, hi)`.
pub fn ones(words: &[u64], lo: usize, hi: usize) -> usize {
    if lo >= hi {
        return 0;
    }
    let (wl, wh) = (lo / WORD_BITS, (hi - 1) / WORD_BITS);
    let lo_mask = u64::MAX << (lo % WORD_BITS);
    let hi_mask = u64::MAX >> (WORD_BITS - 1 - (hi - 1) % WORD_BITS);
    if wl == wh {
        return (words[wl] & lo_mask & hi_mask).count_ones() as usize;
    }
    let mut n = (words[wl] & lo_mask).count_ones() as usize;
    for w in &words[wl + 1..wh] {
        n += w.count_ones() as usize;
    }
    n + (words[wh] & hi_mask).count_ones() as usize
}

/// Excess delta over `[lo, hi)`.
#[inline]
pub fn excess(words: &[u64], lo: usize, hi: usize) -> i64 {
    2 * ones(words, lo, hi) as i64 - (hi - lo) as i64
}

/// Smallest `p` in `[lo, hi)` with `E(p) == target`.
pub fn find_first(words: &[u64], lo: usize, hi: usize, start: i64, target: i64) -> Option<usize> {
    let mut cur = start;
    let mut found = None;
    for_units(words, lo, hi, |p, w, b| {
        if w == 1 {
            cur += step(b & 1 == 1);
            if cur == target {
                found = Some(p);
                return false;
            }
            return true;
        }
        let s = &BYTE_STATS[b as usize];
        if cur + s.min_prefix as i64 <= target && target <= cur + s.max_prefix as i64 {
            for k in 0..8 {
                cur += step((b >> k) & 1 == 1);
                if cur == target {
                    found = Some(p + k);
                    return false;
                }
            }
            unreachable!("byte range contains the target");
        }
        cur += s.total as i64;
        true
    });
    found
}

/// Largest `p` in `[lo, hi)` with `E(p) == target`.
pub fn find_last(words: &[u64], lo: usize, hi: usize, start: i64, target: i64) -> Option<usize> {
    if lo >= hi {
        return None;
    }
    // E at hi-1, then walk units right to left.
    let mut cur = start + excess(words, lo, hi);
    let mut p = hi;
    let aligned_lo = lo.next_multiple_of(8).min(hi);
    while p > aligned_lo && !p.is_multiple_of(8) {
        p -= 1;
        if cur == target {
            return Some(p);
        }
        cur -= step(get_bit(words, p));
    }
    while p >= aligned_lo + 8 {
        p -= 8;
        let b = byte_at(words, p);
        let s = &BYTE_STATS[b as usize];
        let before = cur - s.total as i64;
        if before + s.min_prefix as i64 <= target && target <= before + s.max_prefix as i64 {
            let mut e = cur;
            for k in (0..8).rev() {
                if e == target {
                    return Some(p + k);
                }
                e -= step((b >> k) & 1 == 1);
            }
            unreachable!("byte range contains the target");
        }
        cur = before;
    }
    while p > lo {
        p -= 1;
        if cur == target {
            return Some(p);
        }
        cur -= step(get_bit(words, p));
    }
    None
}

/// Position of the `q`-th (1-based) occurrence of `min` among `E(lo..hi)`,
/// where `min` is no larger than any value in the range. Returns
/// `Err(count)` with the number of occurrences seen when there are fewer
/// than `q`.
pub fn nth_min(
    words: &[u64],
    lo: usize,
    hi: usize,
    start: i64,
    min: i64,
    q: usize,
) -> Result<usize, usize> {
    let mut cur = start;
    let mut seen = 0usize;
    let mut found = None;
    for_units(words, lo, hi, |p, w, b| {
        if w == 1 {
            cur += step(b & 1 == 1);
            if cur == min {
                seen += 1;
                if seen == q {
                    found = Some(p);
                    return false;
                }
            }
            return true;
        }
        let s = &BYTE_STATS[b as usize];
        if cur + s.min_prefix as i64 == min {
            if seen + s.min_count as usize >= q {
                for k in 0..8 {
                    cur += step((b >> k) & 1 == 1);
                    if cur == min {
                        seen += 1;
                        if seen == q {
                            found = Some(p + k);
                            return false;
                        }
                    }
                }
                unreachable!("byte holds enough minima");
            }
            seen += s.min_count as usize;
        }
        cur += s.total as i64;
        true
    });
    found.ok_or(seen)
}

/// Select the `q`-th (1-based) set bit of `word`.
#[inline]
pub fn select_in_word(mut word: u64, q: usize) -> usize {
    debug_assert!(q >= 1 && q <= word.count_ones() as usize);
    for _ in 1..q {
        word &= word - 1;
    }
    word.trailing_zeros() as usize
}

/// `q`-th (1-based) position in `[lo, hi)` whose bit equals `bit`, or
/// `Err(count)` of matching bits when there are fewer than `q`.
pub fn select(words: &[u64], lo: usize, hi: usize, bit: bool, q: usize) -> Result<usize, usize> {
    select_masked(lo, hi, q, |i| if bit { words[i] } else { !words[i] })
}

/// Mask of positions `x` (relative to word `i`) with `P[x]=1, P[x+1]=0`.
/// The successor of the last bit is taken from the next word (or 0).
#[inline]
fn pat10_word(words: &[u64], i: usize) -> u64 {
    let next = words.get(i + 1).map_or(0, |w| w & 1);
    words[i] & !((words[i] >> 1) | (next << 63))
}

/// Mask of positions `x` with `P[x]=0, P[x+1]=1`.
#[inline]
fn pat01_word(words: &[u64], i: usize) -> u64 {
    let next = words.get(i + 1).map_or(0, |w| w & 1);
    !words[i] & ((words[i] >> 1) | (next << 63))
}

/// Which adjacent-pair pattern to count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    /// `1` followed by `0`: a leaf, `()`.
    OneZero,
    /// `0` followed by `1`: `)(`.
    ZeroOne,
}

impl Pattern {
    #[inline]
    fn mask(self, words: &[u64], i: usize) -> u64 {
        match self {
            Pattern::OneZero => pat10_word(words, i),
            Pattern::ZeroOne => pat01_word(words, i),
        }
    }

    /// Whether the pair `(a, b)` matches.
    #[inline]
    pub fn matches(self, a: bool, b: bool) -> bool {
        match self {
            Pattern::OneZero => a && !b,
            Pattern::ZeroOne => !a && b,
        }
    }
}

/// Number of `x` in `[lo, hi)` starting a pattern pair whose successor
/// `x + 1` is also below `words.len() * 64`. Callers restrict `hi` so that
/// successors stay inside their valid data.
pub fn count_pattern(words: &[u64], lo: usize, hi: usize, pat: Pattern) -> usize {
    if lo >= hi {
        return 0;
    }
    let (wl, wh) = (lo / WORD_BITS, (hi - 1) / WORD_BITS);
    let lo_mask = u64::MAX << (lo % WORD_BITS);
    let hi_mask = u64::MAX >> (WORD_BITS - 1 - (hi - 1) % WORD_BITS);
    if wl == wh {
        return (pat.mask(words, wl) & lo_mask & hi_mask).count_ones() as usize;
    }
    let mut n = (pat.mask(words, wl) & lo_mask).count_ones() as usize;
    for i in wl + 1..wh {
        n += pat.mask(words, i).count_ones() as usize;
    }
    n + (pat.mask(words, wh) & hi_mask).count_ones() as usize
}

/// `q`-th (1-based) pattern start in `[lo, hi)`; see [`count_pattern`].
pub fn select_pattern(
    words: &[u64],
    lo: usize,
    hi: usize,
    pat: Pattern,
    q: usize,
) -> Result<usize, usize> {
    select_masked(lo, hi, q, |i| pat.mask(words, i))
}

fn select_masked<M: Fn(usize) -> u64>(
    lo: usize,
    hi: usize,
    q: usize,
    mask: M,
) -> Result<usize, usize> {
    if lo >= hi || q == 0 {
        return Err(0);
    }
    let (wl, wh) = (lo / WORD_BITS, (hi - 1) / WORD_BITS);
    let mut need = q;
    for i in wl..=wh {
        let mut m = mask(i);
        if i == wl {
            m &= u64::MAX << (lo % WORD_BITS);
        }
        if i == wh {
            m &= u64::MAX >> (WORD_BITS - 1 - (hi - 1) % WORD_BITS);
        }
        let c = m.count_ones() as usize;
        if c >= need {
            return Ok(i * WORD_BITS + select_in_word(m, need));
        }
        need -= c;
    }
    Err(q - need)
}

//! Self-delimiting codes for [`CodeSequence`](crate::partial_sums::CodeSequence).
//!
//! Codes are written into an LSB-first bit stream and are at most 128 bits
//! long, so a code is always decodable from the 128-bit window starting at
//! its first bit.

use std::fmt::Debug;
use std::ops::{Add, Sub};

use crate::bits::low_mask;
use crate::error::{Error, Result};

/// Additive quantity summed over a code sequence.
pub trait Weight:
    Copy + Debug + Default + PartialEq + Add<Output = Self> + Sub<Output = Self>
{
}

impl Weight for u64 {}

/// A self-delimiting code of at most 128 bits.
pub trait Codec: Clone + Debug {
    type Value: Copy + Debug + PartialEq;
    type Weight: Weight;

    /// Code bits (first stream bit in the LSB) and their count.
    fn encode(&self, v: &Self::Value) -> Result<(u128, usize)>;

    /// Decodes the code starting at the LSB of `window`, returning the value
    /// and the code length.
    fn decode(&self, window: u128) -> (Self::Value, usize);

    /// Longest possible code.
    fn max_code_bits(&self) -> usize;

    /// The summed function of a value.
    fn weight(&self, v: &Self::Value) -> Self::Weight;
}

/// Fixed-width `k`-bit codes, `1 <= k <= 64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedWidth {
    width: usize,
}

impl FixedWidth {
    pub fn new(width: usize) -> Result<Self> {
        if !(1..=64).contains(&width) {
            return Err(Error::Contract(format!(
                "code width {width} outside 1..=64"
            )));
        }
        Ok(Self { width })
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

impl Codec for FixedWidth {
    type Value = u64;
    type Weight = u64;

    fn encode(&self, v: &u64) -> Result<(u128, usize)> {
        if *v & !low_mask(self.width) != 0 {
            return Err(Error::InvalidArgument(format!(
                "{v} does not fit in {} bits",
                self.width
            )));
        }
        Ok((*v as u128, self.width))
    }

    fn decode(&self, window: u128) -> (u64, usize) {
        (window as u64 & low_mask(self.width), self.width)
    }

    fn max_code_bits(&self) -> usize {
        self.width
    }

    fn weight(&self, v: &u64) -> u64 {
        *v
    }
}

/// Elias-γ code of `x + 1`, so zero is representable.
///
/// For `N = x + 1` with `k = floor(log2 N)`: `k` zeros, a one, then the `k`
/// low bits of `N` (least significant first). Values up to `2^32 - 2`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EliasGamma;

impl EliasGamma {
    pub const MAX_VALUE: u64 = (1 << 32) - 2;

    fn code(n: u64) -> (u64, usize) {
        let k = 63 - n.leading_zeros() as usize;
        let low = n & low_mask(k);
        ((1 | (low << 1)) << k, 2 * k + 1)
    }

    fn parse(window: u64) -> (u64, usize) {
        let k = window.trailing_zeros() as usize;
        let low = (window >> (k + 1)) & low_mask(k);
        ((1 << k) | low, 2 * k + 1)
    }
}

impl Codec for EliasGamma {
    type Value = u64;
    type Weight = u64;

    fn encode(&self, v: &u64) -> Result<(u128, usize)> {
        if *v > Self::MAX_VALUE {
            return Err(Error::InvalidArgument(format!("{v} exceeds γ code range")));
        }
        let (bits, len) = Self::code(v + 1);
        Ok((bits as u128, len))
    }

    fn decode(&self, window: u128) -> (u64, usize) {
        let (n, len) = Self::parse(window as u64);
        (n - 1, len)
    }

    fn max_code_bits(&self) -> usize {
        63
    }

    fn weight(&self, v: &u64) -> u64 {
        *v
    }
}

/// Elias-δ code of `x + 1`: the bit length `L` of `N = x + 1` in γ, then
/// the `L - 1` low bits of `N`. Codes are capped at 64 bits, which admits
/// values below `2^54 - 1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EliasDelta;

impl EliasDelta {
    pub const MAX_VALUE: u64 = (1 << 54) - 2;
}

impl Codec for EliasDelta {
    type Value = u64;
    type Weight = u64;

    fn encode(&self, v: &u64) -> Result<(u128, usize)> {
        if *v > Self::MAX_VALUE {
            return Err(Error::InvalidArgument(format!("{v} exceeds δ code range")));
        }
        let n = v + 1;
        let l = 64 - n.leading_zeros() as usize;
        let (head, hl) = EliasGamma::code(l as u64);
        let low = n & low_mask(l - 1);
        Ok(((head | (low << hl)) as u128, hl + l - 1))
    }

    fn decode(&self, window: u128) -> (u64, usize) {
        let window = window as u64;
        let (l, hl) = EliasGamma::parse(window);
        let l = l as usize;
        let low = (window >> hl) & low_mask(l - 1);
        (((1u64 << (l - 1)) | low) - 1, hl + l - 1)
    }

    fn max_code_bits(&self) -> usize {
        64
    }

    fn weight(&self, v: &u64) -> u64 {
        *v
    }
}

/// Wraps an integer codec with a different summed function `f`.
#[derive(Clone, Copy)]
pub struct Weighted<C> {
    pub inner: C,
    pub f: fn(u64) -> u64,
}

impl<C: Debug> Debug for Weighted<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Weighted")
            .field("inner", &self.inner)
            .finish()
    }
}

impl<C: Codec<Value = u64>> Codec for Weighted<C> {
    type Value = u64;
    type Weight = u64;

    fn encode(&self, v: &u64) -> Result<(u128, usize)> {
        self.inner.encode(v)
    }

    fn decode(&self, window: u128) -> (u64, usize) {
        self.inner.decode(window)
    }

    fn max_code_bits(&self) -> usize {
        self.inner.max_code_bits()
    }

    fn weight(&self, v: &u64) -> u64 {
        (self.f)(*v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn round_trip<C: Codec<Value = u64>>(c: &C, v: u64) {
        let (bits, len) = c.encode(&v).unwrap();
        assert!(len <= c.max_code_bits());
        assert_eq!(bits >> len, 0);
        // trailing garbage must not affect decoding
        let window = bits | (0xA5A5_A5A5_A5A5_A5A5_A5A5_A5A5_A5A5_A5A5u128 << len);
        assert_eq!(c.decode(window), (v, len), "value {v}");
    }

    #[test]
    fn gamma_lengths() {
        assert_eq!(EliasGamma.encode(&0).unwrap(), (1, 1));
        assert_eq!(EliasGamma.encode(&1).unwrap().1, 3);
        assert_eq!(EliasGamma.encode(&6).unwrap().1, 5);
        assert_eq!(EliasGamma.encode(&7).unwrap().1, 7);
        assert!(EliasGamma.encode(&(EliasGamma::MAX_VALUE + 1)).is_err());
    }

    #[test]
    fn delta_lengths() {
        assert_eq!(EliasDelta.encode(&0).unwrap().1, 1);
        assert_eq!(EliasDelta.encode(&1).unwrap().1, 4);
        assert_eq!(EliasDelta.encode(&15).unwrap().1, 9);
        assert_eq!(EliasDelta.encode(&EliasDelta::MAX_VALUE).unwrap().1, 64);
        assert!(EliasDelta.encode(&(EliasDelta::MAX_VALUE + 1)).is_err());
    }

    #[test]
    fn small_values_round_trip() {
        let f = FixedWidth::new(4).unwrap();
        for v in 0..16 {
            round_trip(&f, v);
        }
        assert!(f.encode(&16).is_err());
        for v in 0..5000 {
            round_trip(&EliasGamma, v);
            round_trip(&EliasDelta, v);
        }
        round_trip(&EliasGamma, EliasGamma::MAX_VALUE);
        round_trip(&EliasDelta, EliasDelta::MAX_VALUE);
        round_trip(&FixedWidth::new(64).unwrap(), u64::MAX);
    }

    proptest! {
        #[test]
        fn random_values_round_trip(v in 0u64..=EliasGamma::MAX_VALUE, w in 0u64..=EliasDelta::MAX_VALUE) {
            round_trip(&EliasGamma, v);
            round_trip(&EliasDelta, w);
        }
    }
}

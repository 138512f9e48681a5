//! Range minimum and maximum queries over arrays whose neighbouring values
//! differ by exactly one, stored as their step bits.

use crate::error::{Error, Result};
use crate::paren::ParenBitVector;
use crate::primitives::Primitives;
use crate::static_rmm::{StaticRmm, StaticRmmConfig};

/// A `±1` array: bit `i` is set when `V[i] - V[i-1] = +1`, with the value
/// before index 0 taken as `base`.
#[derive(Debug, Clone)]
pub struct Pm1Array {
    rmm: StaticRmm,
    base: i64,
}

impl Pm1Array {
    /// Encodes `values`. The first step is taken as `+1`, so the stored base
    /// is `values[0] - 1`.
    pub fn from_values(values: &[i64]) -> Result<Self> {
        let Some(&first) = values.first() else {
            return Err(Error::InvalidArgument("empty value array".into()));
        };
        let mut bits = ParenBitVector::with_capacity(values.len());
        bits.push(true);
        for (k, w) in values.windows(2).enumerate() {
            match w[1] - w[0] {
                1 => bits.push(true),
                -1 => bits.push(false),
                d => {
                    return Err(Error::InvalidArgument(format!(
                        "values {} and {} differ by {d}",
                        k,
                        k + 1
                    )))
                }
            }
        }
        Self::from_deltas_with_base(bits, first - 1)
    }

    /// Step bits with the value before index 0 equal to 0.
    pub fn from_deltas(bits: ParenBitVector) -> Result<Self> {
        Self::from_deltas_with_base(bits, 0)
    }

    pub fn from_deltas_with_base(bits: ParenBitVector, base: i64) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidArgument("empty step sequence".into()));
        }
        Ok(Self {
            rmm: StaticRmm::build(bits, StaticRmmConfig::default())?,
            base,
        })
    }

    pub fn len(&self) -> usize {
        self.rmm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rmm.is_empty()
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    pub fn deltas(&self) -> &ParenBitVector {
        self.rmm.bits()
    }

    pub fn value_at(&self, i: usize) -> Result<i64> {
        Ok(self.base + self.rmm.excess(i)?)
    }

    /// Leftmost position of the minimum of `V[i..=j]`.
    pub fn rmq(&self, i: usize, j: usize) -> Result<usize> {
        Ok(self.rmm.rmqi(i, j)?.0)
    }

    /// Leftmost position of the maximum of `V[i..=j]`.
    pub fn rmq_max(&self, i: usize, j: usize) -> Result<usize> {
        Ok(self.rmm.rmqi_max(i, j)?.0)
    }

    pub fn size_in_bits(&self) -> usize {
        self.rmm.size_in_bits() + 64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const VALUES: [i64; 10] = [1, 2, 1, 2, 3, 2, 3, 2, 1, 0];

    #[test]
    fn reference_walk() {
        let a = Pm1Array::from_values(&VALUES).unwrap();
        assert_eq!(a.deltas().to_paren_string(), "(()(()()))");
        assert_eq!(a.base(), 0);
        assert_eq!(a.value_at(4).unwrap(), 3);
        assert_eq!(a.rmq(1, 8).unwrap(), 2);
        assert_eq!(a.rmq_max(0, 9).unwrap(), 4);
        for (i, &v) in VALUES.iter().enumerate() {
            assert_eq!(a.rmq(i, i).unwrap(), i);
            assert_eq!(a.value_at(i).unwrap(), v);
        }
        assert!(a.rmq(3, 2).is_err());
        assert!(a.value_at(10).is_err());
    }

    #[test]
    fn offsets_and_errors() {
        let a = Pm1Array::from_values(&[-7, -8, -9, -8]).unwrap();
        assert_eq!(a.base(), -8);
        assert_eq!(a.value_at(2).unwrap(), -9);
        assert_eq!(a.rmq(0, 3).unwrap(), 2);
        assert!(matches!(
            Pm1Array::from_values(&[0, 2]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(Pm1Array::from_values(&[3, 3]).is_err());
        assert!(Pm1Array::from_values(&[]).is_err());
    }
}

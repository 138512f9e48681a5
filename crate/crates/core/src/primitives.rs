//! The primitive contract shared by the static and dynamic range min-max
//! trees, and by the tree navigation layer built on top of it.
//!
//! Positions are 0-based bit positions; ranks and select arguments are
//! 1-based. `E[i]` is the excess of `P[0..=i]`, with `E[-1] = 0`.

use crate::error::{check_index, check_range, Error, Result};
pub use crate::scan::Pattern;

/// Minimum, its multiplicity and maximum of `E` over a range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeSummary {
    pub min: i64,
    pub min_count: usize,
    pub max: i64,
}

impl RangeSummary {
    pub(crate) fn merge(self, other: RangeSummary) -> RangeSummary {
        let (min, min_count) = match self.min.cmp(&other.min) {
            std::cmp::Ordering::Less => (self.min, self.min_count),
            std::cmp::Ordering::Greater => (other.min, other.min_count),
            std::cmp::Ordering::Equal => (self.min, self.min_count + other.min_count),
        };
        RangeSummary {
            min,
            min_count,
            max: self.max.max(other.max),
        }
    }
}

/// Search and counting primitives over a parentheses sequence.
///
/// Implementors supply the unchecked building blocks; the provided methods
/// validate arguments and derive the public operations from them.
pub trait Primitives {
    /// Number of bits in the sequence.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Bit `i`; `i < len`.
    fn bit(&self, i: usize) -> bool;

    /// `E[i]`; `i < len`.
    fn excess_at(&self, i: usize) -> i64;

    /// Smallest `k >= from` with `E[k] == target`.
    fn find_first_eq(&self, from: usize, target: i64) -> Option<usize>;

    /// Largest `k <= to` with `E[k] == target`.
    fn find_last_eq(&self, to: usize, target: i64) -> Option<usize>;

    /// Summary of `E[i..=j]`; `i <= j < len`.
    fn range_summary(&self, i: usize, j: usize) -> RangeSummary;

    /// Position of the `q`-th occurrence of `min` in `E[i..=j]`, where `min`
    /// is the range minimum and `1 <= q <= min_count`.
    fn nth_min(&self, i: usize, j: usize, min: i64, q: usize) -> usize;

    /// Number of ones in `P[0..=i]`; `i < len`.
    fn ones_through(&self, i: usize) -> usize;

    /// Position of the `q`-th bit equal to `bit`, if any.
    fn select_bit(&self, bit: bool, q: usize) -> Option<usize>;

    /// Number of pattern starts `x <= i`, with a virtual `0` after the last
    /// bit.
    fn pattern_through(&self, pat: Pattern, i: usize) -> usize;

    /// Position of the `q`-th pattern start, if any.
    fn select_pattern(&self, pat: Pattern, q: usize) -> Option<usize>;

    // ---- validated operations ----

    fn get(&self, i: usize) -> Result<bool> {
        check_index(i, self.len())?;
        Ok(self.bit(i))
    }

    fn excess(&self, i: usize) -> Result<i64> {
        check_index(i, self.len())?;
        Ok(self.excess_at(i))
    }

    /// Excess delta of `P[i..=j]`.
    fn sum(&self, i: usize, j: usize) -> Result<i64> {
        check_range(i, j, self.len())?;
        Ok(self.excess_at(j) - self.excess_before(i))
    }

    /// `E[i - 1]`, with `E[-1] = 0`.
    fn excess_before(&self, i: usize) -> i64 {
        if i == 0 {
            0
        } else {
            self.excess_at(i - 1)
        }
    }

    /// Smallest `j >= i` with `sum(i, j) == d`.
    fn fwd_search(&self, i: usize, d: i64) -> Result<Option<usize>> {
        check_index(i, self.len())?;
        Ok(self.find_first_eq(i, self.excess_before(i) + d))
    }

    /// Largest `j <= i` with `sum(j, i) == d`.
    fn bwd_search(&self, i: usize, d: i64) -> Result<Option<usize>> {
        check_index(i, self.len())?;
        let target = self.excess_at(i) - d;
        if i > 0 {
            if let Some(k) = self.find_last_eq(i - 1, target) {
                return Ok(Some(k + 1));
            }
        }
        Ok((target == 0).then_some(0))
    }

    /// Leftmost position of the minimum of `E[i..=j]`, with the value.
    fn rmqi(&self, i: usize, j: usize) -> Result<(usize, i64)> {
        check_range(i, j, self.len())?;
        let s = self.range_summary(i, j);
        let pos = self
            .find_first_eq(i, s.min)
            .expect("minimum occurs in range");
        Ok((pos, s.min))
    }

    /// Leftmost position of the maximum of `E[i..=j]`, with the value.
    fn rmqi_max(&self, i: usize, j: usize) -> Result<(usize, i64)> {
        check_range(i, j, self.len())?;
        let s = self.range_summary(i, j);
        let pos = self
            .find_first_eq(i, s.max)
            .expect("maximum occurs in range");
        Ok((pos, s.max))
    }

    /// Number of positions in `[i, j]` where `E` attains its range minimum.
    fn min_count(&self, i: usize, j: usize) -> Result<usize> {
        check_range(i, j, self.len())?;
        Ok(self.range_summary(i, j).min_count)
    }

    /// Position of the `q`-th (1-based) minimum of `E[i..=j]`.
    fn min_select(&self, i: usize, j: usize, q: usize) -> Result<usize> {
        check_range(i, j, self.len())?;
        let s = self.range_summary(i, j);
        if q == 0 || q > s.min_count {
            return Err(Error::InvalidArgument(format!(
                "min_select rank {q} outside 1..={}",
                s.min_count
            )));
        }
        Ok(self.nth_min(i, j, s.min, q))
    }

    fn rank1(&self, i: usize) -> Result<usize> {
        check_index(i, self.len())?;
        Ok(self.ones_through(i))
    }

    fn rank0(&self, i: usize) -> Result<usize> {
        check_index(i, self.len())?;
        Ok(i + 1 - self.ones_through(i))
    }

    fn select1(&self, q: usize) -> Result<usize> {
        select_or_err(q, self.select_bit(true, q), "select1")
    }

    fn select0(&self, q: usize) -> Result<usize> {
        select_or_err(q, self.select_bit(false, q), "select0")
    }

    /// Rank over the virtual bitmap marking `()` starts (leaves).
    fn rank_p1(&self, i: usize) -> Result<usize> {
        check_index(i, self.len())?;
        Ok(self.pattern_through(Pattern::OneZero, i))
    }

    fn select_p1(&self, q: usize) -> Result<usize> {
        select_or_err(q, self.select_pattern(Pattern::OneZero, q), "select_p1")
    }

    /// Rank over the virtual bitmap marking `)(` boundaries.
    fn rank_p2(&self, i: usize) -> Result<usize> {
        check_index(i, self.len())?;
        Ok(self.pattern_through(Pattern::ZeroOne, i))
    }

    fn select_p2(&self, q: usize) -> Result<usize> {
        select_or_err(q, self.select_pattern(Pattern::ZeroOne, q), "select_p2")
    }
}

fn select_or_err(q: usize, found: Option<usize>, op: &str) -> Result<usize> {
    match found {
        Some(p) if q > 0 => Ok(p),
        _ => Err(Error::InvalidArgument(format!(
            "{op} argument {q} exceeds population"
        ))),
    }
}

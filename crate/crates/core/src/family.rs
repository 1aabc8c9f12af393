//! The family `[n]^k` of all k-element subsets of `{1, ..., n}`.
//!
//! Subsets are bitmasks (element `i` is bit `i - 1`), so `n <= 64`. Indices
//! follow colexicographic order, which for bitmasks is plain numeric order.

use crate::combinat::binomial_usize;
use crate::error::{Error, Result};

pub const MAX_UNIVERSE: usize = 64;

/// A subset of `[n]` stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(pub u64);

impl Subset {
    pub fn from_elements(elements: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &e in elements {
            if e == 0 || e > MAX_UNIVERSE {
                return Err(Error::Precondition(format!(
                    "element {e} outside 1..={MAX_UNIVERSE}"
                )));
            }
            mask |= 1 << (e - 1);
        }
        Ok(Self(mask))
    }

    pub fn elements(self) -> Vec<usize> {
        (0..64).filter(|i| self.0 >> i & 1 == 1).map(|i| i + 1).collect()
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersection_size(self, other: Subset) -> usize {
        (self.0 & other.0).count_ones() as usize
    }

    pub fn is_within(self, n: usize) -> bool {
        n >= 64 || self.0 >> n == 0
    }
}

#[derive(Debug, Clone)]
pub struct InstanceFamily {
    n: usize,
    k: usize,
    members: Vec<Subset>,
}

impl InstanceFamily {
    /// Enumerates `[n]^k`, refusing families with more than `budget` members.
    pub fn new(n: usize, k: usize, budget: usize) -> Result<Self> {
        if k > n {
            return Err(Error::Precondition(format!("k = {k} exceeds n = {n}")));
        }
        if n > MAX_UNIVERSE {
            return Err(Error::Precondition(format!(
                "n = {n} exceeds {MAX_UNIVERSE}"
            )));
        }
        let size = binomial_usize(n, k).unwrap_or(usize::MAX);
        if size > budget {
            return Err(Error::Budget {
                what: "subset family",
                needed: size,
                budget,
            });
        }
        let mut members = Vec::with_capacity(size);
        if k == 0 {
            members.push(Subset(0));
        } else {
            let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            let mut mask: u64 = (1u64 << k) - 1;
            loop {
                members.push(Subset(mask));
                if members.len() == size {
                    break;
                }
                // Gosper's hack: next larger integer with the same popcount
                let low = mask & mask.wrapping_neg();
                let ripple = mask + low;
                mask = (((ripple ^ mask) >> 2) / low) | ripple;
                debug_assert!(mask <= limit);
            }
        }
        Ok(Self { n, k, members })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `N = binomial(n, k)`.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn unrank(&self, index: usize) -> Option<Subset> {
        self.members.get(index).copied()
    }

    /// Colex rank: `sum_i binomial(c_i, i + 1)` over the sorted 0-based elements.
    pub fn rank(&self, s: Subset) -> Option<usize> {
        if s.len() != self.k || !s.is_within(self.n) {
            return None;
        }
        let mut rank = 0;
        for (i, e) in s.elements().into_iter().enumerate() {
            rank += binomial_usize(e - 1, i + 1)?;
        }
        Some(rank)
    }

    /// `|x ∩ y|` for every pair, row-major, as bytes.
    pub fn intersection_table(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len() * self.len());
        for &x in &self.members {
            out.extend(self.members.iter().map(|&y| x.intersection_size(y) as u8));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_order_small() {
        let fam = InstanceFamily::new(4, 2, 100).unwrap();
        let got: Vec<Vec<usize>> = fam.members().iter().map(|s| s.elements()).collect();
        assert_eq!(
            got,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
                vec![1, 4],
                vec![2, 4],
                vec![3, 4]
            ]
        );
    }

    #[test]
    fn rank_is_inverse_of_unrank() {
        for n in 0..=9 {
            for k in 0..=n {
                let fam = InstanceFamily::new(n, k, 1000).unwrap();
                assert_eq!(Some(fam.len()), binomial_usize(n, k));
                for i in 0..fam.len() {
                    assert_eq!(fam.rank(fam.unrank(i).unwrap()), Some(i));
                }
            }
        }
    }

    #[test]
    fn full_universe_enumerates() {
        let fam = InstanceFamily::new(64, 1, 100).unwrap();
        assert_eq!(fam.len(), 64);
        assert_eq!(fam.members()[63].elements(), vec![64]);
    }

    #[test]
    fn budget_and_bounds() {
        assert!(matches!(
            InstanceFamily::new(20, 10, 1000),
            Err(Error::Budget { .. })
        ));
        assert!(InstanceFamily::new(3, 4, 1000).is_err());
        let fam = InstanceFamily::new(5, 2, 100).unwrap();
        assert_eq!(fam.rank(Subset::from_elements(&[1, 6]).unwrap()), None);
        assert_eq!(fam.rank(Subset::from_elements(&[1]).unwrap()), None);
    }
}

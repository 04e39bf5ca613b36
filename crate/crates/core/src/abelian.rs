//! Canonical descriptor of a finite abelian group.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

use crate::Int;

/// Isomorphism class of a finite abelian group, stored as invariant factors
/// `d_1 | d_2 | ... | d_k` with every `d_i >= 2`, in ascending divisibility
/// order. The trivial group is the empty list.
///
/// The canonical text form joins the factors in *descending* order with `.`:
/// `"1"` (trivial), `"4.2"` for Z/4 x Z/2, `"2.2.2"` for (Z/2)^3.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianType {
    factors: Vec<Int>,
}

impl AbelianType {
    /// The trivial group.
    pub fn trivial() -> Self {
        AbelianType { factors: Vec::new() }
    }

    /// Builds a type from invariant factors; factors equal to 1 are dropped.
    ///
    /// The remaining factors must be >= 2 and form a divisibility chain.
    pub fn from_invariant_factors<I>(factors: I) -> Self
    where
        I: IntoIterator<Item = Int>,
    {
        let factors: Vec<Int> = factors.into_iter().filter(|f| !f.is_one()).collect();
        debug_assert!(factors.iter().all(|f| *f >= Int::from(2)));
        debug_assert!(factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        AbelianType { factors }
    }

    /// Like [`Self::from_invariant_factors`], from plain machine integers.
    pub fn from_u64_factors<I>(factors: I) -> Self
    where
        I: IntoIterator<Item = u64>,
    {
        Self::from_invariant_factors(factors.into_iter().map(Int::from))
    }

    /// Invariant factors in ascending divisibility order (1s dropped).
    pub fn invariant_factors(&self) -> &[Int] {
        &self.factors
    }

    /// Group order: the product of the invariant factors (1 when trivial).
    pub fn order(&self) -> Int {
        self.factors.iter().product()
    }

    /// Group order as `u64`, when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        num_traits::ToPrimitive::to_u64(&self.order())
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Cyclic groups have at most one invariant factor.
    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    /// Exponent of the group: the largest invariant factor (1 when trivial).
    pub fn exponent(&self) -> Int {
        self.factors.last().cloned().unwrap_or_else(Int::one)
    }

    /// True for elementary abelian groups (all factors equal to one prime).
    pub fn is_elementary(&self) -> bool {
        match self.factors.first() {
            None => true,
            Some(p) => self.factors.iter().all(|f| f == p),
        }
    }

    /// Canonical string: factors joined descending with `.`, or `"1"`.
    pub fn canonical_string(&self) -> String {
        if self.factors.is_empty() {
            return "1".to_string();
        }
        let mut parts: Vec<String> = self.factors.iter().rev().map(|f| f.to_string()).collect();
        // factors are ascending, so the reverse is descending
        parts.dedup_by(|_, _| false);
        parts.join(".")
    }
}

impl fmt::Display for AbelianType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

/// Types are ordered by group order, then by canonical string; this is the
/// order used in reports.
impl Ord for AbelianType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.canonical_string().cmp(&other.canonical_string()))
    }
}

impl PartialOrd for AbelianType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        assert_eq!(AbelianType::trivial().to_string(), "1");
        assert_eq!(AbelianType::from_u64_factors([2, 4]).to_string(), "4.2");
        assert_eq!(AbelianType::from_u64_factors([2, 2, 2]).to_string(), "2.2.2");
        assert_eq!(AbelianType::from_u64_factors([1, 2]).to_string(), "2");
        assert_eq!(AbelianType::from_u64_factors([5]).to_string(), "5");
    }

    #[test]
    fn order_and_flags() {
        let t = AbelianType::from_u64_factors([2, 4]);
        assert_eq!(t.order(), Int::from(8));
        assert!(!t.is_cyclic());
        assert!(!t.is_elementary());
        assert!(AbelianType::from_u64_factors([2, 2]).is_elementary());
        assert!(AbelianType::from_u64_factors([6]).is_cyclic());
        assert_eq!(AbelianType::from_u64_factors([2, 4]).exponent(), Int::from(4));
        assert!(AbelianType::trivial().is_elementary());
    }

    #[test]
    fn report_ordering() {
        // sorted by order, ties broken by string
        let mut v = vec![
            AbelianType::from_u64_factors([4]),
            AbelianType::from_u64_factors([2, 2]),
            AbelianType::from_u64_factors([2]),
            AbelianType::trivial(),
            AbelianType::from_u64_factors([2, 4]),
            AbelianType::from_u64_factors([2, 2, 2]),
        ];
        v.sort();
        let s: Vec<String> = v.iter().map(|t| t.to_string()).collect();
        assert_eq!(s, ["1", "2", "2.2", "4", "2.2.2", "4.2"]);
    }
}

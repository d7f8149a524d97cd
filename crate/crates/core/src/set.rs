//! Subsets of `[n] = {1, ..., n}` under a dense bit encoding.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A subset of `[n]`. The ambient size `n` is part of the identity: the same
/// members over different `n` are different sets.
///
/// Bit `i` of the encoding stands for element `i + 1`. Sets order first by
/// `n`, then by the encoding read as a binary integer.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerSet {
    n: usize,
    bits: FixedBitSet,
}

impl IntegerSet {
    pub fn empty(n: usize) -> Self {
        IntegerSet {
            n,
            bits: FixedBitSet::with_capacity(n),
        }
    }

    /// The interval `[n]`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        s.bits.insert_range(..);
        s
    }

    /// `[lo, hi]` inside `[n]`; empty when `lo > hi`.
    pub fn interval(n: usize, lo: usize, hi: usize) -> Result<Self> {
        let mut s = Self::empty(n);
        if lo > hi {
            return Ok(s);
        }
        if lo == 0 || hi > n {
            return Err(Error::domain(format!("interval [{lo}, {hi}] is not inside [1, {n}]")));
        }
        s.bits.insert_range(lo - 1..hi);
        Ok(s)
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Result<Self> {
        let mut s = Self::empty(n);
        for m in members {
            if m == 0 || m > n {
                return Err(Error::domain(format!("element {m} is not in [1, {n}]")));
            }
            s.bits.insert(m - 1);
        }
        Ok(s)
    }

    /// Builds a set from its encoding; bits at or above `n` must be clear.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= 64, "mask encoding needs n <= 64");
        assert!(n == 64 || mask >> n == 0, "mask has bits outside [n]");
        let mut s = Self::empty(n);
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            s.bits.insert(i);
            m &= m - 1;
        }
        s
    }

    /// Encoding as a `u64`, for `n <= 64`.
    pub fn mask(&self) -> Option<u64> {
        if self.n > 64 {
            return None;
        }
        Some(self.bits.ones().fold(0u64, |acc, i| acc | (1u64 << i)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, x: usize) -> bool {
        x >= 1 && x <= self.n && self.bits.contains(x - 1)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones().map(|i| i + 1)
    }

    pub fn members(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<usize> {
        self.bits.minimum().map(|i| i + 1)
    }

    pub fn max(&self) -> Option<usize> {
        self.bits.maximum().map(|i| i + 1)
    }

    pub fn insert(&mut self, x: usize) -> Result<()> {
        if x == 0 || x > self.n {
            return Err(Error::domain(format!("element {x} is not in [1, {}]", self.n)));
        }
        self.bits.insert(x - 1);
        Ok(())
    }

    pub fn remove(&mut self, x: usize) {
        if x >= 1 && x <= self.n {
            self.bits.set(x - 1, false);
        }
    }

    pub fn with(&self, x: usize) -> Result<Self> {
        let mut s = self.clone();
        s.insert(x)?;
        Ok(s)
    }

    pub fn without(&self, x: usize) -> Self {
        let mut s = self.clone();
        s.remove(x);
        s
    }

    /// `[n] \ self`.
    pub fn complement(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        IntegerSet { n: self.n, bits }
    }

    /// Union over the larger of the two ambient intervals.
    pub fn union(&self, other: &IntegerSet) -> Self {
        let n = self.n.max(other.n);
        let mut out = self.with_ambient(n);
        out.bits.union_with(&other.bits);
        out
    }

    pub fn intersection(&self, other: &IntegerSet) -> Self {
        let mut out = self.clone();
        out.bits.intersect_with(&other.bits);
        out
    }

    pub fn difference(&self, other: &IntegerSet) -> Self {
        let mut out = self.clone();
        out.bits.difference_with(&other.bits);
        out
    }

    pub fn is_subset(&self, other: &IntegerSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    /// Same members over a different ambient size; members above `n` are dropped.
    pub fn with_ambient(&self, n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        for i in self.bits.ones().filter(|&i| i < n) {
            bits.insert(i);
        }
        IntegerSet { n, bits }
    }

    pub fn symmetric_difference_len(&self, other: &IntegerSet) -> usize {
        let n = self.n.max(other.n);
        (1..=n).filter(|&x| self.contains(x) != other.contains(x)).count()
    }

    // Named families.

    /// Odd numbers `{1, 3, ..., 2*ceil(n/2) - 1}`.
    pub fn odds(n: usize) -> Result<Self> {
        require(n >= 1, "O(n) needs n >= 1")?;
        Self::from_members(n, (1..=n).step_by(2))
    }

    /// Upper half `[floor(n/2) + 1, n]`.
    pub fn upper_half(n: usize) -> Result<Self> {
        require(n >= 1, "I0(n) needs n >= 1")?;
        Self::interval(n, n / 2 + 1, n)
    }

    /// `[n/2 - 1, n]` for even `n >= 6`; it holds exactly two restricted triples.
    pub fn i1(n: usize) -> Result<Self> {
        require(n % 2 == 0 && n >= 6, "I1(n) needs even n >= 6")?;
        Self::interval(n, n / 2 - 1, n)
    }

    /// `[n/2, n]` for even `n >= 2`; restricted sum-free.
    pub fn i2(n: usize) -> Result<Self> {
        require(n % 2 == 0 && n >= 2, "I2(n) needs even n >= 2")?;
        Self::interval(n, n / 2, n)
    }

    /// `[(n-1)/2, n]` for odd `n >= 5`; it holds exactly one restricted triple.
    pub fn i3(n: usize) -> Result<Self> {
        require(n % 2 == 1 && n >= 5, "I3(n) needs odd n >= 5")?;
        Self::interval(n, (n - 1) / 2, n)
    }

    /// Maximal runs of consecutive members as `(lo, hi)`.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for x in self.iter() {
            match out.last_mut() {
                Some((_, hi)) if *hi + 1 == x => *hi = x,
                _ => out.push((x, x)),
            }
        }
        out
    }

    /// Canonical literal: runs of three or more as `lo..hi`, joined by commas.
    pub fn to_literal(&self) -> String {
        if self.is_empty() {
            return "{}".to_string();
        }
        let mut parts = Vec::new();
        for (lo, hi) in self.runs() {
            match hi - lo {
                0 => parts.push(lo.to_string()),
                1 => {
                    parts.push(lo.to_string());
                    parts.push(hi.to_string());
                }
                _ => parts.push(format!("{lo}..{hi}")),
            }
        }
        parts.join(",")
    }
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::domain(msg))
    }
}

impl Ord for IntegerSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            let a = self.bits.as_slice();
            let b = other.bits.as_slice();
            let len = a.len().max(b.len());
            for i in (0..len).rev() {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                match x.cmp(&y) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for IntegerSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntegerSet(n={}, {})", self.n, self.to_literal())
    }
}

impl fmt::Display for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

/// Members of a `u64` encoding, increasing.
pub(crate) fn mask_members(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_families() {
        assert_eq!(IntegerSet::odds(7).unwrap().members(), vec![1, 3, 5, 7]);
        assert_eq!(IntegerSet::odds(8).unwrap().members(), vec![1, 3, 5, 7]);
        assert_eq!(IntegerSet::upper_half(9).unwrap().members(), vec![5, 6, 7, 8, 9]);
        assert_eq!(IntegerSet::i1(6).unwrap().members(), vec![2, 3, 4, 5, 6]);
        assert_eq!(IntegerSet::i2(6).unwrap().members(), vec![3, 4, 5, 6]);
        assert_eq!(IntegerSet::i3(7).unwrap().members(), vec![3, 4, 5, 6, 7]);
        assert!(IntegerSet::i1(4).is_err());
        assert!(IntegerSet::i1(7).is_err());
        assert!(IntegerSet::i3(3).is_err());
        assert!(IntegerSet::i3(8).is_err());
        assert!(IntegerSet::i2(5).is_err());
    }

    #[test]
    fn identity_includes_ambient_size() {
        let a = IntegerSet::from_members(6, [1, 2]).unwrap();
        let b = IntegerSet::from_members(7, [1, 2]).unwrap();
        assert_ne!(a, b);
        assert!(a < b);
        assert_eq!(a, IntegerSet::from_mask(6, 0b11));
    }

    #[test]
    fn ordering_follows_encoding() {
        let n = 10;
        let mut sets: Vec<IntegerSet> = (0u64..1 << n).map(|m| IntegerSet::from_mask(n, m)).collect();
        sets.reverse();
        sets.sort();
        for (i, s) in sets.iter().enumerate() {
            assert_eq!(s.mask(), Some(i as u64));
        }
    }

    #[test]
    fn rejects_out_of_range_members() {
        assert!(IntegerSet::from_members(5, [0]).is_err());
        assert!(IntegerSet::from_members(5, [6]).is_err());
        assert!(IntegerSet::interval(5, 2, 6).is_err());
        assert!(IntegerSet::interval(5, 4, 2).unwrap().is_empty());
    }

    #[test]
    fn literal_rendering() {
        assert_eq!(IntegerSet::full(4).to_literal(), "1..4");
        assert_eq!(IntegerSet::odds(7).unwrap().to_literal(), "1,3,5,7");
        let s = IntegerSet::from_members(12, [1, 2, 3, 4, 6, 7, 9, 10, 11, 12]).unwrap();
        assert_eq!(s.to_literal(), "1..4,6,7,9..12");
        assert_eq!(IntegerSet::empty(3).to_literal(), "{}");
    }

    #[test]
    fn set_algebra() {
        let a = IntegerSet::from_members(8, [1, 2, 5]).unwrap();
        let b = IntegerSet::from_members(8, [2, 3]).unwrap();
        assert_eq!(a.union(&b).members(), vec![1, 2, 3, 5]);
        assert_eq!(a.intersection(&b).members(), vec![2]);
        assert_eq!(a.difference(&b).members(), vec![1, 5]);
        assert_eq!(a.complement().members(), vec![3, 4, 6, 7, 8]);
        assert_eq!(a.symmetric_difference_len(&b), 3);
        assert!(IntegerSet::from_members(8, [2]).unwrap().is_subset(&a));
        assert_eq!(mask_members(0b10110), vec![2, 3, 5]);
    }
}

//! Exhaustive checks of the structural facts about sum-free sets in `[n]`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::IntegerSet;
use crate::triples::schur_triple_count;

/// All subsets of `[n]` with no Schur triple `x + y = z` (`x = y` allowed),
/// in depth-first order: each set is followed by its extensions by larger elements.
pub struct SumFreeSets {
    n: usize,
    restricted: bool,
    /// `(members, forbidden, next candidate)`, as masks with bit `v - 1` for `v`.
    stack: Vec<(u64, u128, usize)>,
    fresh: bool,
}

impl Iterator for SumFreeSets {
    type Item = IntegerSet;

    fn next(&mut self) -> Option<IntegerSet> {
        if self.fresh {
            self.fresh = false;
            return Some(IntegerSet::empty(self.n));
        }
        while let Some(top) = self.stack.last_mut() {
            let (mask, forbidden, next) = *top;
            let pick = (next..=self.n).find(|&x| forbidden >> (x - 1) & 1 == 0);
            let Some(x) = pick else {
                self.stack.pop();
                continue;
            };
            top.2 = x + 1;
            let grown = mask | 1 << (x - 1);
            // sums y + x for y already present, plus x + x unless only distinct summands count
            let base = if self.restricted { mask } else { grown };
            let forbidden = forbidden | (base as u128) << x;
            self.stack.push((grown, forbidden, x + 1));
            return Some(IntegerSet::from_mask(self.n, grown));
        }
        None
    }
}

fn check_width(n: usize) -> Result<()> {
    if n > 63 {
        return Err(Error::Refused {
            what: format!("sum-free enumeration with n = {n}"),
            limit: 63,
            key: "sumfree_max_n",
        });
    }
    Ok(())
}

pub fn enumerate_sumfree(n: usize) -> Result<SumFreeSets> {
    check_width(n)?;
    Ok(SumFreeSets { n, restricted: false, stack: vec![(0, 0, 1)], fresh: true })
}

/// Same walk for restricted sum-free sets (only `a < b < c` forbidden).
pub fn enumerate_restricted_sumfree(n: usize) -> Result<SumFreeSets> {
    check_width(n)?;
    Ok(SumFreeSets { n, restricted: true, stack: vec![(0, 0, 1)], fresh: true })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trichotomy {
    /// `|S| <= 2n/5`.
    pub case_i: bool,
    /// Every element is odd.
    pub case_ii: bool,
    /// `|S| <= min S`.
    pub case_iii: bool,
    /// `|S| = 2n/5` exactly.
    pub case_i_tight: bool,
    /// `|S| <= 2n/5 + 1`, the weaker size condition.
    pub case_i_plus_one: bool,
}

impl Trichotomy {
    pub fn any(&self) -> bool {
        self.case_i || self.case_ii || self.case_iii
    }

    /// At least one case holds once (i) is relaxed to `|S| <= 2n/5 + 1`.
    pub fn any_relaxed(&self) -> bool {
        self.case_i_plus_one || self.case_ii || self.case_iii
    }

    /// Only case (i) holds, and only with equality.
    pub fn only_tight_case_i(&self) -> bool {
        self.case_i_tight && !self.case_ii && !self.case_iii
    }
}

pub fn df_trichotomy_check(s: &IntegerSet) -> Result<Trichotomy> {
    if schur_triple_count(s) != 0 {
        return Err(Error::domain(format!("{s} is not sum-free")));
    }
    let (size, n) = (s.len(), s.n());
    Ok(Trichotomy {
        case_i: 5 * size <= 2 * n,
        case_ii: s.iter().all(|x| x % 2 == 1),
        case_iii: s.min().is_none_or(|m| size <= m),
        case_i_tight: 5 * size == 2 * n,
        case_i_plus_one: 5 * size <= 2 * n + 5,
    })
}

/// Trichotomy over every sum-free subset of `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrichotomyReport {
    pub n: usize,
    pub sets: u64,
    pub max_size: usize,
    /// Sets meeting none of the three cases.
    pub violations: Vec<String>,
    /// Sets meeting none of the cases even with (i) relaxed by one.
    pub relaxed_violations: Vec<String>,
    /// Sets saved only by case (i) at equality.
    pub tight_case_i: Vec<String>,
}

pub fn trichotomy_report(n: usize) -> Result<TrichotomyReport> {
    let mut rep = TrichotomyReport { n, sets: 0, max_size: 0, violations: Vec::new(),
        relaxed_violations: Vec::new(),
        tight_case_i: Vec::new(),
    };
    for s in enumerate_sumfree(n)? {
        rep.sets += 1;
        rep.max_size = rep.max_size.max(s.len());
        let t = df_trichotomy_check(&s)?;
        if !t.any_relaxed() {
            rep.relaxed_violations.push(s.to_literal());
        }
        if !t.any() {
            rep.violations.push(s.to_literal());
        } else if t.only_tight_case_i() {
            rep.tight_case_i.push(s.to_literal());
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StadenRow {
    pub n: usize,
    pub m: usize,
    pub min: usize,
    /// Every `m`-subset attaining the minimum.
    pub argmin: Vec<String>,
    pub expected_min: usize,
    pub min_matches: bool,
    /// The only minimizer is `[n - m + 1, n]`.
    pub unique_top_interval: bool,
    pub matches_theorem: bool,
}

/// Schur triples (`x <= y`) of a mask-encoded set.
pub(crate) fn schur_count_mask(mask: u64) -> u32 {
    let mut count = 0;
    let mut rest = mask;
    while rest != 0 {
        let x = rest.trailing_zeros() as usize + 1;
        rest &= rest - 1;
        let at_least_x = !0u64 << (x - 1);
        count += ((mask >> x) & mask & at_least_x).count_ones();
    }
    count
}

/// Minimum Schur-triple count over `m`-subsets of `[n]`, for all `ceil(n/2) < m <= n`.
pub fn staden_verify(n: usize, max_n: usize) -> Result<Vec<StadenRow>> {
    if n > max_n || n > 63 {
        return Err(Error::Refused {
            what: format!("exhaustive Staden check with n = {n}"),
            limit: max_n.min(63) as u64,
            key: "staden_max_n",
        });
    }
    let (up, down) = (n.div_ceil(2), n / 2);
    let rows = (up + 1..=n)
        .into_par_iter()
        .map(|m| {
            let mut best = u32::MAX;
            let mut argmin = Vec::new();
            // Gosper's hack over all m-bit masks below 2^n
            let mut mask: u64 = (1 << m) - 1;
            while mask >> n == 0 {
                let c = schur_count_mask(mask);
                if c < best {
                    best = c;
                    argmin.clear();
                }
                if c == best {
                    argmin.push(mask);
                }
                let low = mask & mask.wrapping_neg();
                let ripple = mask + low;
                mask = (((ripple ^ mask) >> 2) / low) | ripple;
            }
            let expected = (m - up) * (m - down);
            let top = IntegerSet::interval(n, n - m + 1, n).expect("valid interval").mask().unwrap();
            let min_matches = best as usize == expected;
            let unique_top_interval = argmin == [top];
            StadenRow {
                n,
                m,
                min: best as usize,
                min_matches,
                unique_top_interval,
                matches_theorem: min_matches && unique_top_interval,
                argmin: argmin.into_iter().map(|a| IntegerSet::from_mask(n, a).to_literal()).collect(),
                expected_min: expected,
            }
        })
        .collect();
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedExtremal {
    pub n: usize,
    pub max_size: usize,
    pub expected_size: usize,
    /// `n >= 7`, where `floor(n/2) + 1` is claimed.
    pub claim_applies: bool,
    pub sets: Vec<String>,
    /// The maxima are exactly `[n/2, n]` (even `n`), or for odd `n` the
    /// four sets `[m, n-1]`, `{m} ∪ [m+2, n]`, `[m+1, n]` and the odd numbers, `m = (n-1)/2`.
    pub matches_named_sets: bool,
}

fn named_restricted_extremal(n: usize) -> Vec<IntegerSet> {
    let iv = |lo, hi| IntegerSet::interval(n, lo, hi).expect("valid interval");
    if n % 2 == 0 {
        vec![iv(n / 2, n)]
    } else {
        let m = (n - 1) / 2;
        vec![
            iv(m, n - 1),
            iv(m + 2, n).with(m).expect("m in range"),
            iv(m + 1, n),
            IntegerSet::from_members(n, (1..=n).step_by(2)).expect("odds in range"),
        ]
    }
}

/// All largest restricted sum-free subsets of `[n]`, in enumeration order.
pub fn restricted_sumfree_extremal(n: usize) -> Result<RestrictedExtremal> {
    let mut best = 0;
    let mut sets = Vec::new();
    for s in enumerate_restricted_sumfree(n)? {
        if s.len() > best {
            best = s.len();
            sets.clear();
        }
        if s.len() == best {
            sets.push(s);
        }
    }
    sets.sort();
    let mut named = if n >= 2 { named_restricted_extremal(n) } else { Vec::new() };
    named.sort();
    named.dedup();
    Ok(RestrictedExtremal {
        matches_named_sets: named == sets,
        n,
        max_size: best,
        expected_size: n / 2 + 1,
        claim_applies: n >= 7,
        sets: sets.iter().map(IntegerSet::to_literal).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triples::restricted_triple_count;
    use std::collections::BTreeSet;

    fn lit(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn sumfree_examples() {
        let sets: Vec<String> = enumerate_sumfree(4).unwrap().map(|s| s.to_literal()).collect();
        assert_eq!(sets, lit(&["{}", "1", "1,3", "1,4", "2", "2,3", "3", "3,4", "4"]));
        assert_eq!(enumerate_sumfree(1).unwrap().count(), 2);
        assert_eq!(enumerate_sumfree(0).unwrap().count(), 1);
        let max = enumerate_sumfree(10).unwrap().map(|s| s.len()).max();
        assert_eq!(max, Some(5));
        assert!(enumerate_sumfree(64).is_err());
    }

    #[test]
    fn sumfree_matches_filter() {
        for n in 0..=14 {
            let walked: Vec<u64> = enumerate_sumfree(n).unwrap().map(|s| s.mask().unwrap()).collect();
            let unique: BTreeSet<u64> = walked.iter().copied().collect();
            assert_eq!(unique.len(), walked.len());
            let filtered: BTreeSet<u64> = (0u64..1 << n)
                .filter(|&m| schur_triple_count(&IntegerSet::from_mask(n, m)) == 0)
                .collect();
            assert_eq!(unique, filtered, "n={n}");

            let walked: BTreeSet<u64> =
                enumerate_restricted_sumfree(n).unwrap().map(|s| s.mask().unwrap()).collect();
            let filtered: BTreeSet<u64> = (0u64..1 << n)
                .filter(|&m| restricted_triple_count(&IntegerSet::from_mask(n, m)) == 0)
                .collect();
            assert_eq!(walked, filtered, "n={n}");
        }
    }

    #[test]
    fn sumfree_max_size() {
        for n in 1..=20 {
            let max = enumerate_sumfree(n).unwrap().map(|s| s.len()).max().unwrap();
            assert_eq!(max, n.div_ceil(2));
        }
    }

    #[test]
    fn trichotomy_examples() {
        let s = IntegerSet::interval(9, 5, 9).unwrap();
        let t = df_trichotomy_check(&s).unwrap();
        assert!(t.case_iii && !t.case_i);
        let t = df_trichotomy_check(&IntegerSet::odds(9).unwrap()).unwrap();
        assert!(t.case_ii);
        let t = df_trichotomy_check(&IntegerSet::from_members(5, [1, 4]).unwrap()).unwrap();
        assert!(t.case_i && t.case_i_tight);
        assert!(df_trichotomy_check(&IntegerSet::from_members(5, [1, 2]).unwrap()).is_err());
        assert!(df_trichotomy_check(&IntegerSet::full(3)).is_err());
        // {1, 4} in [4]: size 2 > 8/5, not all odd, min 1 < 2
        let t = df_trichotomy_check(&IntegerSet::from_members(4, [1, 4]).unwrap()).unwrap();
        assert!(!t.any() && t.any_relaxed());
    }

    #[test]
    fn trichotomy_small_n() {
        let mut with_violations = Vec::new();
        for n in 1..=14 {
            let rep = trichotomy_report(n).unwrap();
            assert!(rep.relaxed_violations.is_empty(), "n={n}");
            if !rep.violations.is_empty() {
                with_violations.push(n);
            }
        }
        assert_eq!(with_violations, vec![4, 6, 7, 8, 9, 11, 12, 13, 14]);
        assert_eq!(trichotomy_report(8).unwrap().violations, lit(&["2,3,7,8"]));
    }

    #[test]
    fn schur_mask_count_agrees() {
        for mask in 0u64..1 << 12 {
            let s = IntegerSet::from_mask(12, mask);
            assert_eq!(schur_count_mask(mask) as usize, schur_triple_count(&s));
        }
    }

    #[test]
    fn staden_examples() {
        let rows = staden_verify(4, 16).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].m, rows[0].min), (3, 1));
        assert_eq!(rows[0].argmin, lit(&["1,3,4", "2..4"]));
        assert!(rows[0].min_matches && !rows[0].unique_top_interval);
        assert_eq!((rows[1].m, rows[1].min), (4, 4));
        let rows = staden_verify(10, 16).unwrap();
        let six = rows.iter().find(|r| r.m == 6).unwrap();
        assert_eq!(six.min, 1);
        assert_eq!(six.argmin, lit(&["5..10"]));
        assert!(rows.iter().all(|r| r.min_matches));
        assert!(matches!(staden_verify(17, 16), Err(Error::Refused { .. })));
    }

    #[test]
    fn staden_small_n() {
        for n in 4..=12 {
            for row in staden_verify(n, 16).unwrap() {
                assert!(row.min_matches, "{row:?}");
                if row.m == n - 1 {
                    // [n] minus 1 and [n] minus 2 lose the same n - 1 triples
                    let second = IntegerSet::full(n).without(2).to_literal();
                    assert_eq!(row.argmin.len(), 2);
                    assert!(row.argmin.contains(&second));
                } else {
                    assert!(row.matches_theorem, "{row:?}");
                }
            }
        }
    }

    #[test]
    fn restricted_extremal_examples() {
        let e = restricted_sumfree_extremal(8).unwrap();
        assert_eq!(e.max_size, 5);
        assert_eq!(e.sets, lit(&["4..8"]));
        let e = restricted_sumfree_extremal(7).unwrap();
        assert_eq!(e.max_size, 4);
        assert!(!e.matches_named_sets);
        let got: BTreeSet<String> = e.sets.into_iter().collect();
        let want: BTreeSet<String> =
            lit(&["3..6", "3,5..7", "4..7", "1,3,5,7", "1,2,4,7", "2,3,6,7"]).into_iter().collect();
        assert_eq!(got, want);
        assert!(!restricted_sumfree_extremal(6).unwrap().claim_applies);
    }

    #[test]
    fn restricted_extremal_size() {
        for n in 7..=16 {
            let e = restricted_sumfree_extremal(n).unwrap();
            assert_eq!(e.max_size, e.expected_size, "n={n}");
            assert_eq!(e.matches_named_sets, n != 7 && n != 9, "n={n}");
        }
        assert_eq!(restricted_sumfree_extremal(9).unwrap().sets.len(), 5);
    }
}

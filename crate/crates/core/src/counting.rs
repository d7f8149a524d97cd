//! Exact counts of rainbow sum-free colorings, `g(A, r)`.
//!
//! Two independent engines: [`count_naive`] enumerates labeled colorings and
//! serves as the oracle; [`count_partition`] enumerates unlabeled partitions
//! of `A` (rainbow-freeness only depends on which elements share a color)
//! and weights each partition with `j` classes by `r (r-1) ... (r-j+1)`.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bigcount::BigCount;
use crate::error::{Error, Result};
use crate::set::IntegerSet;
use crate::triples::restricted_triples;

/// A total map from the members of a set to colors `1..=r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    set: IntegerSet,
    members: Vec<usize>,
    colors: Vec<u32>,
}

impl Coloring {
    /// `colors[i]` is the color of the `i`-th smallest member.
    pub fn new(set: IntegerSet, colors: Vec<u32>, r: u32) -> Result<Self> {
        let members = set.members();
        if members.len() != colors.len() {
            return Err(Error::domain(format!(
                "coloring has {} colors for {} elements",
                colors.len(),
                members.len()
            )));
        }
        if let Some(&c) = colors.iter().find(|&&c| c == 0 || c > r) {
            return Err(Error::domain(format!("color {c} is outside 1..={r}")));
        }
        Ok(Coloring { set, members, colors })
    }

    pub fn set(&self) -> &IntegerSet {
        &self.set
    }

    pub fn color_of(&self, x: usize) -> Option<u32> {
        self.members
            .binary_search(&x)
            .ok()
            .map(|i| self.colors[i])
    }

    /// `(element, color)` pairs in increasing element order.
    pub fn assignments(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.members.iter().copied().zip(self.colors.iter().copied())
    }

    pub fn is_rainbow_sum_free(&self) -> bool {
        restricted_triples(&self.set).iter().all(|t| {
            let [a, b, c] = t.elements().map(|x| self.color_of(x).unwrap());
            a == b || b == c || a == c
        })
    }
}

/// `counts[j]`: partitions of `A` into exactly `j` nonempty unlabeled classes
/// with no restricted triple split across three classes; `j` runs to `min(r, |A|)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionProfile {
    pub counts: Vec<BigCount>,
}

impl PartitionProfile {
    pub fn get(&self, j: usize) -> BigCount {
        self.counts.get(j).cloned().unwrap_or_else(BigCount::zero)
    }

    /// `sum_j p_j * r (r-1) ... (r-j+1)`.
    pub fn labeled_count(&self, r: u32) -> BigCount {
        let mut total = BigUint::zero();
        for (j, p) in self.counts.iter().enumerate() {
            if !p.is_zero() {
                total += &p.0 * BigCount::falling_factorial(r as u64, j as u64).0;
            }
        }
        BigCount(total)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Partition,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Naive => "naive",
            Method::Partition => "partition",
        })
    }
}

/// For the `i`-th element of `order`, the index pairs of earlier elements
/// that complete a restricted triple with it as the sum.
fn closing_pairs(order: &[usize], set: &IntegerSet) -> Vec<Vec<(u32, u32)>> {
    let mut pos = vec![u32::MAX; set.n() + 1];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i as u32;
    }
    let mut closing = vec![Vec::new(); order.len()];
    for t in restricted_triples(set) {
        closing[pos[t.c] as usize].push((pos[t.a], pos[t.b]));
    }
    closing
}

/// Backtracking over labeled colorings, elements in increasing order; a
/// triple is checked once its sum has been colored.
pub fn count_naive(set: &IntegerSet, r: u32) -> BigCount {
    let order = set.members();
    let closing = closing_pairs(&order, set);
    let mut colors = vec![0u32; order.len()];
    let mut leaves = 0u64;

    fn go(i: usize, r: u32, closing: &[Vec<(u32, u32)>], colors: &mut [u32], leaves: &mut u64) {
        if i == colors.len() {
            *leaves += 1;
            return;
        }
        for c in 0..r {
            let ok = closing[i].iter().all(|&(a, b)| {
                let (ca, cb) = (colors[a as usize], colors[b as usize]);
                ca == cb || ca == c || cb == c
            });
            if ok {
                colors[i] = c;
                go(i + 1, r, closing, colors, leaves);
            }
        }
    }

    go(0, r, &closing, &mut colors, &mut leaves);
    BigCount::from(leaves)
}

/// Counts via canonical set partitions (restricted growth strings) with at
/// most `r` classes, pruning a prefix as soon as some triple is tricolored.
///
/// Elements lying in no triple are placed last; their completions are
/// counted in closed form rather than enumerated.
pub fn count_partition(set: &IntegerSet, r: u32) -> (BigCount, PartitionProfile) {
    let members = set.members();
    let triples = restricted_triples(set);
    let mut constrained = vec![false; set.n() + 1];
    for t in &triples {
        for x in t.elements() {
            constrained[x] = true;
        }
    }
    let mut order: Vec<usize> = members.iter().copied().filter(|&x| constrained[x]).collect();
    let free_from = order.len();
    order.extend(members.iter().copied().filter(|&x| !constrained[x]));
    let closing = closing_pairs(&order, set);

    let max_classes = (r as usize).min(order.len());
    let free = order.len() - free_from;

    // prefix_leaves[u]: valid partitions of the constrained prefix using u classes
    let mut prefix_leaves = vec![0u64; max_classes + 1];
    let mut labels = vec![0u32; free_from];

    fn go(
        i: usize,
        used: usize,
        max_classes: usize,
        closing: &[Vec<(u32, u32)>],
        labels: &mut [u32],
        prefix_leaves: &mut [u64],
    ) {
        if i == labels.len() {
            prefix_leaves[used] += 1;
            return;
        }
        let limit = (used + 1).min(max_classes);
        for c in 0..limit as u32 {
            let ok = closing[i].iter().all(|&(a, b)| {
                let (ca, cb) = (labels[a as usize], labels[b as usize]);
                ca == cb || ca == c || cb == c
            });
            if ok {
                labels[i] = c;
                let used_next = used.max(c as usize + 1);
                go(i + 1, used_next, max_classes, closing, labels, prefix_leaves);
            }
        }
    }

    go(0, 0, max_classes, &closing, &mut labels, &mut prefix_leaves);

    let ext = extension_table(free, max_classes);
    let mut counts = vec![BigUint::zero(); max_classes + 1];
    for (u, &leaves) in prefix_leaves.iter().enumerate() {
        if leaves == 0 {
            continue;
        }
        for (j, ways) in ext[u].iter().enumerate() {
            if !ways.is_zero() {
                counts[j] += ways * leaves;
            }
        }
    }
    let profile = PartitionProfile {
        counts: counts.into_iter().map(BigCount).collect(),
    };
    (profile.labeled_count(r), profile)
}

/// `table[u][j]`: ways to place `k` further unconstrained elements into
/// classes, starting from `u` used classes and ending with exactly `j`,
/// never exceeding `max_classes`.
fn extension_table(k: usize, max_classes: usize) -> Vec<Vec<BigUint>> {
    let m = max_classes;
    let mut cur: Vec<Vec<BigUint>> = (0..=m)
        .map(|u| (0..=m).map(|j| BigUint::from((u == j) as u8)).collect())
        .collect();
    for _ in 0..k {
        let mut next = vec![vec![BigUint::zero(); m + 1]; m + 1];
        for u in 0..=m {
            for j in 0..=m {
                let mut v = &cur[u][j] * u;
                if u < m {
                    v += &cur[u + 1][j];
                }
                next[u][j] = v;
            }
        }
        cur = next;
    }
    cur
}

pub fn count(set: &IntegerSet, r: u32, method: Method) -> BigCount {
    match method {
        Method::Naive => count_naive(set, r),
        Method::Partition => count_partition(set, r).0,
    }
}

/// Families with a closed-form count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosedFormFamily {
    I1,
    I2,
    I3,
    /// `C(r,2) (2^n - 2) + r`, the two-color lower bound for `[n]`.
    Eq1LowerBound,
}

impl std::str::FromStr for ClosedFormFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I1" => Ok(ClosedFormFamily::I1),
            "I2" => Ok(ClosedFormFamily::I2),
            "I3" => Ok(ClosedFormFamily::I3),
            "eq1-lower-bound" | "eq1" => Ok(ClosedFormFamily::Eq1LowerBound),
            other => Err(Error::domain(format!("unknown closed-form family {other:?}"))),
        }
    }
}

/// Integer forms: `g(I1) = r^(n/2-2) (3r-2)^2`, `g(I2) = r^(n/2+1)`,
/// `g(I3) = r^(ceil(n/2)-1) (3r-2)`.
pub fn closed_form(family: ClosedFormFamily, n: u64, r: u64) -> Result<BigCount> {
    // r = 0 makes every family count 0 through the power of r
    let tri = BigUint::from((3 * r).saturating_sub(2));
    match family {
        ClosedFormFamily::I1 => {
            if n % 2 != 0 || n < 6 {
                return Err(Error::domain("I1 closed form needs even n >= 6"));
            }
            Ok(BigCount(BigCount::pow(r, n / 2 - 2).0 * &tri * &tri))
        }
        ClosedFormFamily::I2 => {
            if n % 2 != 0 || n < 6 {
                return Err(Error::domain("I2 closed form needs even n >= 6"));
            }
            Ok(BigCount::pow(r, n / 2 + 1))
        }
        ClosedFormFamily::I3 => {
            if n % 2 != 1 || n < 5 {
                return Err(Error::domain("I3 closed form needs odd n >= 5"));
            }
            Ok(BigCount(BigCount::pow(r, n.div_ceil(2) - 1).0 * tri))
        }
        ClosedFormFamily::Eq1LowerBound => {
            if n == 0 {
                return Err(Error::domain("the two-color lower bound needs n >= 1"));
            }
            Ok(two_color_lower_bound(n, r))
        }
    }
}

/// Colorings of an `size`-element set that use at most two colors:
/// `C(r,2) (2^size - 2) + r`. Every such coloring is rainbow sum-free.
pub fn two_color_lower_bound(size: u64, r: u64) -> BigCount {
    let pairs = BigCount::binomial(r, 2).0;
    let two_colored = BigCount::pow(2, size).0 - BigUint::from(2u8);
    BigCount(pairs * two_colored + BigUint::from(r))
}

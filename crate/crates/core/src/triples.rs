//! Schur triples, restricted triples and sumset arithmetic.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::IntegerSet;

/// `(a, b, c)` with `a < b < c` and `a + b = c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RestrictedTriple {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl RestrictedTriple {
    pub fn new(a: usize, b: usize, c: usize) -> Option<Self> {
        (a >= 1 && a < b && a + b == c).then_some(RestrictedTriple { a, b, c })
    }

    pub fn elements(&self) -> [usize; 3] {
        [self.a, self.b, self.c]
    }

    pub fn contains(&self, x: usize) -> bool {
        self.a == x || self.b == x || self.c == x
    }
}

/// `(x, y, z)` with `x <= y < z` and `x + y = z`; `x = y` is allowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SchurTriple {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl SchurTriple {
    pub fn new(x: usize, y: usize, z: usize) -> Option<Self> {
        (x >= 1 && x <= y && x + y == z).then_some(SchurTriple { x, y, z })
    }
}

/// All restricted triples inside `a`, in lexicographic order.
pub fn restricted_triples(set: &IntegerSet) -> Vec<RestrictedTriple> {
    let members = set.members();
    let mut out = Vec::new();
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            if set.contains(a + b) {
                out.push(RestrictedTriple { a, b, c: a + b });
            }
        }
    }
    out
}

/// `s(A)`, the number of restricted triples in `A`.
pub fn restricted_triple_count(set: &IntegerSet) -> usize {
    let members = set.members();
    let mut count = 0;
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            if a + b > set.n() {
                break;
            }
            if set.contains(a + b) {
                count += 1;
            }
        }
    }
    count
}

/// Restricted triples of `A` that contain `t`.
pub fn triples_through(t: usize, set: &IntegerSet) -> Result<Vec<RestrictedTriple>> {
    if !set.contains(t) {
        return Err(Error::domain(format!("{t} is not an element of {set}")));
    }
    Ok(restricted_triples(set)
        .into_iter()
        .filter(|tr| tr.contains(t))
        .collect())
}

/// `s(t, A)` without materializing the triples: `t` as the sum and `t` as a summand.
pub fn triples_through_count(t: usize, set: &IntegerSet) -> usize {
    if !set.contains(t) {
        return 0;
    }
    let as_sum = set
        .iter()
        .take_while(|&x| 2 * x < t)
        .filter(|&x| set.contains(t - x))
        .count();
    let as_summand = set
        .iter()
        .filter(|&x| x != t && set.contains(t + x))
        .count();
    as_sum + as_summand
}

/// Classical Schur triples of `A` (summands may coincide).
pub fn schur_triples(set: &IntegerSet) -> Vec<SchurTriple> {
    let members = set.members();
    let mut out = Vec::new();
    for (i, &x) in members.iter().enumerate() {
        for &y in &members[i..] {
            if set.contains(x + y) {
                out.push(SchurTriple { x, y, z: x + y });
            }
        }
    }
    out
}

pub fn schur_triple_count(set: &IntegerSet) -> usize {
    let members = set.members();
    let mut count = 0;
    for (i, &x) in members.iter().enumerate() {
        for &y in &members[i..] {
            if x + y > set.n() {
                break;
            }
            if set.contains(x + y) {
                count += 1;
            }
        }
    }
    count
}

/// Closed form for `s([n])`: `(n^2 - 2n)/4` for even `n`, `(n - 1)^2/4` for odd `n`.
pub fn full_interval_triple_count(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    if n % 2 == 0 {
        (n * n - 2 * n) / 4
    } else {
        (n - 1) * (n - 1) / 4
    }
}

/// `u128` version of [`full_interval_triple_count`] for very large `n`.
pub fn full_interval_triple_count_wide(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    if n % 2 == 0 {
        (n / 2) * (n / 2 - 1)
    } else {
        ((n - 1) / 2) * ((n - 1) / 2)
    }
}

/// A finite set of integers that may leave `[n]`; `ambient` records the `n`
/// of the operands it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntSet {
    pub ambient: usize,
    pub values: BTreeSet<i64>,
}

impl IntSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, v: i64) -> bool {
        self.values.contains(&v)
    }

    /// The part of the set inside `[ambient]`.
    pub fn clip(&self) -> IntegerSet {
        let members = self
            .values
            .iter()
            .filter(|&&v| v >= 1 && v as usize <= self.ambient)
            .map(|&v| v as usize);
        IntegerSet::from_members(self.ambient, members).expect("clipped to range")
    }

    pub fn meets(&self, set: &IntegerSet) -> bool {
        self.values
            .iter()
            .any(|&v| v >= 1 && set.contains(v as usize))
    }
}

/// `A + B`.
pub fn sumset(a: &IntegerSet, b: &IntegerSet) -> IntSet {
    let values = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| (x + y) as i64))
        .collect();
    IntSet {
        ambient: a.n().max(b.n()),
        values,
    }
}

/// `A - B`.
pub fn diffset(a: &IntegerSet, b: &IntegerSet) -> IntSet {
    let values = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| x as i64 - y as i64))
        .collect();
    IntSet {
        ambient: a.n().max(b.n()),
        values,
    }
}

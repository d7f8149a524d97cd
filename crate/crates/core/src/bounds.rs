//! Upper bounds on `g(A, r)` and the auxiliary counts they are built from.
//!
//! The matching bound: fix `t ∈ A` and a maximum matching `M` of the link
//! graph `L_t(A)`. Given the color of `t`, each matched pair `{x, y}` has
//! exactly `3r - 2` colorings that avoid a rainbow `{t, x, y}`, so
//! `g(A, r) <= r^(|A| - 2k) (3r - 2)^k` with `k = |M|`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Pow, Signed};
use serde::{Deserialize, Serialize};

use crate::bigcount::BigCount;
use crate::counting::count_partition;
use crate::error::{Error, Result};
use crate::ratio::Ratio;
use crate::real::{Real, RealCtx};
use crate::set::IntegerSet;
use crate::triples::restricted_triple_count;

/// Graph on `A \ {t}` joining `x, y` when `{t, x, y}` is a restricted triple of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkGraph {
    pub t: usize,
    pub vertices: Vec<usize>,
    /// `(x, y)` with `x < y`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl LinkGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg: BTreeMap<usize, usize> = BTreeMap::new();
        for &(x, y) in &self.edges {
            *deg.entry(x).or_default() += 1;
            *deg.entry(y).or_default() += 1;
        }
        deg.values().copied().max().unwrap_or(0)
    }
}

fn link_edges(t: usize, set: &IntegerSet) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for x in set.iter() {
        if x == t {
            continue;
        }
        // t as the sum
        if 2 * x < t && set.contains(t - x) {
            edges.push((x, t - x));
        }
        // t as a summand
        if set.contains(x + t) {
            edges.push((x, x + t));
        }
    }
    edges.sort_unstable();
    edges
}

pub fn link_graph(t: usize, set: &IntegerSet) -> Result<LinkGraph> {
    if !set.contains(t) {
        return Err(Error::domain(format!("{t} is not an element of {set}")));
    }
    Ok(LinkGraph {
        t,
        vertices: set.iter().filter(|&x| x != t).collect(),
        edges: link_edges(t, set),
    })
}

/// Maximum matching of a graph with maximum degree at most 2, by splitting
/// it into paths (`e` edges: `floor((e + 1) / 2)`) and cycles (`l` edges: `floor(l / 2)`).
pub fn deg2_max_matching(edges: &[(usize, usize)]) -> Result<usize> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(x, y) in edges {
        if x == y {
            return Err(Error::domain(format!("loop at {x}")));
        }
        adj.entry(x).or_default().push(y);
        adj.entry(y).or_default().push(x);
    }
    if let Some((v, nb)) = adj.iter().find(|(_, nb)| nb.len() > 2) {
        return Err(Error::domain(format!("vertex {v} has degree {}", nb.len())));
    }
    let mut seen: BTreeMap<usize, bool> = adj.keys().map(|&v| (v, false)).collect();
    let mut total = 0;
    for &start in adj.keys() {
        if seen[&start] {
            continue;
        }
        let (mut vertices, mut degree_sum) = (0usize, 0usize);
        let mut stack = vec![start];
        seen.insert(start, true);
        while let Some(v) = stack.pop() {
            vertices += 1;
            degree_sum += adj[&v].len();
            for &w in &adj[&v] {
                if !seen[&w] {
                    seen.insert(w, true);
                    stack.push(w);
                }
            }
        }
        let e = degree_sum / 2;
        total += if e == vertices { e / 2 } else { e.div_ceil(2) };
    }
    Ok(total)
}

/// `k(t, A)`.
pub fn max_matching(graph: &LinkGraph) -> usize {
    deg2_max_matching(&graph.edges).expect("link graphs have maximum degree 2")
}

pub fn matching_number(t: usize, set: &IntegerSet) -> Result<usize> {
    Ok(max_matching(&link_graph(t, set)?))
}

/// Value of the matching bound for a given `k`.
pub fn matching_bound_value(size: usize, k: usize, r: u64) -> BigCount {
    let rest = BigCount::pow(r, (size - 2 * k) as u64).0;
    BigCount(rest * Pow::pow(BigUint::from((3 * r).saturating_sub(2)), k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingBound {
    pub value: BigCount,
    /// An element attaining the minimum, with its matching number.
    pub t: Option<usize>,
    pub k: usize,
    pub applicable: bool,
}

/// `min over t in A of r^(|A| - 2k(t,A)) (3r - 2)^k(t,A)`.
///
/// For `r >= 3` the per-element value falls as `k` grows, so the minimum
/// sits at the largest matching number; for `r <= 2` every element gives `r^|A|`.
pub fn matching_bound(set: &IntegerSet, r: u32) -> MatchingBound {
    let size = set.len();
    let best = set
        .iter()
        .map(|t| (t, max_matching(&LinkGraph { t, vertices: Vec::new(), edges: link_edges(t, set) })))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)));
    let (t, k) = match best {
        Some((t, k)) => (Some(t), k),
        None => (None, 0),
    };
    let k = if r >= 3 { k } else { 0 };
    MatchingBound {
        value: matching_bound_value(size, k, r as u64),
        t,
        k,
        applicable: r >= 3 && size > 0,
    }
}

/// Fast path used by the extremal search: the largest `k(t, A)` over `t`.
pub(crate) fn max_matching_number_mask(mask: u64, n: usize) -> usize {
    let contains = |x: usize| x >= 1 && x <= n && mask >> (x - 1) & 1 == 1;
    let members = crate::set::mask_members(mask);
    let mut best = 0;
    let mut nb = vec![[0usize; 2]; n + 1];
    let mut deg = vec![0u8; n + 1];
    let mut seen = vec![false; n + 1];
    for &t in &members {
        deg.iter_mut().for_each(|d| *d = 0);
        let mut any = false;
        for &x in &members {
            if x == t {
                continue;
            }
            let mut link = |y: usize| {
                nb[x][deg[x] as usize] = y;
                deg[x] += 1;
                nb[y][deg[y] as usize] = x;
                deg[y] += 1;
            };
            if 2 * x < t && contains(t - x) {
                link(t - x);
                any = true;
            }
            if contains(x + t) {
                link(x + t);
                any = true;
            }
        }
        if !any {
            continue;
        }
        seen.iter_mut().for_each(|s| *s = false);
        let mut k = 0;
        for &v in &members {
            if seen[v] || deg[v] == 0 {
                continue;
            }
            let (mut verts, mut dsum) = (0usize, 0usize);
            let mut stack = vec![v];
            seen[v] = true;
            while let Some(u) = stack.pop() {
                verts += 1;
                dsum += deg[u] as usize;
                for &w in &nb[u][..deg[u] as usize] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            let e = dsum / 2;
            k += if e == verts { e / 2 } else { e.div_ceil(2) };
        }
        best = best.max(k);
    }
    best
}

/// Result of probing the large-matching criterion for sets of size
/// `ceil(n/2) + c` with `c > 1` and `r >= 8`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargeMatchingCheck {
    pub applicable: bool,
    pub reason: Option<String>,
    pub c: i64,
    /// `(t, k(t, A))` for every `t ∈ A`.
    pub matching_numbers: Vec<(usize, usize)>,
    /// Elements with `k(t, A) >= 2(c - 1)`; any one forces `g < r^(ceil(n/2) + 1)`.
    pub power_witnesses: Vec<usize>,
    /// Elements with `k(t, A) >= 2(c - 1) + 1`; any one forces `g < r^(ceil(n/2)) (3 - 2/r)`.
    pub three_witnesses: Vec<usize>,
    pub power_bound: BigCount,
    pub three_bound: BigCount,
}

impl LargeMatchingCheck {
    pub fn implies_power_bound(&self) -> bool {
        self.applicable && !self.power_witnesses.is_empty()
    }

    pub fn implies_three_bound(&self) -> bool {
        self.applicable && !self.three_witnesses.is_empty()
    }
}

pub fn prop51_check(set: &IntegerSet, r: u32) -> LargeMatchingCheck {
    let n = set.n();
    let half = n.div_ceil(2);
    let c = set.len() as i64 - half as i64;
    let power_bound = BigCount::pow(r as u64, half as u64 + 1);
    let three_bound = BigCount(
        BigCount::pow(r as u64, half.saturating_sub(1) as u64).0
            * BigUint::from((3 * r as u64).saturating_sub(2)),
    );
    let reason = if r < 8 {
        Some(format!("needs r >= 8, got r = {r}"))
    } else if c <= 1 {
        Some(format!("needs |A| >= ceil(n/2) + 2, got c = {c}"))
    } else {
        None
    };
    let matching_numbers: Vec<(usize, usize)> = set
        .iter()
        .map(|t| (t, matching_number(t, set).unwrap()))
        .collect();
    let (power_witnesses, three_witnesses) = if reason.is_none() {
        let need = 2 * (c as usize - 1);
        (
            matching_numbers.iter().filter(|p| p.1 >= need).map(|p| p.0).collect(),
            matching_numbers.iter().filter(|p| p.1 > need).map(|p| p.0).collect(),
        )
    } else {
        (Vec::new(), Vec::new())
    };
    LargeMatchingCheck {
        applicable: reason.is_none(),
        reason,
        c,
        matching_numbers,
        power_witnesses,
        three_witnesses,
        power_bound,
        three_bound,
    }
}

/// Bound for sets with many restricted triples:
/// `g(A, r) <= r^|A| ((3r - 2) / r^2)^(3 mu n / 2)` whenever `s(A) >= mu n^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManySchurBound {
    pub mu: Ratio,
    /// The exponent `e` in `r^e`.
    pub exponent: Real,
    pub value: Real,
    pub applicable: bool,
    pub reason: Option<String>,
    size: usize,
    r: u32,
    /// `3 mu n / 2`, the power of `(3r - 2) / r^2`.
    shrink: Ratio,
}

impl ManySchurBound {
    /// Exact test of `g <= value`: with `shrink = p/q`, compares
    /// `g^q r^(2p)` against `r^(q |A|) (3r - 2)^p`.
    pub fn dominates(&self, g: &BigCount) -> bool {
        let p = self.shrink.0.numer().magnitude().clone();
        let q = self.shrink.0.denom().magnitude().clone();
        let p: u64 = u64::try_from(&p).expect("exponent fits");
        let q: u64 = u64::try_from(&q).expect("exponent fits");
        let r = BigUint::from(self.r);
        let lhs = Pow::pow(&g.0, q) * Pow::pow(&r, 2 * p);
        let rhs = Pow::pow(&r, q * self.size as u64) * Pow::pow(BigUint::from((3 * self.r as u64).saturating_sub(2)), p);
        lhs <= rhs
    }
}

/// `mu` defaults to `s(A) / n^2`, the largest value the hypothesis allows.
pub fn many_schur_bound(set: &IntegerSet, r: u32, mu: Option<Ratio>) -> ManySchurBound {
    let n = set.n() as i64;
    let s = restricted_triple_count(set) as i64;
    let mu = mu.unwrap_or_else(|| {
        if n == 0 {
            Ratio::integer(0)
        } else {
            Ratio::new(s, n * n)
        }
    });
    let mut reason = None;
    if r < 4 {
        reason = Some(format!("needs r >= 4, got r = {r}"));
    }
    if mu.0.is_negative() {
        reason = Some("mu must be nonnegative".to_string());
    } else if mu.0.clone() * BigInt::from(n * n) > BigRational::from_integer(BigInt::from(s)) {
        reason = Some(format!("s(A) = {s} is below mu n^2"));
    }
    let usable = reason.is_none() || r < 4 && !mu.0.is_negative();
    let shrink = if usable && r >= 3 {
        Ratio(mu.0.clone() * BigInt::from(3 * n) / BigInt::from(2))
    } else {
        Ratio::integer(0)
    };

    let mut ctx = RealCtx::new();
    let size = ctx.int(set.len() as u64);
    let exponent = if r >= 2 {
        // |A| - shrink * (2 - log_r(3r - 2))
        let log_r = ctx.log2(&ctx.int(r as u64));
        let log_t = ctx.log2(&ctx.int((3 * r as u64).saturating_sub(2).max(1)));
        let two = ctx.int(2);
        let per = ctx.sub(&two, &ctx.div(&log_t, &log_r));
        let sh = ctx.ratio(&shrink.0);
        ctx.sub(&size, &ctx.mul(&sh, &per))
    } else {
        size
    };
    let value = if r >= 2 {
        let log_r = ctx.log2(&ctx.int(r as u64));
        let e2 = ctx.mul(&exponent, &log_r);
        ctx.exp2(&e2)
    } else {
        ctx.int(r as u64)
    };
    ManySchurBound {
        mu,
        exponent: ctx.to_real(&exponent),
        value: ctx.to_real(&value),
        applicable: reason.is_none(),
        reason,
        size: set.len(),
        r,
        shrink,
    }
}

/// `C(r,2) 2^a + 2^(n - n / (26 log2 n))`; asymptotic, reported as information only.
pub fn dense_bound(n: u64, r: u64, a: u64) -> Result<Real> {
    if n < 2 {
        return Err(Error::domain("the dense bound needs n >= 2"));
    }
    if a > n {
        return Err(Error::domain(format!("set size {a} exceeds n = {n}")));
    }
    let mut ctx = RealCtx::new();
    let head = ctx.big(&(BigCount::binomial(r, 2).0 * Pow::pow(BigUint::from(2u8), a)));
    let nn = ctx.int(n);
    let log_n = ctx.log2(&nn);
    let gap = ctx.div(&nn, &ctx.mul(&ctx.int(26), &log_n));
    let tail = ctx.exp2(&ctx.sub(&nn, &gap));
    Ok(ctx.to_real(&ctx.add(&head, &tail)))
}

/// `dense_bound / 2^n`, which tends to `C(r,2) 2^(a-n)` plus a vanishing term.
pub fn dense_bound_ratio(n: u64, r: u64, a: u64) -> Result<Real> {
    let v = dense_bound(n, r, a)?;
    let mut ctx = RealCtx::new();
    let x = v.to_float(&mut ctx);
    let scale = ctx.exp2(&ctx.int(n));
    Ok(ctx.to_real(&ctx.div(&x, &scale)))
}

/// Pairs `a < b` of `A` lying in no restricted triple of `A`, split by why.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonTriplePairs {
    pub pairs: Vec<(usize, usize)>,
    /// `b = 2a`, `a + b` in `[n] \ A`.
    pub doubled_sum_missing: usize,
    /// `b = 2a`, `a + b > n`.
    pub doubled_sum_overflow: usize,
    /// `b - a` in `[n] \ A`, `a + b` in `[n] \ A`.
    pub gap_missing_sum_missing: usize,
    /// `b - a` in `[n] \ A`, `a + b > n`.
    pub gap_missing_sum_overflow: usize,
    /// `(1 - |A|/n) n^2 + n/6`.
    pub bound: Ratio,
    pub holds: bool,
    /// Same with `n/6` replaced by `floor(n/2) - floor(n/3)`, the exact
    /// number of `a` with `2a <= n < 3a`.
    pub integral_bound: u64,
    pub holds_integral: bool,
}

pub fn non_triple_pairs(set: &IntegerSet) -> NonTriplePairs {
    let n = set.n();
    let members = set.members();
    let mut out = NonTriplePairs {
        pairs: Vec::new(),
        doubled_sum_missing: 0,
        doubled_sum_overflow: 0,
        gap_missing_sum_missing: 0,
        gap_missing_sum_overflow: 0,
        bound: Ratio::integer(0),
        holds: true,
        integral_bound: 0,
        holds_integral: true,
    };
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            let sum_in = set.contains(a + b);
            let gap_in = b != 2 * a && set.contains(b - a);
            if sum_in || gap_in {
                continue;
            }
            out.pairs.push((a, b));
            let overflow = a + b > n;
            match (b == 2 * a, overflow) {
                (true, false) => out.doubled_sum_missing += 1,
                (true, true) => out.doubled_sum_overflow += 1,
                (false, false) => out.gap_missing_sum_missing += 1,
                (false, true) => out.gap_missing_sum_overflow += 1,
            }
        }
    }
    let (n, k) = (n as i64, members.len() as i64);
    let bound = if n == 0 {
        Ratio::integer(0)
    } else {
        Ratio(BigRational::new(BigInt::from(6 * (n * n - k * n) + n), BigInt::from(6)))
    };
    out.holds = BigRational::from_integer(BigInt::from(out.pairs.len())) <= bound.0;
    out.bound = bound;
    out.integral_bound = (n * n - k * n + n / 2 - n / 3) as u64;
    out.holds_integral = out.pairs.len() as u64 <= out.integral_bound;
    out
}

/// Greedy family of pairwise disjoint pairs `{a, b} ⊆ A \ (excluded ∪ {t})`
/// with `{a, b, t}` a restricted triple.
///
/// Candidates come in two kinds: `a + b = t` (disjoint by construction) and
/// `t + a = b` with `t < a <= n - t`. The first kind is tried first when
/// `5t > 2n`, the second otherwise; then every remaining completing pair is
/// offered in increasing order until the family is maximal.
pub fn disjoint_pair_cover(t: usize, set: &IntegerSet, excluded: &IntegerSet) -> Result<Vec<(usize, usize)>> {
    let n = set.n();
    if t == 0 || t > n {
        return Err(Error::domain(format!("{t} is not in [1, {n}]")));
    }
    let usable = |x: usize| x != t && set.contains(x) && !excluded.contains(x);
    let sum_pairs: Vec<(usize, usize)> = (1..t).filter(|&a| 2 * a < t).map(|a| (a, t - a)).collect();
    let shift_core: Vec<(usize, usize)> = (t + 1..=n.saturating_sub(t)).map(|a| (a, a + t)).collect();
    let shift_rest: Vec<(usize, usize)> = (1..=n.saturating_sub(t))
        .filter(|&a| a != t && !(t < a && a <= n - t))
        .map(|a| (a, a + t))
        .collect();
    let order: Vec<&Vec<(usize, usize)>> = if 5 * t > 2 * n {
        vec![&sum_pairs, &shift_core, &shift_rest]
    } else {
        vec![&shift_core, &sum_pairs, &shift_rest]
    };
    let mut used = vec![false; n + 1];
    let mut family = Vec::new();
    for group in order {
        for &(a, b) in group {
            if usable(a) && usable(b) && !used[a] && !used[b] {
                used[a] = true;
                used[b] = true;
                family.push((a, b));
            }
        }
    }
    Ok(family)
}

/// One row of a bound report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    pub value: BoundValue,
    pub applicable: bool,
    /// Asymptotic statements evaluated at small `n`; never asserted.
    pub informational: bool,
    /// `value >= g(A, r)` when the exact count is known.
    pub dominates_exact: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "v", rename_all = "lowercase")]
pub enum BoundValue {
    Exact(BigCount),
    Rational(Ratio),
    Real(Real),
}

/// Every bound that applies to one `(A, r)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub set: String,
    pub n: usize,
    pub r: u32,
    pub size: usize,
    pub triples: usize,
    pub exact: Option<BigCount>,
    pub entries: Vec<BoundEntry>,
}

fn params<const N: usize>(kv: [(&str, String); N]) -> BTreeMap<String, String> {
    kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Builds the report; `exact_limit` caps `|A|` for computing `g(A, r)` itself.
pub fn bound_report(set: &IntegerSet, r: u32, mu: Option<Ratio>, exact_limit: usize) -> BoundReport {
    let exact = (set.len() <= exact_limit).then(|| count_partition(set, r).0);
    let mut entries = Vec::new();

    let trivial = BigCount::pow(r as u64, set.len() as u64);
    entries.push(BoundEntry {
        name: "trivial".into(),
        parameters: BTreeMap::new(),
        dominates_exact: exact.as_ref().map(|g| g <= &trivial),
        value: BoundValue::Exact(trivial),
        applicable: true,
        informational: false,
    });

    let mb = matching_bound(set, r);
    entries.push(BoundEntry {
        name: "matching".into(),
        parameters: params([
            ("t", mb.t.map(|t| t.to_string()).unwrap_or_default()),
            ("k", mb.k.to_string()),
        ]),
        dominates_exact: exact.as_ref().map(|g| g <= &mb.value),
        value: BoundValue::Exact(mb.value.clone()),
        applicable: mb.applicable,
        informational: false,
    });

    let lm = prop51_check(set, r);
    for (name, bound, holds) in [
        ("large_matching_power", &lm.power_bound, lm.implies_power_bound()),
        ("large_matching_three", &lm.three_bound, lm.implies_three_bound()),
    ] {
        entries.push(BoundEntry {
            name: name.into(),
            parameters: params([("c", lm.c.to_string()), ("strict", "true".to_string())]),
            dominates_exact: holds.then(|| exact.as_ref().map(|g| g < bound)).flatten(),
            value: BoundValue::Exact(bound.clone()),
            applicable: holds,
            informational: false,
        });
    }

    let ms = many_schur_bound(set, r, mu);
    entries.push(BoundEntry {
        name: "many_triples".into(),
        parameters: params([("mu", ms.mu.to_string()), ("exponent", ms.exponent.to_string())]),
        dominates_exact: exact.as_ref().filter(|_| ms.applicable).map(|g| ms.dominates(g)),
        value: BoundValue::Real(ms.value.clone()),
        applicable: ms.applicable,
        informational: false,
    });

    if set.n() >= 2 {
        let dense = dense_bound(set.n() as u64, r as u64, set.len() as u64).expect("n >= 2");
        let dominates = exact.as_ref().map(|g| {
            let mut ctx = RealCtx::new();
            let gv = ctx.big(&g.0);
            let gr = ctx.to_real(&gv);
            dense.compare(&gr) != std::cmp::Ordering::Less
        });
        entries.push(BoundEntry {
            name: "dense".into(),
            parameters: params([("a", set.len().to_string())]),
            dominates_exact: dominates,
            value: BoundValue::Real(dense),
            applicable: r >= 3,
            informational: true,
        });
    }

    if !set.is_empty() {
        let lower = crate::counting::two_color_lower_bound(set.len() as u64, r as u64);
        entries.push(BoundEntry {
            name: "two_color_lower".into(),
            parameters: params([("direction", "lower".to_string())]),
            dominates_exact: exact.as_ref().map(|g| g >= &lower),
            value: BoundValue::Exact(lower),
            applicable: true,
            informational: false,
        });
    }

    BoundReport {
        set: set.to_literal(),
        n: set.n(),
        r,
        size: set.len(),
        triples: restricted_triple_count(set),
        exact,
        entries,
    }
}

/// `g([n], r)` against the dense bound for each `n` in `2..=max_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossoverRow {
    pub n: usize,
    pub exact: BigCount,
    pub dense: Real,
    pub dense_exceeds_exact: bool,
}

pub fn dense_crossover(r: u32, max_n: usize) -> Vec<CrossoverRow> {
    (2..=max_n)
        .map(|n| {
            let exact = count_partition(&IntegerSet::full(n), r).0;
            let dense = dense_bound(n as u64, r as u64, n as u64).expect("n >= 2");
            let mut ctx = RealCtx::new();
            let ev = ctx.big(&exact.0);
            let er = ctx.to_real(&ev);
            CrossoverRow {
                n,
                dense_exceeds_exact: dense.compare(&er) != std::cmp::Ordering::Less,
                exact,
                dense,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triples::triples_through_count;

    fn set(n: usize, xs: &[usize]) -> IntegerSet {
        IntegerSet::from_members(n, xs.iter().copied()).unwrap()
    }

    /// Exhaustive maximum matching: try skipping or taking each edge.
    fn brute_matching(edges: &[(usize, usize)]) -> usize {
        fn go(i: usize, edges: &[(usize, usize)], used: &mut Vec<usize>) -> usize {
            if i == edges.len() {
                return 0;
            }
            let skip = go(i + 1, edges, used);
            let (x, y) = edges[i];
            if used.contains(&x) || used.contains(&y) {
                return skip;
            }
            used.push(x);
            used.push(y);
            let take = 1 + go(i + 1, edges, used);
            used.truncate(used.len() - 2);
            skip.max(take)
        }
        go(0, edges, &mut Vec::new())
    }

    #[test]
    fn link_graph_examples() {
        let i1 = IntegerSet::i1(6).unwrap();
        let g = link_graph(2, &i1).unwrap();
        assert_eq!(g.edges, vec![(3, 5), (4, 6)]);
        assert_eq!(max_matching(&g), 2);
        let p = link_graph(1, &IntegerSet::full(6)).unwrap();
        assert_eq!(p.edges, vec![(2, 3), (3, 4), (4, 5), (5, 6)]);
        assert_eq!(max_matching(&p), 2);
        let i2 = IntegerSet::i2(6).unwrap();
        let e = link_graph(6, &i2).unwrap();
        assert!(e.edges.is_empty());
        assert_eq!(max_matching(&e), 0);
        assert!(link_graph(1, &i2).is_err());
    }

    #[test]
    fn deg2_matching_handles_cycles() {
        let cycle5 = [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)];
        assert_eq!(deg2_max_matching(&cycle5).unwrap(), 2);
        let cycle4 = [(1, 2), (2, 3), (3, 4), (1, 4)];
        assert_eq!(deg2_max_matching(&cycle4).unwrap(), 2);
        let mixed = [(1, 2), (2, 3), (3, 1), (7, 8), (8, 9)];
        assert_eq!(deg2_max_matching(&mixed).unwrap(), 2);
        assert!(deg2_max_matching(&[(1, 2), (1, 3), (1, 4)]).is_err());
        assert_eq!(deg2_max_matching(&[]).unwrap(), 0);
    }

    #[test]
    fn matching_is_optimal_and_half_the_edges() {
        for n in 1..=12 {
            for mask in 0u64..1 << n {
                let a = IntegerSet::from_mask(n, mask);
                let mut best = 0;
                for t in a.iter() {
                    let g = link_graph(t, &a).unwrap();
                    assert!(g.max_degree() <= 2);
                    assert_eq!(g.edge_count(), triples_through_count(t, &a));
                    let k = max_matching(&g);
                    assert!(2 * k >= g.edge_count());
                    if n <= 9 {
                        assert_eq!(k, brute_matching(&g.edges), "{a:?} t={t}");
                    }
                    best = best.max(k);
                }
                assert_eq!(best, max_matching_number_mask(mask, n), "{a:?}");
            }
        }
    }

    #[test]
    fn all_deg2_graphs_on_six_vertices() {
        let all_edges: Vec<(usize, usize)> = (1..=6)
            .flat_map(|x| (x + 1..=6).map(move |y| (x, y)))
            .collect();
        for pick in 0u32..1 << all_edges.len() {
            let edges: Vec<_> = (0..all_edges.len())
                .filter(|i| pick >> i & 1 == 1)
                .map(|i| all_edges[i])
                .collect();
            if let Ok(k) = deg2_max_matching(&edges) {
                assert_eq!(k, brute_matching(&edges), "{edges:?}");
            }
        }
    }

    #[test]
    fn matching_bound_examples() {
        let i1 = IntegerSet::i1(6).unwrap();
        let b = matching_bound(&i1, 8);
        assert_eq!(b.k, 2);
        assert_eq!(b.value, BigCount::from(3872));
        assert_eq!(b.value, count_partition(&i1, 8).0);
        let i2 = IntegerSet::i2(6).unwrap();
        for r in 3..=9 {
            assert_eq!(matching_bound(&i2, r).value, BigCount::pow(r as u64, 4));
        }
        let abc = set(3, &[1, 2, 3]);
        assert_eq!(matching_bound(&abc, 3).value, BigCount::from(21));
    }

    #[test]
    fn large_matching_examples() {
        let i1 = IntegerSet::i1(6).unwrap();
        let chk = prop51_check(&i1, 8);
        assert!(chk.applicable);
        assert_eq!(chk.c, 2);
        assert!(chk.power_witnesses.contains(&2));
        assert_eq!(chk.power_bound, BigCount::from(4096));
        assert!(count_partition(&i1, 8).0 < chk.power_bound);

        let i2 = IntegerSet::i2(6).unwrap();
        let chk = prop51_check(&i2, 8);
        assert!(!chk.applicable);
        assert_eq!(chk.c, 1);

        let full8 = IntegerSet::full(8);
        let chk = prop51_check(&full8, 8);
        assert!(chk.applicable);
        assert_eq!(chk.c, 4);
        assert_eq!(chk.matching_numbers[0], (1, 3));
        assert!(chk.power_witnesses.is_empty());
        assert!(!prop51_check(&i1, 7).applicable);
    }

    #[test]
    fn large_matching_implications_hold() {
        for n in 4..=11 {
            for mask in 0u64..1 << n {
                let a = IntegerSet::from_mask(n, mask);
                let chk = prop51_check(&a, 8);
                if chk.implies_power_bound() || chk.implies_three_bound() {
                    let g = count_partition(&a, 8).0;
                    if chk.implies_power_bound() {
                        assert!(g < chk.power_bound);
                    }
                    if chk.implies_three_bound() {
                        assert!(g < chk.three_bound);
                    }
                }
            }
        }
    }

    #[test]
    fn many_triples_examples() {
        let full6 = IntegerSet::full(6);
        let b = many_schur_bound(&full6, 4, None);
        assert_eq!(b.mu, Ratio::new(1, 6));
        // 6 - (3/4)(4 - log2 10)
        let expect = 6.0 - 0.75 * (4.0 - 10f64.log2());
        assert!((b.exponent.to_f64() - expect).abs() < 1e-12);
        assert!((b.value.to_f64() - 4f64.powf(expect)).abs() < 1e-6);
        assert!(b.dominates(&count_partition(&full6, 4).0));

        let i2 = IntegerSet::i2(8).unwrap();
        let b = many_schur_bound(&i2, 5, None);
        assert!((b.value.to_f64() - 5f64.powi(5)).abs() < 1e-6);
        assert!(b.dominates(&BigCount::pow(5, 5)));
        assert!(!b.dominates(&(BigCount::pow(5, 5) + BigCount::one())));

        let full12 = IntegerSet::full(12);
        let b = many_schur_bound(&full12, 8, None);
        assert_eq!(b.mu, Ratio::new(30, 144));
        assert!(b.dominates(&count_partition(&full12, 8).0));

        assert!(!many_schur_bound(&full6, 3, None).applicable);
        assert!(!many_schur_bound(&full6, 4, Some(Ratio::new(1, 5))).applicable);
    }

    #[test]
    fn dense_bound_values() {
        let v = dense_bound(6, 3, 6).unwrap().to_f64();
        let tail = 2f64.powf(6.0 - 6.0 / (26.0 * 6f64.log2()));
        assert!((v - (192.0 + tail)).abs() < 1e-9);
        let zero = dense_bound(6, 3, 0).unwrap().to_f64();
        assert!((zero - (3.0 + tail)).abs() < 1e-9);
        let ratio = dense_bound_ratio(1000, 3, 1000).unwrap().to_f64();
        let expect = 3.0 + 2f64.powf(-1000.0 / (26.0 * 1000f64.log2()));
        assert!((ratio - expect).abs() < 1e-12);
        assert!((ratio - 3.07).abs() < 0.01);
        assert!(dense_bound(1, 3, 1).is_err());
        assert!(dense_bound(5, 3, 6).is_err());
    }

    #[test]
    fn non_triple_pair_examples() {
        let f = non_triple_pairs(&IntegerSet::full(12));
        assert_eq!(f.pairs, vec![(5, 10), (6, 12)]);
        assert_eq!(f.doubled_sum_overflow, 2);
        assert_eq!(f.bound, Ratio::integer(2));
        assert!(f.holds);
        let f = non_triple_pairs(&IntegerSet::i2(6).unwrap());
        assert_eq!(f.pairs.len(), 6);
        assert!(non_triple_pairs(&IntegerSet::empty(9)).pairs.is_empty());
    }

    #[test]
    fn non_triple_pair_breakdown_sums() {
        for mask in 0u64..1 << 11 {
            let a = IntegerSet::from_mask(11, mask);
            let f = non_triple_pairs(&a);
            let parts = f.doubled_sum_missing
                + f.doubled_sum_overflow
                + f.gap_missing_sum_missing
                + f.gap_missing_sum_overflow;
            assert_eq!(parts, f.pairs.len());
            assert!(f.doubled_sum_overflow <= 11 / 2 - 11 / 3);
            assert!(f.holds_integral, "{a:?}");
        }
    }

    #[test]
    fn n_over_six_term_is_not_integral() {
        // [n] has floor(n/2) - floor(n/3) such pairs, which exceeds n/6 for n = 10, 11.
        for n in 2..=40 {
            let f = non_triple_pairs(&IntegerSet::full(n));
            assert_eq!(f.pairs.len(), n / 2 - n / 3);
            assert!(f.holds_integral);
            assert_eq!(f.holds, 6 * (n / 2 - n / 3) <= n, "n={n}");
        }
        assert!(!non_triple_pairs(&IntegerSet::full(11)).holds);
        assert!(non_triple_pairs(&IntegerSet::full(12)).holds);
    }

    #[test]
    fn disjoint_pair_cover_examples() {
        let full12 = IntegerSet::full(12);
        let none = IntegerSet::empty(12);
        let d = disjoint_pair_cover(4, &full12, &none).unwrap();
        for p in [(5, 9), (6, 10), (7, 11), (8, 12)] {
            assert!(d.contains(&p));
        }
        assert!(d.len() >= 4);
        let d = disjoint_pair_cover(11, &full12, &none).unwrap();
        assert_eq!(d, vec![(1, 10), (2, 9), (3, 8), (4, 7), (5, 6)]);
        assert!(disjoint_pair_cover(3, &IntegerSet::empty(12), &none).unwrap().is_empty());
        assert!(disjoint_pair_cover(13, &full12, &none).is_err());
    }

    #[test]
    fn disjoint_pair_cover_is_valid_and_maximal() {
        for n in 1..=12 {
            for mask in (0u64..1 << n).step_by(3) {
                let a = IntegerSet::from_mask(n, mask);
                let excluded = IntegerSet::from_mask(n, mask & 0b1001);
                for t in 1..=n {
                    let d = disjoint_pair_cover(t, &a, &excluded).unwrap();
                    let mut used = std::collections::BTreeSet::new();
                    for &(x, y) in &d {
                        assert!(x != t && y != t && a.contains(x) && a.contains(y));
                        assert!(!excluded.contains(x) && !excluded.contains(y));
                        assert!(x + y == t || x + t == y);
                        assert!(used.insert(x) && used.insert(y));
                    }
                    // maximal: no completing pair left with both ends free
                    for x in a.iter() {
                        for y in a.iter().filter(|&y| y > x) {
                            let completes = x != t && y != t && (x + y == t || x + t == y);
                            if completes && !excluded.contains(x) && !excluded.contains(y) {
                                assert!(used.contains(&x) || used.contains(&y));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn report_entries_dominate_exact() {
        let a = IntegerSet::full(7);
        let rep = bound_report(&a, 5, None, 20);
        assert!(rep.exact.is_some());
        for e in &rep.entries {
            if e.applicable && !e.informational {
                assert_eq!(e.dominates_exact, Some(true), "{}", e.name);
            }
        }
        let json = serde_json::to_string(&rep).unwrap();
        let back: BoundReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
    }
}

//! The 3-uniform hypergraph on `[n] × [r]` whose edges are rainbow-colored
//! restricted triples, with the container-theorem parameters for `k = 3`.
//!
//! Proof parameters: `tau = 24 sqrt(r) n^(-1/3)`, `eps = n^(-1/3) / (r(r-1)(r-2))`.
//! Hypotheses: `tau < 1/21600` and `Delta(H, tau) <= eps / 72`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bigcount::BigCount;
use crate::error::{Error, Result};
use crate::ratio::Ratio;
use crate::real::{Real, RealCtx};
use crate::set::IntegerSet;
use crate::triples::{full_interval_triple_count_wide, restricted_triples};

/// A vertex `(x, c)`: element `x` with color `c`.
pub type Vertex = (usize, u32);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergraphStats {
    pub n: u64,
    pub r: u64,
    pub vertex_count: BigCount,
    pub edge_count: BigCount,
    /// `3 e / v`.
    pub average_degree: Ratio,
    /// Maximum pair co-degree of the hypergraph.
    pub delta2: u64,
    /// `2(r - 2)`.
    pub delta2_formula: u64,
    pub delta3: u64,
    /// Co-degrees found by an explicit scan, when `n` is small enough to build.
    pub delta2_scanned: Option<u64>,
    pub delta3_scanned: Option<u64>,
    pub edges_enumerated: Option<BigCount>,
    pub tau: Real,
    pub epsilon: Real,
    /// `Delta(H, tau)` at the proof's `tau`.
    pub codegree_value: Real,
    /// `c(k)`, `c(r)` stay symbolic.
    pub symbolic_constants: Vec<String>,
}

/// Most restricted triples of `[n]` through a fixed pair of elements.
fn pair_multiplicity(n: u64) -> u64 {
    match n {
        0..=2 => 0,
        3 => 1,
        _ => 2,
    }
}

fn falling3(r: u64) -> u128 {
    r as u128 * r.saturating_sub(1) as u128 * r.saturating_sub(2) as u128
}

/// `d = 3 e / v = 3 (r-1)(r-2) s([n]) / n` as an exact rational.
fn average_degree(n: u64, r: u64) -> BigRational {
    if n == 0 || r == 0 {
        return BigRational::zero();
    }
    let s = BigInt::from(full_interval_triple_count_wide(n as u128));
    let edges = s * BigInt::from(falling3(r));
    BigRational::new(BigInt::from(3) * edges, BigInt::from(n as u128 * r as u128))
}

/// `4 Delta2 / (d tau) + 2 Delta3 / (d tau^2)`; zero for an edgeless hypergraph.
pub fn codegree_function(stats: &HypergraphStats, tau: &Ratio) -> Result<Ratio> {
    let t = &tau.0;
    if !t.is_positive() || t >= &BigRational::from_integer(BigInt::from(1)) {
        return Err(Error::domain(format!("tau = {tau} is outside (0, 1)")));
    }
    let d = &stats.average_degree.0;
    if d.is_zero() {
        return Ok(Ratio::integer(0));
    }
    let d2 = BigRational::from_integer(BigInt::from(stats.delta2));
    let d3 = BigRational::from_integer(BigInt::from(stats.delta3));
    let four = BigRational::from_integer(BigInt::from(4));
    let two = BigRational::from_integer(BigInt::from(2));
    Ok(Ratio(four * d2 / (d * t) + two * d3 / (d * t * t)))
}

fn real_params(ctx: &mut RealCtx, n: u64, r: u64, d: &BigRational, delta2: u64, delta3: u64) -> [Real; 3] {
    let nf = ctx.int(n);
    let u = ctx.div(&ctx.int(1), &ctx.cbrt(&nf));
    let tau = ctx.mul(&ctx.mul(&ctx.int(24), &ctx.sqrt(&ctx.int(r))), &u);
    let eps = ctx.div(&u, &ctx.int(falling3(r) as u64));
    let codegree = if d.is_zero() {
        ctx.int(0)
    } else {
        let df = ctx.ratio(d);
        let first = ctx.div(&ctx.int(4 * delta2), &ctx.mul(&df, &tau));
        let second = ctx.div(&ctx.int(2 * delta3), &ctx.mul(&df, &ctx.mul(&tau, &tau)));
        ctx.add(&first, &second)
    };
    [ctx.to_real(&tau), ctx.to_real(&eps), ctx.to_real(&codegree)]
}

/// All edges, as vertex triples sorted by element.
pub fn explicit_edges(n: usize, r: u32, max_n: usize) -> Result<Vec<[Vertex; 3]>> {
    if n > max_n {
        return Err(Error::Refused {
            what: format!("explicit hypergraph with n = {n}"),
            limit: max_n as u64,
            key: "explicit_edges_max_n",
        });
    }
    let mut edges = Vec::new();
    for t in restricted_triples(&IntegerSet::full(n)) {
        for ca in 1..=r {
            for cb in (1..=r).filter(|&c| c != ca) {
                for cc in (1..=r).filter(|&c| c != ca && c != cb) {
                    edges.push([(t.a, ca), (t.b, cb), (t.c, cc)]);
                }
            }
        }
    }
    Ok(edges)
}

/// `(max pair co-degree, max triple co-degree)` by counting over explicit edges.
pub fn scan_codegrees(n: usize, r: u32, edges: &[[Vertex; 3]]) -> (u64, u64) {
    let v = n * r as usize;
    let index = |(x, c): Vertex| (x - 1) * r as usize + (c as usize - 1);
    let mut pair = vec![0u32; v * v];
    for e in edges {
        let ids = e.map(index);
        for i in 0..3 {
            for j in i + 1..3 {
                let (a, b) = (ids[i].min(ids[j]), ids[i].max(ids[j]));
                pair[a * v + b] += 1;
            }
        }
    }
    let mut sorted: Vec<[usize; 3]> = edges.iter().map(|e| e.map(index)).collect();
    sorted.sort_unstable();
    let mut delta3 = 0u64;
    let mut run = 0u64;
    for i in 0..sorted.len() {
        run = if i > 0 && sorted[i] == sorted[i - 1] { run + 1 } else { 1 };
        delta3 = delta3.max(run);
    }
    (pair.into_iter().max().unwrap_or(0) as u64, delta3)
}

pub fn hypergraph_stats(n: u64, r: u64, explicit_max_n: usize) -> Result<HypergraphStats> {
    if r < 3 || n < 1 {
        return Err(Error::domain(format!("needs r >= 3 and n >= 1, got n = {n}, r = {r}")));
    }
    let s = full_interval_triple_count_wide(n as u128);
    let edge_count = BigCount(BigUint::from(s) * BigUint::from(falling3(r)));
    let d = average_degree(n, r);
    let delta2 = (r - 2) * pair_multiplicity(n);
    let delta3 = u64::from(s > 0);
    let (mut delta2_scanned, mut delta3_scanned, mut edges_enumerated) = (None, None, None);
    if n as usize <= explicit_max_n && r <= u32::MAX as u64 {
        let edges = explicit_edges(n as usize, r as u32, explicit_max_n)?;
        let (d2, d3) = scan_codegrees(n as usize, r as u32, &edges);
        delta2_scanned = Some(d2);
        delta3_scanned = Some(d3);
        edges_enumerated = Some(BigCount::from(edges.len() as u64));
    }
    let mut ctx = RealCtx::new();
    let [tau, epsilon, codegree_value] = real_params(&mut ctx, n, r, &d, delta2, delta3);
    Ok(HypergraphStats {
        n,
        r,
        vertex_count: BigCount(BigUint::from(n) * BigUint::from(r)),
        edge_count,
        average_degree: Ratio(d),
        delta2,
        delta2_formula: 2 * (r - 2),
        delta3,
        delta2_scanned,
        delta3_scanned,
        edges_enumerated,
        tau,
        epsilon,
        codegree_value,
        symbolic_constants: vec!["c(k) <= 1000 k!^3 k".into(), "c(r)".into()],
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub n: u64,
    pub r: u64,
    pub tau: Real,
    pub tau_limit: Ratio,
    pub tau_ok: bool,
    pub codegree: Real,
    /// `eps / 72`.
    pub codegree_limit: Real,
    pub codegree_ok: bool,
    pub holds: bool,
}

/// `tau < 1/21600`, decided as `518400^6 r^3 < n^2`.
fn tau_condition(n: &BigUint, r: u64) -> bool {
    Pow::pow(BigUint::from(518_400u32), 6u32) * Pow::pow(BigUint::from(r), 3u32) < n * n
}

/// `Delta(H, tau) <= eps / 72`. Clearing denominators turns it into
/// `288 R Delta2 tau <= M` with `M = 576 r d / n - 144 R Delta3`, then
/// both sides go to the sixth power to remove `tau`'s radicals.
fn codegree_condition(n: &BigUint, r: u64) -> bool {
    let nn = BigInt::from(n.clone());
    let s = {
        // s([n]) = floor((n - 1)^2 / 4)
        let m = &nn - 1;
        (&m * &m) / 4
    };
    let big_r = BigInt::from(falling3(r));
    let delta2 = BigInt::from((r - 2) * 2);
    let delta3 = BigInt::from(1);
    if nn < BigInt::from(5) {
        return false;
    }
    // d / n = 3 (r-1)(r-2) s / n^2
    let d_over_n = BigRational::new(BigInt::from(3 * (r - 1) * (r - 2)) * s, &nn * &nn);
    let m = d_over_n * BigInt::from(576 * r) - BigRational::from_integer(BigInt::from(144) * &big_r * delta3);
    if m.is_negative() {
        return false;
    }
    // (288 R Delta2 * 24)^6 r^3 / n^2 <= M^6
    let lhs = BigRational::new(
        Pow::pow(BigInt::from(288 * 24) * &big_r * delta2, 6u32) * Pow::pow(BigInt::from(r), 3u32),
        &nn * &nn,
    );
    lhs <= Pow::pow(m, 6u32)
}

pub fn hypothesis_check(n: u64, r: u64) -> Result<HypothesisReport> {
    hypothesis_check_big(&BigUint::from(n), r, Some(n))
}

fn hypothesis_check_big(n: &BigUint, r: u64, small: Option<u64>) -> Result<HypothesisReport> {
    if r < 3 {
        return Err(Error::domain(format!("needs r >= 3, got {r}")));
    }
    if n.is_zero() {
        return Err(Error::domain("needs n >= 1"));
    }
    let tau_ok = tau_condition(n, r);
    let codegree_ok = codegree_condition(n, r);

    let mut ctx = RealCtx::new();
    let nf = ctx.big(n);
    let u = ctx.div(&ctx.int(1), &ctx.cbrt(&nf));
    let tau = ctx.mul(&ctx.mul(&ctx.int(24), &ctx.sqrt(&ctx.int(r))), &u);
    let eps = ctx.div(&u, &ctx.int(falling3(r) as u64));
    let limit = ctx.div(&eps, &ctx.int(72));
    let n64 = small.unwrap_or(u64::MAX);
    let (delta2, delta3, d) = if small.is_some() {
        ((r - 2) * pair_multiplicity(n64), 1, average_degree(n64, r))
    } else {
        let s = BigInt::from(n.clone()) - 1;
        let s = (&s * &s) / 4;
        let d = BigRational::new(BigInt::from(3 * (r - 1) * (r - 2)) * s, BigInt::from(n.clone()));
        (2 * (r - 2), 1, d)
    };
    let codegree = if d.is_zero() {
        ctx.int(0)
    } else {
        let df = ctx.ratio(&d);
        let first = ctx.div(&ctx.int(4 * delta2), &ctx.mul(&df, &tau));
        let second = ctx.div(&ctx.int(2 * delta3), &ctx.mul(&df, &ctx.mul(&tau, &tau)));
        ctx.add(&first, &second)
    };
    Ok(HypothesisReport {
        n: n64,
        r,
        tau: ctx.to_real(&tau),
        tau_limit: Ratio::new(1, 21600),
        tau_ok,
        codegree: ctx.to_real(&codegree),
        codegree_limit: ctx.to_real(&limit),
        codegree_ok,
        holds: tau_ok && codegree_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibleN {
    pub r: u64,
    pub n: BigCount,
    /// `floor(sqrt(518400^6 r^3)) + 1`, the smallest `n` meeting the `tau` condition alone.
    pub analytic_bound: BigCount,
}

/// Smallest `n` meeting both hypotheses. Both are monotone in `n`, so a
/// binary search between 1 and a doubling upper bracket finds it.
pub fn min_feasible_n(r: u64) -> Result<FeasibleN> {
    if r < 3 {
        return Err(Error::domain(format!("needs r >= 3, got {r}")));
    }
    let both = |n: &BigUint| tau_condition(n, r) && codegree_condition(n, r);
    let one = BigUint::from(1u8);
    let mut hi = one.clone();
    while !both(&hi) {
        hi *= 2u8;
    }
    let mut lo = one.clone();
    while lo < hi {
        let mid = (&lo + &hi) >> 1;
        if both(&mid) {
            hi = mid;
        } else {
            lo = mid + &one;
        }
    }
    let analytic = (Pow::pow(BigUint::from(518_400u32), 6u32) * Pow::pow(BigUint::from(r), 3u32)).sqrt() + &one;
    Ok(FeasibleN { r, n: BigCount(lo), analytic_bound: BigCount(analytic) })
}

/// Hypotheses at an arbitrary-size `n`.
pub fn hypothesis_check_at(n: &BigCount, r: u64) -> Result<HypothesisReport> {
    let small = n.to_u64();
    hypothesis_check_big(&n.0, r, small)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_stats() {
        let st = hypergraph_stats(6, 3, 200).unwrap();
        assert_eq!(st.vertex_count, BigCount::from(18));
        assert_eq!(st.edge_count, BigCount::from(36));
        assert_eq!(st.average_degree, Ratio::integer(6));
        assert_eq!((st.delta2, st.delta3), (2, 1));
        assert_eq!(st.delta2_scanned, Some(2));
        assert_eq!(st.delta3_scanned, Some(1));
        assert_eq!(st.edges_enumerated, Some(BigCount::from(36)));

        // n = 4: (1,3) lies in (1,2,3) and (1,3,4)
        let st = hypergraph_stats(4, 3, 200).unwrap();
        assert_eq!(st.delta2_scanned, Some(2));
        let st = hypergraph_stats(3, 5, 200).unwrap();
        assert_eq!((st.delta2, st.delta2_scanned, st.delta2_formula), (3, Some(3), 6));
        let st = hypergraph_stats(2, 3, 200).unwrap();
        assert_eq!((st.delta2_scanned, st.delta3_scanned), (Some(0), Some(0)));
        assert!(st.codegree_value.to_f64() == 0.0);
        assert!(hypergraph_stats(6, 2, 200).is_err());
    }

    #[test]
    fn analytic_matches_scan() {
        for n in 1..=20 {
            for r in 3..=5 {
                let st = hypergraph_stats(n, r, 200).unwrap();
                assert_eq!(st.edges_enumerated.as_ref(), Some(&st.edge_count));
                assert_eq!(st.delta2_scanned, Some(st.delta2));
                assert_eq!(st.delta3_scanned, Some(st.delta3));
                assert!(st.delta2 <= st.delta2_formula);
            }
        }
    }

    #[test]
    fn codegree_examples() {
        let st = hypergraph_stats(6, 3, 0).unwrap();
        assert_eq!(codegree_function(&st, &Ratio::new(1, 2)).unwrap(), Ratio::integer(4));
        assert!(codegree_function(&st, &Ratio::integer(2)).is_err());
        assert!(codegree_function(&st, &Ratio::integer(0)).is_err());
        let dead = hypergraph_stats(2, 3, 0).unwrap();
        assert_eq!(codegree_function(&dead, &Ratio::new(999, 1000)).unwrap(), Ratio::integer(0));
        assert!(st.delta2_scanned.is_none());
        assert!(matches!(explicit_edges(201, 3, 200), Err(Error::Refused { .. })));
    }

    #[test]
    fn proof_parameters() {
        let rep = hypothesis_check(1_000_000, 3).unwrap();
        assert!((rep.tau.to_f64() - 24.0 * 3f64.sqrt() / 100.0).abs() < 1e-12);
        assert!(!rep.tau_ok && !rep.holds);
        let st = hypergraph_stats(1000, 4, 0).unwrap();
        assert!((st.epsilon.to_f64() - 0.1 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn feasibility_boundary() {
        for r in 3..=9 {
            let f = min_feasible_n(r).unwrap();
            assert!(hypothesis_check_at(&f.n, r).unwrap().holds);
            let below = BigCount(&f.n.0 - 1u8);
            assert!(!hypothesis_check_at(&below, r).unwrap().holds);
            assert!(f.n >= f.analytic_bound);
        }
        let n3 = min_feasible_n(3).unwrap().n.to_u64().unwrap();
        assert!((7e17..8e17).contains(&(n3 as f64)));
    }

    #[test]
    fn exact_conditions_match_reals() {
        for &(n, r) in &[(10u64, 3u64), (1_000_000, 5), (u64::MAX / 3, 3), (u64::MAX, 9)] {
            let rep = hypothesis_check(n, r).unwrap();
            let tau_small = rep.tau.to_f64() < 1.0 / 21600.0;
            assert_eq!(rep.tau_ok, tau_small, "n={n} r={r}");
            let cg = rep.codegree.to_f64() <= rep.codegree_limit.to_f64();
            assert_eq!(rep.codegree_ok, cg, "n={n} r={r}");
        }
    }
}

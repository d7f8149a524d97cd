//! `g(n, r)` by searching subsets of `[n]`, largest first, with
//! matching-bound pruning.
//!
//! Candidates are dealt round-robin to a fixed number of shards. Each shard
//! walks its candidates in the global order and prunes against its own
//! incumbent, which starts from the best named family. Shards share
//! nothing, so every count in the result is independent of the worker count.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bigcount::BigCount;
use crate::bounds::{matching_bound_value, max_matching_number_mask};
use crate::cache::MemoryCache;
use crate::counting::count_partition;
use crate::error::{Error, Result};
use crate::literal::parse_set;
use crate::set::IntegerSet;

pub const SCHEMA_VERSION: u32 = 1;
const SHARDS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Pruned,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "pruned" => Ok(Mode::Pruned),
            _ => Err(Error::domain(format!("unknown mode {s:?}; expected exhaustive or pruned"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub exhaustive_max_n: usize,
    pub pruned_max_n: usize,
    pub jobs: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { exhaustive_max_n: 16, pruned_max_n: 22, jobs: 1 }
    }
}

/// Maximum of `g(A, r)` over `A ⊆ [n]` with `|A| >= min_size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub n: usize,
    pub r: u32,
    pub min_size: usize,
    pub g_max: BigCount,
    /// Every maximizer, in increasing encoding order.
    pub argmax_sets: Vec<IntegerSet>,
    /// Subsets passing the size filter.
    pub explored: u64,
}

#[derive(Serialize, Deserialize)]
struct SearchResultWire {
    n: usize,
    r: u32,
    min_size: usize,
    g_max: BigCount,
    argmax: Vec<String>,
    explored: u64,
}

impl Serialize for SearchResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SearchResultWire {
            n: self.n,
            r: self.r,
            min_size: self.min_size,
            g_max: self.g_max.clone(),
            argmax: self.argmax_sets.iter().map(IntegerSet::to_literal).collect(),
            explored: self.explored,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SearchResult {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = SearchResultWire::deserialize(d)?;
        let argmax_sets = w
            .argmax
            .iter()
            .map(|lit| parse_set(lit, Some(w.n)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(SearchResult { n: w.n, r: w.r, min_size: w.min_size, g_max: w.g_max, argmax_sets, explored: w.explored })
    }
}

/// How a result was produced; varies with mode, workers and cache state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reproducibility {
    pub schema_version: u32,
    pub mode: Mode,
    pub jobs: usize,
    pub shards: usize,
    pub exhaustive_max_n: usize,
    pub pruned_max_n: usize,
    /// Subsets whose count was computed or fetched.
    pub counted: u64,
    /// Subsets skipped because their matching bound fell below the incumbent.
    pub pruned: u64,
    pub cache_hits: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub result: SearchResult,
    pub reproducibility: Reproducibility,
}

/// All `k`-subsets of `[n]` as masks, increasing.
fn masks_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let first: Option<u64> = if k > n { None } else if k == 0 { Some(0) } else { Some((1u64 << k) - 1) };
    let limit = 1u64 << n;
    std::iter::successors(first, move |&m| {
        if m == 0 {
            return None;
        }
        let low = m & m.wrapping_neg();
        let ripple = m + low;
        let next = (((ripple ^ m) >> 2) / low) | ripple;
        (next < limit).then_some(next)
    })
}

/// Named families that pass the size filter, with exact counts.
fn seed_incumbent(n: usize, r: u32, min_size: usize) -> BigCount {
    let candidates = [
        Some(IntegerSet::full(n)),
        IntegerSet::i1(n).ok(),
        IntegerSet::i2(n).ok(),
        IntegerSet::i3(n).ok(),
        IntegerSet::odds(n).ok(),
        IntegerSet::upper_half(n).ok(),
    ];
    candidates
        .into_iter()
        .flatten()
        .filter(|a| a.len() >= min_size)
        .map(|a| count_partition(&a, r).0)
        .max()
        .unwrap_or_else(BigCount::zero)
}

struct ShardResult {
    best: BigCount,
    argmax: Vec<u64>,
    counted: u64,
    pruned: u64,
}

pub fn extremal_search(
    n: usize,
    r: u32,
    min_size: usize,
    mode: Mode,
    config: &SearchConfig,
    cache: Option<&MemoryCache>,
) -> Result<SearchOutcome> {
    let (limit, key) = match mode {
        Mode::Exhaustive => (config.exhaustive_max_n, "exhaustive_max_n"),
        Mode::Pruned => (config.pruned_max_n, "pruned_max_n"),
    };
    if n > limit || n > 63 {
        return Err(Error::Refused {
            what: format!("{mode:?} search with n = {n}").to_lowercase(),
            limit: limit.min(63) as u64,
            key,
        });
    }
    let hits_before = cache.map_or(0, MemoryCache::hits);
    let seed = match mode {
        Mode::Pruned => seed_incumbent(n, r, min_size),
        Mode::Exhaustive => BigCount::zero(),
    };
    // bounds[size][k]
    let bounds: Vec<Vec<BigCount>> = (0..=n)
        .map(|size| (0..=size / 2).map(|k| matching_bound_value(size, if r >= 3 { k } else { 0 }, r as u64)).collect())
        .collect();

    let count = |mask: u64| -> BigCount {
        if let Some(g) = cache.and_then(|c| c.get(n, r, mask)) {
            return g;
        }
        let g = count_partition(&IntegerSet::from_mask(n, mask), r).0;
        if let Some(c) = cache {
            c.insert(n, r, mask, g.clone());
        }
        g
    };

    let run_shard = |shard: usize| -> ShardResult {
        let mut out = ShardResult { best: seed.clone(), argmax: Vec::new(), counted: 0, pruned: 0 };
        let mut index = 0usize;
        for size in (min_size.min(n + 1)..=n).rev() {
            for mask in masks_of_size(n, size) {
                let mine = index % SHARDS == shard;
                index += 1;
                if !mine {
                    continue;
                }
                if mode == Mode::Pruned {
                    let k = max_matching_number_mask(mask, n);
                    if bounds[size][k] < out.best {
                        out.pruned += 1;
                        continue;
                    }
                }
                out.counted += 1;
                let g = count(mask);
                match g.cmp(&out.best) {
                    std::cmp::Ordering::Greater => {
                        out.best = g;
                        out.argmax = vec![mask];
                    }
                    std::cmp::Ordering::Equal => out.argmax.push(mask),
                    std::cmp::Ordering::Less => {}
                }
            }
        }
        out
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .map_err(|e| Error::domain(format!("cannot start {} workers: {e}", config.jobs)))?;
    let shards: Vec<ShardResult> = pool.install(|| (0..SHARDS).into_par_iter().map(run_shard).collect());

    let g_max = shards.iter().map(|s| s.best.clone()).max().unwrap_or_else(BigCount::zero);
    let mut argmax: Vec<u64> = shards
        .iter()
        .filter(|s| s.best == g_max)
        .flat_map(|s| s.argmax.iter().copied())
        .collect();
    argmax.sort_unstable();
    argmax.dedup();
    let explored: u64 = (min_size.min(n + 1)..=n).map(|k| BigCount::binomial(n as u64, k as u64).to_u64().unwrap()).sum();
    let counted = shards.iter().map(|s| s.counted).sum();
    let pruned = shards.iter().map(|s| s.pruned).sum();
    Ok(SearchOutcome {
        result: SearchResult {
            n,
            r,
            min_size,
            g_max,
            argmax_sets: argmax.into_iter().map(|m| IntegerSet::from_mask(n, m)).collect(),
            explored,
        },
        reproducibility: Reproducibility {
            schema_version: SCHEMA_VERSION,
            mode,
            jobs: config.jobs.max(1),
            shards: SHARDS,
            exhaustive_max_n: config.exhaustive_max_n,
            pruned_max_n: config.pruned_max_n,
            counted,
            pruned,
            cache_hits: cache.map_or(0, MemoryCache::hits) - hits_before,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    NoMatch,
    /// The predicted family is not defined at this `n`.
    Undefined,
    /// `r <= 3`: no prediction; the search result is reported as is.
    OutOfRange,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub r: u32,
    pub case: String,
    pub predicted_set: Option<String>,
    /// The conjectured value of `g(n, r)`.
    pub predicted_value: Option<BigCount>,
    /// `g(n, r)` is searched over `|A| >= min_size`.
    pub min_size: usize,
    pub search: SearchResult,
    /// For `r <= 3`: `g([n], r)` and whether `[n]` is among the maximizers.
    pub full_interval_value: BigCount,
    pub full_interval_is_argmax: bool,
    pub verdict: Verdict,
}

/// Small-`n` comparison of the extremal-set predictions with exact search.
pub fn conjecture_report(n: usize, r: u32, config: &SearchConfig, cache: Option<&MemoryCache>) -> Result<ConjectureReport> {
    let even = n % 2 == 0;
    let (rr, half) = (r as u64, n as u64 / 2);
    let tri = BigCount::from(3 * rr - 2);
    let (case, family): (&str, Option<Result<(IntegerSet, BigCount)>>) = match (even, r) {
        (_, 0..=3) => ("r <= 3: no prediction", None),
        // r^(n/2) (3 - 2/r)^2
        (true, 4..=7) => (
            "n even, 4 <= r <= 7: I1",
            Some(IntegerSet::i1(n).map(|a| (a, BigCount::pow(rr, half - 2) * &tri * &tri))),
        ),
        // r^(n/2 + 1)
        (true, _) => ("n even, r >= 8: I2", Some(IntegerSet::i2(n).map(|a| (a, BigCount::pow(rr, half + 1))))),
        (false, 4) => {
            let full = IntegerSet::full(n);
            let g = count_partition(&full, r).0;
            ("n odd, r = 4: [n]", Some(Ok((full, g))))
        }
        // r^(ceil(n/2)) (3 - 2/r)
        (false, _) => (
            "n odd, r >= 5: I3",
            Some(IntegerSet::i3(n).map(|a| (a, BigCount::pow(rr, half) * &tri))),
        ),
    };
    let min_size = if r >= 8 { n.div_ceil(2) + 1 } else { 0 };
    let outcome = extremal_search(n, r, min_size, Mode::Pruned, config, cache)?;
    let search = outcome.result;
    let full = IntegerSet::full(n);
    let full_value = count_partition(&full, r).0;
    let full_is_argmax = search.argmax_sets.contains(&full);
    let (predicted_set, predicted_value, verdict) = match family {
        None => (None, None, Verdict::OutOfRange),
        Some(Err(_)) => (None, None, Verdict::Undefined),
        Some(Ok((a, value))) => {
            let hit = search.g_max == value && search.argmax_sets == [a.clone()];
            (Some(a.to_literal()), Some(value), if hit { Verdict::Match } else { Verdict::NoMatch })
        }
    };
    Ok(ConjectureReport {
        n,
        r,
        case: case.to_string(),
        predicted_set,
        predicted_value,
        min_size,
        search,
        full_interval_value: full_value,
        full_interval_is_argmax: full_is_argmax,
        verdict,
    })
}

/// First `n` in `lo..=hi` from which every report matches, per `r`.
pub fn empirical_onset(rs: &[u32], lo: usize, hi: usize, config: &SearchConfig) -> Result<BTreeMap<u32, Option<usize>>> {
    let mut out = BTreeMap::new();
    for &r in rs {
        let mut onset = None;
        for n in lo..=hi {
            let rep = conjecture_report(n, r, config, None)?;
            match (rep.verdict, onset) {
                (Verdict::Match, None) => onset = Some(n),
                (Verdict::Match, Some(_)) => {}
                _ => onset = None,
            }
        }
        out.insert(r, onset);
    }
    Ok(out)
}

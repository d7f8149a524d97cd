//! Exhaustive-search thresholds, read from an optional `key=value` file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::search::SearchConfig;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    pub exhaustive_max_n: usize,
    pub pruned_max_n: usize,
    pub staden_max_n: usize,
    pub sumfree_max_n: usize,
    pub explicit_edges_max_n: usize,
    /// Largest `|A|` for which `bounds` also computes `g(A, r)`.
    pub exact_count_max_size: usize,
    /// Largest `|A|` accepted by the naive counter.
    pub naive_max_size: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            exhaustive_max_n: 16,
            pruned_max_n: 22,
            staden_max_n: 16,
            sumfree_max_n: 40,
            explicit_edges_max_n: 200,
            exact_count_max_size: 26,
            naive_max_size: 14,
        }
    }
}

impl Config {
    /// Lines are `key = value`; `#` starts a comment; unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        let mut offset = 0;
        for line in text.split_inclusive('\n') {
            let start = offset;
            offset += line.len();
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(Error::Parse { position: start, message: format!("expected key=value, got {body:?}") });
            };
            let (key, value) = (key.trim(), value.trim());
            let v: usize = value.parse().map_err(|_| Error::Parse {
                position: start,
                message: format!("value for {key} must be a nonnegative integer, got {value:?}"),
            })?;
            let slot = match key {
                "exhaustive_max_n" => &mut cfg.exhaustive_max_n,
                "pruned_max_n" => &mut cfg.pruned_max_n,
                "staden_max_n" => &mut cfg.staden_max_n,
                "sumfree_max_n" => &mut cfg.sumfree_max_n,
                "explicit_edges_max_n" => &mut cfg.explicit_edges_max_n,
                "exact_count_max_size" => &mut cfg.exact_count_max_size,
                "naive_max_size" => &mut cfg.naive_max_size,
                _ => return Err(Error::Parse { position: start, message: format!("unknown config key {key:?}") }),
            };
            *slot = v;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn search(&self, jobs: usize) -> SearchConfig {
        SearchConfig { exhaustive_max_n: self.exhaustive_max_n, pruned_max_n: self.pruned_max_n, jobs }
    }
}

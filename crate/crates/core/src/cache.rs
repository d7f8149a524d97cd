//! Count caches: an in-process map shared by search workers and an
//! append-only JSON-lines file that persists across runs.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::bigcount::BigCount;
use crate::counting::Method;
use crate::error::Result;
use crate::literal::parse_set;

/// `g(A, r)` for mask-encoded sets, keyed by `(n, r, mask)`.
#[derive(Default)]
pub struct MemoryCache {
    map: RwLock<HashMap<(usize, u32, u64), BigCount>>,
    hits: AtomicU64,
}

impl MemoryCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: usize, r: u32, mask: u64) -> Option<BigCount> {
        let found = self.map.read().expect("cache lock").get(&(n, r, mask)).cloned();
        if found.is_some() {
            self.hits.fetch_add(1, Ordering::Relaxed);
        }
        found
    }

    pub fn insert(&self, n: usize, r: u32, mask: u64, g: BigCount) {
        self.map.write().expect("cache lock").insert((n, r, mask), g);
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One line of `counts.jsonl`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub set: String,
    pub n: usize,
    pub r: u32,
    pub g: BigCount,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheStats {
    pub path: String,
    pub entries: usize,
    pub corrupt_lines: usize,
}

pub struct FileCache {
    path: PathBuf,
}

pub const CACHE_ENV: &str = "RAINBOW_SCHUR_CACHE_DIR";

impl FileCache {
    pub fn new(dir: impl AsRef<Path>) -> Self {
        FileCache { path: dir.as_ref().join("counts.jsonl") }
    }

    /// `--cache-dir`, then the environment variable, then `./.rainbow-schur-cache`.
    pub fn locate(explicit: Option<&Path>) -> Self {
        match explicit {
            Some(dir) => Self::new(dir),
            None => match std::env::var_os(CACHE_ENV) {
                Some(dir) => Self::new(PathBuf::from(dir)),
                None => Self::new(".rainbow-schur-cache"),
            },
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Valid records plus a warning for every line that fails to parse.
    pub fn load(&self) -> Result<(Vec<CacheRecord>, Vec<String>)> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((Vec::new(), Vec::new())),
            Err(e) => return Err(e.into()),
        };
        let mut records = Vec::new();
        let mut warnings = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed = serde_json::from_str::<CacheRecord>(&line)
                .map_err(|e| e.to_string())
                .and_then(|rec| {
                    parse_set(&rec.set, Some(rec.n)).map(|_| rec).map_err(|e| e.to_string())
                });
            match parsed {
                Ok(rec) => records.push(rec),
                Err(e) => warnings.push(format!("{}:{}: skipping corrupt cache line: {e}", self.path.display(), i + 1)),
            }
        }
        Ok((records, warnings))
    }

    pub fn lookup(&self, set: &str, n: usize, r: u32) -> Result<(Option<CacheRecord>, Vec<String>)> {
        let (records, warnings) = self.load()?;
        let hit = records.into_iter().find(|rec| rec.set == set && rec.n == n && rec.r == r);
        Ok((hit, warnings))
    }

    pub fn append(&self, record: &CacheRecord) -> Result<()> {
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(file, "{}", serde_json::to_string(record)?)?;
        Ok(())
    }

    pub fn stats(&self) -> Result<(CacheStats, Vec<String>)> {
        let (records, warnings) = self.load()?;
        Ok((
            CacheStats {
                path: self.path.display().to_string(),
                entries: records.len(),
                corrupt_lines: warnings.len(),
            },
            warnings,
        ))
    }

    pub fn clear(&self) -> Result<()> {
        match fs::remove_file(&self.path) {
            Err(e) if e.kind() != std::io::ErrorKind::NotFound => Err(e.into()),
            _ => Ok(()),
        }
    }
}

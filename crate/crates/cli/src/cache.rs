//! Append-only JSON-lines store of exact results, keyed by `(n, q, d)`.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::record::{PointParams, ResultRecord};

pub const CACHE_ENV: &str = "DQ_CACHE";
pub const DEFAULT_CACHE: &str = "dq_cache.jsonl";

#[derive(Debug, Clone)]
pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self { path: path.into() }
    }

    /// `$DQ_CACHE`, or `./dq_cache.jsonl`.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os(CACHE_ENV).map_or_else(|| PathBuf::from(DEFAULT_CACHE), PathBuf::from))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// All records in file order; a missing file is an empty cache.
    pub fn load(&self) -> Result<Vec<ResultRecord>> {
        let text = match std::fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e).with_context(|| format!("reading {}", self.path.display())),
        };
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("{}: line {}", self.path.display(), i + 1)))
            .collect()
    }

    /// The most recent record for `p` that carries an exact value.
    pub fn lookup(&self, p: PointParams) -> Result<Option<ResultRecord>> {
        Ok(self.load()?.into_iter().rev().find(|r| r.params == p && r.exact.is_some()))
    }

    pub fn append(&self, r: &ResultRecord) -> Result<()> {
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening {}", self.path.display()))?;
        writeln!(f, "{}", serde_json::to_string(r)?)?;
        Ok(())
    }
}

//! On-disk cache of resultant outcomes, one JSON file per
//! (canonical code, k, mode, normalization).

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::Result;
use crate::resultant::ResultantOutcome;
use crate::steiner::Normalization;
use crate::tree::CanonicalCode;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "STEINER_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".steiner-cache";

#[derive(Debug)]
pub struct Cache {
    dir: PathBuf,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into(), hits: AtomicU64::new(0), misses: AtomicU64::new(0) }
    }

    /// `$STEINER_CACHE`, else `./.steiner-cache`.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os(CACHE_ENV).map_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR), PathBuf::from))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(code: &CanonicalCode, k: u32, mode: &str, normalization: Normalization) -> String {
        format!("{}-k{k}-{mode}-{normalization}", code.to_hex())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// Cached outcome, if present and readable. Corrupt entries count as misses.
    pub fn get(&self, key: &str) -> Option<ResultantOutcome> {
        let found = fs::read_to_string(self.path(key)).ok().and_then(|text| serde_json::from_str(&text).ok());
        let counter = if found.is_some() { &self.hits } else { &self.misses };
        counter.fetch_add(1, Ordering::Relaxed);
        found
    }

    /// Stores an outcome, replacing any previous entry atomically.
    pub fn put(&self, key: &str, outcome: &ResultantOutcome) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_string_pretty(outcome)?)?;
        fs::rename(&tmp, self.path(key))?;
        Ok(())
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }
}

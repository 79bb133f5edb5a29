//! Flat content-addressed store: one JSON file per value, named by the
//! SHA-256 of `(kind, algorithm version, input)`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Bumped whenever a cached computation could change its output.
pub const ALGORITHM_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+1");

#[derive(Serialize, Deserialize)]
struct Entry<T> {
    key: String,
    kind: String,
    version: String,
    created_at: u64,
    value: T,
}

#[derive(Clone, Debug, Default)]
pub struct Cache {
    root: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { root: None }
    }

    pub fn at(root: PathBuf) -> Result<Self> {
        fs::create_dir_all(&root).with_context(|| format!("creating cache directory {}", root.display()))?;
        Ok(Cache { root: Some(root) })
    }

    pub fn key<I: Serialize>(kind: &str, input: &I) -> Result<String> {
        let body = serde_json::to_vec(&(kind, ALGORITHM_VERSION, input))?;
        Ok(hex::encode(Sha256::digest(&body)))
    }

    fn path(&self, kind: &str, key: &str) -> Option<PathBuf> {
        self.root.as_ref().map(|r| r.join(kind).join(format!("{key}.json")))
    }

    /// Returns the stored value for `input`, computing and storing it on a miss.
    /// Existing entries are never rewritten.
    pub fn get_or_compute<I, T, F>(&self, kind: &str, input: &I, compute: F) -> Result<T>
    where
        I: Serialize,
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        let key = Self::key(kind, input)?;
        let Some(path) = self.path(kind, &key) else {
            return compute();
        };
        if let Ok(bytes) = fs::read(&path) {
            match serde_json::from_slice::<Entry<T>>(&bytes) {
                Ok(e) if e.version == ALGORITHM_VERSION && e.key == key => {
                    log::debug!("cache hit {kind}/{key}");
                    return Ok(e.value);
                }
                _ => log::warn!("ignoring unreadable cache entry {}", path.display()),
            }
            return compute();
        }
        let value = compute()?;
        let dir = path.parent().expect("entry has a parent");
        fs::create_dir_all(dir)?;
        let created_at = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let entry = Entry { key, kind: kind.to_string(), version: ALGORITHM_VERSION.to_string(), created_at, value };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        serde_json::to_writer(&mut tmp, &entry)?;
        tmp.flush()?;
        // A concurrent writer may have won; its entry is equally valid.
        if let Err(e) = tmp.persist_noclobber(&path) {
            log::debug!("cache entry {} already present: {}", path.display(), e.error);
        }
        Ok(entry.value)
    }
}

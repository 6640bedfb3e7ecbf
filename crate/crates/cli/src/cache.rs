//! Content-addressed on-disk cache of command results.
//!
//! The key is the SHA-256 of the version tag, the system, the truncation
//! budget, the operation and its inputs. An entry whose tag or key does not
//! match, or that fails to parse, is deleted and recomputed.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::report::Report;

pub const VERSION_TAG: &str = concat!("soergel-cache/", env!("CARGO_PKG_VERSION"), "/1");

#[derive(Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub version: String,
    pub payload: Report,
}

pub fn key(material: &serde_json::Value) -> String {
    let mut h = Sha256::new();
    h.update(VERSION_TAG.as_bytes());
    h.update([0]);
    h.update(material.to_string().as_bytes());
    hex::encode(h.finalize())
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<&Path>) -> Cache {
        Cache { dir: dir.map(Path::to_path_buf) }
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(&key[..2]).join(format!("{key}.json")))
    }

    pub fn get(&self, key: &str) -> Option<Report> {
        let path = self.path(key)?;
        let text = fs::read_to_string(&path).ok()?;
        match serde_json::from_str::<CacheEntry>(&text) {
            Ok(e) if e.version == VERSION_TAG && e.key == key => Some(e.payload),
            _ => {
                log::info!("invalidating cache entry {}", path.display());
                let _ = fs::remove_file(&path);
                None
            }
        }
    }

    pub fn put(&self, key: &str, report: &Report) -> anyhow::Result<()> {
        let Some(path) = self.path(key) else {
            return Ok(());
        };
        fs::create_dir_all(path.parent().unwrap())?;
        let entry = CacheEntry { key: key.into(), version: VERSION_TAG.into(), payload: report.clone() };
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_vec(&entry)?)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Cached value for `key`, or `compute` stored under it.
    pub fn through(&self, key: &str, compute: impl FnOnce() -> anyhow::Result<Report>) -> anyhow::Result<Report> {
        if let Some(r) = self.get(key) {
            return Ok(r);
        }
        let r = compute()?;
        self.put(key, &r)?;
        Ok(r)
    }
}

//! On-disk result cache.
//!
//! Keys are SHA-256 digests of a canonical key string; values are JSON.
//! Writes go to a process-unique temporary file in the cache directory and
//! are renamed into place, so readers only ever see complete files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Environment variable that overrides any configured cache directory.
pub const CACHE_ENV: &str = "LTLAB_CACHE";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    /// The directory from `LTLAB_CACHE`, else `fallback`, else none.
    pub fn from_env_or(fallback: Option<&Path>) -> Result<Option<Self>> {
        match std::env::var_os(CACHE_ENV) {
            Some(dir) if !dir.is_empty() => Cache::new(PathBuf::from(dir)).map(Some),
            _ => fallback.map(Cache::new).transpose(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(canonical: &str) -> String {
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    fn path(&self, canonical: &str) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(canonical)))
    }

    /// The cached value, or `None` when missing or unreadable.
    pub fn get<T: DeserializeOwned>(&self, canonical: &str) -> Option<T> {
        let bytes = fs::read(self.path(canonical)).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    pub fn put<T: Serialize>(&self, canonical: &str, value: &T) -> Result<()> {
        let target = self.path(canonical);
        let tmp = self.dir.join(format!(
            ".{}.{}.tmp",
            Self::key(canonical),
            std::process::id()
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&serde_json::to_vec(value)?)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &target)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_stable_keys() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        assert_eq!(cache.get::<Vec<u32>>("a"), None);
        cache.put("a", &vec![1u32, 2, 3]).unwrap();
        assert_eq!(cache.get::<Vec<u32>>("a"), Some(vec![1, 2, 3]));
        assert_eq!(Cache::key("a"), Cache::key("a"));
        assert_ne!(Cache::key("a"), Cache::key("b"));
        // no temporary files are left behind
        let names: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        assert_eq!(names.len(), 1);
        assert!(names[0].ends_with(".json") && !names[0].starts_with('.'));
    }

    #[test]
    fn corrupt_entries_read_as_missing() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        fs::write(cache.path("k"), b"{not json").unwrap();
        assert_eq!(cache.get::<u32>("k"), None);
    }
}

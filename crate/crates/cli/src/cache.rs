//! Content-addressed on-disk cache for partition tables and eigenform tables.
//!
//! Entries are keyed by a SHA-256 of (format version, artifact kind,
//! parameters) and carry a checksum of their payload. Anything unreadable,
//! stale or corrupt is recomputed and overwritten.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Bumping this invalidates every existing entry.
pub const FORMAT_VERSION: u32 = 1;

pub const CACHE_DIR_ENV: &str = "COLORPART_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    version: u32,
    kind: String,
    params: Value,
    checksum: String,
    payload: String,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl Cache {
    pub fn disabled() -> Self {
        Self { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: Some(dir.into()),
        }
    }

    /// `$COLORPART_CACHE_DIR`, else `$XDG_CACHE_HOME/colorpart`, else
    /// `$HOME/.cache/colorpart`; disabled if none is set.
    pub fn from_env() -> Self {
        let var = |k: &str| {
            std::env::var_os(k)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from)
        };
        let dir = var(CACHE_DIR_ENV)
            .or_else(|| var("XDG_CACHE_HOME").map(|d| d.join("colorpart")))
            .or_else(|| var("HOME").map(|d| d.join(".cache").join("colorpart")));
        Self { dir }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn key(kind: &str, params: &Value) -> String {
        sha256_hex(format!("{FORMAT_VERSION}\n{kind}\n{params}").as_bytes())
    }

    fn path(&self, kind: &str, params: &Value) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(format!("{}.json", Self::key(kind, params))))
    }

    /// Cached artifact, or `compute()` stored for next time.
    ///
    /// Both paths return the value decoded from its serialized payload, so
    /// results do not depend on whether the cache was hit.
    pub fn get_or_compute<T, E, F>(&self, kind: &str, params: &Value, compute: F) -> Result<T, E>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T, E>,
    {
        if let Some(hit) = self.load(kind, params) {
            return Ok(hit);
        }
        let value = compute()?;
        let payload = serde_json::to_string(&value).expect("artifacts serialize");
        if let Err(e) = self.store(kind, params, &payload) {
            eprintln!("warning: cache write failed: {e}");
        }
        Ok(serde_json::from_str(&payload).expect("artifacts round-trip"))
    }

    fn load<T: DeserializeOwned>(&self, kind: &str, params: &Value) -> Option<T> {
        let raw = fs::read(self.path(kind, params)?).ok()?;
        let entry: Entry = serde_json::from_slice(&raw).ok()?;
        let valid = entry.version == FORMAT_VERSION
            && entry.kind == kind
            && entry.params == *params
            && entry.checksum == sha256_hex(entry.payload.as_bytes());
        if !valid {
            return None;
        }
        serde_json::from_str(&entry.payload).ok()
    }

    fn store(&self, kind: &str, params: &Value, payload: &str) -> std::io::Result<()> {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path(kind, params)) else {
            return Ok(());
        };
        fs::create_dir_all(dir)?;
        let entry = Entry {
            version: FORMAT_VERSION,
            kind: kind.to_owned(),
            params: params.clone(),
            checksum: sha256_hex(payload.as_bytes()),
            payload: payload.to_owned(),
        };
        // write-then-rename so readers never see a partial entry
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(&serde_json::to_vec(&entry).expect("entries serialize"))?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;
    use std::cell::Cell;

    fn compute_counter(calls: &Cell<u32>) -> impl FnOnce() -> Result<Vec<String>, ()> + '_ {
        move || {
            calls.set(calls.get() + 1);
            Ok(vec!["1/3".into(), "-7/2".into()])
        }
    }

    #[test]
    fn hit_after_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let calls = Cell::new(0);
        let p = json!({"n": 5});
        let a: Vec<String> = cache
            .get_or_compute("t", &p, compute_counter(&calls))
            .unwrap();
        let b: Vec<String> = cache
            .get_or_compute("t", &p, compute_counter(&calls))
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(calls.get(), 1);
        // different parameters or kind miss
        let _: Vec<String> = cache
            .get_or_compute("t", &json!({"n": 6}), compute_counter(&calls))
            .unwrap();
        let _: Vec<String> = cache
            .get_or_compute("u", &p, compute_counter(&calls))
            .unwrap();
        assert_eq!(calls.get(), 3);
    }

    #[test]
    fn corruption_recomputes() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let calls = Cell::new(0);
        let p = json!({"n": 1});
        let _: Vec<String> = cache
            .get_or_compute("t", &p, compute_counter(&calls))
            .unwrap();
        let path = cache.path("t", &p).unwrap();
        let mut entry: Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
        entry["payload"] = json!("[\"2/3\"]");
        fs::write(&path, serde_json::to_vec(&entry).unwrap()).unwrap();
        let v: Vec<String> = cache
            .get_or_compute("t", &p, compute_counter(&calls))
            .unwrap();
        assert_eq!(v, ["1/3", "-7/2"]);
        assert_eq!(calls.get(), 2);
        fs::write(&path, b"{truncated").unwrap();
        let _: Vec<String> = cache
            .get_or_compute("t", &p, compute_counter(&calls))
            .unwrap();
        assert_eq!(calls.get(), 3);
    }

    #[test]
    fn version_is_part_of_the_key() {
        let p = json!({"n": 1});
        let k = Cache::key("t", &p);
        assert_eq!(k.len(), 64);
        assert_ne!(
            k,
            sha256_hex(format!("{}\nt\n{p}", FORMAT_VERSION + 1).as_bytes())
        );
    }

    #[test]
    fn disabled_always_computes() {
        let calls = Cell::new(0);
        let c = Cache::disabled();
        let p = json!({});
        let _: Vec<String> = c.get_or_compute("t", &p, compute_counter(&calls)).unwrap();
        let _: Vec<String> = c.get_or_compute("t", &p, compute_counter(&calls)).unwrap();
        assert_eq!(calls.get(), 2);
    }
}

//! On-disk cache of per-degree Euler partial products.
//!
//! One JSON file per (content hash, degree). Each file embeds a SHA-256
//! checksum of its payload; unreadable, mismatched or corrupt files are
//! ignored and the value is recomputed.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::ring::{RingDescriptor, RingJson};
use crate::series::{SeriesJson, TruncatedSeries};

/// Hex SHA-256 of the parts, separated by NUL bytes.
pub fn content_key(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for (i, part) in parts.iter().enumerate() {
        if i > 0 {
            h.update([0u8]);
        }
        h.update(part.as_bytes());
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Payload {
    key: String,
    delta: usize,
    ring: RingJson,
    series: SeriesJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Entry {
    payload: Payload,
    checksum: String,
}

fn checksum(p: &Payload) -> String {
    let text = serde_json::to_string(p).expect("payload serializes");
    content_key(&[&text])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &str, delta: usize) -> PathBuf {
        self.dir.join(format!("{key}-{delta}.json"))
    }

    fn load_full(&self, key: &str, delta: usize, ring: &Arc<RingDescriptor>) -> Option<TruncatedSeries> {
        let text = fs::read_to_string(self.path(key, delta)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        let p = &entry.payload;
        if entry.checksum != checksum(p) || p.key != key || p.delta != delta || p.ring != ring.to_json() {
            return None;
        }
        TruncatedSeries::from_json(ring, &p.series).ok()
    }

    /// The cached partial product truncated to `bound`, if a valid entry
    /// with at least that bound exists.
    pub fn load(&self, key: &str, delta: usize, ring: &Arc<RingDescriptor>, bound: usize) -> Option<TruncatedSeries> {
        self.load_full(key, delta, ring)
            .filter(|s| s.bound() >= bound)
            .map(|s| s.truncate(bound))
    }

    /// Writes an entry unless a valid one with a larger bound exists.
    pub fn store(&self, key: &str, delta: usize, series: &TruncatedSeries) -> Result<()> {
        if let Some(existing) = self.load_full(key, delta, series.ring()) {
            if existing.bound() > series.bound() {
                return Ok(());
            }
        }
        let payload = Payload {
            key: key.to_string(),
            delta,
            ring: series.ring().to_json(),
            series: series.to_json(),
        };
        let entry = Entry {
            checksum: checksum(&payload),
            payload,
        };
        let path = self.path(key, delta);
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_string(&entry).expect("entry serializes"))?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<RingDescriptor> {
        Arc::new(RingDescriptor::base(2, 3).unwrap())
    }

    #[test]
    fn store_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        let r = ring();
        let s = TruncatedSeries::from_ints(&r, &[1, 3, 5, 7], 3);
        cache.store("k", 2, &s).unwrap();
        assert_eq!(cache.load("k", 2, &r, 3), Some(s.clone()));
        assert_eq!(cache.load("k", 2, &r, 1), Some(s.truncate(1)));
        assert_eq!(cache.load("k", 2, &r, 4), None);
        assert_eq!(cache.load("k", 3, &r, 3), None);
    }

    #[test]
    fn corruption_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        let r = ring();
        let s = TruncatedSeries::from_ints(&r, &[1, 3, 5, 7], 3);
        cache.store("k", 1, &s).unwrap();
        let path = cache.path("k", 1);
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replace("[5]", "[6]")).unwrap();
        assert_eq!(cache.load("k", 1, &r, 3), None);
        fs::write(&path, "not json").unwrap();
        assert_eq!(cache.load("k", 1, &r, 3), None);
    }

    #[test]
    fn larger_bound_is_kept() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        let r = ring();
        let s = TruncatedSeries::from_ints(&r, &[1, 3, 5, 7], 3);
        cache.store("k", 1, &s).unwrap();
        cache.store("k", 1, &s.truncate(1)).unwrap();
        assert_eq!(cache.load("k", 1, &r, 3), Some(s));
    }

    #[test]
    fn keys_are_stable_hex() {
        let k = content_key(&["a", "b"]);
        assert_eq!(k.len(), 64);
        assert_eq!(k, content_key(&["a", "b"]));
        assert_ne!(k, content_key(&["ab"]));
    }
}

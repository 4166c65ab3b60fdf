//! Disk/memory cache of sharp-interface reference profiles.
//!
//! References dominate the cost of a sweep and depend only on the benchmark
//! physics, the reference policy and the solve horizon, so they are computed
//! once per content-hash key and reused across rows, runs and processes.

use crate::error::{CsfError, Result};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

/// A converged sharp-interface reference solution on its own mesh.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SharpProfile {
    pub nodes: Vec<f64>,
    pub temperature: Vec<f64>,
    /// Temperature at the interface node [K].
    pub interface_temperature: f64,
    /// Element size at the interface [m].
    pub h: f64,
    pub dt: f64,
    pub steps: usize,
    pub policy: String,
    pub key: String,
}

impl SharpProfile {
    /// Piecewise-linear evaluation; clamps outside the stored domain.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.nodes.len();
        let i = self.nodes.partition_point(|&v| v < x).clamp(1, n - 1);
        let (x0, x1) = (self.nodes[i - 1], self.nodes[i]);
        let t = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
        self.temperature[i - 1] * (1.0 - t) + self.temperature[i] * t
    }
}

/// Content-hash key for a reference: any serializable description of the
/// physics that determines the profile.
pub fn content_key<T: Serialize>(desc: &T) -> Result<String> {
    let json = serde_json::to_string(desc)
        .map_err(|e| CsfError::Cache(format!("cannot serialize reference key: {e}")))?;
    let mut hasher = Sha256::new();
    hasher.update(json.as_bytes());
    Ok(hex_string(&hasher.finalize()))
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Reference store: in-memory map fronted by an optional directory of JSON
/// files keyed by content hash.
pub struct ReferenceCache {
    dir: Option<PathBuf>,
    mem: Mutex<HashMap<String, Arc<SharpProfile>>>,
}

impl ReferenceCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        ReferenceCache {
            dir,
            mem: Mutex::new(HashMap::new()),
        }
    }

    pub fn in_memory() -> Self {
        ReferenceCache::new(None)
    }

    pub fn dir(&self) -> Option<&PathBuf> {
        self.dir.as_ref()
    }

    fn path_for(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    /// Fetch the profile for `key`, building and persisting it on a miss.
    pub fn get_or_build<F>(&self, key: &str, build: F) -> Result<Arc<SharpProfile>>
    where
        F: FnOnce() -> Result<SharpProfile>,
    {
        if let Some(hit) = self.mem.lock().expect("cache lock").get(key) {
            return Ok(hit.clone());
        }
        if let Some(path) = self.path_for(key) {
            if path.exists() {
                let text = std::fs::read_to_string(&path)?;
                let profile: SharpProfile = serde_json::from_str(&text)
                    .map_err(|e| CsfError::Cache(format!("corrupt reference file {path:?}: {e}")))?;
                if profile.key != key {
                    return Err(CsfError::Cache(format!(
                        "reference file {path:?} carries key {} but was looked up as {key}",
                        profile.key
                    )));
                }
                let arc = Arc::new(profile);
                self.mem.lock().expect("cache lock").insert(key.to_string(), arc.clone());
                return Ok(arc);
            }
        }
        let mut profile = build()?;
        profile.key = key.to_string();
        let arc = Arc::new(profile);
        if let Some(path) = self.path_for(key) {
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            let tmp = path.with_extension("json.tmp");
            std::fs::write(&tmp, serde_json::to_string(arc.as_ref()).expect("serializable"))?;
            std::fs::rename(&tmp, &path)?;
        }
        self.mem.lock().expect("cache lock").insert(key.to_string(), arc.clone());
        Ok(arc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile() -> SharpProfile {
        SharpProfile {
            nodes: vec![0.0, 1.0, 2.0],
            temperature: vec![10.0, 20.0, 40.0],
            interface_temperature: 20.0,
            h: 1.0,
            dt: 1.0,
            steps: 1,
            policy: "budgeted".into(),
            key: String::new(),
        }
    }

    #[test]
    fn eval_interpolates_and_clamps() {
        let p = profile();
        assert_eq!(p.eval(0.5), 15.0);
        assert_eq!(p.eval(1.5), 30.0);
        assert_eq!(p.eval(-3.0), 10.0);
        assert_eq!(p.eval(9.0), 40.0);
    }

    #[test]
    fn cache_round_trip_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ReferenceCache::new(Some(dir.path().to_path_buf()));
        let key = content_key(&("demo", 1)).unwrap();
        let mut built = 0;
        let a = cache
            .get_or_build(&key, || {
                built += 1;
                Ok(profile())
            })
            .unwrap();
        assert_eq!(built, 1);
        // Second lookup from memory, third from a fresh cache via disk.
        let b = cache.get_or_build(&key, || unreachable!("memory hit expected")).unwrap();
        assert_eq!(a.temperature, b.temperature);
        let fresh = ReferenceCache::new(Some(dir.path().to_path_buf()));
        let c = fresh
            .get_or_build(&key, || unreachable!("disk hit expected"))
            .unwrap();
        assert_eq!(c.interface_temperature, 20.0);
        assert_eq!(c.key, key);
    }

    #[test]
    fn distinct_descriptions_get_distinct_keys() {
        let k1 = content_key(&("B1", 1e-9)).unwrap();
        let k2 = content_key(&("B1", 2e-9)).unwrap();
        assert_ne!(k1, k2);
    }
}

//! Optional content-addressed disk cache for memoized results.

use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::sync::RwLock;

static CACHE_DIR: RwLock<Option<PathBuf>> = RwLock::new(None);

/// Enables (or with `None` disables) the disk cache.
pub fn set_cache_dir(dir: Option<PathBuf>) -> std::io::Result<()> {
    if let Some(d) = &dir {
        std::fs::create_dir_all(d)?;
    }
    *CACHE_DIR.write().unwrap() = dir;
    Ok(())
}

fn path_for(key: &str) -> Option<PathBuf> {
    let dir = CACHE_DIR.read().unwrap().clone()?;
    let digest = hex::encode(Sha256::digest(key.as_bytes()));
    Some(dir.join(format!("{digest}.json")))
}

/// Reads a cached value; unreadable or malformed entries count as misses.
pub fn load<T: serde::de::DeserializeOwned>(key: &str) -> Option<T> {
    let path = path_for(key)?;
    let text = std::fs::read_to_string(path).ok()?;
    let (stored_key, value): (String, T) = serde_json::from_str(&text).ok()?;
    (stored_key == key).then_some(value)
}

/// Best-effort write; failures leave the cache unchanged.
pub fn store<T: serde::Serialize>(key: &str, value: &T) {
    if let Some(path) = path_for(key) {
        if let Ok(text) = serde_json::to_string(&(key, value)) {
            let tmp = path.with_extension(format!("tmp{}", std::process::id()));
            if std::fs::write(&tmp, text).is_ok() {
                let _ = std::fs::rename(&tmp, &path);
            }
        }
    }
}

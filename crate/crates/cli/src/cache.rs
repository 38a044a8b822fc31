//! Content-addressed result cache.
//!
//! Keys are SHA-256 digests of the canonicalized command description
//! (command name, flags, and the parsed-and-reserialized JSON of every
//! input file), so formatting differences in input files do not cause
//! misses. Entries store the exact stdout bytes plus any artifact
//! produced, and writes are atomic (write-temp-then-rename).

use std::fs;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// A cached command result: the stdout line and, for commands that
/// write an output file, its contents.
#[derive(Serialize, Deserialize)]
pub struct Envelope {
    pub stdout: String,
    pub artifact: Option<String>,
}

pub fn cache_dir() -> PathBuf {
    match std::env::var_os("RELEXT_CACHE_DIR") {
        Some(d) => PathBuf::from(d),
        None => std::env::temp_dir().join("relext-cache"),
    }
}

/// Digest of the canonical command description.
pub fn key(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    for p in parts {
        h.update([0u8]);
        h.update(p.as_bytes());
    }
    format!("{:x}", h.finalize())
}

pub fn lookup(key: &str) -> Option<Envelope> {
    let path = cache_dir().join(format!("{key}.json"));
    let bytes = fs::read(path).ok()?;
    serde_json::from_slice(&bytes).ok()
}

pub fn store(key: &str, env: &Envelope) {
    let dir = cache_dir();
    if fs::create_dir_all(&dir).is_err() {
        return;
    }
    let tmp = dir.join(format!("{key}.tmp.{}", std::process::id()));
    let dst = dir.join(format!("{key}.json"));
    let body = serde_json::to_vec(env).expect("cache envelope serializes");
    if fs::write(&tmp, body).is_ok() {
        let _ = fs::rename(&tmp, &dst);
    }
}

/// Atomic write of an output artifact next to its final location.
pub fn write_atomic(path: &std::path::Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

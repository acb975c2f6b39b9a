//! Command-line front end: instance loading, reports and exit codes.

pub mod commands;
pub mod instance;

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use tnlab_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONSISTENCY: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SUPPORT: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    if e.is_support_exhausted() {
        return EXIT_SUPPORT;
    }
    match e {
        Error::Consistency(_) => EXIT_CONSISTENCY,
        Error::AtPlace { inner, .. } => exit_code(inner),
        _ => EXIT_INVALID,
    }
}

/// Bundled fixtures, unless `TNLAB_FIXTURES` points elsewhere.
pub fn fixtures_dir() -> PathBuf {
    match std::env::var_os("TNLAB_FIXTURES") {
        Some(p) => PathBuf::from(p),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures"),
    }
}

/// A path as given, or else a name inside the fixtures directory.
pub fn resolve(path: &Path) -> PathBuf {
    if path.exists() {
        return path.to_path_buf();
    }
    let dir = fixtures_dir();
    let direct = dir.join(path);
    if direct.exists() {
        return direct;
    }
    dir.join(path).with_extension("json")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{:02x}", b)).collect()
}

/// Recursively sorts object keys so output does not depend on insertion order.
pub fn canonical(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<(String, Value)> = m.into_iter().collect();
            keys.sort_by(|a, b| a.0.cmp(&b.0));
            let mut out = Map::new();
            for (k, v) in keys {
                out.insert(k, canonical(v));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonical).collect()),
        other => other,
    }
}

pub struct Report {
    pub command: String,
    pub fixture: Option<(String, String)>,
    pub support: u32,
    pub status: &'static str,
    pub results: Value,
    pub error: Option<String>,
    pub rows: Vec<(String, String)>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let fixture = match &self.fixture {
            Some((path, hash)) => json!({ "path": path, "sha256": hash }),
            None => Value::Null,
        };
        canonical(json!({
            "tool": "tnlab",
            "version": env!("CARGO_PKG_VERSION"),
            "format": instance::FORMAT_VERSION,
            "command": self.command,
            "fixture": fixture,
            "support": self.support,
            "status": self.status,
            "results": self.results,
            "error": self.error,
        }))
    }

    pub fn table(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, self.status);
        if let Some((path, hash)) = &self.fixture {
            out.push_str(&format!("  fixture  {} (sha256 {})\n", path, &hash[..16]));
        }
        let width = self.rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        for (k, v) in &self.rows {
            let pad = width - k.chars().count();
            out.push_str(&format!("  {}{}  {}\n", k, " ".repeat(pad), v));
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("  error  {}\n", e));
        }
        out
    }
}

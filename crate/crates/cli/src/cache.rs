//! On-disk catalog cache. Files are written to a temporary file in the cache
//! directory and renamed into place, so readers never see partial documents.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use extricat_core::{Caps, Catalog};

use crate::error::CliError;
use crate::scenario::{AlgebraSpec, Ambient};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedCategory {
    pub catalog: Catalog,
    pub hom: Vec<Vec<usize>>,
    pub ext: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheDoc {
    pub format: String,
    pub version: u32,
    pub key: String,
    pub algebra: AlgebraSpec,
    pub bounds: Vec<usize>,
    pub multiplicity: usize,
    pub base: CachedCategory,
    pub middle: Option<CachedCategory>,
}

#[derive(Serialize)]
struct KeyInput<'a> {
    version: u32,
    algebra: &'a AlgebraSpec,
    ambient: Ambient,
    bounds: &'a [usize],
    multiplicity: usize,
    tuples: u64,
    idempotent: u64,
    iso: u64,
}

/// Everything the catalogs depend on, and nothing else.
pub fn cache_key(algebra: &AlgebraSpec, ambient: Ambient, caps: &Caps) -> String {
    let input = KeyInput {
        version: FORMAT_VERSION,
        algebra,
        ambient,
        bounds: &caps.bounds,
        multiplicity: caps.multiplicity,
        tuples: caps.tuples,
        idempotent: caps.idempotent,
        iso: caps.iso,
    };
    hex::encode(Sha256::digest(serde_json::to_vec(&input).expect("key serializes")))
}

pub fn cache_dir() -> PathBuf {
    match std::env::var_os("EXTRICAT_CACHE_DIR") {
        Some(d) if !d.is_empty() => PathBuf::from(d),
        _ => std::env::temp_dir().join("extricat-cache"),
    }
}

fn path_for(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("catalog-{key}.json"))
}

/// `None` when absent; a corrupt or mismatched file is treated as absent.
pub fn read(dir: &Path, key: &str) -> Option<CacheDoc> {
    let bytes = std::fs::read(path_for(dir, key)).ok()?;
    let doc: CacheDoc = serde_json::from_slice(&bytes).ok()?;
    (doc.version == FORMAT_VERSION && doc.key == key).then_some(doc)
}

pub fn write(dir: &Path, doc: &CacheDoc) -> Result<PathBuf, CliError> {
    let io = |e: std::io::Error| CliError::Cache(e.to_string());
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    let mut text = serde_json::to_string_pretty(doc).expect("cache serializes");
    text.push('\n');
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.flush().map_err(io)?;
    let path = path_for(dir, &doc.key);
    tmp.persist(&path).map_err(|e| io(e.error))?;
    Ok(path)
}

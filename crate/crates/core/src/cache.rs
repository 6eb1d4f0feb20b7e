//! On-disk cache of computed operator matrices, one JSON file per level.
//!
//! A file records the format version and the P¹ canonical-form rule; files
//! written under a different version or rule, or whose dimensions disagree
//! with the freshly built space, are ignored. Writes go to a temporary file
//! in the same directory and are renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Level;
use crate::exactla::{ExactMatrix, LinalgError};
use crate::modsym::{build_space, ModsymError, ModularSymbolSpace, OpKey, P1_RULE};

pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache file is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Modsym(#[from] ModsymError),
    #[error("stale cache entry: {0}")]
    Stale(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedOperator {
    /// "hecke" or "atkin_lehner"
    pub kind: String,
    pub index: u64,
    /// [`ExactMatrix::to_text`] form
    pub matrix: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    pub format_version: u32,
    pub p1_rule: String,
    pub level: u64,
    pub dimension: usize,
    pub cuspidal_dimension: usize,
    pub operators: Vec<CachedOperator>,
}

impl CacheFile {
    fn from_space(space: &ModularSymbolSpace) -> Self {
        let operators = space
            .memoized_operators()
            .into_iter()
            .map(|(key, m)| {
                let (kind, index) = match key {
                    OpKey::Hecke(n) => ("hecke", n),
                    OpKey::AtkinLehner(q) => ("atkin_lehner", q),
                };
                CachedOperator {
                    kind: kind.to_string(),
                    index,
                    matrix: m.to_text(),
                }
            })
            .collect();
        CacheFile {
            format_version: CACHE_FORMAT_VERSION,
            p1_rule: P1_RULE.to_string(),
            level: space.level().n(),
            dimension: space.dimension(),
            cuspidal_dimension: space.cuspidal_dimension(),
            operators,
        }
    }

    /// Why this file cannot seed `space`, if it cannot.
    pub fn check(&self, space: &ModularSymbolSpace) -> Result<(), CacheError> {
        let stale = |m: String| Err(CacheError::Stale(m));
        if self.format_version != CACHE_FORMAT_VERSION {
            return stale(format!("format version {}", self.format_version));
        }
        if self.p1_rule != P1_RULE {
            return stale(format!("P1 rule {}", self.p1_rule));
        }
        if self.level != space.level().n()
            || self.dimension != space.dimension()
            || self.cuspidal_dimension != space.cuspidal_dimension()
        {
            return stale(format!("level or dimensions differ for N = {}", self.level));
        }
        Ok(())
    }

    fn seed(&self, space: &ModularSymbolSpace) -> Result<usize, CacheError> {
        self.check(space)?;
        for op in &self.operators {
            let key = match op.kind.as_str() {
                "hecke" => OpKey::Hecke(op.index),
                "atkin_lehner" => OpKey::AtkinLehner(op.index),
                other => return Err(CacheError::Stale(format!("unknown operator kind {other}"))),
            };
            space.insert_operator(key, ExactMatrix::from_text(&op.matrix)?)?;
        }
        Ok(self.operators.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadStatus {
    Miss,
    Hit { operators: usize },
    /// The entry existed but could not be used; it is left for `store` to replace.
    Stale,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryInfo {
    pub level: u64,
    pub bytes: u64,
    pub operators: usize,
    pub valid: bool,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

fn level_of(path: &Path) -> Option<u64> {
    let name = path.file_name()?.to_str()?;
    name.strip_prefix("level-")?.strip_suffix(".json")?.parse().ok()
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, n: u64) -> PathBuf {
        self.dir.join(format!("level-{n:05}.json"))
    }

    pub fn read(&self, n: u64) -> Result<Option<CacheFile>, CacheError> {
        match fs::read_to_string(self.path_for(n)) {
            Ok(text) => Ok(Some(serde_json::from_str(&text)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Build the space for `level` and seed it from the cache when possible.
    pub fn load_space(&self, level: &Level) -> (ModularSymbolSpace, LoadStatus) {
        let space = build_space(level);
        let status = match self.read(level.n()) {
            Ok(None) => LoadStatus::Miss,
            Ok(Some(file)) => match file.seed(&space) {
                Ok(operators) => LoadStatus::Hit { operators },
                Err(_) => LoadStatus::Stale,
            },
            Err(_) => LoadStatus::Stale,
        };
        if status == LoadStatus::Stale {
            // a partly seeded memo may hold mismatched operators; start clean
            return (build_space(level), status);
        }
        (space, status)
    }

    /// Write the space's operators unless a valid entry already holds at least
    /// as many. Returns whether a file was written.
    pub fn store(&self, space: &ModularSymbolSpace) -> Result<bool, CacheError> {
        let file = CacheFile::from_space(space);
        if let Ok(Some(existing)) = self.read(file.level) {
            if existing.check(space).is_ok() && existing.operators.len() >= file.operators.len() {
                return Ok(false);
            }
        }
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(
            ".level-{:05}.{}.{}.tmp",
            file.level,
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let mut out = fs::File::create(&tmp)?;
        out.write_all(serde_json::to_string(&file)?.as_bytes())?;
        out.sync_all()?;
        drop(out);
        fs::rename(&tmp, self.path_for(file.level))?;
        Ok(true)
    }

    /// Cache entries in ascending level order.
    pub fn entries(&self) -> Result<Vec<EntryInfo>, CacheError> {
        let mut out = Vec::new();
        let dir = match fs::read_dir(&self.dir) {
            Ok(d) => d,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e.into()),
        };
        for entry in dir {
            let entry = entry?;
            let Some(level) = level_of(&entry.path()) else { continue };
            let bytes = entry.metadata()?.len();
            let (operators, valid) = match self.read(level) {
                Ok(Some(f)) => {
                    let valid = f.format_version == CACHE_FORMAT_VERSION && f.p1_rule == P1_RULE && f.level == level;
                    (f.operators.len(), valid)
                }
                _ => (0, false),
            };
            out.push(EntryInfo {
                level,
                bytes,
                operators,
                valid,
            });
        }
        out.sort_by_key(|e| e.level);
        Ok(out)
    }

    /// Remove every cache entry and leftover temporary file. Returns the number removed.
    pub fn clear(&self) -> Result<usize, CacheError> {
        let dir = match fs::read_dir(&self.dir) {
            Ok(d) => d,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(e.into()),
        };
        let mut removed = 0;
        for entry in dir {
            let path = entry?.path();
            let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("");
            if level_of(&path).is_some() || (name.starts_with(".level-") && name.ends_with(".tmp")) {
                fs::remove_file(&path)?;
                removed += 1;
            }
        }
        Ok(removed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_seeds_operators() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let level = Level::new(97).unwrap();
        let (space, status) = cache.load_space(&level);
        assert_eq!(status, LoadStatus::Miss);
        let t3 = space.hecke_matrix(3).unwrap();
        assert!(cache.store(&space).unwrap());
        assert!(!cache.store(&space).unwrap(), "entry is written once");

        let (again, status) = cache.load_space(&level);
        assert_eq!(status, LoadStatus::Hit { operators: 1 });
        assert_eq!(again.memoized_operators()[0].1.as_ref(), t3.as_ref());
        let info = cache.entries().unwrap();
        assert_eq!(info.len(), 1);
        assert!(info[0].valid && info[0].level == 97);
        assert_eq!(cache.clear().unwrap(), 1);
        assert!(cache.entries().unwrap().is_empty());
    }

    #[test]
    fn stale_entries_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let level = Level::new(37).unwrap();
        let space = build_space(&level);
        space.hecke_matrix(2).unwrap();
        cache.store(&space).unwrap();
        let mut file = cache.read(37).unwrap().unwrap();
        file.p1_rule = "other-rule".into();
        fs::write(cache.path_for(37), serde_json::to_string(&file).unwrap()).unwrap();
        let (fresh, status) = cache.load_space(&level);
        assert_eq!(status, LoadStatus::Stale);
        assert!(fresh.memoized_operators().is_empty());
        // a stale entry is replaced on the next store
        fresh.hecke_matrix(2).unwrap();
        assert!(cache.store(&fresh).unwrap());
        assert_eq!(cache.load_space(&level).1, LoadStatus::Hit { operators: 1 });

        fs::write(cache.path_for(37), "not json").unwrap();
        assert_eq!(cache.load_space(&level).1, LoadStatus::Stale);
    }
}

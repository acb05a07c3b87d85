//! On-disk cache of `Im(δf)` and the levels `Δ_0..Δ_M`, keyed by `n` and
//! the canonical expansion of `f`.
//!
//! File format:
//!
//! ```json
//! {"n": 3, "f": "x*y*z - ...", "im_delta": [...], "delta_levels": [[0], [...]]}
//! ```

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{CochainFn, DeltaReach};
use crate::coloring::Modulus;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaCacheFile {
    pub n: u32,
    pub f: String,
    pub im_delta: Vec<i128>,
    pub delta_levels: Vec<Vec<i128>>,
}

impl From<&DeltaReach> for DeltaCacheFile {
    fn from(r: &DeltaReach) -> Self {
        DeltaCacheFile {
            n: r.modulus().get(),
            f: r.canonical_f().to_string(),
            im_delta: r.image().to_vec(),
            delta_levels: r.levels().to_vec(),
        }
    }
}

impl DeltaCacheFile {
    /// Rebuilds the levels if the file belongs to `f` and is well formed.
    pub fn into_reach(self, f: &CochainFn) -> Option<DeltaReach> {
        let strictly_sorted = |v: &[i128]| v.windows(2).all(|w| w[0] < w[1]);
        let ok = self.n == f.modulus().get()
            && self.f == f.canonical()
            && strictly_sorted(&self.im_delta)
            && self.im_delta.binary_search(&0).is_ok()
            && self.delta_levels.first().is_some_and(|l| l == &[0])
            && self.delta_levels.iter().all(|l| strictly_sorted(l));
        if !ok {
            return None;
        }
        let n = Modulus::new(self.n).ok()?;
        Some(DeltaReach::from_parts(n, self.f, self.im_delta, self.delta_levels))
    }
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("cache serialization error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cache file {0} is locked by another writer")]
    Locked(PathBuf),
}

#[derive(Clone, Debug)]
pub struct DeltaCache {
    dir: PathBuf,
    lock_attempts: u32,
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

impl DeltaCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DeltaCache { dir: dir.into(), lock_attempts: 50 }
    }

    /// Lock acquisition is retried every 100 ms this many times.
    pub fn with_lock_attempts(mut self, attempts: u32) -> Self {
        self.lock_attempts = attempts;
        self
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, f: &CochainFn) -> PathBuf {
        self.dir.join(format!("delta-n{}-{}.json", f.modulus(), f.cache_key()))
    }

    /// `Ok(None)` on a miss, including unreadable or foreign files.
    pub fn load(&self, f: &CochainFn) -> Result<Option<DeltaReach>, CacheError> {
        let path = self.path_for(f);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        Ok(serde_json::from_str::<DeltaCacheFile>(&text).ok().and_then(|c| c.into_reach(f)))
    }

    /// Writes atomically under a lock file next to the target.
    pub fn store(&self, f: &CochainFn, reach: &DeltaReach) -> Result<PathBuf, CacheError> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(f);
        let _lock = self.lock(&path)?;
        let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
        {
            let mut file = fs::File::create(&tmp)?;
            serde_json::to_writer(&mut file, &DeltaCacheFile::from(reach))?;
            file.write_all(b"\n")?;
            file.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    fn lock(&self, path: &Path) -> Result<LockGuard, CacheError> {
        let lock = path.with_extension("lock");
        for _ in 0..self.lock_attempts {
            match fs::OpenOptions::new().write(true).create_new(true).open(&lock) {
                Ok(_) => return Ok(LockGuard(lock)),
                Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                    thread::sleep(Duration::from_millis(100))
                }
                Err(e) => return Err(e.into()),
            }
        }
        Err(CacheError::Locked(path.to_path_buf()))
    }
}

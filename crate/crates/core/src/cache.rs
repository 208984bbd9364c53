//! On-disk store for per-modulus Kloosterman sums.
//!
//! One `.bin` file per `(level, multiplier, mu, nu)` holds little-endian `f64` pairs
//! `(re, im)` for `c = level, 2 level, ...` in order; a `.json` sidecar describes it.
//! Files are replaced atomically via rename, so readers never see partial writes.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

pub const CACHE_ENV: &str = "RADMACH_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub level: i64,
    pub multiplier: String,
    pub mu: String,
    pub nu: String,
    pub count: usize,
    pub layout: String,
}

#[derive(Clone, Debug)]
pub struct KloostermanCache {
    dir: PathBuf,
}

impl KloostermanCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
        Ok(KloostermanCache { dir })
    }

    /// The cache named by `RADMACH_CACHE_DIR`, if set and non-empty.
    pub fn from_env() -> Option<Self> {
        let dir = std::env::var_os(CACHE_ENV)?;
        if dir.is_empty() {
            return None;
        }
        KloostermanCache::new(dir).ok()
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn stem(level: i64, multiplier: &str, mu: &str, nu: &str) -> String {
        let raw = format!("L{level}_{multiplier}_m{mu}_n{nu}");
        raw.chars()
            .map(|ch| match ch {
                '/' => 'o',
                '|' => 'p',
                '*' => 'x',
                ':' => '=',
                '-' => 'M',
                c if c.is_ascii_alphanumeric() || c == '_' || c == '=' => c,
                _ => '~',
            })
            .collect()
    }

    /// Cached sums for `c = level, 2 level, ...`; empty when absent or unreadable.
    pub fn load(&self, level: i64, multiplier: &str, mu: &str, nu: &str) -> Vec<Complex64> {
        let stem = Self::stem(level, multiplier, mu, nu);
        let manifest: Option<Manifest> = fs::read(self.dir.join(format!("{stem}.json")))
            .ok()
            .and_then(|b| serde_json::from_slice(&b).ok());
        let Some(m) = manifest else { return vec![] };
        if m.level != level || m.multiplier != multiplier || m.mu != mu || m.nu != nu {
            return vec![];
        }
        let Ok(bytes) = fs::read(self.dir.join(format!("{stem}.bin"))) else { return vec![] };
        if bytes.len() != 16 * m.count {
            return vec![];
        }
        bytes
            .chunks_exact(16)
            .map(|ch| {
                let re = f64::from_le_bytes(ch[..8].try_into().unwrap());
                let im = f64::from_le_bytes(ch[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect()
    }

    pub fn store(&self, level: i64, multiplier: &str, mu: &str, nu: &str, sums: &[Complex64]) -> Result<()> {
        let stem = Self::stem(level, multiplier, mu, nu);
        let mut bytes = Vec::with_capacity(16 * sums.len());
        for z in sums {
            bytes.extend_from_slice(&z.re.to_le_bytes());
            bytes.extend_from_slice(&z.im.to_le_bytes());
        }
        let manifest = Manifest {
            level,
            multiplier: multiplier.to_string(),
            mu: mu.to_string(),
            nu: nu.to_string(),
            count: sums.len(),
            layout: "f64le(re,im) for c = level*(i+1)".to_string(),
        };
        let json = serde_json::to_vec_pretty(&manifest).map_err(|e| Error::Cache(e.to_string()))?;
        self.write_atomic(&format!("{stem}.bin"), &bytes)?;
        self.write_atomic(&format!("{stem}.json"), &json)
    }

    fn write_atomic(&self, name: &str, bytes: &[u8]) -> Result<()> {
        let tmp = self.dir.join(format!(".{name}.{}.tmp", std::process::id()));
        let dst = self.dir.join(name);
        fs::write(&tmp, bytes).map_err(|e| Error::Cache(format!("{}: {e}", tmp.display())))?;
        fs::rename(&tmp, &dst).map_err(|e| Error::Cache(format!("{}: {e}", dst.display())))
    }
}

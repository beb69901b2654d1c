//! Content-addressed on-disk cache for prime tables and bases mod p.
//!
//! An entry lives at `<root>/<kind>/<sha256(kind, params)>.bin` and holds a
//! magic tag, a SHA-256 of the parameters and payload, then the payload.
//! Entries that fail the checksum are rebuilt. IO failures turn the cache
//! off for the rest of the run after one warning.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use serrelab_core::census::{BasisSource, CensusError, DirectBasis};
use serrelab_core::numth::{NumthError, PrimeTable, SieveConfig};
use sha2::{Digest, Sha256};

const MAGIC: &[u8; 8] = b"SLCACHE1";
const HEADER: usize = MAGIC.len() + 32;

#[derive(Debug, Default)]
pub struct CacheStats {
    pub hits: AtomicU64,
    pub misses: AtomicU64,
    pub rebuilt: AtomicU64,
}

#[derive(Debug)]
pub struct Cache {
    root: Option<PathBuf>,
    broken: AtomicBool,
    pub stats: CacheStats,
}

fn checksum(kind: &str, params: &str, payload: &[u8]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(kind.as_bytes());
    h.update([0]);
    h.update(params.as_bytes());
    h.update([0]);
    h.update(payload);
    h.finalize().into()
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: Some(root.into()), broken: AtomicBool::new(false), stats: CacheStats::default() }
    }

    pub fn disabled() -> Self {
        Cache { root: None, broken: AtomicBool::new(false), stats: CacheStats::default() }
    }

    pub fn root(&self) -> Option<&Path> {
        self.root.as_deref()
    }

    /// Path of the entry for `(kind, params)`.
    pub fn entry_path(&self, kind: &str, params: &str) -> Option<PathBuf> {
        let mut h = Sha256::new();
        h.update(kind.as_bytes());
        h.update([0]);
        h.update(params.as_bytes());
        let name = hex::encode(h.finalize());
        Some(self.root.as_ref()?.join(kind).join(format!("{name}.bin")))
    }

    fn degrade(&self, what: &str, err: &std::io::Error) {
        if !self.broken.swap(true, Ordering::Relaxed) {
            eprintln!("warning: cache {what} failed ({err}); continuing in memory");
        }
    }

    fn read(&self, path: &Path, kind: &str, params: &str) -> Option<Vec<u8>> {
        let bytes = match fs::read(path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return None,
            Err(e) => {
                self.degrade("read", &e);
                return None;
            }
        };
        if bytes.len() < HEADER || &bytes[..MAGIC.len()] != MAGIC {
            self.stats.rebuilt.fetch_add(1, Ordering::Relaxed);
            return None;
        }
        let payload = &bytes[HEADER..];
        if bytes[MAGIC.len()..HEADER] != checksum(kind, params, payload) {
            self.stats.rebuilt.fetch_add(1, Ordering::Relaxed);
            return None;
        }
        Some(payload.to_vec())
    }

    fn write(&self, path: &Path, kind: &str, params: &str, payload: &[u8]) -> std::io::Result<()> {
        let dir = path.parent().expect("entry has a parent");
        fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(MAGIC)?;
        tmp.write_all(&checksum(kind, params, payload))?;
        tmp.write_all(payload)?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }

    /// Returns the stored payload for `(kind, params)` when it decodes, or
    /// builds, stores and returns a fresh one.
    pub fn get_or_build<T, E>(
        &self,
        kind: &str,
        params: &str,
        decode: impl Fn(&[u8]) -> Option<T>,
        encode: impl Fn(&T) -> Vec<u8>,
        build: impl FnOnce() -> Result<T, E>,
    ) -> Result<T, E> {
        let path = if self.broken.load(Ordering::Relaxed) { None } else { self.entry_path(kind, params) };
        if let Some(path) = &path {
            if let Some(bytes) = self.read(path, kind, params) {
                match decode(&bytes) {
                    Some(v) => {
                        self.stats.hits.fetch_add(1, Ordering::Relaxed);
                        return Ok(v);
                    }
                    None => {
                        self.stats.rebuilt.fetch_add(1, Ordering::Relaxed);
                    }
                }
            }
        }
        self.stats.misses.fetch_add(1, Ordering::Relaxed);
        let value = build()?;
        if let Some(path) = &path {
            if let Err(e) = self.write(path, kind, params, &encode(&value)) {
                self.degrade("write", &e);
            }
        }
        Ok(value)
    }

    /// Primes up to `bound`, subject to the configured sieve limit.
    pub fn prime_table(&self, bound: u64, cfg: &SieveConfig) -> Result<PrimeTable, NumthError> {
        if bound > cfg.limit {
            return Err(NumthError::LimitExceeded { requested: bound, limit: cfg.limit });
        }
        self.get_or_build(
            "sieve",
            &format!("bound={bound}"),
            |bytes| PrimeTable::from_parts(bound, decode_u32s(bytes)?),
            |t| encode_u32s(t.primes()),
            || PrimeTable::build(bound, cfg),
        )
    }
}

fn encode_u32s(xs: &[u32]) -> Vec<u8> {
    xs.iter().flat_map(|x| x.to_le_bytes()).collect()
}

fn decode_u32s(bytes: &[u8]) -> Option<Vec<u32>> {
    if bytes.len() % 4 != 0 {
        return None;
    }
    Some(bytes.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes"))).collect())
}

/// Bases mod p read through the cache.
pub struct CachedBasis<'a> {
    pub cache: &'a Cache,
}

impl BasisSource for CachedBasis<'_> {
    fn basis_mod_p(&self, k: u32, p: u64, prec: usize) -> Result<Vec<Vec<u64>>, CensusError> {
        let decode = |bytes: &[u8]| -> Option<Vec<Vec<u64>>> {
            let words = decode_u32s(bytes)?;
            let (&rows, rest) = words.split_first()?;
            let (&cols, data) = rest.split_first()?;
            let (rows, cols) = (rows as usize, cols as usize);
            if cols != prec + 1 || data.len() != rows * cols || data.iter().any(|&c| c as u64 >= p) {
                return None;
            }
            Some(data.chunks_exact(cols.max(1)).take(rows).map(|r| r.iter().map(|&c| c as u64).collect()).collect())
        };
        let encode = |basis: &Vec<Vec<u64>>| {
            let mut words = vec![basis.len() as u32, (prec + 1) as u32];
            words.extend(basis.iter().flatten().map(|&c| c as u32));
            encode_u32s(&words)
        };
        self.cache.get_or_build(
            "basis-mod-p",
            &format!("k={k};p={p};prec={prec}"),
            decode,
            encode,
            || DirectBasis.basis_mod_p(k, p, prec),
        )
    }
}

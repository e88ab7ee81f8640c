//! On-disk cache for sieved tables.
//!
//! File layout, all integers little-endian:
//!
//! ```text
//! magic "PRIMSEQ\0" | version u32 | kind u8 | limit u64 | len u64 | payload
//! ```
//!
//! The payload is `len` u32 primes (kind 1) or `len` Ω bytes for 1..=limit (kind 2).
//! A file with the wrong magic, version, kind or limit is treated as a miss and
//! rebuilt.

use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::primes::{self, OmegaTable, PrimeTable};

pub const MAGIC: &[u8; 8] = b"PRIMSEQ\0";
pub const VERSION: u32 = 1;
pub const CACHE_DIR_ENV: &str = "PRIMSEQ_CACHE_DIR";

const KIND_PRIMES: u8 = 1;
const KIND_OMEGA: u8 = 2;

fn write_header(w: &mut impl Write, kind: u8, limit: u64, len: u64) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&[kind])?;
    w.write_all(&limit.to_le_bytes())?;
    w.write_all(&len.to_le_bytes())?;
    Ok(())
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

// Returns (limit, len).
fn read_header(r: &mut impl Read, kind: u8) -> Result<(u64, u64)> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let mut v = [0u8; 4];
    r.read_exact(&mut v)?;
    let version = u32::from_le_bytes(v);
    if version != VERSION {
        return Err(Error::Cache(format!("version {version}, expected {VERSION}")));
    }
    let mut k = [0u8; 1];
    r.read_exact(&mut k)?;
    if k[0] != kind {
        return Err(Error::Cache(format!("table kind {}, expected {kind}", k[0])));
    }
    Ok((read_u64(r)?, read_u64(r)?))
}

pub fn write_primes(mut w: impl Write, table: &PrimeTable) -> Result<()> {
    write_header(&mut w, KIND_PRIMES, table.limit(), table.count())?;
    let mut buf = Vec::with_capacity(table.primes().len() * 4);
    for p in table.primes() {
        buf.extend_from_slice(&p.to_le_bytes());
    }
    w.write_all(&buf).map_err(Error::from)
}

pub fn read_primes(mut r: impl Read) -> Result<PrimeTable> {
    let (limit, len) = read_header(&mut r, KIND_PRIMES)?;
    let mut buf = vec![0u8; checked_len(len, 4)?];
    r.read_exact(&mut buf)?;
    let primes: Vec<u32> = buf
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    if !primes.windows(2).all(|w| w[0] < w[1]) || primes.last().is_some_and(|&p| p as u64 > limit) {
        return Err(Error::Cache("prime payload is not an increasing list below the limit".into()));
    }
    Ok(PrimeTable::from_parts(limit, primes))
}

pub fn write_omega(mut w: impl Write, table: &OmegaTable) -> Result<()> {
    let values = &table.as_slice()[1..];
    write_header(&mut w, KIND_OMEGA, table.limit(), values.len() as u64)?;
    w.write_all(values).map_err(Error::from)
}

pub fn read_omega(mut r: impl Read) -> Result<OmegaTable> {
    let (limit, len) = read_header(&mut r, KIND_OMEGA)?;
    if len != limit {
        return Err(Error::Cache(format!("omega payload has {len} entries for limit {limit}")));
    }
    let mut omega = vec![0u8; checked_len(len, 1)? + 1];
    r.read_exact(&mut omega[1..])?;
    Ok(OmegaTable::from_parts(limit, omega))
}

fn checked_len(len: u64, width: u64) -> Result<usize> {
    len.checked_mul(width)
        .and_then(|b| usize::try_from(b).ok())
        .filter(|&b| b as u64 <= 8 * primes::MAX_SIEVE_LIMIT)
        .ok_or_else(|| Error::Cache(format!("implausible payload length {len}")))
}

/// Directory of cached tables keyed by limit.
#[derive(Debug, Clone)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Cache at `$PRIMSEQ_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn primes_path(&self, limit: u64) -> PathBuf {
        self.dir.join(format!("primes-{limit}.bin"))
    }

    pub fn omega_path(&self, limit: u64) -> PathBuf {
        self.dir.join(format!("omega-{limit}.bin"))
    }

    /// Cached prime table for `limit`, or `None` on a miss or a stale file.
    pub fn load_primes(&self, limit: u64) -> Option<PrimeTable> {
        let f = fs::File::open(self.primes_path(limit)).ok()?;
        read_primes(BufReader::new(f)).ok().filter(|t| t.limit() == limit)
    }

    pub fn load_omega(&self, limit: u64) -> Option<OmegaTable> {
        let f = fs::File::open(self.omega_path(limit)).ok()?;
        read_omega(BufReader::new(f)).ok().filter(|t| t.limit() == limit)
    }

    pub fn store_primes(&self, table: &PrimeTable) -> Result<PathBuf> {
        let path = self.primes_path(table.limit());
        self.store(&path, |w| write_primes(w, table))?;
        Ok(path)
    }

    pub fn store_omega(&self, table: &OmegaTable) -> Result<PathBuf> {
        let path = self.omega_path(table.limit());
        self.store(&path, |w| write_omega(w, table))?;
        Ok(path)
    }

    // Writes through a temporary file so a partial write never looks valid.
    fn store(&self, path: &Path, write: impl FnOnce(&mut BufWriter<fs::File>) -> Result<()>) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = path.with_extension("tmp");
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        write(&mut w)?;
        w.flush()?;
        drop(w);
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Loads or sieves the prime table; the flag is true on a cache hit.
    pub fn primes(&self, limit: u64) -> Result<(PrimeTable, bool)> {
        if let Some(t) = self.load_primes(limit) {
            return Ok((t, true));
        }
        let t = primes::sieve_primes(limit)?;
        self.store_primes(&t)?;
        Ok((t, false))
    }

    pub fn omega(&self, limit: u64) -> Result<(OmegaTable, bool)> {
        if let Some(t) = self.load_omega(limit) {
            return Ok((t, true));
        }
        let t = primes::sieve_omega(limit)?;
        self.store_omega(&t)?;
        Ok((t, false))
    }
}

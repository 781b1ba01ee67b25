//! Binary sidecar cache for kernel tables.
//!
//! Layout, all integers and floats little-endian:
//!
//! ```text
//! magic      8 bytes  "RZKCACHE"
//! version    u32      1
//! dim        u32
//! radius     u32      box radius R (table covers |z_i| ≤ 2R)
//! alpha      f64
//! backend    u8       0 = integral, 1 = power_law
//! kappa      f64      0 for integral
//! zero_value f64      0 for integral
//! quad_hash  32 bytes SHA-256 of the quadrature settings (JSON)
//! count      u64      number of table entries, (4R+1)^N
//! table      count × f64, lexicographic lag order, first axis slowest
//! ```

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use log::{info, warn};
use sha2::{Digest, Sha256};

use super::{riesz_green, KernelBackend, QuadratureSpec, RieszKernel};
use crate::lattice::LatticeBox;
use crate::{Error, Result};

const MAGIC: &[u8; 8] = b"RZKCACHE";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct CacheKey {
    pub dim: u32,
    pub radius: u32,
    pub alpha: f64,
    pub backend: KernelBackend,
    pub quad_hash: [u8; 32],
}

impl CacheKey {
    pub fn new(lattice: &LatticeBox, alpha: f64, backend: KernelBackend, spec: &QuadratureSpec) -> Self {
        let json = serde_json::to_vec(spec).expect("quadrature spec serializes");
        CacheKey {
            dim: lattice.dim() as u32,
            radius: lattice.radius() as u32,
            alpha,
            backend,
            quad_hash: Sha256::digest(&json).into(),
        }
    }

    fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&self.dim.to_le_bytes());
        out.extend_from_slice(&self.radius.to_le_bytes());
        out.extend_from_slice(&self.alpha.to_le_bytes());
        let (tag, kappa, zero) = match self.backend {
            KernelBackend::Integral => (0u8, 0.0, 0.0),
            KernelBackend::PowerLaw { kappa, zero_value } => (1u8, kappa, zero_value),
        };
        out.push(tag);
        out.extend_from_slice(&f64::to_le_bytes(kappa));
        out.extend_from_slice(&f64::to_le_bytes(zero));
        out.extend_from_slice(&self.quad_hash);
    }
}

const HEADER_LEN: usize = 8 + 3 * 4 + 8 + 1 + 8 + 8 + 32;

pub fn write_cache(path: &Path, key: &CacheKey, kernel: &RieszKernel) -> Result<()> {
    let mut buf = Vec::with_capacity(HEADER_LEN + 8 + 8 * kernel.table().len());
    key.encode(&mut buf);
    buf.extend_from_slice(&(kernel.table().len() as u64).to_le_bytes());
    for v in kernel.table() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut f = fs::File::create(path)?;
    f.write_all(&buf)?;
    Ok(())
}

/// Load a cached table; `Ok(None)` if the stored key differs from `key`.
pub fn read_cache(path: &Path, key: &CacheKey) -> Result<Option<RieszKernel>> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < HEADER_LEN + 8 || &bytes[..8] != MAGIC {
        return Err(Error::Cache(format!("{} is not a kernel cache file", path.display())));
    }
    let mut expected = Vec::with_capacity(HEADER_LEN);
    key.encode(&mut expected);
    if bytes[..HEADER_LEN] != expected[..] {
        return Ok(None);
    }
    let count = u64::from_le_bytes(bytes[HEADER_LEN..HEADER_LEN + 8].try_into().unwrap()) as usize;
    let body = &bytes[HEADER_LEN + 8..];
    if body.len() != 8 * count {
        return Err(Error::Cache(format!(
            "{}: header announces {count} entries, file holds {} bytes of table",
            path.display(),
            body.len()
        )));
    }
    let table = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    RieszKernel::from_table(key.dim as usize, 2 * key.radius as usize, key.alpha, key.backend, table)
        .map(Some)
}

/// Use the cached table at `path` when its key matches, otherwise build and (re)write it.
pub fn load_or_build(
    path: &Path,
    lattice: &LatticeBox,
    alpha: f64,
    backend: KernelBackend,
    spec: &QuadratureSpec,
) -> Result<RieszKernel> {
    let key = CacheKey::new(lattice, alpha, backend, spec);
    if path.exists() {
        match read_cache(path, &key) {
            Ok(Some(k)) => {
                info!("kernel table loaded from {}", path.display());
                return Ok(k);
            }
            Ok(None) => warn!("stale kernel cache at {} (key mismatch); rebuilding", path.display()),
            Err(e) => warn!("unreadable kernel cache: {e}; rebuilding"),
        }
    }
    let kernel = riesz_green(lattice, alpha, backend, spec)?;
    write_cache(path, &key, &kernel)?;
    Ok(kernel)
}

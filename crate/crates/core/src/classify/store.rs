use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{Provenance, TypeCatalog};
use crate::error::{Error, Result};
use crate::matgroup::IntGroup;

/// Catalog file format version written by [`save_catalog`].
pub const FORMAT_VERSION: u64 = 1;

fn payload(catalog: &TypeCatalog) -> Result<Value> {
    Ok(json!({
        "version": FORMAT_VERSION,
        "dimension": catalog.dimension(),
        "z_classes": catalog.z_classes(),
        "q_partition": catalog.q_partition(),
        "provenance": catalog.provenance(),
    }))
}

fn checksum(payload: &Value) -> String {
    // serde_json maps keep keys sorted, so this rendering is canonical
    hex::encode(Sha256::digest(payload.to_string().as_bytes()))
}

/// Writes the catalog as checksummed JSON.
pub fn save_catalog(catalog: &TypeCatalog, path: &Path) -> Result<()> {
    let mut v = payload(catalog)?;
    let sum = checksum(&v);
    v["checksum"] = json!(sum);
    std::fs::write(path, serde_json::to_string_pretty(&v)?)?;
    Ok(())
}

/// Reads a catalog written by [`save_catalog`], checking version and
/// checksum. A file cut short is reported as a checksum mismatch.
pub fn load_catalog(path: &Path) -> Result<TypeCatalog> {
    let text = std::fs::read_to_string(path)?;
    let mut v: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) if e.is_eof() => return Err(Error::ChecksumMismatch),
        Err(e) => return Err(Error::Malformed(e.to_string())),
    };
    let version = v.get("version").and_then(Value::as_u64).unwrap_or(0);
    if version != FORMAT_VERSION {
        return Err(Error::FormatVersionMismatch { found: version, supported: FORMAT_VERSION });
    }
    let stored = v
        .as_object_mut()
        .and_then(|o| o.remove("checksum"))
        .and_then(|c| c.as_str().map(str::to_string))
        .ok_or(Error::ChecksumMismatch)?;
    if checksum(&v) != stored {
        return Err(Error::ChecksumMismatch);
    }
    let field = |name: &str| v.get(name).cloned().ok_or_else(|| Error::Malformed(format!("missing field {name}")));
    let dimension: usize = serde_json::from_value(field("dimension")?)?;
    let z_classes: Vec<IntGroup> = serde_json::from_value(field("z_classes")?)?;
    let q_partition: Vec<Vec<usize>> = serde_json::from_value(field("q_partition")?)?;
    let provenance: Provenance = match v.get("provenance") {
        Some(p) => serde_json::from_value(p.clone())?,
        None => Provenance::default(),
    };
    if z_classes.iter().any(|g| g.dimension() != dimension) {
        return Err(Error::Malformed("representative of the wrong dimension".into()));
    }
    let n = z_classes.len();
    if q_partition.iter().flatten().any(|&i| i >= n) {
        return Err(Error::Malformed("partition index out of range".into()));
    }
    Ok(TypeCatalog::new(dimension, z_classes, q_partition, provenance))
}

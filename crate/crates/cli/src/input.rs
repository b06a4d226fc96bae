//! Group and torus arguments: JSON files or built-in specifiers.

use std::path::Path;

use torlat_core::matgroup::{AnyGroup, IntGroup};
use torlat_core::rootsys::{signed_permutation_group, weyl_generators, RootSystemType};
use torlat_core::torus::{make_torus, TorusPresentation};
use torlat_core::{Error, Result};

/// Resolves `weyl:<type>`, `signedperm:<d>` or a path to group JSON.
pub fn load_group(spec: &str) -> Result<AnyGroup> {
    if let Some(t) = spec.strip_prefix("weyl:") {
        let t: RootSystemType = t.parse()?;
        return Ok(AnyGroup::Z(weyl_generators(t)));
    }
    if let Some(d) = spec.strip_prefix("signedperm:") {
        let d: usize = d.parse().map_err(|_| Error::Malformed(format!("bad degree in {spec}")))?;
        if d == 0 {
            return Err(Error::Malformed("degree must be positive".into()));
        }
        return Ok(AnyGroup::Z(signed_permutation_group(d)));
    }
    AnyGroup::from_json(read_json(spec)?)
}

pub fn load_int_group(spec: &str) -> Result<IntGroup> {
    match load_group(spec)? {
        AnyGroup::Z(g) => Ok(g),
        AnyGroup::Q(g) => g
            .to_integral()
            .ok_or_else(|| Error::Malformed(format!("{spec}: expected an integral group"))),
    }
}

/// A torus file (with a `galois` field), a group file or a built-in group.
pub fn load_torus(spec: &str) -> Result<TorusPresentation> {
    if !spec.starts_with("weyl:") && !spec.starts_with("signedperm:") {
        let v = read_json(spec)?;
        if v.get("galois").is_some() {
            return TorusPresentation::from_json(&v.to_string());
        }
    }
    make_torus(load_int_group(spec)?)
}

fn read_json(path: &str) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(Path::new(path))?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{path}: {e}")))
}

/// Parses `a..b` or `a..=b` (both inclusive) or a single modulus.
pub fn parse_range(s: &str) -> std::result::Result<(u64, u64), String> {
    let parse = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = parse(s)?;
            (n, n)
        }
    };
    if lo < 2 || hi < lo {
        return Err(format!("empty or invalid modulus range {s}"));
    }
    Ok((lo, hi))
}

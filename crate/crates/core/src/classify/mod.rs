//! Conjugacy classes of finite subgroups of `GL_d(Z)` for small `d`, grouped
//! into `GL_d(Q)`-classes, with a checksummed on-disk format.

mod enumerate;
mod store;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::conjtest::{invariant_lattice, z_conjugacy_with_profiles, ZProfile, DEFAULT_SEARCH_BOUND};
use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::matgroup::{IntGroup, RatGroup};

pub use enumerate::{enumerate_with_seeds, enumerate_z_types, expected_z_count, partition_q_types, seed_forms, Seed};
pub use store::{load_catalog, save_catalog, FORMAT_VERSION};

/// Where a catalog came from.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Seed labels with the Gram matrix each seed group stabilizes.
    pub seeds: Vec<(String, IntMatrix)>,
    /// Distinct subgroups of the seeds that were examined.
    pub candidates: usize,
    /// Number of profile buckets searched.
    pub buckets: usize,
}

/// Z-class representatives in one dimension together with their grouping
/// into Q-classes.
#[derive(Clone, Debug)]
pub struct TypeCatalog {
    dimension: usize,
    z_classes: Vec<IntGroup>,
    q_partition: Vec<Vec<usize>>,
    provenance: Provenance,
    profiles: OnceLock<Vec<ZProfile>>,
}

impl PartialEq for TypeCatalog {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension
            && self.q_partition == other.q_partition
            && self.provenance == other.provenance
            && self.z_classes.len() == other.z_classes.len()
            && self.z_classes.iter().zip(&other.z_classes).all(|(a, b)| a.generators() == b.generators())
    }
}

impl TypeCatalog {
    pub(crate) fn new(
        dimension: usize,
        z_classes: Vec<IntGroup>,
        q_partition: Vec<Vec<usize>>,
        provenance: Provenance,
    ) -> Self {
        TypeCatalog { dimension, z_classes, q_partition, provenance, profiles: OnceLock::new() }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn z_classes(&self) -> &[IntGroup] {
        &self.z_classes
    }

    /// Blocks of Z-class indices; empty until [`partition_q_types`] has run.
    pub fn q_partition(&self) -> &[Vec<usize>] {
        &self.q_partition
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn z_count(&self) -> usize {
        self.z_classes.len()
    }

    pub fn q_count(&self) -> usize {
        self.q_partition.len()
    }

    /// Index of the Q-class block containing Z-class `i`.
    pub fn q_class_of(&self, i: usize) -> Option<usize> {
        self.q_partition.iter().position(|b| b.contains(&i))
    }

    pub fn profiles(&self) -> Result<&[ZProfile]> {
        if let Some(p) = self.profiles.get() {
            return Ok(p);
        }
        let p = self.z_classes.iter().map(ZProfile::of).collect::<Result<Vec<_>>>()?;
        let _ = self.profiles.set(p);
        Ok(self.profiles.get().unwrap())
    }

    /// Index of the representative Z-conjugate to `g`.
    pub fn lookup(&self, g: &IntGroup) -> Result<usize> {
        if g.dimension() != self.dimension {
            return Err(Error::DimensionMismatch(format!("{} vs catalog {}", g.dimension(), self.dimension)));
        }
        let p = ZProfile::of(g)?;
        for (i, (rep, rp)) in self.z_classes.iter().zip(self.profiles()?).enumerate() {
            if *rp != p {
                continue;
            }
            let c = z_conjugacy_with_profiles(g, &p, rep, rp, DEFAULT_SEARCH_BOUND)?;
            if c.is_conjugate() {
                return Ok(i);
            }
            if let crate::conjtest::Verdict::Unknown(b) = c.verdict {
                return Err(Error::UndecidedConjugacy(b));
            }
        }
        Err(Error::NotInCatalog)
    }

    /// [`TypeCatalog::lookup`] for a rational group, after moving it onto
    /// an invariant lattice.
    pub fn lookup_rational(&self, g: &RatGroup) -> Result<usize> {
        let (_, gz) = invariant_lattice(g)?;
        self.lookup(&gz)
    }
}

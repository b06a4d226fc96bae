//! Root systems, Weyl groups in the simple-root basis, and the table of
//! maximal finite subgroup orders of `GL_d(Q)` for `d <= 10`.
//!
//! Cartan matrices follow `C_ij = 2 (a_i, a_j) / (a_j, a_j)` with Bourbaki
//! node numbering: `B_n` has `a_n` short, `C_n` has `a_n` long, `F_4` has
//! `a_1, a_2` long, `G_2` has `a_1` short, and `E_n` is the chain
//! `1-3-4-...-n` with node 2 attached to node 4.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::matgroup::IntGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// An irreducible root system type such as `E8` or `B3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RootSystemType {
    family: Family,
    rank: usize,
}

impl RootSystemType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(RootSystemType { family, rank })
        } else {
            Err(Error::InvalidType(format!("{family:?}{rank}")))
        }
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn rank(self) -> usize {
        self.rank
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for RootSystemType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidType(s.to_string());
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(bad()),
        };
        let rest = chars.as_str().trim_start_matches('_');
        let rank = rest.parse::<usize>().map_err(|_| bad())?;
        RootSystemType::new(family, rank)
    }
}

impl TryFrom<String> for RootSystemType {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<RootSystemType> for String {
    fn from(t: RootSystemType) -> String {
        t.to_string()
    }
}

/// The Cartan matrix of `t` (see the module docs for the convention).
pub fn cartan_matrix(t: RootSystemType) -> IntMatrix {
    let n = t.rank;
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match t.family {
        Family::A | Family::B | Family::C => (0..n - 1).for_each(|i| link(i, i + 1)),
        Family::D => {
            (0..n - 2).for_each(|i| link(i, i + 1));
            link(n - 3, n - 1);
        }
        Family::E => {
            link(0, 2);
            link(1, 3);
            (2..n - 1).for_each(|i| link(i, i + 1));
        }
        Family::F => (0..3).for_each(|i| link(i, i + 1)),
        Family::G => link(0, 1),
    }
    match t.family {
        // a_n short: C_{n-1,n} = 2(a_{n-1},a_n)/(a_n,a_n) = -2
        Family::B => c[n - 2][n - 1] = -2,
        Family::C => c[n - 1][n - 2] = -2,
        Family::F => c[1][2] = -2,
        Family::G => c[1][0] = -3,
        _ => {}
    }
    IntMatrix::from_i64_rows(c)
}

/// Simple reflections `s_i(a_j) = a_j - C_ji a_i` as matrices acting on
/// coordinates in the simple-root basis.
pub fn weyl_generators(t: RootSystemType) -> IntGroup {
    let c = cartan_matrix(t);
    let n = t.rank;
    let gens = (0..n)
        .map(|i| {
            IntMatrix::from_fn(n, n, |r, j| {
                let delta = if r == j { 1 } else { 0 };
                if r == i {
                    num_bigint::BigInt::from(delta) - &c[(j, i)]
                } else {
                    num_bigint::BigInt::from(delta)
                }
            })
        })
        .collect();
    IntGroup::new(n, gens).expect("reflections are unimodular").with_label(format!("W({t})"))
}

/// Order of the Weyl group, by Schreier-Sims on the root orbit.
pub fn weyl_order(t: RootSystemType) -> Result<BigUint> {
    weyl_generators(t).order_schreier_sims()
}

/// Number of roots: the union of the orbits of the simple roots.
pub fn root_count(t: RootSystemType) -> Result<usize> {
    let g = weyl_generators(t);
    Ok(g.perm_action(crate::matgroup::DEFAULT_ORBIT_BOUND)?.points.len())
}

/// `{+-1}^d` semidirect `S_d`: adjacent transpositions and `diag(-1, 1, ...)`.
pub fn signed_permutation_group(d: usize) -> IntGroup {
    assert!(d >= 1, "dimension must be positive");
    let mut gens = Vec::with_capacity(d);
    for i in 0..d - 1 {
        gens.push(IntMatrix::from_fn(d, d, |r, c| {
            let v = if (r == i && c == i + 1) || (r == i + 1 && c == i) || (r == c && r != i && r != i + 1) { 1 } else { 0 };
            v.into()
        }));
    }
    gens.push(IntMatrix::from_fn(d, d, |r, c| {
        let v = if r != c { 0 } else if r == 0 { -1 } else { 1 };
        v.into()
    }));
    IntGroup::new(d, gens).expect("signed permutations are unimodular").with_label(format!("signed permutations of degree {d}"))
}

/// How a table entry's group is assembled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupDescription {
    Weyl { root_system: RootSystemType },
    WeylWithMinusIdentity { root_system: RootSystemType },
    WeylProduct { factors: Vec<RootSystemType> },
    SignedPermutation { degree: usize },
}

impl fmt::Display for GroupDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescription::Weyl { root_system } => write!(f, "W({root_system})"),
            GroupDescription::WeylWithMinusIdentity { root_system } => write!(f, "<W({root_system}), -I>"),
            GroupDescription::WeylProduct { factors } => {
                let parts: Vec<String> = factors.iter().map(|t| format!("W({t})")).collect();
                write!(f, "{}", parts.join(" x "))
            }
            GroupDescription::SignedPermutation { degree } => write!(f, "{{+-1}}^{degree} x| S_{degree}"),
        }
    }
}

/// One row of the maximal-order table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxOrderEntry {
    pub d: usize,
    pub group: GroupDescription,
    /// Order as a decimal string (it can exceed `u64` only in principle).
    #[serde(with = "biguint_string")]
    pub max_order: BigUint,
}

mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn t(family: Family, rank: usize) -> RootSystemType {
    RootSystemType::new(family, rank).expect("valid type")
}

/// The designated maximal-order group in dimension `d`.
pub fn designated_group(d: usize) -> GroupDescription {
    match d {
        2 => GroupDescription::Weyl { root_system: t(Family::G, 2) },
        4 => GroupDescription::Weyl { root_system: t(Family::F, 4) },
        6 => GroupDescription::WeylWithMinusIdentity { root_system: t(Family::E, 6) },
        7 => GroupDescription::Weyl { root_system: t(Family::E, 7) },
        8 => GroupDescription::Weyl { root_system: t(Family::E, 8) },
        9 => GroupDescription::WeylProduct { factors: vec![t(Family::E, 8), t(Family::A, 1)] },
        10 => GroupDescription::WeylProduct { factors: vec![t(Family::E, 8), t(Family::G, 2)] },
        _ => GroupDescription::SignedPermutation { degree: d },
    }
}

/// Generators of the group described by `desc`.
pub fn build_group(desc: &GroupDescription) -> IntGroup {
    match desc {
        GroupDescription::Weyl { root_system } => weyl_generators(*root_system),
        GroupDescription::WeylWithMinusIdentity { root_system } => {
            let w = weyl_generators(*root_system);
            let n = root_system.rank();
            let mut gens = w.generators().to_vec();
            gens.push(-&IntMatrix::identity(n));
            IntGroup::new(n, gens).expect("unimodular").with_label(desc.to_string())
        }
        GroupDescription::WeylProduct { factors } => {
            let mut g = weyl_generators(factors[0]);
            for f in &factors[1..] {
                g = g.direct_product(&weyl_generators(*f));
            }
            g.with_label(desc.to_string())
        }
        GroupDescription::SignedPermutation { degree } => signed_permutation_group(*degree),
    }
}

/// Order of the described group: Schreier-Sims for a single group, the
/// product of factor orders for direct products.
pub fn described_order(desc: &GroupDescription) -> Result<BigUint> {
    match desc {
        GroupDescription::WeylProduct { factors } => {
            factors.iter().try_fold(BigUint::from(1u32), |acc, f| Ok(acc * weyl_order(*f)?))
        }
        _ => build_group(desc).order_schreier_sims(),
    }
}

/// `2^d d!`.
pub fn signed_permutation_order(d: usize) -> BigUint {
    (1..=d).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(2 * k))
}

/// Entry for one dimension.
pub fn max_order_entry(d: usize) -> Result<MaxOrderEntry> {
    if d == 0 {
        return Err(Error::InvalidType("dimension 0".into()));
    }
    let group = designated_group(d);
    let max_order = described_order(&group)?;
    Ok(MaxOrderEntry { d, group, max_order })
}

/// Entries for `d = 1..=10`, each with its computed order.
pub fn max_order_table() -> Result<Vec<MaxOrderEntry>> {
    (1..=10).map(max_order_entry).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> RootSystemType {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_validate() {
        assert_eq!(ty("E8").to_string(), "E8");
        assert_eq!(ty("g_2"), RootSystemType::new(Family::G, 2).unwrap());
        assert!("E9".parse::<RootSystemType>().is_err());
        assert!("F3".parse::<RootSystemType>().is_err());
        assert!("D3".parse::<RootSystemType>().is_err());
        assert!("X2".parse::<RootSystemType>().is_err());
    }

    #[test]
    fn small_cartan_matrices() {
        assert_eq!(cartan_matrix(ty("A1")), IntMatrix::from_i64(&[&[2]]));
        assert_eq!(cartan_matrix(ty("G2")), IntMatrix::from_i64(&[&[2, -1], &[-3, 2]]));
    }

    #[test]
    fn reflections_have_order_two() {
        for name in ["A3", "B3", "C3", "D4", "G2", "F4", "E6"] {
            for s in weyl_generators(ty(name)).generators() {
                assert!((s * s).is_identity(), "{name}");
                assert_eq!(s.det(), (-1).into());
            }
        }
    }

    #[test]
    fn orders_of_small_weyl_groups() {
        let expect = [("A1", 2u64), ("A3", 24), ("B2", 8), ("B3", 48), ("C3", 48), ("D4", 192), ("G2", 12)];
        for (name, order) in expect {
            assert_eq!(weyl_order(ty(name)).unwrap(), BigUint::from(order), "{name}");
        }
    }

    #[test]
    fn root_counts() {
        assert_eq!(root_count(ty("A1")).unwrap(), 2);
        assert_eq!(root_count(ty("G2")).unwrap(), 12);
        assert_eq!(root_count(ty("B3")).unwrap(), 18);
    }

    #[test]
    fn signed_permutation_orders() {
        for d in 1..=5 {
            assert_eq!(signed_permutation_group(d).order_schreier_sims().unwrap(), signed_permutation_order(d));
        }
    }
}

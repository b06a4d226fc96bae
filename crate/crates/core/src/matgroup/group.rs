use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::cayley::CayleyTable;
use super::element::{GroupMatrix, Ring};
use super::fingerprint::{CharacterFingerprint, FingerprintEntry};
use super::schreier_sims::{Perm, StabilizerChain};
use crate::error::{Error, Result};
use crate::exact::{IntMatrix, ModMatrix, RatMatrix};

/// Default cap on explicit closures.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;
/// Default cap on the number of lattice points in a permutation action.
pub const DEFAULT_ORBIT_BOUND: usize = 1_000_000;
/// Element orders beyond this are treated as infinite.
pub const ELEMENT_ORDER_CAP: u64 = 10_000;

/// One conjugacy class of a finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass<M> {
    /// Least element of the class.
    pub representative: M,
    pub size: usize,
    pub element_order: u64,
    /// Indices into the group's element list.
    pub members: Vec<usize>,
}

/// Permutation action of a matrix group on the union of the orbits of the
/// standard basis vectors. The first `d` points are the basis vectors.
#[derive(Clone, Debug)]
pub struct PermAction<S> {
    pub points: Vec<Vec<S>>,
    pub generator_images: Vec<Perm>,
}

/// A finite subgroup of `GL_d(Z)` or `GL_d(Q)` given by generators, with
/// lazily computed closure, order, classes and fingerprint.
///
/// Caches are filled at most once and are safe to read from several threads.
#[derive(Clone, Debug)]
pub struct MatrixGroup<M: GroupMatrix = IntMatrix> {
    dimension: usize,
    label: String,
    generators: Vec<M>,
    elements: OnceLock<Vec<M>>,
    index: OnceLock<HashMap<M, usize>>,
    order: OnceLock<BigUint>,
    classes: OnceLock<Vec<ConjugacyClass<M>>>,
    fingerprint: OnceLock<CharacterFingerprint>,
    table: OnceLock<CayleyTable>,
}

pub type IntGroup = MatrixGroup<IntMatrix>;
pub type RatGroup = MatrixGroup<RatMatrix>;

/// Full closure of `generators` by breadth-first multiplication.
///
/// Elements are returned in discovery order starting with the identity.
pub fn closure<M: GroupMatrix>(dimension: usize, generators: &[M], cap: usize) -> Result<Vec<M>> {
    let id = M::identity_of(dimension);
    let mut seen: HashMap<M, ()> = HashMap::new();
    seen.insert(id.clone(), ());
    let mut elements = vec![id];
    let mut i = 0;
    while i < elements.len() {
        for g in generators {
            let y = elements[i].product(g);
            if !seen.contains_key(&y) {
                if elements.len() >= cap {
                    return Err(Error::NotFiniteWithinBound(cap));
                }
                seen.insert(y.clone(), ());
                elements.push(y);
            }
        }
        i += 1;
    }
    Ok(elements)
}

/// Order of `g` by repeated multiplication, up to `cap`.
pub fn element_order<M: GroupMatrix>(g: &M, cap: u64) -> Result<u64> {
    let mut x = g.clone();
    for k in 1..=cap {
        if x.is_identity_matrix() {
            return Ok(k);
        }
        x = x.product(g);
    }
    Err(Error::NotFiniteWithinBound(cap as usize))
}

impl<M: GroupMatrix> MatrixGroup<M> {
    /// Builds a group from generators, checking shapes and invertibility.
    pub fn new(dimension: usize, generators: Vec<M>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::DimensionMismatch("dimension must be positive".into()));
        }
        for g in &generators {
            if g.dimension() != dimension || g.to_rat().rows() != g.to_rat().cols() {
                return Err(Error::DimensionMismatch(format!("generator is not {dimension}x{dimension}")));
            }
            if g.try_inverse().is_none() {
                return Err(Error::NotInvertible(M::RING.as_str()));
            }
        }
        Ok(Self::new_unchecked(dimension, generators))
    }

    pub(crate) fn new_unchecked(dimension: usize, generators: Vec<M>) -> Self {
        MatrixGroup {
            dimension,
            label: String::new(),
            generators,
            elements: OnceLock::new(),
            index: OnceLock::new(),
            order: OnceLock::new(),
            classes: OnceLock::new(),
            fingerprint: OnceLock::new(),
            table: OnceLock::new(),
        }
    }

    pub fn trivial(dimension: usize) -> Self {
        Self::new_unchecked(dimension, Vec::new())
    }

    /// Group with a known element list; the generating set is the greedy one
    /// from [`MatrixGroup::small_generating_set`].
    pub fn from_elements(dimension: usize, mut elements: Vec<M>) -> Self {
        elements.sort();
        elements.dedup();
        let gens = greedy_generators(dimension, &elements);
        let g = Self::new_unchecked(dimension, gens);
        let _ = g.elements.set(elements);
        g
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn ring(&self) -> Ring {
        M::RING
    }

    pub fn generators(&self) -> &[M] {
        &self.generators
    }

    pub fn elements(&self) -> Result<&[M]> {
        self.elements_with_cap(DEFAULT_CLOSURE_CAP)
    }

    pub fn elements_with_cap(&self, cap: usize) -> Result<&[M]> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        // a generator of infinite (or huge) order is caught without building
        // the closure
        let order_cap = (cap as u64).min(ELEMENT_ORDER_CAP);
        for g in &self.generators {
            if element_order(g, order_cap).is_err() {
                return Err(Error::NotFiniteWithinBound(cap));
            }
        }
        let e = closure(self.dimension, &self.generators, cap)?;
        let _ = self.elements.set(e);
        Ok(self.elements.get().expect("just set"))
    }

    pub fn has_cached_elements(&self) -> bool {
        self.elements.get().is_some()
    }

    pub(crate) fn index(&self) -> Result<&HashMap<M, usize>> {
        if let Some(i) = self.index.get() {
            return Ok(i);
        }
        let map = self.elements()?.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let _ = self.index.set(map);
        Ok(self.index.get().unwrap())
    }

    pub fn index_of(&self, g: &M) -> Result<Option<usize>> {
        Ok(self.index()?.get(g).copied())
    }

    pub fn contains(&self, g: &M) -> Result<bool> {
        Ok(self.index_of(g)?.is_some())
    }

    /// Exact order: from the cached closure if present, otherwise by
    /// Schreier-Sims.
    pub fn order(&self) -> Result<BigUint> {
        if let Some(o) = self.order.get() {
            return Ok(o.clone());
        }
        let o = match self.elements.get() {
            Some(e) => BigUint::from(e.len()),
            None => self.order_schreier_sims()?,
        };
        let _ = self.order.set(o.clone());
        Ok(o)
    }

    /// Order as a machine integer; panics for orders beyond `u64`.
    pub fn order_u64(&self) -> Result<u64> {
        Ok(u64::try_from(self.order()?).expect("group order fits in u64"))
    }

    /// Order from a stabilizer chain on the basis-vector orbits; never
    /// enumerates the group.
    pub fn order_schreier_sims(&self) -> Result<BigUint> {
        self.order_schreier_sims_with_bound(DEFAULT_ORBIT_BOUND)
    }

    pub fn order_schreier_sims_with_bound(&self, orbit_bound: usize) -> Result<BigUint> {
        let action = self.perm_action(orbit_bound)?;
        let chain = StabilizerChain::new(action.points.len(), &action.generator_images);
        Ok(chain.order())
    }

    /// Faithful permutation action on the union of the basis-vector orbits.
    pub fn perm_action(&self, orbit_bound: usize) -> Result<PermAction<M::Scalar>> {
        let d = self.dimension;
        let mut points: Vec<Vec<M::Scalar>> = Vec::new();
        let mut lookup: HashMap<Vec<M::Scalar>, u32> = HashMap::new();
        for i in 0..d {
            let e = M::unit_vector(d, i);
            if !lookup.contains_key(&e) {
                lookup.insert(e.clone(), points.len() as u32);
                points.push(e);
            }
        }
        let mut images: Vec<Vec<u32>> = vec![Vec::new(); self.generators.len()];
        let mut i = 0;
        while i < points.len() {
            for (k, g) in self.generators.iter().enumerate() {
                let y = g.act(&points[i]);
                let idx = match lookup.get(&y) {
                    Some(&j) => j,
                    None => {
                        if points.len() >= orbit_bound {
                            return Err(Error::OrbitExplosion(orbit_bound));
                        }
                        let j = points.len() as u32;
                        lookup.insert(y.clone(), j);
                        points.push(y);
                        j
                    }
                };
                images[k].push(idx);
            }
            i += 1;
        }
        // a matrix is determined by the images of the basis vectors
        for (g, img) in self.generators.iter().zip(&images) {
            let fixes_basis = (0..d).all(|b| img[b] as usize == b);
            if fixes_basis && !g.is_identity_matrix() {
                return Err(Error::NotFinite("permutation action is not faithful".into()));
            }
        }
        Ok(PermAction { points, generator_images: images })
    }

    /// Conjugacy classes sorted by (element order, trace, representative).
    pub fn conjugacy_classes(&self) -> Result<&[ConjugacyClass<M>]> {
        if let Some(c) = self.classes.get() {
            return Ok(c);
        }
        let elements = self.elements()?;
        let index = self.index()?;
        let inverses: Vec<M> = self
            .generators
            .iter()
            .map(|g| g.try_inverse().expect("generators are invertible"))
            .collect();
        let mut class_of = vec![usize::MAX; elements.len()];
        let mut classes = Vec::new();
        for start in 0..elements.len() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            class_of[start] = id;
            let mut members = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for (g, gi) in self.generators.iter().zip(&inverses) {
                    let y = g.product(&elements[x]).product(gi);
                    let j = index[&y];
                    if class_of[j] == usize::MAX {
                        class_of[j] = id;
                        members.push(j);
                        queue.push_back(j);
                    }
                }
            }
            members.sort_unstable();
            let representative = members.iter().map(|&j| &elements[j]).min().unwrap().clone();
            let element_order = element_order(&representative, ELEMENT_ORDER_CAP)?;
            classes.push(ConjugacyClass { representative, size: members.len(), element_order, members });
        }
        classes.sort_by(|a, b| {
            a.element_order
                .cmp(&b.element_order)
                .then_with(|| b.representative.trace_q().cmp(&a.representative.trace_q()))
                .then_with(|| a.representative.cmp(&b.representative))
        });
        let _ = self.classes.set(classes);
        Ok(self.classes.get().unwrap())
    }

    /// Sorted multiset of (trace, element order, class size).
    pub fn character_fingerprint(&self) -> Result<&CharacterFingerprint> {
        if let Some(f) = self.fingerprint.get() {
            return Ok(f);
        }
        let entries = self
            .conjugacy_classes()?
            .iter()
            .map(|c| FingerprintEntry {
                trace: c.representative.trace_q(),
                order: c.element_order,
                class_size: c.size as u64,
            })
            .collect();
        let _ = self.fingerprint.set(CharacterFingerprint::new(entries));
        Ok(self.fingerprint.get().unwrap())
    }

    /// Multiplication table over the element list (built once).
    pub fn cayley_table(&self) -> Result<&CayleyTable> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        let t = CayleyTable::new(self.elements()?, self.index()?);
        let _ = self.table.set(t);
        Ok(self.table.get().unwrap())
    }

    /// Every subgroup exactly once, sorted by (order, element index set).
    pub fn all_subgroups(&self) -> Result<Vec<MatrixGroup<M>>> {
        let elements = self.elements()?;
        let table = self.cayley_table()?;
        Ok(super::subgroups::subgroup_index_sets(table)
            .into_iter()
            .map(|set| {
                let members: Vec<M> = set.iter().map(|&i| elements[i].clone()).collect();
                MatrixGroup::from_elements(self.dimension, members)
            })
            .collect())
    }

    /// Greedy generating set: scan elements in sorted order and keep those
    /// outside the span of the ones kept so far.
    pub fn small_generating_set(&self) -> Result<Vec<M>> {
        let mut elements = self.elements()?.to_vec();
        elements.sort();
        Ok(greedy_generators(self.dimension, &elements))
    }

    /// `{u g u^-1}` given `u` and its inverse.
    pub fn conjugate_by(&self, u: &M, u_inv: &M) -> MatrixGroup<M> {
        let gens = self.generators.iter().map(|g| u.product(g).product(u_inv)).collect();
        let mut out = MatrixGroup::new_unchecked(self.dimension, gens).with_label(self.label.clone());
        if let Some(e) = self.elements.get() {
            let _ = out.elements.set(e.iter().map(|g| u.product(g).product(u_inv)).collect());
        }
        out.label = self.label.clone();
        out
    }

    /// The contragredient group `{g^-T}`.
    pub fn dual(&self) -> MatrixGroup<M> {
        let inv_t = |g: &M| g.try_inverse().expect("group elements are invertible").transpose_of();
        let mut out = MatrixGroup::new_unchecked(self.dimension, self.generators.iter().map(inv_t).collect())
            .with_label(self.label.clone());
        if let Some(e) = self.elements.get() {
            let _ = out.elements.set(e.iter().map(inv_t).collect());
        }
        out.label = self.label.clone();
        out
    }

    /// Same element set, compared through the caches.
    pub fn same_elements(&self, other: &MatrixGroup<M>) -> Result<bool> {
        if self.dimension != other.dimension || self.order()? != other.order()? {
            return Ok(false);
        }
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Block-diagonal direct product acting on `Q^{d1 + d2}`.
    pub fn direct_product(&self, other: &MatrixGroup<M>) -> MatrixGroup<M>
    where
        M: BlockSum,
    {
        let id1 = M::identity_of(self.dimension);
        let id2 = M::identity_of(other.dimension);
        let mut gens: Vec<M> = self.generators.iter().map(|g| g.block_sum(&id2)).collect();
        gens.extend(other.generators.iter().map(|h| id1.block_sum(h)));
        MatrixGroup::new_unchecked(self.dimension + other.dimension, gens)
    }

    /// Traces of all elements, as rationals.
    pub fn traces(&self) -> Result<Vec<BigRational>> {
        Ok(self.elements()?.iter().map(|g| g.trace_q()).collect())
    }
}

/// Block-diagonal sums of group elements.
pub trait BlockSum {
    fn block_sum(&self, other: &Self) -> Self;
}

impl BlockSum for IntMatrix {
    fn block_sum(&self, other: &Self) -> Self {
        self.direct_sum(other)
    }
}

impl BlockSum for RatMatrix {
    fn block_sum(&self, other: &Self) -> Self {
        self.direct_sum(other)
    }
}

fn greedy_generators<M: GroupMatrix>(dimension: usize, sorted: &[M]) -> Vec<M> {
    let mut gens: Vec<M> = Vec::new();
    let mut span: std::collections::HashSet<M> = [M::identity_of(dimension)].into_iter().collect();
    for g in sorted {
        if span.contains(g) {
            continue;
        }
        gens.push(g.clone());
        span = closure(dimension, &gens, usize::MAX).expect("subset of a finite group").into_iter().collect();
        if span.len() == sorted.len() {
            break;
        }
    }
    gens
}

impl IntGroup {
    /// Whether reduction mod `n` is injective on the group; returns the kernel
    /// (elements congruent to the identity) as well.
    pub fn is_faithful_reduction(&self, n: u64) -> Result<(bool, Vec<IntMatrix>)> {
        assert!(n >= 2, "modulus must be at least 2");
        let elements = self.elements()?;
        let identity = ModMatrix::identity(self.dimension, n);
        let mut kernel: Vec<IntMatrix> =
            elements.iter().filter(|g| g.mod_n(n) == identity && !g.is_identity()).cloned().collect();
        kernel.sort();
        Ok((kernel.is_empty(), kernel))
    }

    /// Reduction of all generators mod `n`.
    pub fn reduce_mod(&self, n: u64) -> Vec<ModMatrix> {
        self.generators.iter().map(|g| g.mod_n(n)).collect()
    }

    pub fn to_rational(&self) -> RatGroup {
        let mut g = RatGroup::new_unchecked(self.dimension, self.generators.iter().map(|m| m.to_rat()).collect());
        g.label = self.label.clone();
        g
    }
}

impl RatGroup {
    /// `Some` iff every generator is integral and unimodular.
    pub fn to_integral(&self) -> Option<IntGroup> {
        let gens: Option<Vec<IntMatrix>> = self.generators.iter().map(|g| g.to_integer()).collect();
        let gens = gens?;
        if !gens.iter().all(|g| g.is_unimodular()) {
            return None;
        }
        Some(IntGroup::new_unchecked(self.dimension, gens).with_label(self.label.clone()))
    }
}

#[derive(Serialize, Deserialize)]
struct GroupRepr<M> {
    dimension: usize,
    ring: Option<Ring>,
    #[serde(default)]
    label: String,
    generators: Vec<M>,
}

impl<M: GroupMatrix> Serialize for MatrixGroup<M> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupRepr { dimension: self.dimension, ring: Some(M::RING), label: self.label.clone(), generators: self.generators.clone() }
            .serialize(s)
    }
}

impl<'de, M: GroupMatrix> Deserialize<'de> for MatrixGroup<M> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GroupRepr::<M>::deserialize(d)?;
        let ring = repr.ring.unwrap_or(M::RING);
        if ring != M::RING {
            return Err(D::Error::custom(format!("expected ring {}, found {}", M::RING.as_str(), ring.as_str())));
        }
        MatrixGroup::new(repr.dimension, repr.generators)
            .map(|g| g.with_label(repr.label))
            .map_err(D::Error::custom)
    }
}

/// A group read from JSON with either ring tag.
#[derive(Clone, Debug)]
pub enum AnyGroup {
    Z(IntGroup),
    Q(RatGroup),
}

impl AnyGroup {
    pub fn from_json(value: serde_json::Value) -> Result<AnyGroup> {
        let ring = value.get("ring").and_then(|r| r.as_str()).unwrap_or("Z");
        match ring {
            "Z" => Ok(AnyGroup::Z(serde_json::from_value(value)?)),
            "Q" => Ok(AnyGroup::Q(serde_json::from_value(value)?)),
            other => Err(Error::Malformed(format!("unknown ring {other:?}"))),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            AnyGroup::Z(g) => g.dimension(),
            AnyGroup::Q(g) => g.dimension(),
        }
    }

    pub fn to_rational(&self) -> RatGroup {
        match self {
            AnyGroup::Z(g) => g.to_rational(),
            AnyGroup::Q(g) => g.clone(),
        }
    }
}

impl Serialize for AnyGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AnyGroup::Z(g) => g.serialize(s),
            AnyGroup::Q(g) => g.serialize(s),
        }
    }
}

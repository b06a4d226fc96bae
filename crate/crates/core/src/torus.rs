//! Algebraic tori over a field `k` presented by the Galois action on their
//! character lattice.
//!
//! A torus of dimension `d` split by a finite Galois extension with group
//! `Γ` is the same thing as a faithful action of `Γ` on `Z^d` up to
//! isomorphism; the action is stored as its image in `GL_d(Z)`. Cocharacters
//! are reached through [`dual_torus`].
//!
//! Two tori share an acting group when their labels agree and their
//! generator lists have equal length: generator `i` of one acts together with
//! generator `i` of the other. Otherwise the two Galois groups are treated as
//! independent and the acting group is their direct product.

use std::collections::{HashSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::conjtest::{for_each_at_height, intertwiner_basis, reduce_basis, ConjugacyCertificate};
use crate::error::{Error, Result};
use crate::exact::{IntMatrix, ModMatrix};
use crate::matgroup::{closure, IntGroup, DEFAULT_CLOSURE_CAP};

/// Default coefficient height for [`is_isomorphic`].
pub const DEFAULT_ISOMORPHISM_HEIGHT: u32 = 5;

/// A torus given by the image of its Galois group acting on `X(T) = Z^d`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorusPresentation {
    dimension: usize,
    galois: IntGroup,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl PartialEq for TorusPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension && self.label == other.label && self.galois.generators() == other.galois.generators()
    }
}

impl TorusPresentation {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn galois(&self) -> &IntGroup {
        &self.galois
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// `[k_T : k]`, the order of the Galois image.
    pub fn splitting_degree(&self) -> Result<u64> {
        self.galois.order_u64()
    }

    /// Reads a torus from JSON and checks that its group is finite.
    pub fn from_json(text: &str) -> Result<Self> {
        let t: TorusPresentation = serde_json::from_str(text)?;
        if t.dimension != t.galois.dimension() {
            return Err(Error::DimensionMismatch(format!(
                "torus dimension {} with group of degree {}",
                t.dimension,
                t.galois.dimension()
            )));
        }
        let label = t.label.clone();
        let mut out = make_torus(t.galois)?;
        out.label = label;
        Ok(out)
    }
}

/// The torus whose character lattice carries the action of `g`.
pub fn make_torus(g: IntGroup) -> Result<TorusPresentation> {
    match g.elements() {
        Ok(_) => {}
        Err(Error::NotFiniteWithinBound(cap)) => {
            return Err(Error::NotFinite(format!("closure exceeded {cap} elements")));
        }
        Err(e) => return Err(e),
    }
    Ok(TorusPresentation { dimension: g.dimension(), galois: g, label: None })
}

/// `G_m^d`.
pub fn split_torus(d: usize) -> TorusPresentation {
    TorusPresentation { dimension: d, galois: IntGroup::trivial(d), label: None }
}

/// The contragredient action `g -> g^-T` (characters to cocharacters).
pub fn dual_torus(t: &TorusPresentation) -> TorusPresentation {
    TorusPresentation { dimension: t.dimension, galois: t.galois.dual(), label: t.label.clone() }
}

fn paired(t1: &TorusPresentation, t2: &TorusPresentation) -> bool {
    t1.label.is_some() && t1.label == t2.label && t1.galois.generators().len() == t2.galois.generators().len()
}

/// Generators of the acting group as pairs `(action on X(T1), action on X(T2))`.
fn generator_pairs(t1: &TorusPresentation, t2: &TorusPresentation) -> Vec<(IntMatrix, IntMatrix)> {
    let (g1, g2) = (t1.galois.generators(), t2.galois.generators());
    if paired(t1, t2) {
        g1.iter().cloned().zip(g2.iter().cloned()).collect()
    } else {
        let id1 = IntMatrix::identity(t1.dimension);
        let id2 = IntMatrix::identity(t2.dimension);
        g1.iter().map(|s| (s.clone(), id2.clone())).chain(g2.iter().map(|h| (id1.clone(), h.clone()))).collect()
    }
}

/// The acting group of the pair as block-diagonal matrices `diag(a, b)`.
pub fn acting_group(t1: &TorusPresentation, t2: &TorusPresentation) -> IntGroup {
    let gens = generator_pairs(t1, t2).into_iter().map(|(a, b)| a.direct_sum(&b)).collect();
    IntGroup::new(t1.dimension + t2.dimension, gens).expect("block sums of unimodular matrices")
}

/// `T1 x T2`: the block-diagonal sum of character lattices.
pub fn product(t1: &TorusPresentation, t2: &TorusPresentation) -> TorusPresentation {
    let label = if paired(t1, t2) { t1.label.clone() } else { None };
    TorusPresentation { dimension: t1.dimension + t2.dimension, galois: acting_group(t1, t2), label }
}

/// The torus `R_{K/k} G_m`-style lattice `Z^n` with permutation action.
///
/// Each permutation is given by its images `p[i]` of the points `0..n`, and
/// acts by `e_i -> e_{p[i]}`.
pub fn weil_restriction(n: usize, permutations: &[Vec<usize>]) -> Result<TorusPresentation> {
    let mut gens = Vec::with_capacity(permutations.len());
    for p in permutations {
        let mut sorted = p.clone();
        sorted.sort_unstable();
        if p.len() != n || sorted != (0..n).collect::<Vec<_>>() {
            return Err(Error::Malformed(format!("{p:?} is not a permutation of {n} points")));
        }
        gens.push(IntMatrix::from_fn(n, n, |r, c| if p[c] == r { BigInt::one() } else { BigInt::zero() }));
    }
    make_torus(IntGroup::new(n, gens)?)
}

/// Equivariant maps `phi: X(T1) -> X(T2)`, stored as `d2 x d1` integer
/// matrices with `rho2(g) phi = phi rho1(g)`. Through the anti-equivalence
/// these are the homomorphisms of tori `T2 -> T1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomModule {
    pub source_dimension: usize,
    pub target_dimension: usize,
    pub rank: usize,
    pub basis: Vec<IntMatrix>,
}

fn hom_from_pairs(pairs: &[(IntMatrix, IntMatrix)], d1: usize, d2: usize) -> HomModule {
    let refs: Vec<(&IntMatrix, &IntMatrix)> = pairs.iter().map(|(a, b)| (a, b)).collect();
    let basis: Vec<IntMatrix> = intertwiner_basis(&refs, d1, d2)
        .into_iter()
        .map(|v| IntMatrix::from_rows(v.chunks(d1).map(|c| c.to_vec()).collect()))
        .collect();
    HomModule { source_dimension: d1, target_dimension: d2, rank: basis.len(), basis }
}

/// The lattice of equivariant maps for the acting group of the pair.
pub fn hom_module(t1: &TorusPresentation, t2: &TorusPresentation) -> HomModule {
    hom_from_pairs(&generator_pairs(t1, t2), t1.dimension, t2.dimension)
}

/// Maps equivariant for the subgroup `H` of the acting group only.
///
/// `h_generators` are block-diagonal elements of [`acting_group`]. The empty
/// list gives all `d2 x d1` integer matrices.
pub fn homs_fixed_by(t1: &TorusPresentation, t2: &TorusPresentation, h_generators: &[IntMatrix]) -> Result<HomModule> {
    let (d1, d2) = (t1.dimension, t2.dimension);
    let acting = acting_group(t1, t2);
    let mut pairs = Vec::with_capacity(h_generators.len());
    for h in h_generators {
        if h.rows() != d1 + d2 || h.cols() != d1 + d2 || !acting.contains(h)? {
            return Err(Error::NotASubgroup(format!("{h} is not in the acting group")));
        }
        let a = h.submatrix(&(0..d1).collect::<Vec<_>>(), &(0..d1).collect::<Vec<_>>());
        let b = h.submatrix(&(d1..d1 + d2).collect::<Vec<_>>(), &(d1..d1 + d2).collect::<Vec<_>>());
        pairs.push((a, b));
    }
    Ok(hom_from_pairs(&pairs, d1, d2))
}

/// Checks that generator `i` of `t1` corresponding to generator `i` of
/// `t2` extends to an isomorphism of the Galois groups.
fn matched_pairs(t1: &TorusPresentation, t2: &TorusPresentation) -> Result<Vec<(IntMatrix, IntMatrix)>> {
    let (g1, g2) = (t1.galois.generators(), t2.galois.generators());
    if g1.len() != g2.len() {
        return Err(Error::MismatchedGroups(format!("{} generators vs {}", g1.len(), g2.len())));
    }
    let pairs: Vec<(IntMatrix, IntMatrix)> = g1.iter().cloned().zip(g2.iter().cloned()).collect();
    let joint = IntGroup::new(
        t1.dimension + t2.dimension,
        pairs.iter().map(|(a, b)| a.direct_sum(b)).collect(),
    )?;
    let n = joint.order()?;
    if n != t1.galois.order()? || n != t2.galois.order()? {
        return Err(Error::MismatchedGroups("generator correspondence is not an isomorphism".into()));
    }
    Ok(pairs)
}

/// Whether the characters differ somewhere on the joint group.
fn character_mismatch(t1: &TorusPresentation, t2: &TorusPresentation, pairs: &[(IntMatrix, IntMatrix)]) -> Result<bool> {
    let d1 = t1.dimension;
    let d2 = t2.dimension;
    if d1 != d2 {
        return Ok(true);
    }
    let gens: Vec<IntMatrix> = pairs.iter().map(|(a, b)| a.direct_sum(b)).collect();
    let joint = closure(d1 + d2, &gens, DEFAULT_CLOSURE_CAP)?;
    Ok(joint.iter().any(|x| {
        let t_a: BigInt = (0..d1).map(|i| x[(i, i)].clone()).sum();
        let t_b: BigInt = (d1..d1 + d2).map(|i| x[(i, i)].clone()).sum();
        t_a != t_b
    }))
}

/// Whether `T1` and `T2` are isomorphic over `k` for the declared
/// correspondence of Galois generators, i.e. whether some `U` in `GL_d(Z)`
/// satisfies `U rho1(g) U^-1 = rho2(g)` for every generator.
///
/// Searches combinations of the equivariant-map basis with coefficients up
/// to `height` for determinant `+-1`, and looks for an obstruction modulo
/// small integers. Returns `Unknown(height)` if neither succeeds.
pub fn is_isomorphic(t1: &TorusPresentation, t2: &TorusPresentation, height: u32) -> Result<ConjugacyCertificate> {
    let pairs = matched_pairs(t1, t2)?;
    if t1.dimension != t2.dimension {
        return Ok(ConjugacyCertificate::not_conjugate("dimension"));
    }
    if character_mismatch(t1, t2, &pairs)? {
        return Ok(ConjugacyCertificate::not_conjugate("character"));
    }
    let d = t1.dimension;
    let refs: Vec<(&IntMatrix, &IntMatrix)> = pairs.iter().map(|(a, b)| (a, b)).collect();
    let basis = reduce_basis(&intertwiner_basis(&refs, d, d));
    let small: Option<Vec<Vec<i64>>> = basis.iter().map(|b| b.iter().map(|x| x.to_i64()).collect()).collect();
    let Some(small) = small else {
        return Ok(ConjugacyCertificate::unknown(height));
    };
    let mut found = None;
    for h in 1..=height as i64 {
        for_each_at_height(small.len(), h, &mut |c| {
            let m = IntMatrix::from_fn(d, d, |i, j| {
                c.iter().zip(&small).map(|(ci, b)| BigInt::from(*ci) * BigInt::from(b[i * d + j])).sum()
            });
            if m.det().magnitude().is_one() {
                found = Some(m);
                false
            } else {
                true
            }
        });
        if found.is_some() {
            break;
        }
    }
    if let Some(u) = found {
        return Ok(ConjugacyCertificate::conjugate_z(u));
    }
    if crate::conjtest::locally_obstructed(&small, d) {
        return Ok(ConjugacyCertificate::not_conjugate("no equivariant map has unit determinant modulo a small integer"));
    }
    Ok(ConjugacyCertificate::unknown(height))
}

/// Whether the two tori are isogenous: equal characters on the common
/// Galois group.
pub fn is_isogenous(t1: &TorusPresentation, t2: &TorusPresentation) -> Result<bool> {
    let pairs = matched_pairs(t1, t2)?;
    Ok(!character_mismatch(t1, t2, &pairs)?)
}

/// The Galois action on `T[N] = X(T) / N X(T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionRep {
    pub modulus: u64,
    pub images: Vec<ModMatrix>,
    pub image_order: u64,
}

impl Serialize for TorsionRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_json::json!({
            "modulus": self.modulus,
            "images": self.images.iter().map(|m| m.to_i64_rows()).collect::<Vec<_>>(),
            "image_order": self.image_order,
        })
        .serialize(s)
    }
}

/// Reduces the Galois generators modulo `n` and computes the image order.
pub fn torsion_rep(t: &TorusPresentation, n: u64) -> Result<TorsionRep> {
    if n < 2 {
        return Err(Error::Malformed(format!("modulus {n} must be at least 2")));
    }
    let images = t.galois.reduce_mod(n);
    let id = ModMatrix::identity(t.dimension, n);
    let mut seen: HashSet<ModMatrix> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &images {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Ok(TorsionRep { modulus: n, images, image_order: seen.len() as u64 })
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `#GL_d(Z/N)`: multiplicative in `N`, and for `N = p^k` equal to
/// `p^((k-1) d^2) * prod_{i<d} (p^d - p^i)`.
pub fn gl_order_mod_n(d: usize, n: u64) -> BigUint {
    assert!(d >= 1 && n >= 2, "need d >= 1 and N >= 2");
    let mut total = BigUint::one();
    for (p, k) in factorize(n) {
        let p = BigUint::from(p);
        let pd = p.pow(d as u32);
        total *= p.pow((k - 1) * (d * d) as u32);
        for i in 0..d {
            total *= &pd - p.pow(i as u32);
        }
    }
    total
}

/// Quantities checked by [`serre_bound_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SerreReport {
    pub dimension: usize,
    pub modulus: u64,
    pub splitting_degree: u64,
    pub image_order: u64,
    #[serde(serialize_with = "biguint_as_string")]
    pub gl_order: BigUint,
    /// Galois elements that act trivially modulo `N`, other than the identity.
    pub kernel: Vec<IntMatrix>,
    /// `[k_T : k]` divides `#GL_d(Z/N)` (or twice it when `N = 2`).
    pub divides: bool,
}

fn biguint_as_string<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Checks that reduction mod `N` is injective on the Galois image for
/// `N >= 3`, that its kernel lies in `{+-I}` for `N = 2`, and the matching
/// divisibility of `[k_T : k]`.
pub fn serre_bound_check(t: &TorusPresentation, n: u64) -> Result<SerreReport> {
    let rep = torsion_rep(t, n)?;
    let degree = t.splitting_degree()?;
    let (_, kernel) = t.galois.is_faithful_reduction(n)?;
    let gl = gl_order_mod_n(t.dimension, n);
    let bound = if n == 2 { &gl * 2u32 } else { gl.clone() };
    let divides = (&bound % BigUint::from(degree)).is_zero();
    let report = SerreReport {
        dimension: t.dimension,
        modulus: n,
        splitting_degree: degree,
        image_order: rep.image_order,
        gl_order: gl,
        kernel,
        divides,
    };
    let minus = -&IntMatrix::identity(t.dimension);
    if n >= 3 && (!report.kernel.is_empty() || report.image_order != degree) {
        return Err(Error::AssertionFailure(format!(
            "reduction mod {n} is not injective; kernel {:?}",
            report.kernel
        )));
    }
    if n == 2 && report.kernel.iter().any(|k| *k != minus) {
        return Err(Error::AssertionFailure(format!("kernel mod 2 is not inside {{+-I}}: {:?}", report.kernel)));
    }
    if !divides {
        return Err(Error::AssertionFailure(format!("{degree} does not divide {bound}")));
    }
    Ok(report)
}

/// Character inner product `(1/|Γ|) sum_g tr(rho1(g)) tr(rho2(g))` over the
/// acting group of the pair.
pub fn character_inner_product(t1: &TorusPresentation, t2: &TorusPresentation) -> Result<BigInt> {
    let acting = acting_group(t1, t2);
    let d1 = t1.dimension;
    let elements = acting.elements()?;
    let mut sum = BigInt::zero();
    for x in elements {
        let a: BigInt = (0..d1).map(|i| x[(i, i)].clone()).sum();
        let b: BigInt = (d1..x.rows()).map(|i| x[(i, i)].clone()).sum();
        sum += a * b;
    }
    let n = BigInt::from(elements.len());
    if !(&sum % &n).is_zero() {
        return Err(Error::AssertionFailure("character inner product is not an integer".into()));
    }
    Ok(sum / n)
}

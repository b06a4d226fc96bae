use std::collections::HashSet;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::certificate::ConjugacyCertificate;
use super::forms::{for_each_isometry, primitive_invariant_form};
use super::invariants::ZProfile;
use crate::error::{Error, Result};
use crate::exact::normal_form::kernel_of_rows;
use crate::exact::{gram_reduce, snf, IntMatrix};
use crate::matgroup::isomorphism::for_each_isomorphism;
use crate::matgroup::IntGroup;

/// Default coefficient height for the intertwiner search.
pub const DEFAULT_SEARCH_BOUND: u32 = 6;

/// Moduli tried when looking for a local obstruction to a unimodular
/// intertwiner.
const OBSTRUCTION_MODULI: [i64; 7] = [2, 3, 4, 5, 7, 8, 9];
const OBSTRUCTION_BUDGET: u64 = 100_000;

/// Decides whether `U G1 U^-1 = G2` for some `U` in `GL_d(Z)`.
///
/// Cheap invariants are compared first. When both groups fix a unique
/// primitive form up to scaling, every conjugator is an isometry between
/// those forms, and the finitely many isometries are tested directly.
/// Otherwise each character-compatible isomorphism `a: G1 -> G2` (up to inner
/// automorphisms of `G2`) yields the lattice of intertwiners
/// `{X : X g = a(g) X}`, which is searched for a determinant-one element or
/// shown to have none modulo a small integer.
pub fn z_conjugacy(g1: &IntGroup, g2: &IntGroup, search_bound: u32) -> Result<ConjugacyCertificate> {
    if g1.dimension() != g2.dimension() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", g1.dimension(), g2.dimension())));
    }
    if g1.same_elements(g2)? {
        return Ok(ConjugacyCertificate::conjugate_z(IntMatrix::identity(g1.dimension())));
    }
    let p1 = ZProfile::of(g1)?;
    let p2 = ZProfile::of(g2)?;
    z_conjugacy_with_profiles(g1, &p1, g2, &p2, search_bound)
}

/// [`z_conjugacy`] with precomputed profiles.
pub fn z_conjugacy_with_profiles(
    g1: &IntGroup,
    p1: &ZProfile,
    g2: &IntGroup,
    p2: &ZProfile,
    search_bound: u32,
) -> Result<ConjugacyCertificate> {
    if g1.dimension() != g2.dimension() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", g1.dimension(), g2.dimension())));
    }
    if let Some(name) = p1.first_difference(p2) {
        return Ok(ConjugacyCertificate::not_conjugate(name));
    }
    if g1.same_elements(g2)? {
        return Ok(ConjugacyCertificate::conjugate_z(IntMatrix::identity(g1.dimension())));
    }
    if p1.form_space_dimension == 1 {
        isometry_search(g1, g2)
    } else {
        intertwiner_search(g1, g2, search_bound)
    }
}

fn transports(u: &IntMatrix, u_inv: &IntMatrix, g1: &IntGroup, g2: &IntGroup) -> Result<bool> {
    for g in g1.generators() {
        if !g2.contains(&(&(u * g) * u_inv))? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn isometry_search(g1: &IntGroup, g2: &IntGroup) -> Result<ConjugacyCertificate> {
    let f1 = primitive_invariant_form(g1).expect("form space is one-dimensional");
    let f2 = primitive_invariant_form(g2).expect("form space is one-dimensional");
    let mut found = None;
    let mut failure = None;
    for_each_isometry(&f1, &f2, &mut |u| {
        let u_inv = u.inverse_z().expect("isometries of equal-determinant forms are unimodular");
        match transports(u, &u_inv, g1, g2) {
            Ok(true) => {
                found = Some(u.clone());
                false
            }
            Ok(false) => true,
            Err(e) => {
                failure = Some(e);
                false
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(match found {
        Some(u) => ConjugacyCertificate::conjugate_z(u),
        None => ConjugacyCertificate::not_conjugate("no isometry of invariant forms transports the group"),
    })
}

type ElementKey = (BigInt, Vec<BigInt>, Vec<BigInt>);

fn element_keys(elements: &[IntMatrix]) -> Vec<ElementKey> {
    let d = elements[0].rows();
    let id = IntMatrix::identity(d);
    elements
        .iter()
        .map(|g| (g.trace(), snf(&(g - &id)).diagonal(), snf(&(g + &id)).diagonal()))
        .collect()
}

enum Outcome {
    Found(IntMatrix),
    Obstructed,
    Undecided,
}

fn intertwiner_search(g1: &IntGroup, g2: &IntGroup, bound: u32) -> Result<ConjugacyCertificate> {
    let e1 = g1.elements()?;
    let e2 = g2.elements()?;
    let t1 = g1.cayley_table()?;
    let t2 = g2.cayley_table()?;
    let k1 = element_keys(e1);
    let k2 = element_keys(e2);
    let gens: Vec<usize> = g1
        .small_generating_set()?
        .iter()
        .map(|g| g1.index_of(g).map(|i| i.expect("generator is an element")))
        .collect::<Result<_>>()?;

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut any_iso = false;
    let mut undecided = false;
    let found = for_each_isomorphism(t1, &gens, t2, &|a, b| k1[a] == k2[b], &mut |phi| {
        if (0..phi.len()).any(|i| k1[i] != k2[phi[i]]) {
            return ControlFlow::Continue(());
        }
        any_iso = true;
        let key = (0..t2.len())
            .map(|h| gens.iter().map(|&g| t2.mul(t2.mul(h, phi[g]), t2.inverse(h))).collect::<Vec<_>>())
            .min()
            .unwrap();
        if !seen.insert(key) {
            return ControlFlow::Continue(());
        }
        let pairs: Vec<(&IntMatrix, &IntMatrix)> = gens.iter().map(|&g| (&e1[g], &e2[phi[g]])).collect();
        match unimodular_intertwiner(&pairs, bound) {
            Outcome::Found(x) => ControlFlow::Break(x),
            Outcome::Obstructed => ControlFlow::Continue(()),
            Outcome::Undecided => {
                undecided = true;
                ControlFlow::Continue(())
            }
        }
    });
    Ok(match found {
        Some(x) => ConjugacyCertificate::conjugate_z(x),
        None if !any_iso => ConjugacyCertificate::not_conjugate("no character-compatible isomorphism"),
        None if undecided => ConjugacyCertificate::unknown(bound),
        None => ConjugacyCertificate::not_conjugate("no unimodular intertwiner"),
    })
}

/// Integer basis of `{X : X a = b X for all pairs (a, b)}`, flattened
/// row-major.
pub(crate) fn intertwiner_basis(pairs: &[(&IntMatrix, &IntMatrix)], d1: usize, d2: usize) -> Vec<Vec<BigInt>> {
    // X is d2 x d1, a is d1 x d1, b is d2 x d2
    let n = d1 * d2;
    let mut equations = Vec::new();
    for (a, b) in pairs {
        for r in 0..d2 {
            for c in 0..d1 {
                let mut row = vec![BigInt::from(0); n];
                for k in 0..d1 {
                    row[r * d1 + k] += &a[(k, c)];
                }
                for k in 0..d2 {
                    row[k * d1 + c] -= &b[(r, k)];
                }
                if row.iter().any(|x| *x != BigInt::from(0)) {
                    equations.push(row);
                }
            }
        }
    }
    kernel_of_rows(&equations, n)
}

/// LLL-reduces a lattice basis given as rows, with respect to the standard
/// inner product.
pub(crate) fn reduce_basis(basis: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let r = basis.len();
    if r <= 1 {
        return basis.to_vec();
    }
    let gram = IntMatrix::from_fn(r, r, |i, j| basis[i].iter().zip(&basis[j]).map(|(x, y)| x * y).sum());
    let (_, t) = gram_reduce(&gram).expect("basis vectors are independent");
    (0..r)
        .map(|j| {
            let mut v = vec![BigInt::from(0); basis[0].len()];
            for (i, b) in basis.iter().enumerate() {
                for (vk, bk) in v.iter_mut().zip(b) {
                    *vk += &t[(i, j)] * bk;
                }
            }
            v
        })
        .collect()
}

fn det_i128(m: &[i128], d: usize) -> i128 {
    match d {
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        3 => {
            m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
                + m[2] * (m[3] * m[7] - m[4] * m[6])
        }
        _ => {
            let rows: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| m[i * d + j] as i64).collect()).collect();
            IntMatrix::from_i64_rows(rows).det().to_i128().expect("determinant fits in i128")
        }
    }
}

/// Visits coefficient vectors in `[-h, h]^r` with maximum exactly `h`, in
/// lexicographic order.
pub(crate) fn for_each_at_height(r: usize, h: i64, visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
    let mut c = vec![-h; r];
    loop {
        if (h == 0 || c.iter().any(|x| x.abs() == h)) && !visit(&c) {
            return false;
        }
        let mut i = r;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if c[i] < h {
                c[i] += 1;
                break;
            }
            c[i] = -h;
        }
    }
}

/// Searches small combinations of `basis` (square matrices, flattened) for
/// one with determinant `+1` or `-1`.
pub(crate) fn search_unimodular(basis: &[Vec<i64>], d: usize, heights: std::ops::RangeInclusive<i64>) -> Option<Vec<i64>> {
    let r = basis.len();
    let n = d * d;
    let mut result = None;
    for h in heights {
        let done = !for_each_at_height(r, h, &mut |c| {
            let m: Vec<i128> =
                (0..n).map(|k| c.iter().zip(basis).map(|(ci, b)| *ci as i128 * b[k] as i128).sum()).collect();
            if det_i128(&m, d).abs() == 1 {
                result = Some(m.iter().map(|&x| x as i64).collect());
                false
            } else {
                true
            }
        });
        if done {
            break;
        }
    }
    result
}

/// Whether no element of the span has determinant `+-1` modulo some small
/// modulus.
pub(crate) fn locally_obstructed(basis: &[Vec<i64>], d: usize) -> bool {
    let r = basis.len() as u32;
    if r == 0 {
        return true;
    }
    OBSTRUCTION_MODULI.iter().any(|&m| {
        if (m as u64).checked_pow(r).is_none_or(|c| c > OBSTRUCTION_BUDGET) {
            return false;
        }
        let reduced: Vec<Vec<i64>> = basis.iter().map(|b| b.iter().map(|x| x.rem_euclid(m)).collect()).collect();
        let mut c = vec![0i64; r as usize];
        loop {
            let mat: Vec<i128> = (0..d * d)
                .map(|k| (c.iter().zip(&reduced).map(|(ci, b)| ci * b[k]).sum::<i64>() % m) as i128)
                .collect();
            let det = det_i128(&mat, d).rem_euclid(m as i128) as i64;
            if det == 1 || det == m - 1 {
                return false;
            }
            let mut i = c.len();
            loop {
                if i == 0 {
                    return true;
                }
                i -= 1;
                c[i] += 1;
                if c[i] < m {
                    break;
                }
                c[i] = 0;
            }
        }
    })
}

fn to_i64_basis(basis: &[Vec<BigInt>]) -> Option<Vec<Vec<i64>>> {
    basis.iter().map(|b| b.iter().map(|x| x.to_i64()).collect()).collect()
}

fn unimodular_intertwiner(pairs: &[(&IntMatrix, &IntMatrix)], bound: u32) -> Outcome {
    let d = pairs[0].0.rows();
    let basis = intertwiner_basis(pairs, d, d);
    if basis.is_empty() {
        return Outcome::Obstructed;
    }
    let reduced = reduce_basis(&basis);
    let Some(small) = to_i64_basis(&reduced) else {
        return Outcome::Undecided;
    };
    let bound = bound as i64;
    let to_matrix = |v: Vec<i64>| IntMatrix::from_i64_rows(v.chunks(d).map(|c| c.to_vec()).collect());
    if let Some(x) = search_unimodular(&small, d, 1..=bound.min(2)) {
        return Outcome::Found(to_matrix(x));
    }
    if locally_obstructed(&small, d) {
        return Outcome::Obstructed;
    }
    match search_unimodular(&small, d, 3..=bound) {
        Some(x) => Outcome::Found(to_matrix(x)),
        None => Outcome::Undecided,
    }
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::normal_form::kernel_of_rows;
use crate::exact::{bilinear_value, gram_reduce, is_positive_definite, short_vectors, IntMatrix};
use crate::matgroup::{GroupMatrix, IntGroup, MatrixGroup};

/// A positive definite integral form `F` with `g^T F g = F` for all `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantForm {
    pub matrix: IntMatrix,
}

/// `sum_g g^T g` over the group, scaled to an integer matrix for groups
/// over Q.
pub fn invariant_form<M: GroupMatrix>(g: &MatrixGroup<M>) -> Result<InvariantForm> {
    let d = g.dimension();
    let mut acc = crate::exact::RatMatrix::zeros(d, d);
    for x in g.elements()? {
        let r = x.to_rat();
        acc = &acc + &(&r.transpose() * &r);
    }
    let scale = BigRational::from_integer(acc.common_denominator());
    let matrix = IntMatrix::from_fn(d, d, |i, j| (&acc[(i, j)] * &scale).to_integer());
    Ok(InvariantForm { matrix })
}

fn sym_index(d: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // row-major upper triangle
    i * d - i * (i + 1) / 2 + j
}

fn sym_from_vec(d: usize, v: &[BigInt]) -> IntMatrix {
    IntMatrix::from_fn(d, d, |i, j| v[sym_index(d, i, j)].clone())
}

/// Basis of the integral symmetric matrices `X` with `g^T X g = X` for all
/// generators, as an HNF-reduced list.
pub fn invariant_form_space(g: &IntGroup) -> Vec<IntMatrix> {
    let d = g.dimension();
    let n = d * (d + 1) / 2;
    let mut equations = Vec::new();
    for s in g.generators() {
        // (s^T X s - X)_{ab} = sum_{ij} s_ia s_jb X_ij - X_ab
        for a in 0..d {
            for b in a..d {
                let mut row = vec![BigInt::zero(); n];
                for i in 0..d {
                    for j in 0..d {
                        row[sym_index(d, i, j)] += &s[(i, a)] * &s[(j, b)];
                    }
                }
                row[sym_index(d, a, b)] -= BigInt::one();
                if row.iter().any(|x| !x.is_zero()) {
                    equations.push(row);
                }
            }
        }
    }
    kernel_of_rows(&equations, n).iter().map(|v| sym_from_vec(d, v)).collect()
}

/// The primitive positive definite invariant form when the invariant form
/// space is one-dimensional.
pub fn primitive_invariant_form(g: &IntGroup) -> Option<IntMatrix> {
    let space = invariant_form_space(g);
    if space.len() != 1 {
        return None;
    }
    let f = &space[0];
    let f = if f[(0, 0)].is_negative() { -f } else { f.clone() };
    let c = f.content();
    let f = if c.is_one() { f } else { IntMatrix::from_fn(f.rows(), f.cols(), |i, j| f[(i, j)].div_floor(&c)) };
    debug_assert!(is_positive_definite(&f));
    Some(f)
}

/// Calls `visit` with every `U` satisfying `U^T f_to U = f_from`, in a
/// deterministic order. Stops early when `visit` returns `false`.
pub fn for_each_isometry(
    f_from: &IntMatrix,
    f_to: &IntMatrix,
    visit: &mut dyn FnMut(&IntMatrix) -> bool,
) -> Result<()> {
    if f_from.rows() != f_to.rows() {
        return Err(Error::DimensionMismatch("forms of different dimension".into()));
    }
    if !is_positive_definite(f_from) || !is_positive_definite(f_to) {
        return Err(Error::NotPositiveDefinite);
    }
    if f_from.det() != f_to.det() {
        return Ok(());
    }
    let d = f_from.rows();
    let (r, t) = gram_reduce(f_from)?;
    let t_inv = t.inverse_z()?;
    let bound = (0..d).map(|i| r[(i, i)].clone()).max().unwrap();
    let vectors = short_vectors(f_to, &bound)?;
    let candidates: Vec<Vec<&Vec<BigInt>>> =
        (0..d).map(|j| vectors.iter().filter(|(_, n)| *n == r[(j, j)]).map(|(v, _)| v).collect()).collect();

    let mut chosen: Vec<&Vec<BigInt>> = Vec::with_capacity(d);
    backtrack(&r, f_to, &candidates, &mut chosen, &mut |cols| {
        let v = IntMatrix::from_columns(&cols.iter().map(|c| (*c).clone()).collect::<Vec<_>>());
        visit(&(&v * &t_inv))
    });
    Ok(())
}

fn backtrack<'a>(
    r: &IntMatrix,
    f_to: &IntMatrix,
    candidates: &[Vec<&'a Vec<BigInt>>],
    chosen: &mut Vec<&'a Vec<BigInt>>,
    visit: &mut dyn FnMut(&[&'a Vec<BigInt>]) -> bool,
) -> bool {
    let j = chosen.len();
    if j == candidates.len() {
        return visit(chosen);
    }
    for &v in &candidates[j] {
        if (0..j).all(|i| bilinear_value(f_to, chosen[i], v) == r[(i, j)]) {
            chosen.push(v);
            let go_on = backtrack(r, f_to, candidates, chosen, visit);
            chosen.pop();
            if !go_on {
                return false;
            }
        }
    }
    true
}

/// All `U` with `U^T f_to U = f_from`.
pub fn isometries(f_from: &IntMatrix, f_to: &IntMatrix) -> Result<Vec<IntMatrix>> {
    let mut out = Vec::new();
    for_each_isometry(f_from, f_to, &mut |u| {
        out.push(u.clone());
        true
    })?;
    Ok(out)
}

/// The automorphism group `{U : U^T f U = f}` of a positive definite form,
/// with its full element list cached.
pub fn form_automorphisms(f: &IntMatrix) -> Result<IntGroup> {
    let elements = isometries(f, f)?;
    Ok(IntGroup::from_elements(f.rows(), elements))
}

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::certificate::ConjugacyCertificate;
use super::zconj::for_each_at_height;
use crate::error::{Error, Result};
use crate::exact::normal_form::kernel_of_rows;
use crate::exact::{hnf, IntMatrix, RatMatrix};
use crate::matgroup::isomorphism::for_each_isomorphism;
use crate::matgroup::{GroupMatrix, IntGroup, MatrixGroup, RatGroup};

/// Decides conjugacy in `GL_d(Q)`.
///
/// Finite groups are Q-conjugate iff some isomorphism between them preserves
/// traces; for such an isomorphism the rational intertwiners contain an
/// invertible element, which is returned as the witness.
pub fn q_conjugacy<M: GroupMatrix>(g1: &MatrixGroup<M>, g2: &MatrixGroup<M>) -> Result<ConjugacyCertificate> {
    if g1.dimension() != g2.dimension() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", g1.dimension(), g2.dimension())));
    }
    let d = g1.dimension();
    if g1.same_elements(g2)? {
        return Ok(ConjugacyCertificate::conjugate_q(RatMatrix::identity(d)));
    }
    if g1.order()? != g2.order()? {
        return Ok(ConjugacyCertificate::not_conjugate("order"));
    }
    if g1.character_fingerprint()? != g2.character_fingerprint()? {
        return Ok(ConjugacyCertificate::not_conjugate("character fingerprint"));
    }
    let e1 = g1.elements()?;
    let e2 = g2.elements()?;
    let tr1: Vec<BigRational> = e1.iter().map(|g| g.trace_q()).collect();
    let tr2: Vec<BigRational> = e2.iter().map(|g| g.trace_q()).collect();
    let t1 = g1.cayley_table()?;
    let t2 = g2.cayley_table()?;
    let gens: Vec<usize> = g1
        .small_generating_set()?
        .iter()
        .map(|g| g1.index_of(g).map(|i| i.expect("generator is an element")))
        .collect::<Result<_>>()?;
    let found = for_each_isomorphism(t1, &gens, t2, &|a, b| tr1[a] == tr2[b], &mut |phi| {
        if (0..phi.len()).all(|i| tr1[i] == tr2[phi[i]]) {
            ControlFlow::Break(phi.to_vec())
        } else {
            ControlFlow::Continue(())
        }
    });
    let Some(phi) = found else {
        return Ok(ConjugacyCertificate::not_conjugate("no trace-preserving isomorphism"));
    };
    let pairs: Vec<(RatMatrix, RatMatrix)> = gens.iter().map(|&g| (e1[g].to_rat(), e2[phi[g]].to_rat())).collect();
    let u = invertible_intertwiner(&pairs, d)
        .ok_or_else(|| Error::AssertionFailure("equal characters without an invertible intertwiner".into()))?;
    Ok(ConjugacyCertificate::conjugate_q(u))
}

/// Rational `X` with `X a = b X` for every pair, invertible, chosen by a
/// deterministic search over small combinations of the solution basis.
fn invertible_intertwiner(pairs: &[(RatMatrix, RatMatrix)], d: usize) -> Option<RatMatrix> {
    let n = d * d;
    let mut equations: Vec<Vec<BigInt>> = Vec::new();
    for (a, b) in pairs {
        for r in 0..d {
            for c in 0..d {
                let mut row = vec![BigRational::zero(); n];
                for k in 0..d {
                    row[r * d + k] += &a[(k, c)];
                    row[k * d + c] -= &b[(r, k)];
                }
                let den = row.iter().fold(BigInt::from(1), |acc, x| num_integer::lcm(acc, x.denom().clone()));
                let int_row: Vec<BigInt> = row.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
                if int_row.iter().any(|x| !x.is_zero()) {
                    equations.push(int_row);
                }
            }
        }
    }
    let basis = kernel_of_rows(&equations, n);
    let r = basis.len();
    if r == 0 {
        return None;
    }
    // a generic combination is invertible, so small heights suffice
    let mut found = None;
    for h in 1..=(d as i64 + 2) {
        for_each_at_height(r, h, &mut |c| {
            let m = IntMatrix::from_fn(d, d, |i, j| {
                c.iter().zip(&basis).map(|(ci, b)| BigInt::from(*ci) * &b[i * d + j]).sum()
            });
            if m.det().is_zero() {
                true
            } else {
                found = Some(m.to_rat());
                false
            }
        });
        if found.is_some() {
            break;
        }
    }
    found
}

/// The lattice `L = sum_g g Z^d` spanned by the columns of all group
/// elements, its column-HNF basis `B`, and the integral group `B^-1 G B`.
pub fn invariant_lattice(g: &RatGroup) -> Result<(RatMatrix, IntGroup)> {
    let d = g.dimension();
    let elements = g.elements()?;
    let den = elements.iter().fold(BigInt::from(1), |acc, x| num_integer::lcm(acc, x.common_denominator()));
    let scale = BigRational::from_integer(den.clone());
    // one row per scaled column of every element
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(elements.len() * d);
    for x in elements {
        for j in 0..d {
            rows.push((0..d).map(|i| (&x[(i, j)] * &scale).to_integer()).collect());
        }
    }
    let (h, _) = hnf(&IntMatrix::from_rows(rows));
    let basis_rows: Vec<Vec<BigInt>> = h.to_rows().into_iter().take(d).collect();
    let b = RatMatrix::from_fn(d, d, |i, j| BigRational::new(basis_rows[j][i].clone(), den.clone()));
    let b_inv = b.inverse()?;
    let gens: Vec<IntMatrix> = g
        .generators()
        .iter()
        .map(|s| {
            (&(&b_inv * s) * &b)
                .to_integer()
                .ok_or_else(|| Error::AssertionFailure("rebased generator is not integral".into()))
        })
        .collect::<Result<_>>()?;
    let out = IntGroup::new(d, gens)?.with_label(g.label());
    Ok((b, out))
}

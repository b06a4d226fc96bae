//! Positive definite forms: LLL reduction of Gram matrices and short vector
//! enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Checks symmetry and positivity of all leading principal minors.
pub fn is_positive_definite(f: &IntMatrix) -> bool {
    if !f.is_symmetric() {
        return false;
    }
    (1..=f.rows()).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        f.submatrix(&idx, &idx).det().is_positive()
    })
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Gram-Schmidt data of a Gram matrix: `(mu, b)` with `b[i] = |b_i^*|^2`.
fn gram_schmidt(g: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = g.len();
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut b = vec![BigRational::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut s = rat(&g[i][j]);
            for k in 0..j {
                s -= &mu[j][k] * &mu[i][k] * &b[k];
            }
            mu[i][j] = s / &b[j];
        }
        let mut s = rat(&g[i][i]);
        for k in 0..i {
            s -= &mu[i][k] * &mu[i][k] * &b[k];
        }
        b[i] = s;
    }
    (mu, b)
}

/// Nearest integer, ties broken toward zero.
fn round_half_to_zero(x: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let (n, d) = (x.numer(), x.denom());
    // floor((2n + d) / 2d), then undo the tie if exactly halfway above zero
    let q = (n * &two + d).div_floor(&(d * &two));
    let twice = x * BigRational::from_integer(two.clone());
    if twice.is_integer() && !x.is_integer() && x.is_positive() {
        q - BigInt::one()
    } else {
        q
    }
}

/// LLL-reduces a positive definite Gram matrix (δ = 99/100).
///
/// Returns `(reduced, t)` with `t` unimodular and `t^T * f * t == reduced`.
/// Size reduction rounds ties toward zero, so Gram matrices with all
/// `|mu| <= 1/2` that already satisfy the Lovász condition are left untouched.
pub fn gram_reduce(f: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    if !is_positive_definite(f) {
        return Err(Error::NotPositiveDefinite);
    }
    let n = f.rows();
    let mut g = f.to_rows();
    let mut t = IntMatrix::identity(n).to_rows();
    let delta = BigRational::new(BigInt::from(99), BigInt::from(100));

    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&g);
            let q = round_half_to_zero(&mu[k][j]);
            if q.is_zero() {
                continue;
            }
            // b_k -= q b_j
            for row in t.iter_mut() {
                let v = &q * &row[j];
                row[k] -= v;
            }
            for row in g.iter_mut() {
                let v = &q * &row[j];
                row[k] -= v;
            }
            let row_j = g[j].clone();
            for (x, y) in g[k].iter_mut().zip(&row_j) {
                *x -= &q * y;
            }
        }
        let (mu, b) = gram_schmidt(&g);
        let lhs = &b[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            for row in t.iter_mut() {
                row.swap(k, k - 1);
            }
            k = (k - 1).max(1);
        }
    }
    Ok((IntMatrix::from_rows(g), IntMatrix::from_rows(t)))
}

/// `v^T f v`.
pub fn quadratic_value(f: &IntMatrix, v: &[BigInt]) -> BigInt {
    let fv = f.apply(v);
    v.iter().zip(&fv).map(|(a, b)| a * b).sum()
}

/// `u^T f v`.
pub fn bilinear_value(f: &IntMatrix, u: &[BigInt], v: &[BigInt]) -> BigInt {
    let fv = f.apply(v);
    u.iter().zip(&fv).map(|(a, b)| a * b).sum()
}

/// All nonzero `v` with `v^T f v <= bound`, paired with their norms.
///
/// Fincke-Pohst enumeration over an exact rational decomposition
/// `q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2`. Both `v` and `-v` are
/// reported. Output is sorted by (norm, vector).
pub fn short_vectors(f: &IntMatrix, bound: &BigInt) -> Result<Vec<(Vec<BigInt>, BigInt)>> {
    if !is_positive_definite(f) {
        return Err(Error::NotPositiveDefinite);
    }
    let n = f.rows();
    let mut q: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| rat(&f[(i, j)])).collect()).collect();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j].clone();
            q[i][j] = &q[i][j] / &q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let v = &q[k][i] * &q[i][l];
                q[k][l] -= v;
            }
        }
    }

    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); n];
    enumerate(&q, n, rat(bound), &mut x, &mut out);
    let mut out: Vec<(Vec<BigInt>, BigInt)> = out
        .into_iter()
        .filter(|v: &Vec<BigInt>| v.iter().any(|c| !c.is_zero()))
        .map(|v| {
            let norm = quadratic_value(f, &v);
            (v, norm)
        })
        .filter(|(_, norm)| norm <= bound)
        .collect();
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

fn enumerate(
    q: &[Vec<BigRational>],
    level: usize,
    remaining: BigRational,
    x: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
) {
    if level == 0 {
        out.push(x.clone());
        return;
    }
    let i = level - 1;
    let n = q.len();
    let mut center = BigRational::zero();
    for j in i + 1..n {
        center -= &q[i][j] * rat(&x[j]);
    }
    let s = &remaining / &q[i][i];
    // integer t >= sqrt(s)
    let t = {
        let c = s.ceil().to_integer();
        let r = c.sqrt();
        if &r * &r < c { r + 1 } else { r }
    };
    let lo = center.floor().to_integer() - &t;
    let hi = center.ceil().to_integer() + &t;
    let mut xi = lo;
    while xi <= hi {
        let diff = rat(&xi) - &center;
        let used = &q[i][i] * &diff * &diff;
        if used <= remaining {
            x[i] = xi.clone();
            enumerate(q, i, &remaining - &used, x, out);
        }
        xi += 1;
    }
    x[i] = BigInt::zero();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn check_transform(f: &IntMatrix, r: &IntMatrix, t: &IntMatrix) {
        assert!(t.is_unimodular());
        assert_eq!(&(&t.transpose() * f) * t, *r);
    }

    #[test]
    fn identity_is_reduced() {
        for d in 1..5 {
            let (r, t) = gram_reduce(&IntMatrix::identity(d)).unwrap();
            assert_eq!(r, IntMatrix::identity(d));
            assert_eq!(t, IntMatrix::identity(d));
        }
    }

    #[test]
    fn hexagonal_form_is_fixed() {
        let f = m(&[&[2, 1], &[1, 2]]);
        let (r, t) = gram_reduce(&f).unwrap();
        assert_eq!(r, f);
        assert_eq!(t, IntMatrix::identity(2));
    }

    #[test]
    fn skewed_form_gets_smaller_diagonal() {
        let f = m(&[&[5, 4], &[4, 5]]);
        let (r, t) = gram_reduce(&f).unwrap();
        check_transform(&f, &r, &t);
        assert_eq!(r[(0, 0)], BigInt::from(2));
        assert_eq!(r[(1, 1)], BigInt::from(5));
    }

    #[test]
    fn rejects_indefinite() {
        assert!(matches!(gram_reduce(&m(&[&[1, 2], &[2, 1]])), Err(Error::NotPositiveDefinite)));
        assert!(matches!(gram_reduce(&m(&[&[1, 0], &[1, 1]])), Err(Error::NotPositiveDefinite)));
    }

    #[test]
    fn rounding_ties() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(round_half_to_zero(&half), BigInt::zero());
        assert_eq!(round_half_to_zero(&-half.clone()), BigInt::zero());
        assert_eq!(round_half_to_zero(&BigRational::new(3.into(), 2.into())), BigInt::one());
        assert_eq!(round_half_to_zero(&BigRational::new((-3).into(), 2.into())), -BigInt::one());
        assert_eq!(round_half_to_zero(&BigRational::new(7.into(), 3.into())), BigInt::from(2));
        assert_eq!(round_half_to_zero(&BigRational::new((-8).into(), 3.into())), BigInt::from(-3));
    }

    #[test]
    fn short_vectors_of_a2() {
        let f = m(&[&[2, -1], &[-1, 2]]);
        let sv = short_vectors(&f, &BigInt::from(2)).unwrap();
        assert_eq!(sv.len(), 6);
        assert!(sv.iter().all(|(_, n)| *n == BigInt::from(2)));
    }

    #[test]
    fn short_vectors_of_cubic_lattice() {
        let sv = short_vectors(&IntMatrix::identity(3), &BigInt::from(2)).unwrap();
        // 6 of norm 1, 12 of norm 2
        assert_eq!(sv.len(), 18);
    }
}

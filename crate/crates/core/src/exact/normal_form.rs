//! Hermite and Smith normal forms and integer kernels.
//!
//! All eliminations pick the nonzero entry of smallest absolute value as the
//! pivot, which keeps intermediate entries small on the matrix sizes used here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

type Rows = Vec<Vec<BigInt>>;

/// Result of [`snf`]: `u * a * v == s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// The diagonal entries `d_1 | d_2 | ...`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Nonzero invariant factors.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn identity_rows(n: usize) -> Rows {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn sub_row_multiple(rows: &mut Rows, target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = rows[source].clone();
    for (t, s) in rows[target].iter_mut().zip(&src) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

fn sub_col_multiple(rows: &mut Rows, target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in rows.iter_mut() {
        if !row[source].is_zero() {
            let v = q * &row[source];
            row[target] -= v;
        }
    }
}

fn negate_row(rows: &mut Rows, i: usize) {
    for x in rows[i].iter_mut() {
        *x = -&*x;
    }
}

fn swap_cols(rows: &mut Rows, a: usize, b: usize) {
    for row in rows.iter_mut() {
        row.swap(a, b);
    }
}

/// Row Hermite normal form on raw rows; returns `(h, u)` with `u * a == h`.
pub(crate) fn hnf_rows(a: &Rows, ncols: usize) -> (Rows, Rows) {
    let m = a.len();
    let mut h = a.clone();
    let mut u = identity_rows(m);
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        loop {
            let pivot = (r..m)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&i, &j| h[i][c].abs().cmp(&h[j][c].abs()));
            let Some(p) = pivot else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut clean = true;
            for i in r + 1..m {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                sub_row_multiple(&mut h, i, r, &q);
                sub_row_multiple(&mut u, i, r, &q);
                if !h[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            sub_row_multiple(&mut h, i, r, &q);
            sub_row_multiple(&mut u, i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Row Hermite normal form: returns `(h, u)` with `u` unimodular and `u * a == h`.
///
/// Pivots are positive and entries above each pivot lie in `[0, pivot)`.
/// Zero rows are collected at the bottom.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (h, u) = hnf_rows(&a.to_rows(), a.cols());
    (IntMatrix::from_rows(h), IntMatrix::from_rows(u))
}

/// Smith normal form with transforms.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.to_rows();
    let mut u = identity_rows(m);
    let mut v = identity_rows(n);
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if s[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| s[i][j].abs() < s[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_snf(s, u, v);
            };
            s.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut s, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if s[i][t].is_zero() {
                    continue;
                }
                let q = s[i][t].div_floor(&s[t][t]);
                sub_row_multiple(&mut s, i, t, &q);
                sub_row_multiple(&mut u, i, t, &q);
                clean &= s[i][t].is_zero();
            }
            for j in t + 1..n {
                if s[t][j].is_zero() {
                    continue;
                }
                let q = s[t][j].div_floor(&s[t][t]);
                sub_col_multiple(&mut s, j, t, &q);
                sub_col_multiple(&mut v, j, t, &q);
                clean &= s[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !s[i][j].is_multiple_of(&s[t][t])));
            match offender {
                Some(i) => {
                    // pull the offending row in; the next pass shrinks the pivot
                    let one = -BigInt::one();
                    sub_row_multiple(&mut s, t, i, &one);
                    sub_row_multiple(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if s[t][t].is_negative() {
            negate_row(&mut s, t);
            negate_row(&mut u, t);
        }
    }
    finish_snf(s, u, v)
}

fn finish_snf(s: Rows, u: Rows, v: Rows) -> SnfResult {
    SnfResult { s: IntMatrix::from_rows(s), u: IntMatrix::from_rows(u), v: IntMatrix::from_rows(v) }
}

/// Basis of `{x in Z^n : eq . x = 0 for every equation row}`, HNF-reduced.
///
/// Accepts an empty equation list (every vector is a solution).
pub(crate) fn kernel_of_rows(equations: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let solutions: Rows = if equations.is_empty() {
        identity_rows(n)
    } else {
        // u * A^T = h; rows of u against zero rows of h lie in the kernel
        let at: Rows = (0..n).map(|j| equations.iter().map(|row| row[j].clone()).collect()).collect();
        let (h, u) = hnf_rows(&at, equations.len());
        h.iter()
            .zip(u)
            .filter(|(hr, _)| hr.iter().all(|x| x.is_zero()))
            .map(|(_, ur)| ur)
            .collect()
    };
    if solutions.is_empty() {
        return Vec::new();
    }
    let (h, _) = hnf_rows(&solutions, n);
    h.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect()
}

/// Basis of the integer kernel `{x : a * x = 0}`, in row-HNF (deterministic) form.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    kernel_of_rows(&a.to_rows(), a.cols())
}

/// Rank over the rationals.
pub fn rank(a: &IntMatrix) -> usize {
    let (h, _) = hnf_rows(&a.to_rows(), a.cols());
    h.iter().filter(|r| r.iter().any(|x| !x.is_zero())).count()
}

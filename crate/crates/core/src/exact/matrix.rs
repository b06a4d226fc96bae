//! Dense integer and rational matrices.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix over the integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Dense row-major matrix over the rationals; entries are kept in lowest terms
/// with positive denominators by `BigRational` itself.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

macro_rules! common_impl {
    ($ty:ident, $scalar:ty) => {
        impl $ty {
            pub fn from_vec(rows: usize, cols: usize, data: Vec<$scalar>) -> Self {
                assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
                assert_eq!(data.len(), rows * cols, "entry count does not match shape");
                $ty { rows, cols, data }
            }

            pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> $scalar) -> Self {
                let mut data = Vec::with_capacity(rows * cols);
                for i in 0..rows {
                    for j in 0..cols {
                        data.push(f(i, j));
                    }
                }
                Self::from_vec(rows, cols, data)
            }

            pub fn zeros(rows: usize, cols: usize) -> Self {
                Self::from_fn(rows, cols, |_, _| <$scalar>::zero())
            }

            pub fn identity(n: usize) -> Self {
                Self::from_fn(n, n, |i, j| if i == j { <$scalar>::one() } else { <$scalar>::zero() })
            }

            pub fn diagonal(entries: &[$scalar]) -> Self {
                let n = entries.len();
                Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { <$scalar>::zero() })
            }

            pub fn rows(&self) -> usize {
                self.rows
            }

            pub fn cols(&self) -> usize {
                self.cols
            }

            pub fn is_square(&self) -> bool {
                self.rows == self.cols
            }

            pub fn entries(&self) -> &[$scalar] {
                &self.data
            }

            pub fn row(&self, i: usize) -> &[$scalar] {
                &self.data[i * self.cols..(i + 1) * self.cols]
            }

            pub fn column(&self, j: usize) -> Vec<$scalar> {
                (0..self.rows).map(|i| self[(i, j)].clone()).collect()
            }

            pub fn to_rows(&self) -> Vec<Vec<$scalar>> {
                (0..self.rows).map(|i| self.row(i).to_vec()).collect()
            }

            pub fn from_rows(rows: Vec<Vec<$scalar>>) -> Self {
                let r = rows.len();
                let c = rows.first().map_or(0, |row| row.len());
                assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
                Self::from_vec(r, c, rows.into_iter().flatten().collect())
            }

            /// Matrix whose columns are the given vectors.
            pub fn from_columns(cols: &[Vec<$scalar>]) -> Self {
                let c = cols.len();
                let r = cols.first().map_or(0, |v| v.len());
                Self::from_fn(r, c, |i, j| cols[j][i].clone())
            }

            pub fn transpose(&self) -> Self {
                Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
            }

            pub fn is_zero(&self) -> bool {
                self.data.iter().all(|x| x.is_zero())
            }

            pub fn is_identity(&self) -> bool {
                self.is_square()
                    && (0..self.rows).all(|i| {
                        (0..self.cols).all(|j| {
                            let x = &self[(i, j)];
                            if i == j { x.is_one() } else { x.is_zero() }
                        })
                    })
            }

            pub fn is_symmetric(&self) -> bool {
                self.is_square()
                    && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
            }

            pub fn trace(&self) -> $scalar {
                (0..self.rows.min(self.cols)).fold(<$scalar>::zero(), |acc, i| acc + &self[(i, i)])
            }

            /// Matrix-vector product.
            pub fn apply(&self, v: &[$scalar]) -> Vec<$scalar> {
                assert_eq!(v.len(), self.cols);
                (0..self.rows)
                    .map(|i| {
                        self.row(i)
                            .iter()
                            .zip(v)
                            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                            .fold(<$scalar>::zero(), |acc, (a, b)| acc + a * b)
                    })
                    .collect()
            }

            pub fn scale(&self, k: &$scalar) -> Self {
                Self::from_vec(self.rows, self.cols, self.data.iter().map(|x| x * k).collect())
            }

            /// Block-diagonal sum.
            pub fn direct_sum(&self, other: &Self) -> Self {
                let (r, c) = (self.rows + other.rows, self.cols + other.cols);
                Self::from_fn(r, c, |i, j| {
                    if i < self.rows && j < self.cols {
                        self[(i, j)].clone()
                    } else if i >= self.rows && j >= self.cols {
                        other[(i - self.rows, j - self.cols)].clone()
                    } else {
                        <$scalar>::zero()
                    }
                })
            }

            /// Sub-matrix on the given row and column index lists.
            pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
                Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
            }
        }

        impl Index<(usize, usize)> for $ty {
            type Output = $scalar;
            fn index(&self, (i, j): (usize, usize)) -> &$scalar {
                debug_assert!(i < self.rows && j < self.cols);
                &self.data[i * self.cols + j]
            }
        }

        impl IndexMut<(usize, usize)> for $ty {
            fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut $scalar {
                debug_assert!(i < self.rows && j < self.cols);
                &mut self.data[i * self.cols + j]
            }
        }

        impl Mul for &$ty {
            type Output = $ty;
            fn mul(self, rhs: &$ty) -> $ty {
                assert_eq!(self.cols, rhs.rows, "incompatible shapes for product");
                let mut out = vec![<$scalar>::zero(); self.rows * rhs.cols];
                for i in 0..self.rows {
                    for k in 0..self.cols {
                        let a = &self.data[i * self.cols + k];
                        if a.is_zero() {
                            continue;
                        }
                        for j in 0..rhs.cols {
                            let b = &rhs.data[k * rhs.cols + j];
                            if !b.is_zero() {
                                out[i * rhs.cols + j] += a * b;
                            }
                        }
                    }
                }
                $ty { rows: self.rows, cols: rhs.cols, data: out }
            }
        }

        impl Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
                $ty {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
                }
            }
        }

        impl Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
                $ty {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
                }
            }
        }

        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self)
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "[")?;
                for i in 0..self.rows {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "[")?;
                    for (j, x) in self.row(i).iter().enumerate() {
                        if j > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{}", x)?;
                    }
                    write!(f, "]")?;
                }
                write!(f, "]")
            }
        }
    };
}

common_impl!(IntMatrix, BigInt);
common_impl!(RatMatrix, BigRational);

impl IntMatrix {
    /// Convenience constructor from small literals.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn from_i64_rows(rows: Vec<Vec<i64>>) -> Self {
        Self::from_rows(rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect())
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix::from_vec(
            self.rows,
            self.cols,
            self.data.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        )
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_i64()).collect()).collect()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                match (k + 1..n).find(|&i| !a[i * n + k].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[n * n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    /// Inverse over the rationals.
    pub fn inverse_q(&self) -> Result<RatMatrix> {
        self.to_rat().inverse()
    }

    /// Inverse over the integers; fails unless the matrix is unimodular.
    pub fn inverse_z(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        if !self.is_unimodular() {
            return Err(Error::NotInvertible("Z"));
        }
        self.inverse_q()?.to_integer().ok_or(Error::NotInvertible("Z"))
    }

    /// Entry-wise reduction into `[0, n)`.
    pub fn mod_n(&self, n: u64) -> ModMatrix {
        ModMatrix::from_int(self, n)
    }

    /// Gcd of all entries (0 for the zero matrix).
    pub fn content(&self) -> BigInt {
        self.data.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }
}

impl RatMatrix {
    pub fn from_i64_fracs(rows: &[&[(i64, i64)]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect())
                .collect(),
        )
    }

    /// `Some` iff every entry is an integer.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(IntMatrix::from_vec(self.rows, self.cols, self.data.iter().map(|x| x.to_integer()).collect()))
        } else {
            None
        }
    }

    /// Least common multiple of all denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
    }

    pub fn det(&self) -> BigRational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = BigRational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i * n + k].is_zero()) else {
                return BigRational::zero();
            };
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k].clone();
            det *= &pivot;
            for i in k + 1..n {
                let f = &a[i * n + k] / &pivot;
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = &f * &a[k * n + j];
                    a[i * n + j] -= v;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = RatMatrix::identity(n).data;
        for k in 0..n {
            let p = (k..n).find(|&i| !a[i * n + k].is_zero()).ok_or(Error::SingularMatrix)?;
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                    inv.swap(k * n + j, p * n + j);
                }
            }
            let pivot = a[k * n + k].clone();
            for j in 0..n {
                a[k * n + j] /= &pivot;
                inv[k * n + j] /= &pivot;
            }
            for i in 0..n {
                if i == k || a[i * n + k].is_zero() {
                    continue;
                }
                let f = a[i * n + k].clone();
                for j in 0..n {
                    let (x, y) = (&f * &a[k * n + j], &f * &inv[k * n + j]);
                    a[i * n + j] -= x;
                    inv[i * n + j] -= y;
                }
            }
        }
        Ok(RatMatrix { rows: n, cols: n, data: inv })
    }
}

/// Matrix over `Z/nZ` with entries in `[0, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn from_int(a: &IntMatrix, modulus: u64) -> Self {
        assert!(modulus >= 1);
        let m = BigInt::from(modulus);
        let data = a
            .entries()
            .iter()
            .map(|x| x.mod_floor(&m).to_u64().expect("residue fits in u64"))
            .collect();
        ModMatrix { modulus, rows: a.rows(), cols: a.cols(), data }
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let data = (0..n * n).map(|k| u64::from(k / n == k % n) % modulus).collect();
        ModMatrix { modulus, rows: n, cols: n, data }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn is_identity(&self) -> bool {
        *self == ModMatrix::identity(self.rows, self.modulus)
    }

    pub fn mul(&self, rhs: &ModMatrix) -> ModMatrix {
        assert_eq!(self.modulus, rhs.modulus);
        assert_eq!(self.cols, rhs.rows);
        let m = self.modulus as u128;
        let mut data = vec![0u64; self.rows * rhs.cols];
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc: u128 = 0;
                for k in 0..self.cols {
                    acc += self.get(i, k) as u128 * rhs.get(k, j) as u128;
                }
                data[i * rhs.cols + j] = (acc % m) as u64;
            }
        }
        ModMatrix { modulus: self.modulus, rows: self.rows, cols: rhs.cols, data }
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) as i64).collect()).collect()
    }
}

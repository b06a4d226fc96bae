//! Exact linear algebra over Z and Q.

mod json;
pub mod lattice;
mod matrix;
pub mod normal_form;

pub use lattice::{bilinear_value, gram_reduce, is_positive_definite, quadratic_value, short_vectors};
pub use matrix::{IntMatrix, ModMatrix, RatMatrix};
pub use normal_form::{hnf, integer_kernel, rank, snf, SnfResult};

use num_bigint::BigInt;

/// `det(a)` for a square integer matrix.
pub fn det(a: &IntMatrix) -> BigInt {
    a.det()
}

pub fn is_unimodular(a: &IntMatrix) -> bool {
    a.is_unimodular()
}

pub fn inverse_q(a: &IntMatrix) -> crate::Result<RatMatrix> {
    a.inverse_q()
}

pub fn mod_n(a: &IntMatrix, n: u64) -> ModMatrix {
    a.mod_n(n)
}

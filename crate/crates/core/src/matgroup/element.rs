use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{IntMatrix, RatMatrix};

/// Coefficient ring of a matrix group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    Z,
    Q,
}

impl Ring {
    pub fn as_str(self) -> &'static str {
        match self {
            Ring::Z => "Z",
            Ring::Q => "Q",
        }
    }
}

/// Square invertible matrices usable as group elements.
pub trait GroupMatrix:
    Clone + Eq + Hash + Ord + Debug + Display + Send + Sync + Serialize + for<'de> Deserialize<'de> + 'static
{
    type Scalar: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    const RING: Ring;

    fn dimension(&self) -> usize;
    fn identity_of(dimension: usize) -> Self;
    fn product(&self, rhs: &Self) -> Self;
    /// Inverse within the ring (`None` if not invertible there).
    fn try_inverse(&self) -> Option<Self>;
    fn trace_q(&self) -> BigRational;
    fn act(&self, v: &[Self::Scalar]) -> Vec<Self::Scalar>;
    fn unit_vector(dimension: usize, i: usize) -> Vec<Self::Scalar>;
    fn to_rat(&self) -> RatMatrix;
    fn is_identity_matrix(&self) -> bool;
    fn transpose_of(&self) -> Self;
}

impl GroupMatrix for IntMatrix {
    type Scalar = BigInt;
    const RING: Ring = Ring::Z;

    fn dimension(&self) -> usize {
        self.rows()
    }
    fn identity_of(d: usize) -> Self {
        IntMatrix::identity(d)
    }
    fn product(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inverse_z().ok()
    }
    fn trace_q(&self) -> BigRational {
        BigRational::from_integer(self.trace())
    }
    fn act(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.apply(v)
    }
    fn unit_vector(d: usize, i: usize) -> Vec<BigInt> {
        (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
    }
    fn to_rat(&self) -> RatMatrix {
        IntMatrix::to_rat(self)
    }
    fn is_identity_matrix(&self) -> bool {
        self.is_identity()
    }
    fn transpose_of(&self) -> Self {
        self.transpose()
    }
}

impl GroupMatrix for RatMatrix {
    type Scalar = BigRational;
    const RING: Ring = Ring::Q;

    fn dimension(&self) -> usize {
        self.rows()
    }
    fn identity_of(d: usize) -> Self {
        RatMatrix::identity(d)
    }
    fn product(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inverse().ok()
    }
    fn trace_q(&self) -> BigRational {
        self.trace()
    }
    fn act(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.apply(v)
    }
    fn unit_vector(d: usize, i: usize) -> Vec<BigRational> {
        (0..d).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()
    }
    fn to_rat(&self) -> RatMatrix {
        self.clone()
    }
    fn is_identity_matrix(&self) -> bool {
        self.is_identity()
    }
    fn transpose_of(&self) -> Self {
        self.transpose()
    }
}

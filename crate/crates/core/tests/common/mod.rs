#![allow(dead_code)]

use std::sync::OnceLock;

use num_bigint::BigInt;
use rand::Rng;
use torlat_core::classify::{enumerate_z_types, partition_q_types, TypeCatalog};
use torlat_core::exact::IntMatrix;

pub fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64(rows)
}

/// Catalog for `d` in 1..=3, built once per test binary.
pub fn catalog(d: usize) -> &'static TypeCatalog {
    static CATALOGS: [OnceLock<TypeCatalog>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CATALOGS[d - 1].get_or_init(|| partition_q_types(enumerate_z_types(d).unwrap()).unwrap())
}

/// Random product of elementary matrices with entries kept in `[-3, 3]`.
pub fn random_unimodular(rng: &mut impl Rng, d: usize) -> IntMatrix {
    loop {
        let mut u = IntMatrix::identity(d);
        for _ in 0..rng.gen_range(1..=2 * d + 2) {
            let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..d));
            let mut e = IntMatrix::identity(d);
            if i == j {
                e[(i, i)] = BigInt::from(-1);
            } else {
                e[(i, j)] = BigInt::from(rng.gen_range(-2..=2));
            }
            let next = &e * &u;
            if next.max_abs_entry() <= BigInt::from(3) {
                u = next;
            }
        }
        if !u.is_identity() {
            return u;
        }
    }
}

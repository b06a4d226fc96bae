use num_bigint::BigInt;
use num_rational::BigRational;

use super::forms::{invariant_form_space, primitive_invariant_form};
use crate::error::Result;
use crate::exact::{snf, IntMatrix};
use crate::matgroup::{CharacterFingerprint, IntGroup};

/// Moduli whose orbit decompositions of `(Z/n)^d` enter the profile.
const ORBIT_MODULI: [u64; 3] = [2, 3, 4];

/// Data attached to one conjugacy class: trace, element order, class size and
/// the elementary divisors of `g - I` and `g + I`.
pub type ClassInvariant = (BigRational, u64, usize, Vec<BigInt>, Vec<BigInt>);

/// A bundle of `GL_d(Z)`-conjugacy invariants of a finite group.
///
/// Two Z-conjugate groups have equal profiles, so profiles serve both as a
/// bucketing key and as a cheap rejection test. Fields are compared in
/// declaration order, cheapest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZProfile {
    pub dimension: usize,
    pub order: u64,
    pub fingerprint: CharacterFingerprint,
    pub classes: Vec<ClassInvariant>,
    /// Elementary divisors of the submodule spanned by `(g - I) Z^d`.
    pub coinvariants: Vec<BigInt>,
    /// The same for the contragredient group.
    pub dual_coinvariants: Vec<BigInt>,
    pub form_space_dimension: usize,
    /// Sorted orbit lengths on `(Z/n)^d`, for each modulus and then for the
    /// contragredient group.
    pub orbit_lengths: Vec<Vec<usize>>,
    /// Determinant of the primitive invariant form when it is unique.
    pub form_determinant: Option<BigInt>,
}

impl ZProfile {
    pub fn of(g: &IntGroup) -> Result<ZProfile> {
        let d = g.dimension();
        let order = g.order_u64()?;
        let fingerprint = g.character_fingerprint()?.clone();
        let id = IntMatrix::identity(d);
        let mut classes: Vec<ClassInvariant> = g
            .conjugacy_classes()?
            .iter()
            .map(|c| {
                let r = &c.representative;
                (
                    BigRational::from_integer(r.trace()),
                    c.element_order,
                    c.size,
                    snf(&(r - &id)).diagonal(),
                    snf(&(r + &id)).diagonal(),
                )
            })
            .collect();
        classes.sort();

        let gens = g.generators();
        let dual = g.dual();
        let coinvariants = coinvariant_divisors(d, gens);
        let dual_coinvariants = coinvariant_divisors(d, dual.generators());
        let form_space_dimension = invariant_form_space(g).len();
        let mut orbit_lengths = Vec::new();
        for n in ORBIT_MODULI {
            orbit_lengths.push(orbit_lengths_mod(d, gens, n));
        }
        for n in ORBIT_MODULI {
            orbit_lengths.push(orbit_lengths_mod(d, dual.generators(), n));
        }
        let form_determinant =
            if form_space_dimension == 1 { primitive_invariant_form(g).map(|f| f.det()) } else { None };
        Ok(ZProfile {
            dimension: d,
            order,
            fingerprint,
            classes,
            coinvariants,
            dual_coinvariants,
            form_space_dimension,
            orbit_lengths,
            form_determinant,
        })
    }

    /// Name of the first invariant on which the two profiles differ.
    pub fn first_difference(&self, other: &ZProfile) -> Option<&'static str> {
        if self.dimension != other.dimension {
            Some("dimension")
        } else if self.order != other.order {
            Some("order")
        } else if self.fingerprint != other.fingerprint {
            Some("character fingerprint")
        } else if self.classes != other.classes {
            Some("class elementary divisors")
        } else if self.coinvariants != other.coinvariants {
            Some("coinvariants")
        } else if self.dual_coinvariants != other.dual_coinvariants {
            Some("dual coinvariants")
        } else if self.form_space_dimension != other.form_space_dimension {
            Some("invariant form space dimension")
        } else if self.orbit_lengths != other.orbit_lengths {
            Some("orbit lengths mod n")
        } else if self.form_determinant != other.form_determinant {
            Some("invariant form determinant")
        } else {
            None
        }
    }
}

/// Elementary divisors of `[g_1 - I | g_2 - I | ...]` over the generators.
fn coinvariant_divisors(d: usize, gens: &[IntMatrix]) -> Vec<BigInt> {
    if gens.is_empty() {
        return vec![BigInt::from(0); d];
    }
    let id = IntMatrix::identity(d);
    let cols = d * gens.len();
    let m = IntMatrix::from_fn(d, cols, |i, j| {
        let g = &gens[j / d];
        &g[(i, j % d)] - &id[(i, j % d)]
    });
    snf(&m).diagonal()
}

fn orbit_lengths_mod(d: usize, gens: &[IntMatrix], n: u64) -> Vec<usize> {
    let reduced: Vec<Vec<Vec<u64>>> = gens
        .iter()
        .map(|g| g.mod_n(n).to_i64_rows().into_iter().map(|r| r.into_iter().map(|x| x as u64).collect()).collect())
        .collect();
    let total = (n as usize).pow(d as u32);
    let decode = |mut p: usize| -> Vec<u64> {
        let mut v = vec![0u64; d];
        for x in v.iter_mut() {
            *x = (p % n as usize) as u64;
            p /= n as usize;
        }
        v
    };
    let encode = |v: &[u64]| -> usize { v.iter().rev().fold(0usize, |acc, &x| acc * n as usize + x as usize) };
    let mut seen = vec![false; total];
    let mut lengths = Vec::new();
    for start in 0..total {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut len = 0;
        while let Some(p) = stack.pop() {
            len += 1;
            let v = decode(p);
            for g in &reduced {
                let w: Vec<u64> = g.iter().map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum::<u64>() % n).collect();
                let q = encode(&w);
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    lengths
}

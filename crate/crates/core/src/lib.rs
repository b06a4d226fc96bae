//! Algebraic tori modeled by their character lattices: finite Galois groups
//! acting faithfully on `Z^d`.
//!
//! The crate is layered bottom-up:
//!
//! * [`exact`]: arbitrary-precision integer/rational matrices, Hermite and
//!   Smith normal forms, integer kernels, Gram reduction.
//! * [`matgroup`]: finite matrix groups over Z and Q (closure, Schreier-Sims
//!   orders, classes, character fingerprints, subgroup lattices).
//! * [`conjtest`]: conjugacy of finite groups in `GL_d(Z)` and `GL_d(Q)`,
//!   invariant forms and invariant lattices.
//! * [`rootsys`]: Cartan matrices, Weyl groups and the maximal-order table.
//! * [`classify`]: catalogs of `GL_d(Z)`-classes of finite subgroups for
//!   `d <= 3` with their `GL_d(Q)`-grouping.
//! * [`torus`]: tori as triples (group, faithful lattice representation) with
//!   duality, products, equivariant Hom modules, torsion representations and
//!   splitting-degree bounds.

pub mod classify;
pub mod conjtest;
mod error;
pub mod exact;
pub mod matgroup;
pub mod rootsys;
pub mod torus;

pub use error::{Error, Result};

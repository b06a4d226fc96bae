//! Finite matrix groups over Z and Q given by generators.

mod cayley;
mod element;
mod fingerprint;
mod group;
pub mod isomorphism;
pub mod schreier_sims;
mod subgroups;

pub use cayley::CayleyTable;
pub use element::{GroupMatrix, Ring};
pub use fingerprint::{CharacterFingerprint, FingerprintEntry};
pub use group::{
    closure, element_order, AnyGroup, BlockSum, ConjugacyClass, IntGroup, MatrixGroup, PermAction, RatGroup,
    DEFAULT_CLOSURE_CAP, DEFAULT_ORBIT_BOUND, ELEMENT_ORDER_CAP,
};

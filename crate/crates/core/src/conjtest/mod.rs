//! Conjugacy of finite matrix groups in `GL_d(Z)` and `GL_d(Q)`.

mod certificate;
mod forms;
mod invariants;
mod qconj;
mod zconj;

pub use certificate::{ConjugacyCertificate, Verdict, Witness};
pub use forms::{
    for_each_isometry, form_automorphisms, invariant_form, invariant_form_space, isometries,
    primitive_invariant_form, InvariantForm,
};
pub use invariants::{ClassInvariant, ZProfile};
pub use qconj::{invariant_lattice, q_conjugacy};
pub use zconj::{z_conjugacy, z_conjugacy_with_profiles, DEFAULT_SEARCH_BOUND};

pub(crate) use zconj::{for_each_at_height, intertwiner_basis, locally_obstructed, reduce_basis};

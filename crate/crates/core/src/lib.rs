//! Finite-dimensional toy quantum fields.
//!
//! Truncated fermion, boson and mixed Fock spaces ([`fock`]), their ladder
//! operators ([`ladder`]), free and interaction fields ([`fields`]), dense
//! Hermitian spectral tools ([`spectral`]), the discrete spacetime lattice
//! ([`spacetime`]) and toy scattering operators ([`scatter`]).

pub mod error;
pub mod fields;
pub mod fock;
pub mod ladder;
pub mod scatter;
pub mod spacetime;
pub mod spectral;

pub use error::{Result, ToyError};
pub use fields::{
    classify_eigenvectors, classify_form, free_field, interaction_field, self_interaction,
    FieldSpec, FieldTerm, FormClassification, Parity,
};
pub use fock::{
    canonicalize, grouped_roster, FockSpace, OccupationState, ParticleMode, Statistics,
};
pub use ladder::{
    ac_operator, annihilator, anticommutator, commutator, creator, number_of, OperatorMatrix,
};
pub use spectral::{eigh, projectors, reconstruct, unitary_exp, SpectralDecomposition};

pub use num_complex::Complex64;

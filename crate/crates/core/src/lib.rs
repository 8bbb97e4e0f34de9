//! Maximum-excess Hadamard matrices from finite-field constructions.
//!
//! The crate builds Hadamard matrices from quadratic residues, signs rows and
//! columns using intersection sets cut out by cyclotomic classes of GF(q^2),
//! and verifies every step exactly: Hadamard orthogonality, row-sum spectra,
//! the excess bound, Gauss-sum closed forms and translation association
//! schemes.

mod arith;
pub mod characters;
pub mod cli;
pub mod error;
pub mod field;
pub mod hadamard;
pub mod intersection;
pub mod pipeline;
pub mod scheme;

pub use error::{Error, Result};
pub use field::{build_field, FieldContext, FieldElement, Subfield};

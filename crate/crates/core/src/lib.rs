//! Min-max spectra of functions on free involutive spaces, presented as
//! quotient simplicial complexes with a GF(2) covering cocycle, plus a
//! graph Cheeger-constant module built on the same exact arithmetic.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cheeger;
pub mod homology;
pub mod significance;
pub mod spaces;
pub mod spectrum;
pub mod symcx;
pub mod value;
pub mod z2;

pub use homology::{
    betti, cup_power_nonzero, essential_rank_at, persistence, Bar, PersistenceDiagram,
};
pub use symcx::{
    BuildError, CochainClass, Simplex, SimplexId, Subcomplex, SymmetricComplex,
    ValidationReport, VertexId, Violation,
};
pub use value::{Value, ValueParseError};

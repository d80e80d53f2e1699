//! Exact finite-field algebra for nilpotent matrix pairs whose commutator is
//! a scalar, `[A, B] = λI`, in characteristic p dividing n.

pub mod affine;
pub mod census;
pub mod constructions;
pub mod equivalence;
pub mod error;
pub mod field;
pub mod io;
pub mod linalg;
pub mod subalgebra;
pub mod weyl;

pub use constructions::{CommutingPair, NilpPair};
pub use error::{Error, Result};
pub use field::{Field, FieldCtx, Scalar};
pub use linalg::{commutator, JordanType, MatrixF};

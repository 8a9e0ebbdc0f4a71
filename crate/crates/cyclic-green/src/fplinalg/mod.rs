//! Exact linear algebra over prime fields.

mod field;
mod jordan;
mod matrix;
mod sparse;
mod spin;

pub use field::PrimeField;
pub use jordan::{jordan_type_nilpotent, jordan_type_unipotent, JordanType};
pub use matrix::MatrixFp;
pub use sparse::{Applier, SparseColumns, SparseVec};
pub use spin::{jordan_type_spinning, SpinStats};

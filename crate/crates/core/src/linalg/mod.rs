//! Sparse linear algebra over the prime field `Z/p`.

mod echelon;
mod field;
mod reduce;
mod sparse;

pub use echelon::Echelon;
pub use field::Field;
pub use reduce::{in_span, rank, row_reduce, Reduction};
pub use sparse::SparseVec;

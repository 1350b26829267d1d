//! Exact scalars and sparse linear algebra.

mod reduce;
mod scalar;
mod sparse;

pub use reduce::{
    kernel_basis, rank, row_reduce, solve, subquotient_dim, subquotient_dim_only, Echelon, RowReduction,
    Subquotient,
};
pub use scalar::{parse_scalar, Field, Scalar};
pub use sparse::{Accum, SparseMatrix, SparseVec};

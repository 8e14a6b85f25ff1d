//! Exact linear algebra: sparse matrices, elimination, cochain complexes.

mod complex;
pub mod elim;
mod matrix;

pub use complex::{induced_rank, BettiTable, CohomologyBasis, FiniteComplex};
pub use elim::{free_columns, kernel_and_free_columns, kernel_basis, rank, solve, solve_many};
pub use matrix::Matrix;

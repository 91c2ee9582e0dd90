//! Sparse Cholesky factorization, triangular solves and the Takahashi
//! sparse inverse subset.

pub mod io;
mod numeric;
mod solve;
mod symbolic;
mod takahashi;

pub use numeric::{numeric_cholesky, NumericFactor};
pub use solve::{backward_solve, backward_solve_in_place, forward_solve, forward_solve_in_place};
pub use symbolic::{symbolic_cholesky, SymbolicFactor};
pub use takahashi::{takahashi, SparseInverseSubset};

use crate::error::Result;
use crate::scalar::Scalar;
use crate::sparse::{Ordering, SparseMatrix};

/// Orders, analyzes and factors a symmetric positive definite matrix.
pub fn cholesky<T: Scalar>(p: &SparseMatrix<T>, ordering: Ordering) -> Result<NumericFactor<T>> {
    let pattern = p.pattern();
    let perm = ordering.compute(&pattern)?;
    let symbolic = symbolic_cholesky(&pattern, perm)?;
    numeric_cholesky(p, &symbolic)
}

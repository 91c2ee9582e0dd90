//! Sparse storage, the `ones` pattern calculus, and symmetric orderings.

mod matrix;
pub mod mmio;
mod ordering;
mod pattern;
mod permutation;

pub use matrix::{PatternMode, SparseMatrix};
pub use ordering::{rcm_ordering, Ordering};
pub use pattern::{Coverage, SparsePattern};
pub use permutation::Permutation;

use crate::error::Result;
use crate::scalar::Scalar;

/// Sparsity pattern of `m`: nonzero stored values in [`PatternMode::Value`],
/// every stored entry in [`PatternMode::Structural`].
pub fn ones<T: Scalar>(m: &SparseMatrix<T>, mode: PatternMode) -> SparsePattern {
    m.ones(mode)
}

/// Pattern of a computed sum (set union, no cancellation).
pub fn pattern_add(a: &SparsePattern, b: &SparsePattern) -> Result<SparsePattern> {
    a.union(b)
}

/// Pattern of a computed product (boolean matrix product).
pub fn pattern_mul(a: &SparsePattern, b: &SparsePattern) -> Result<SparsePattern> {
    a.product(b)
}

/// Elementwise `a >= b`, with the first violating entry as witness.
pub fn pattern_geq(a: &SparsePattern, b: &SparsePattern) -> Result<Coverage> {
    a.covers(b)
}

/// `ones(AᵀA)` as the boolean product `ones(Aᵀ)·ones(A)` over stored entries.
///
/// Fails on a negative entry: cancellation-free equality with the value-mode
/// pattern of `AᵀA` needs a nonnegative `A`.
pub fn gram_pattern<T: Scalar>(a: &SparseMatrix<T>) -> Result<SparsePattern> {
    a.require_nonnegative("A")?;
    let p = a.pattern();
    p.transpose().product(&p)
}

pub fn permute_symmetric<T: Scalar>(
    m: &SparseMatrix<T>,
    perm: &Permutation,
) -> Result<SparseMatrix<T>> {
    m.permute_symmetric(perm)
}

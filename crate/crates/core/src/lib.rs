//! Exact prediction variances for hierarchical Gaussian Markov random field
//! models, computed from a sparse inverse subset of the posterior precision.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

// `!(x > 0)` style guards are deliberate: NaN must be rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chol;
pub mod dense;
pub mod error;
pub mod models;
pub mod scalar;
pub mod sparse;
pub mod variance;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type SparseMatrixF64 = sparse::SparseMatrix<f64>;
pub type NumericFactorF64 = chol::NumericFactor<f64>;
pub type SparseInverseSubsetF64 = chol::SparseInverseSubset<f64>;
pub type HierarchicalModelF64 = variance::HierarchicalModel<f64>;
pub type VarianceReportF64 = variance::VarianceReport<f64>;
pub type SparseMatrixF32 = sparse::SparseMatrix<f32>;
pub type HierarchicalModelF32 = variance::HierarchicalModel<f32>;

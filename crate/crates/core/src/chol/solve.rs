//! Triangular solves with a [`NumericFactor`], in permuted indexing.

use ndarray::Array2;
use rayon::prelude::*;

use crate::chol::NumericFactor;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;

/// Solves `L g = b` in place, where `x` holds `b` on entry.
///
/// Leading zeros of the right-hand side are skipped, as is any column of `L`
/// whose multiplier is exactly zero. Returns the number of multiplications.
pub fn forward_solve_in_place<T: Scalar>(l: &NumericFactor<T>, x: &mut [T]) -> u64 {
    let n = l.n();
    debug_assert_eq!(x.len(), n);
    let inv = l.inv_diag();
    let mut ops = 0u64;
    let Some(first) = x.iter().position(|v| *v != T::zero()) else {
        return 0;
    };
    for j in first..n {
        if x[j] == T::zero() {
            continue;
        }
        let xj = x[j] * inv[j];
        x[j] = xj;
        let (rows, vals) = l.below_diag(j);
        for (&r, &v) in rows.iter().zip(vals) {
            x[r] -= v * xj;
        }
        ops += 1 + rows.len() as u64;
    }
    ops
}

/// Solves `Lᵀ v = w` in place, where `x` holds `w` on entry.
pub fn backward_solve_in_place<T: Scalar>(l: &NumericFactor<T>, x: &mut [T]) -> u64 {
    let n = l.n();
    debug_assert_eq!(x.len(), n);
    let inv = l.inv_diag();
    let mut ops = 0u64;
    for i in (0..n).rev() {
        let (rows, vals) = l.below_diag(i);
        let mut s = x[i];
        for (&r, &v) in rows.iter().zip(vals) {
            s -= v * x[r];
        }
        x[i] = s * inv[i];
        ops += 1 + rows.len() as u64;
    }
    ops
}

/// `G = L⁻¹ B` for a sparse right-hand side `B` (rows in permuted indexing).
///
/// Columns are solved independently and may run in parallel; each column's
/// result does not depend on the schedule.
pub fn forward_solve<T: Scalar>(l: &NumericFactor<T>, rhs: &SparseMatrix<T>) -> Result<Array2<T>> {
    let n = l.n();
    if rhs.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} rows, factor has order {n}",
            rhs.nrows()
        )));
    }
    let cols: Vec<Vec<T>> = (0..rhs.ncols())
        .into_par_iter()
        .map(|j| {
            let mut x = vec![T::zero(); n];
            let (rows, vals) = rhs.col(j);
            for (&r, &v) in rows.iter().zip(vals) {
                x[r] = v;
            }
            forward_solve_in_place(l, &mut x);
            x
        })
        .collect();
    Ok(columns_to_array(n, cols))
}

/// `V = L⁻ᵀ W` for a dense right-hand side.
pub fn backward_solve<T: Scalar>(l: &NumericFactor<T>, w: &Array2<T>) -> Result<Array2<T>> {
    let n = l.n();
    if w.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} rows, factor has order {n}",
            w.nrows()
        )));
    }
    let cols: Vec<Vec<T>> = (0..w.ncols())
        .into_par_iter()
        .map(|j| {
            let mut x = w.column(j).to_vec();
            backward_solve_in_place(l, &mut x);
            x
        })
        .collect();
    Ok(columns_to_array(n, cols))
}

fn columns_to_array<T: Scalar>(n: usize, cols: Vec<Vec<T>>) -> Array2<T> {
    let mut out = Array2::from_elem((n, cols.len()), T::zero());
    for (j, col) in cols.into_iter().enumerate() {
        for (i, v) in col.into_iter().enumerate() {
            out[[i, j]] = v;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chol::{numeric_cholesky, symbolic_cholesky};
    use crate::sparse::Permutation;
    use ndarray::array;

    fn factor(p: &SparseMatrix<f64>) -> NumericFactor<f64> {
        let s = symbolic_cholesky(&p.pattern(), Permutation::identity(p.nrows())).unwrap();
        numeric_cholesky(p, &s).unwrap()
    }

    #[test]
    fn identity_factor_is_a_no_op() {
        let l = factor(&SparseMatrix::identity(3));
        let b = SparseMatrix::from_dense(&array![[1.0, 0.0], [0.0, 2.0], [3.0, 0.0]]);
        assert_eq!(forward_solve(&l, &b).unwrap(), b.to_dense());
        let w = array![[1.0], [-2.0], [0.5]];
        assert_eq!(backward_solve(&l, &w).unwrap(), w);
    }

    #[test]
    fn scaled_identity() {
        let l = factor(&SparseMatrix::identity(3).scale(4.0));
        let g = forward_solve(&l, &SparseMatrix::identity(3)).unwrap();
        assert_eq!(g, Array2::<f64>::eye(3) * 0.5);
    }

    #[test]
    fn diagonal_backward_scales_rows() {
        let l = factor(&SparseMatrix::diagonal(&[4.0, 16.0]));
        let w = array![[2.0, 4.0], [8.0, 16.0]];
        assert_eq!(
            backward_solve(&l, &w).unwrap(),
            array![[1.0, 2.0], [2.0, 4.0]]
        );
    }

    #[test]
    fn two_by_two_solves() {
        let p = SparseMatrix::from_dense(&array![[4.0, 2.0], [2.0, 5.0]]);
        let l = factor(&p);
        // L = [[2,0],[1,2]]; L g = (2, 3) -> g = (1, 1).
        let b = SparseMatrix::from_dense(&array![[2.0], [3.0]]);
        assert_eq!(forward_solve(&l, &b).unwrap(), array![[1.0], [1.0]]);
        // Lᵀ v = (3, 2) -> v2 = 1, v1 = (3 - 1)/2 = 1.
        assert_eq!(
            backward_solve(&l, &array![[3.0], [2.0]]).unwrap(),
            array![[1.0], [1.0]]
        );
    }

    #[test]
    fn dimension_mismatch() {
        let l = factor(&SparseMatrix::identity(3));
        assert!(forward_solve(&l, &SparseMatrix::identity(2)).is_err());
        assert!(backward_solve(&l, &Array2::zeros((2, 1))).is_err());
    }

    #[test]
    fn zero_rhs_costs_nothing() {
        let l = factor(&SparseMatrix::identity(3));
        let mut x = vec![0.0; 3];
        assert_eq!(forward_solve_in_place(&l, &mut x), 0);
    }
}

//! Small dense helpers for blocks that are dense by construction.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Lower Cholesky factor of a dense symmetric positive definite matrix.
pub fn dense_cholesky<T: Scalar>(a: &Array2<T>) -> Result<Array2<T>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not square",
            a.nrows(),
            a.ncols()
        )));
    }
    let mut l = Array2::from_elem((n, n), T::zero());
    for j in 0..n {
        let mut d = a[[j, j]];
        for k in 0..j {
            d -= l[[j, k]] * l[[j, k]];
        }
        if !(d > T::pivot_floor()) {
            return Err(Error::NotPositiveDefinite {
                col: j,
                pivot: d.as_f64(),
            });
        }
        let ljj = d.sqrt();
        l[[j, j]] = ljj;
        for i in j + 1..n {
            let mut s = a[[i, j]];
            for k in 0..j {
                s -= l[[i, k]] * l[[j, k]];
            }
            l[[i, j]] = s / ljj;
        }
    }
    Ok(l)
}

/// Inverse of a dense symmetric positive definite matrix, symmetric to the bit.
pub fn dense_spd_inverse<T: Scalar>(a: &Array2<T>) -> Result<Array2<T>> {
    let l = dense_cholesky(a)?;
    let n = l.nrows();
    // Columns of L⁻¹ by forward substitution, then A⁻¹ = L⁻ᵀ L⁻¹.
    let mut linv = Array2::from_elem((n, n), T::zero());
    for c in 0..n {
        for i in c..n {
            let mut s = if i == c { T::one() } else { T::zero() };
            for k in c..i {
                s -= l[[i, k]] * linv[[k, c]];
            }
            linv[[i, c]] = s / l[[i, i]];
        }
    }
    let mut inv = Array2::from_elem((n, n), T::zero());
    for i in 0..n {
        for j in 0..=i {
            let mut s = T::zero();
            for k in i..n {
                s += linv[[k, i]] * linv[[k, j]];
            }
            inv[[i, j]] = s;
            inv[[j, i]] = s;
        }
    }
    Ok(inv)
}

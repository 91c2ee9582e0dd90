//! Low-rank basis plus fine-scale CAR term: `A = (Ã, I)`, `B = (B̃, H)`,
//! `Q = bdiag(K⁻¹, Q_ξ)`, where `H` maps each observation to its fine-scale
//! cell (`H = I` when every cell is observed once).

use ndarray::Array2;

use crate::dense::dense_spd_inverse;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;
use crate::variance::{pad_q, HierarchicalModel};

/// Unpadded model. `Ã` has one row per fine-scale cell; `B̃` and `H` have one
/// row per observation.
pub fn frk_car_model<T: Scalar>(
    a_basis: &SparseMatrix<T>,
    b_basis: &SparseMatrix<T>,
    obs_cells: &SparseMatrix<T>,
    k: &Array2<T>,
    q_xi: &SparseMatrix<T>,
    r: &SparseMatrix<T>,
) -> Result<HierarchicalModel<T>> {
    let n_xi = q_xi.nrows();
    let rank = k.nrows();
    let m = b_basis.nrows();
    if a_basis.shape() != (n_xi, rank) || b_basis.ncols() != rank || obs_cells.shape() != (m, n_xi)
    {
        return Err(Error::DimensionMismatch(format!(
            "Ã is {}x{}, B̃ is {m}x{}, H is {}x{}; expected {n_xi}x{rank}, {m}x{rank}, {m}x{n_xi}",
            a_basis.nrows(),
            a_basis.ncols(),
            b_basis.ncols(),
            obs_cells.nrows(),
            obs_cells.ncols()
        )));
    }
    let k_inv = SparseMatrix::from_dense_full(&dense_spd_inverse(k)?);
    let eye = SparseMatrix::identity(n_xi);
    let a = SparseMatrix::hstack(&[a_basis, &eye])?;
    let b = SparseMatrix::hstack(&[b_basis, obs_cells])?;
    let q = SparseMatrix::block_diag(&[&k_inv, q_xi]);
    HierarchicalModel::new(a, b, q, r.clone())
}

/// Model with `Q` padded so that `ones(Q) >= ones(AᵀA)`; also returns the number
/// of entries added.
pub fn frk_car_assemble<T: Scalar>(
    a_basis: &SparseMatrix<T>,
    b_basis: &SparseMatrix<T>,
    obs_cells: &SparseMatrix<T>,
    k: &Array2<T>,
    q_xi: &SparseMatrix<T>,
    r: &SparseMatrix<T>,
) -> Result<(HierarchicalModel<T>, usize)> {
    let model = frk_car_model(a_basis, b_basis, obs_cells, k, q_xi, r)?;
    let padded = pad_q(model.q(), model.a())?;
    let added = padded.nnz() - model.q().nnz();
    Ok((model.with_q(padded)?, added))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variance::check_case2;
    use ndarray::array;

    fn q_xi(n: usize) -> SparseMatrix<f64> {
        SparseMatrix::identity(n).scale(2.0)
    }

    #[test]
    fn zero_basis_needs_no_padding() {
        let z = SparseMatrix::zeros(4, 2);
        let k = array![[1.0, 0.5], [0.5, 1.0]];
        let (m, added) = frk_car_assemble(
            &z,
            &z,
            &SparseMatrix::identity(4),
            &k,
            &q_xi(4),
            &SparseMatrix::identity(4),
        )
        .unwrap();
        assert_eq!(added, 0);
        assert_eq!(m.q().nnz(), 4 + 4);
    }

    #[test]
    fn rank_one_pads_off_diagonal_blocks() {
        let a = SparseMatrix::from_triplets(4, 1, &[(1, 0, 0.5), (2, 0, 1.0)]).unwrap();
        let k = array![[2.0]];
        let unpadded = frk_car_model(
            &a,
            &a,
            &SparseMatrix::identity(4),
            &k,
            &q_xi(4),
            &SparseMatrix::identity(4),
        )
        .unwrap();
        assert!(!check_case2(unpadded.a(), unpadded.q()).unwrap().0.holds);
        let (m, added) = frk_car_assemble(
            &a,
            &a,
            &SparseMatrix::identity(4),
            &k,
            &q_xi(4),
            &SparseMatrix::identity(4),
        )
        .unwrap();
        assert_eq!(added, 4);
        for (i, j) in [(0, 2), (0, 3), (2, 0), (3, 0)] {
            assert_eq!(m.q().get(i, j), Some(0.0));
        }
        assert!((m.q().value(0, 0) - 0.5).abs() < 1e-15);
        assert!(check_case2(m.a(), m.q()).unwrap().0.holds);
    }

    #[test]
    fn indefinite_k_is_rejected() {
        let z = SparseMatrix::zeros(2, 2);
        let k = array![[1.0, 2.0], [2.0, 1.0]];
        assert!(frk_car_model(
            &z,
            &z,
            &SparseMatrix::identity(2),
            &k,
            &q_xi(2),
            &SparseMatrix::identity(2)
        )
        .is_err());
    }
}

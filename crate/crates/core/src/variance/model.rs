use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;

/// The quadruple `(A, B, Q, R)` behind `d = diag(A S Aᵀ)`, `S = (BᵀRB + Q)⁻¹`.
///
/// `A` is `N×n` (prediction), `B` is `m×n` (observation), `Q` is the `n×n`
/// prior precision and `R` the diagonal `m×m` measurement-error precision.
#[derive(Clone, Debug, PartialEq)]
pub struct HierarchicalModel<T> {
    a: SparseMatrix<T>,
    b: SparseMatrix<T>,
    q: SparseMatrix<T>,
    r: SparseMatrix<T>,
}

impl<T: Scalar> HierarchicalModel<T> {
    /// Validates dimensions, signs of `A` and `B`, symmetry and diagonal of `Q`,
    /// and that `R` is diagonal with positive entries.
    pub fn new(
        a: SparseMatrix<T>,
        b: SparseMatrix<T>,
        q: SparseMatrix<T>,
        r: SparseMatrix<T>,
    ) -> Result<Self> {
        let n = q.nrows();
        if q.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "Q is {}x{}",
                q.nrows(),
                q.ncols()
            )));
        }
        if a.ncols() != n || b.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "A has {} columns and B has {} columns, Q has order {n}",
                a.ncols(),
                b.ncols()
            )));
        }
        let m = b.nrows();
        if r.shape() != (m, m) {
            return Err(Error::DimensionMismatch(format!(
                "R is {}x{} but B has {m} rows",
                r.nrows(),
                r.ncols()
            )));
        }
        a.require_nonnegative("A")?;
        b.require_nonnegative("B")?;
        if let Some((row, col)) = q.pattern().asymmetry() {
            return Err(Error::NotSymmetric { row, col });
        }
        if let Some((row, col, _)) = q.iter().find(|&(i, j, v)| q.value(j, i) != v) {
            return Err(Error::NotSymmetric { row, col });
        }
        for (j, d) in q.diagonal_values().into_iter().enumerate() {
            if !(d > T::zero()) {
                return Err(Error::NotPositiveDefinite {
                    col: j,
                    pivot: d.as_f64(),
                });
            }
        }
        if !r.is_diagonal() {
            return Err(Error::NotDiagonal("R"));
        }
        for (k, d) in r.diagonal_values().into_iter().enumerate() {
            if !(d > T::zero()) {
                return Err(Error::InvalidArgument(format!(
                    "R[{k},{k}] = {d} is not positive"
                )));
            }
        }
        Ok(HierarchicalModel { a, b, q, r })
    }

    pub fn a(&self) -> &SparseMatrix<T> {
        &self.a
    }

    pub fn b(&self) -> &SparseMatrix<T> {
        &self.b
    }

    pub fn q(&self) -> &SparseMatrix<T> {
        &self.q
    }

    pub fn r(&self) -> &SparseMatrix<T> {
        &self.r
    }

    /// Number of latent coefficients.
    pub fn n(&self) -> usize {
        self.q.nrows()
    }

    /// Number of observations.
    pub fn m(&self) -> usize {
        self.b.nrows()
    }

    /// Number of predictions.
    pub fn num_predictions(&self) -> usize {
        self.a.nrows()
    }

    /// Same model with a different prior precision (e.g. a padded one).
    pub fn with_q(&self, q: SparseMatrix<T>) -> Result<Self> {
        Self::new(self.a.clone(), self.b.clone(), q, self.r.clone())
    }

    /// Same model with a different prediction operator.
    pub fn with_a(&self, a: SparseMatrix<T>) -> Result<Self> {
        Self::new(a, self.b.clone(), self.q.clone(), self.r.clone())
    }

    pub fn into_parts(
        self,
    ) -> (
        SparseMatrix<T>,
        SparseMatrix<T>,
        SparseMatrix<T>,
        SparseMatrix<T>,
    ) {
        (self.a, self.b, self.q, self.r)
    }

    pub fn cast<U: Scalar>(&self) -> HierarchicalModel<U> {
        HierarchicalModel {
            a: self.a.cast(),
            b: self.b.cast(),
            q: self.q.cast(),
            r: self.r.cast(),
        }
    }
}

/// Computed `Pᶜ = BᵀRB + Q`.
///
/// The stored pattern is the union of the boolean product pattern of `Bᵀ·B`
/// and the stored pattern of `Q`; entries that cancel stay stored.
pub fn assemble_precision<T: Scalar>(model: &HierarchicalModel<T>) -> Result<SparseMatrix<T>> {
    let rb = model.b.scale_rows(&model.r.diagonal_values())?;
    let btrb = model.b.transpose().mul(&rb)?;
    btrb.add(&model.q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn eye(n: usize) -> SparseMatrix<f64> {
        SparseMatrix::identity(n)
    }

    #[test]
    fn empty_observations_give_q() {
        let q = SparseMatrix::from_dense(&array![[2.0, -1.0], [-1.0, 2.0]]);
        let m = HierarchicalModel::new(
            eye(2),
            SparseMatrix::zeros(0, 2),
            q.clone(),
            SparseMatrix::zeros(0, 0),
        )
        .unwrap();
        assert_eq!(assemble_precision(&m).unwrap(), q);
    }

    #[test]
    fn identity_blocks_double() {
        let m = HierarchicalModel::new(eye(3), eye(3), eye(3), eye(3)).unwrap();
        assert_eq!(assemble_precision(&m).unwrap(), eye(3).scale(2.0));
    }

    #[test]
    fn cancellation_keeps_the_entry() {
        // Bᵀ R B has (0,1) entry 1*1 = 1; Q has -1 there; sum is a stored zero.
        let b = SparseMatrix::from_dense(&array![[1.0, 1.0]]);
        let q = SparseMatrix::from_dense(&array![[3.0, -1.0], [-1.0, 3.0]]);
        let m = HierarchicalModel::new(eye(2), b, q, eye(1)).unwrap();
        let p = assemble_precision(&m).unwrap();
        assert_eq!(p.get(0, 1), Some(0.0));
        assert_eq!(p.nnz(), 4);
    }

    #[test]
    fn validation() {
        let neg = SparseMatrix::from_dense(&array![[-1.0, 0.0]]);
        assert!(matches!(
            HierarchicalModel::new(
                neg,
                SparseMatrix::zeros(0, 2),
                eye(2),
                SparseMatrix::zeros(0, 0)
            ),
            Err(Error::NegativeEntry { name: "A", .. })
        ));
        let asym = SparseMatrix::from_dense(&array![[1.0, 0.5], [0.0, 1.0]]);
        assert!(matches!(
            HierarchicalModel::new(eye(2), eye(2), asym, eye(2)),
            Err(Error::NotSymmetric { .. })
        ));
        let r = SparseMatrix::from_dense(&array![[1.0, 0.1], [0.1, 1.0]]);
        assert!(matches!(
            HierarchicalModel::new(eye(2), eye(2), eye(2), r),
            Err(Error::NotDiagonal("R"))
        ));
        assert!(HierarchicalModel::new(eye(3), eye(2), eye(2), eye(2)).is_err());
    }
}

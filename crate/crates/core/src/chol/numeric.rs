use crate::chol::SymbolicFactor;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;

/// Cholesky factor `L` with `L Lᵀ = Π P Πᵀ`, stored on exactly the symbolic
/// pattern. Entries that happen to compute to zero stay stored.
#[derive(Clone, Debug)]
pub struct NumericFactor<T> {
    symbolic: SymbolicFactor,
    values: Vec<T>,
    inv_diag: Vec<T>,
    ops: u64,
}

/// Up-looking (row by row) sparse Cholesky on a precomputed symbolic factor.
///
/// `p` is given in original indexing; its stored pattern must lie inside the
/// symmetric closure of the symbolic pattern.
pub fn numeric_cholesky<T: Scalar>(
    p: &SparseMatrix<T>,
    symbolic: &SymbolicFactor,
) -> Result<NumericFactor<T>> {
    let n = symbolic.n();
    if p.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix for a symbolic factor of order {n}",
            p.nrows(),
            p.ncols()
        )));
    }
    let perm = symbolic.permutation();
    let c = p.permute_symmetric(perm)?;
    let lp = symbolic.l_pattern();
    let colptr = lp.colptr();
    let rowind = lp.rowind();

    let mut values = vec![T::zero(); lp.nnz()];
    let mut inv_diag = vec![T::zero(); n];
    let mut next: Vec<usize> = (0..n).map(|j| colptr[j] + 1).collect();
    let mut x = vec![T::zero(); n];
    let mut mark = vec![usize::MAX; n];
    let mut ops = 0u64;
    let floor = T::pivot_floor();

    for k in 0..n {
        let row = symbolic.l_rows().col(k);
        for &j in row {
            mark[j] = k;
        }
        let (crows, cvals) = c.col(k);
        for (&i, &v) in crows.iter().zip(cvals) {
            if i > k {
                break;
            }
            if mark[i] != k {
                return Err(Error::PatternMismatch {
                    row: perm.old_index(k),
                    col: perm.old_index(i),
                });
            }
            x[i] = v;
        }
        let mut d = x[k];
        x[k] = T::zero();
        for &j in &row[..row.len() - 1] {
            let lkj = x[j] * inv_diag[j];
            x[j] = T::zero();
            let done = colptr[j] + 1..next[j];
            for (&r, &l) in rowind[done.clone()].iter().zip(&values[done.clone()]) {
                x[r] -= l * lkj;
            }
            d -= lkj * lkj;
            ops += done.len() as u64 + 2;
            debug_assert_eq!(rowind[next[j]], k);
            values[next[j]] = lkj;
            next[j] += 1;
        }
        if !(d > floor) {
            return Err(Error::NotPositiveDefinite {
                col: perm.old_index(k),
                pivot: d.as_f64(),
            });
        }
        let lkk = d.sqrt();
        values[colptr[k]] = lkk;
        inv_diag[k] = T::one() / lkk;
        ops += 1;
    }

    Ok(NumericFactor {
        symbolic: symbolic.clone(),
        values,
        inv_diag,
        ops,
    })
}

impl<T: Scalar> NumericFactor<T> {
    pub(crate) fn from_parts(symbolic: SymbolicFactor, values: Vec<T>) -> Result<Self> {
        if values.len() != symbolic.nnz() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a pattern with {} entries",
                values.len(),
                symbolic.nnz()
            )));
        }
        let lp = symbolic.l_pattern();
        let mut inv_diag = Vec::with_capacity(symbolic.n());
        for j in 0..symbolic.n() {
            let d = values[lp.colptr()[j]];
            if !(d > T::zero()) {
                return Err(Error::NotPositiveDefinite {
                    col: j,
                    pivot: d.as_f64(),
                });
            }
            inv_diag.push(T::one() / d);
        }
        Ok(NumericFactor {
            symbolic,
            values,
            inv_diag,
            ops: 0,
        })
    }

    pub fn symbolic(&self) -> &SymbolicFactor {
        &self.symbolic
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.symbolic.n()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Values aligned with `symbolic().l_pattern()` storage.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `1 / L_jj`, cached during factorization.
    pub fn inv_diag(&self) -> &[T] {
        &self.inv_diag
    }

    pub fn diag(&self, j: usize) -> T {
        self.values[self.symbolic.l_pattern().colptr()[j]]
    }

    /// Multiplicative operations spent in the factorization.
    pub fn ops(&self) -> u64 {
        self.ops
    }

    pub fn bandwidth(&self) -> usize {
        self.symbolic.bandwidth()
    }

    /// `L` as a sparse matrix in permuted indexing.
    pub fn l_matrix(&self) -> SparseMatrix<T> {
        SparseMatrix::from_pattern(self.symbolic.l_pattern(), self.values.clone())
            .expect("values aligned with pattern")
    }

    /// Column `j` below the diagonal: row indices and values.
    #[inline]
    pub(crate) fn below_diag(&self, j: usize) -> (&[usize], &[T]) {
        let lp = self.symbolic.l_pattern();
        let r = lp.colptr()[j] + 1..lp.colptr()[j + 1];
        (&lp.rowind()[r.clone()], &self.values[r])
    }
}

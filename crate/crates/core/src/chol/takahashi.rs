use crate::chol::NumericFactor;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::{Permutation, SparseMatrix, SparsePattern};

/// Entries of `P⁻¹` on the symmetric closure of the factor pattern `Lˢ`.
///
/// Only the lower triangle is stored (aligned with `Lˢ`); lookups are symmetric.
/// Indices are permuted unless a method says otherwise.
#[derive(Clone, Debug)]
pub struct SparseInverseSubset<T> {
    perm: Permutation,
    lower: SparsePattern,
    values: Vec<T>,
    ops: u64,
}

/// Sparse inverse subset by the Takahashi recursions.
///
/// Columns are swept from the last to the first. For column `i` with
/// below-diagonal rows `R`:
///
/// ```text
/// S[j,i] = -(1/L[i,i]) * sum_{k in R} L[k,i] S[k,j]       for j in R
/// S[i,i] = (1/L[i,i]) * (1/L[i,i] - sum_{k in R} L[k,i] S[k,i])
/// ```
///
/// Every `S[k,j]` read is stored in a later column because `Lˢ` is closed under
/// the elimination tree. Within a column the off-diagonal entries are formed in
/// descending row order.
pub fn takahashi<T: Scalar>(l: &NumericFactor<T>) -> Result<SparseInverseSubset<T>> {
    let n = l.n();
    let lower = l.symbolic().l_pattern().clone();
    let colptr = lower.colptr().to_vec();
    let inv = l.inv_diag();
    let lvals = l.values();
    let mut s = vec![T::zero(); lower.nnz()];
    let mut ops = 0u64;

    for i in (0..n).rev() {
        let inv_i = inv[i];
        if !(inv_i.is_finite() && inv_i > T::zero()) {
            return Err(Error::NotPositiveDefinite {
                col: i,
                pivot: l.diag(i).as_f64(),
            });
        }
        let start = colptr[i] + 1;
        let end = colptr[i + 1];
        let rows = &lower.rowind()[start..end];
        let lcol = &lvals[start..end];
        let c = rows.len() as u64;

        for jj in (0..rows.len()).rev() {
            let j = rows[jj];
            let mut acc = T::zero();
            for (kk, &k) in rows.iter().enumerate() {
                let (hi, lo) = if k >= j { (k, j) } else { (j, k) };
                let p = lower
                    .position(hi, lo)
                    .expect("Lˢ is closed under the elimination tree");
                acc += lcol[kk] * s[p];
            }
            s[start + jj] = -inv_i * acc;
        }
        let mut acc = T::zero();
        for kk in 0..rows.len() {
            acc += lcol[kk] * s[start + kk];
        }
        s[colptr[i]] = inv_i * (inv_i - acc);
        ops += (c + 1) * (c + 1);
    }

    Ok(SparseInverseSubset {
        perm: l.symbolic().permutation().clone(),
        lower,
        values: s,
        ops,
    })
}

impl<T: Scalar> SparseInverseSubset<T> {
    pub(crate) fn from_parts(
        perm: Permutation,
        lower: SparsePattern,
        values: Vec<T>,
    ) -> Result<Self> {
        if values.len() != lower.nnz() || perm.len() != lower.nrows() {
            return Err(Error::DimensionMismatch(
                "inverse subset parts have inconsistent sizes".into(),
            ));
        }
        Ok(SparseInverseSubset {
            perm,
            lower,
            values,
            ops: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.lower.nrows()
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    /// Stored lower triangle (the `Lˢ` pattern), permuted indexing.
    pub fn lower_pattern(&self) -> &SparsePattern {
        &self.lower
    }

    /// Symmetric closure of `Lˢ`, permuted indexing.
    pub fn pattern(&self) -> SparsePattern {
        self.lower.symmetric_closure().expect("square")
    }

    /// Values aligned with [`Self::lower_pattern`].
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    /// Multiplicative operations spent in the recursions.
    pub fn ops(&self) -> u64 {
        self.ops
    }

    /// Storage slot of permuted entry `(i, j)` (either triangle).
    #[inline]
    pub fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        self.lower.position(hi, lo)
    }

    /// Entry `(i, j)` in permuted indexing; `None` outside the subset.
    #[inline]
    pub fn get_permuted(&self, i: usize, j: usize) -> Option<T> {
        self.slot(i, j).map(|p| self.values[p])
    }

    /// Entry `(i, j)` in original indexing; `None` outside the subset.
    pub fn get(&self, i: usize, j: usize) -> Option<T> {
        self.get_permuted(self.perm.new_index(i), self.perm.new_index(j))
    }

    /// Marginal variances `S[i,i]` in original indexing.
    pub fn diagonal(&self) -> Vec<T> {
        let colptr = self.lower.colptr();
        let permuted: Vec<T> = (0..self.n()).map(|i| self.values[colptr[i]]).collect();
        self.perm.apply_inverse(&permuted)
    }

    /// Full symmetric subset as a sparse matrix in original indexing.
    pub fn to_matrix(&self) -> SparseMatrix<T> {
        let mut trip = Vec::with_capacity(2 * self.values.len());
        for ((i, j), &v) in self.lower.entries().zip(&self.values) {
            let (oi, oj) = (self.perm.old_index(i), self.perm.old_index(j));
            trip.push((oi, oj, v));
            if oi != oj {
                trip.push((oj, oi, v));
            }
        }
        SparseMatrix::from_triplets(self.n(), self.n(), &trip).expect("in bounds")
    }
}

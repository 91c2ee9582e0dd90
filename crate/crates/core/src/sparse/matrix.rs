use ndarray::Array2;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::pattern::validate_csc;
use crate::sparse::{Permutation, SparsePattern};

/// How `ones` treats explicitly stored entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternMode {
    /// Only stored entries whose value is nonzero.
    Value,
    /// Every stored entry, including explicit zeros.
    Structural,
}

/// Compressed-column real sparse matrix.
///
/// Stored entries may hold the value zero; such structural zeros are kept by
/// every operation in this crate, and [`SparseMatrix::pattern`] reports them.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<T> {
    nrows: usize,
    ncols: usize,
    colptr: Vec<usize>,
    rowind: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> SparseMatrix<T> {
    /// Assembles from `(row, col, value)` triplets. Duplicates are summed and an
    /// entry that sums to zero stays stored.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, T)],
    ) -> Result<Self> {
        let mut cols: Vec<Vec<(usize, T)>> = vec![Vec::new(); ncols];
        for &(row, col, v) in triplets {
            if row >= nrows || col >= ncols {
                return Err(Error::OutOfBounds {
                    row,
                    col,
                    nrows,
                    ncols,
                });
            }
            cols[col].push((row, v));
        }
        let mut colptr = Vec::with_capacity(ncols + 1);
        let mut rowind = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        colptr.push(0);
        for col in cols.iter_mut() {
            col.sort_by_key(|&(r, _)| r);
            for &(r, v) in col.iter() {
                if rowind.len() > *colptr.last().unwrap() && *rowind.last().unwrap() == r {
                    *values.last_mut().unwrap() += v;
                } else {
                    rowind.push(r);
                    values.push(v);
                }
            }
            colptr.push(rowind.len());
        }
        Ok(SparseMatrix {
            nrows,
            ncols,
            colptr,
            rowind,
            values,
        })
    }

    pub fn from_csc(
        nrows: usize,
        ncols: usize,
        colptr: Vec<usize>,
        rowind: Vec<usize>,
        values: Vec<T>,
    ) -> Result<Self> {
        validate_csc(nrows, ncols, &colptr, &rowind)?;
        if values.len() != rowind.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} row indices",
                values.len(),
                rowind.len()
            )));
        }
        Ok(SparseMatrix {
            nrows,
            ncols,
            colptr,
            rowind,
            values,
        })
    }

    /// Values laid on an existing pattern, aligned with its storage order.
    pub fn from_pattern(pattern: &SparsePattern, values: Vec<T>) -> Result<Self> {
        Self::from_csc(
            pattern.nrows(),
            pattern.ncols(),
            pattern.colptr().to_vec(),
            pattern.rowind().to_vec(),
            values,
        )
    }

    /// Every entry of `pattern` stored with value zero.
    pub fn zeros_on(pattern: &SparsePattern) -> Self {
        Self::from_pattern(pattern, vec![T::zero(); pattern.nnz()])
            .expect("aligned by construction")
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self::zeros_on(&SparsePattern::empty(nrows, ncols))
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![T::one(); n])
    }

    pub fn diagonal(d: &[T]) -> Self {
        let n = d.len();
        SparseMatrix {
            nrows: n,
            ncols: n,
            colptr: (0..=n).collect(),
            rowind: (0..n).collect(),
            values: d.to_vec(),
        }
    }

    /// Stores the nonzero entries of a dense matrix.
    pub fn from_dense(dense: &Array2<T>) -> Self {
        Self::from_dense_with(dense, |v| v != T::zero())
    }

    /// Stores every entry of a dense matrix, zeros included.
    pub fn from_dense_full(dense: &Array2<T>) -> Self {
        Self::from_dense_with(dense, |_| true)
    }

    fn from_dense_with(dense: &Array2<T>, keep: impl Fn(T) -> bool) -> Self {
        let (nrows, ncols) = dense.dim();
        let mut colptr = vec![0];
        let mut rowind = Vec::new();
        let mut values = Vec::new();
        for j in 0..ncols {
            for i in 0..nrows {
                let v = dense[[i, j]];
                if keep(v) {
                    rowind.push(i);
                    values.push(v);
                }
            }
            colptr.push(rowind.len());
        }
        SparseMatrix {
            nrows,
            ncols,
            colptr,
            rowind,
            values,
        }
    }

    pub fn to_dense(&self) -> Array2<T> {
        let mut out = Array2::from_elem((self.nrows, self.ncols), T::zero());
        for (i, j, v) in self.iter() {
            out[[i, j]] = v;
        }
        out
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.rowind.len()
    }

    pub fn colptr(&self) -> &[usize] {
        &self.colptr
    }

    pub fn rowind(&self) -> &[usize] {
        &self.rowind
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    /// Row indices and values of column `j`.
    #[inline]
    pub fn col(&self, j: usize) -> (&[usize], &[T]) {
        let r = self.colptr[j]..self.colptr[j + 1];
        (&self.rowind[r.clone()], &self.values[r])
    }

    /// `(row, col, value)` over stored entries in column-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.ncols).flat_map(move |j| {
            let (rows, vals) = self.col(j);
            rows.iter().zip(vals).map(move |(&i, &v)| (i, j, v))
        })
    }

    /// Stored value at `(row, col)`; `None` for an absent entry.
    pub fn get(&self, row: usize, col: usize) -> Option<T> {
        if col >= self.ncols {
            return None;
        }
        let (rows, vals) = self.col(col);
        rows.binary_search(&row).ok().map(|p| vals[p])
    }

    /// Value at `(row, col)`, reading absent entries as zero.
    pub fn value(&self, row: usize, col: usize) -> T {
        self.get(row, col).unwrap_or_else(T::zero)
    }

    /// Structural pattern: every stored entry.
    pub fn pattern(&self) -> SparsePattern {
        SparsePattern::from_csc_unchecked(
            self.nrows,
            self.ncols,
            self.colptr.clone(),
            self.rowind.clone(),
        )
    }

    /// Sparsity pattern under the given mode.
    pub fn ones(&self, mode: PatternMode) -> SparsePattern {
        match mode {
            PatternMode::Structural => self.pattern(),
            PatternMode::Value => self.pattern().filter(|i, j| self.value(i, j) != T::zero()),
        }
    }

    pub fn transpose(&self) -> SparseMatrix<T> {
        let mut next = vec![0usize; self.nrows + 1];
        for &i in &self.rowind {
            next[i + 1] += 1;
        }
        for i in 0..self.nrows {
            next[i + 1] += next[i];
        }
        let colptr = next.clone();
        let mut rowind = vec![0; self.nnz()];
        let mut values = vec![T::zero(); self.nnz()];
        for (i, j, v) in self.iter() {
            rowind[next[i]] = j;
            values[next[i]] = v;
            next[i] += 1;
        }
        SparseMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            colptr,
            rowind,
            values,
        }
    }

    pub fn scale(&self, c: T) -> SparseMatrix<T> {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    /// `diag(d) * self`.
    pub fn scale_rows(&self, d: &[T]) -> Result<SparseMatrix<T>> {
        if d.len() != self.nrows {
            return Err(Error::DimensionMismatch(format!(
                "{} row scales for {} rows",
                d.len(),
                self.nrows
            )));
        }
        let mut out = self.clone();
        for (v, &i) in out.values.iter_mut().zip(&self.rowind) {
            *v *= d[i];
        }
        Ok(out)
    }

    /// Computed sum: stored pattern is the union of both stored patterns.
    pub fn add(&self, other: &SparseMatrix<T>) -> Result<SparseMatrix<T>> {
        let pattern = self.pattern().union(&other.pattern())?;
        let mut out = Self::zeros_on(&pattern);
        for m in [self, other] {
            for (i, j, v) in m.iter() {
                let p = pattern.position(i, j).expect("union contains operand");
                out.values[p] += v;
            }
        }
        Ok(out)
    }

    /// Computed product: the stored pattern is the boolean product of the stored
    /// patterns, whatever cancellation happens in the values.
    pub fn mul(&self, other: &SparseMatrix<T>) -> Result<SparseMatrix<T>> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch(format!(
                "inner dimensions {}x{} * {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut mark = vec![usize::MAX; self.nrows];
        let mut acc = vec![T::zero(); self.nrows];
        let mut colptr = Vec::with_capacity(other.ncols + 1);
        let mut rowind = Vec::new();
        let mut values = Vec::new();
        colptr.push(0);
        for j in 0..other.ncols {
            let start = rowind.len();
            let (brows, bvals) = other.col(j);
            for (&k, &bkj) in brows.iter().zip(bvals) {
                let (arows, avals) = self.col(k);
                for (&i, &aik) in arows.iter().zip(avals) {
                    if mark[i] != j {
                        mark[i] = j;
                        acc[i] = T::zero();
                        rowind.push(i);
                    }
                    acc[i] += aik * bkj;
                }
            }
            rowind[start..].sort_unstable();
            values.extend(rowind[start..].iter().map(|&i| acc[i]));
            colptr.push(rowind.len());
        }
        Ok(SparseMatrix {
            nrows: self.nrows,
            ncols: other.ncols,
            colptr,
            rowind,
            values,
        })
    }

    /// `self * x` for a dense vector.
    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.ncols
            )));
        }
        let mut y = vec![T::zero(); self.nrows];
        for (i, j, v) in self.iter() {
            y[i] += v * x[j];
        }
        Ok(y)
    }

    /// Adds explicit zero entries so that the stored pattern covers `extra`.
    pub fn with_structural_entries(&self, extra: &SparsePattern) -> Result<SparseMatrix<T>> {
        self.add(&Self::zeros_on(extra))
    }

    /// First stored entry with a negative value.
    pub fn first_negative(&self) -> Option<(usize, usize, T)> {
        self.iter().find(|&(_, _, v)| v < T::zero())
    }

    pub fn require_nonnegative(&self, name: &'static str) -> Result<()> {
        match self.first_negative() {
            Some((row, col, v)) => Err(Error::NegativeEntry {
                name,
                row,
                col,
                value: v.as_f64(),
            }),
            None => Ok(()),
        }
    }

    /// Pattern and values both symmetric (exact comparison).
    pub fn is_symmetric(&self) -> bool {
        self.nrows == self.ncols
            && self
                .iter()
                .all(|(i, j, v)| self.get(j, i).is_some_and(|w| w == v))
    }

    pub fn is_diagonal(&self) -> bool {
        self.iter().all(|(i, j, _)| i == j)
    }

    /// Diagonal values; absent entries read as zero.
    pub fn diagonal_values(&self) -> Vec<T> {
        (0..self.nrows.min(self.ncols))
            .map(|i| self.value(i, i))
            .collect()
    }

    /// `Π M Πᵀ`: entry `(i, j)` moves to `(perm.new_index(i), perm.new_index(j))`.
    pub fn permute_symmetric(&self, perm: &Permutation) -> Result<SparseMatrix<T>> {
        if self.nrows != self.ncols || perm.len() != self.nrows {
            return Err(Error::DimensionMismatch(format!(
                "permutation of length {} applied to {}x{} matrix",
                perm.len(),
                self.nrows,
                self.ncols
            )));
        }
        let n = self.nrows;
        let mut colptr = Vec::with_capacity(n + 1);
        let mut rowind = Vec::with_capacity(self.nnz());
        let mut values = Vec::with_capacity(self.nnz());
        let mut buf: Vec<(usize, T)> = Vec::new();
        colptr.push(0);
        for new_j in 0..n {
            let (rows, vals) = self.col(perm.old_index(new_j));
            buf.clear();
            buf.extend(rows.iter().zip(vals).map(|(&i, &v)| (perm.new_index(i), v)));
            buf.sort_unstable_by_key(|&(i, _)| i);
            for &(i, v) in &buf {
                rowind.push(i);
                values.push(v);
            }
            colptr.push(rowind.len());
        }
        Ok(SparseMatrix {
            nrows: n,
            ncols: n,
            colptr,
            rowind,
            values,
        })
    }

    /// `M Πᵀ`: column `j` moves to `perm.new_index(j)`.
    pub fn permute_cols(&self, perm: &Permutation) -> Result<SparseMatrix<T>> {
        if perm.len() != self.ncols {
            return Err(Error::DimensionMismatch(format!(
                "permutation of length {} applied to {} columns",
                perm.len(),
                self.ncols
            )));
        }
        let mut colptr = Vec::with_capacity(self.ncols + 1);
        let mut rowind = Vec::with_capacity(self.nnz());
        let mut values = Vec::with_capacity(self.nnz());
        colptr.push(0);
        for new_j in 0..self.ncols {
            let (rows, vals) = self.col(perm.old_index(new_j));
            rowind.extend_from_slice(rows);
            values.extend_from_slice(vals);
            colptr.push(rowind.len());
        }
        Ok(SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            colptr,
            rowind,
            values,
        })
    }

    /// Horizontal concatenation `(M_1, M_2, ...)`.
    pub fn hstack(blocks: &[&SparseMatrix<T>]) -> Result<SparseMatrix<T>> {
        let nrows = blocks.first().map_or(0, |b| b.nrows);
        let mut colptr = vec![0];
        let mut rowind = Vec::new();
        let mut values = Vec::new();
        for b in blocks {
            if b.nrows != nrows {
                return Err(Error::DimensionMismatch(format!(
                    "hstack of blocks with {} and {} rows",
                    nrows, b.nrows
                )));
            }
            for j in 0..b.ncols {
                let (rows, vals) = b.col(j);
                rowind.extend_from_slice(rows);
                values.extend_from_slice(vals);
                colptr.push(rowind.len());
            }
        }
        let ncols = colptr.len() - 1;
        Ok(SparseMatrix {
            nrows,
            ncols,
            colptr,
            rowind,
            values,
        })
    }

    /// Block-diagonal assembly `bdiag(M_1, M_2, ...)`.
    pub fn block_diag(blocks: &[&SparseMatrix<T>]) -> SparseMatrix<T> {
        let mut colptr = vec![0];
        let mut rowind = Vec::new();
        let mut values = Vec::new();
        let mut row_offset = 0;
        for b in blocks {
            for j in 0..b.ncols {
                let (rows, vals) = b.col(j);
                rowind.extend(rows.iter().map(|&i| i + row_offset));
                values.extend_from_slice(vals);
                colptr.push(rowind.len());
            }
            row_offset += b.nrows;
        }
        let ncols = colptr.len() - 1;
        SparseMatrix {
            nrows: row_offset,
            ncols,
            colptr,
            rowind,
            values,
        }
    }

    /// Converts the scalar type.
    pub fn cast<U: Scalar>(&self) -> SparseMatrix<U> {
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            colptr: self.colptr.clone(),
            rowind: self.rowind.clone(),
            values: self.values.iter().map(|v| U::of(v.as_f64())).collect(),
        }
    }

    /// Largest absolute stored value.
    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn triplets_sum_duplicates_and_keep_zeros() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            &[(0, 0, 1.0), (1, 0, 2.0), (1, 0, -2.0), (1, 1, 3.0)],
        )
        .unwrap();
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(1, 0), Some(0.0));
        assert_eq!(m.get(0, 1), None);
    }

    #[test]
    fn ones_identity() {
        let m = SparseMatrix::<f64>::identity(3);
        let p = m.ones(PatternMode::Value);
        assert_eq!(p, SparsePattern::identity(3));
    }

    #[test]
    fn ones_value_vs_structural() {
        let m = SparseMatrix::from_triplets(
            3,
            3,
            &[(0, 0, 1.0), (1, 1, 2.0), (2, 2, 3.0), (0, 1, 0.0)],
        )
        .unwrap();
        assert!(!m.ones(PatternMode::Value).contains(0, 1));
        assert!(m.ones(PatternMode::Structural).contains(0, 1));
    }

    #[test]
    fn computed_product_keeps_cancelled_entries() {
        // [1 1] * [1; -1] = 0 algebraically but is a computed entry.
        let a = SparseMatrix::from_dense(&array![[1.0, 1.0]]);
        let b = SparseMatrix::from_dense(&array![[1.0], [-1.0]]);
        let c = a.mul(&b).unwrap();
        assert_eq!(c.nnz(), 1);
        assert_eq!(c.get(0, 0), Some(0.0));
        assert!(c.ones(PatternMode::Value).nnz() == 0);
    }

    #[test]
    fn computed_sum_keeps_cancelled_entries() {
        let a = SparseMatrix::from_dense(&array![[1.0, 2.0], [0.0, 1.0]]);
        let b = SparseMatrix::from_dense(&array![[0.0, -2.0], [0.0, 1.0]]);
        let c = a.add(&b).unwrap();
        assert_eq!(c.get(0, 1), Some(0.0));
        assert_eq!(c.to_dense(), array![[1.0, 0.0], [0.0, 2.0]]);
    }

    #[test]
    fn mul_matches_dense() {
        let a = array![[1.0, 0.0, 2.0], [0.0, 3.0, 0.0]];
        let b = array![[1.0, 4.0], [0.0, 1.0], [5.0, 0.0]];
        let c = SparseMatrix::from_dense(&a)
            .mul(&SparseMatrix::from_dense(&b))
            .unwrap();
        assert_eq!(c.to_dense(), a.dot(&b));
    }

    #[test]
    fn permute_reversal_on_diagonal() {
        let m = SparseMatrix::diagonal(&[1.0, 2.0, 3.0]);
        let p = Permutation::reversal(3);
        assert_eq!(
            m.permute_symmetric(&p).unwrap(),
            SparseMatrix::diagonal(&[3.0, 2.0, 1.0])
        );
        assert_eq!(m.permute_symmetric(&Permutation::identity(3)).unwrap(), m);
        assert!(m.permute_symmetric(&Permutation::identity(2)).is_err());
    }

    #[test]
    fn permute_cols_moves_columns() {
        let a = SparseMatrix::from_dense(&array![[1.0, 2.0, 3.0]]);
        let p = Permutation::from_forward(vec![2, 0, 1]).unwrap();
        assert_eq!(
            a.permute_cols(&p).unwrap().to_dense(),
            array![[3.0, 1.0, 2.0]]
        );
    }

    #[test]
    fn block_assembly() {
        let k = SparseMatrix::from_dense(&array![[2.0, 1.0], [1.0, 2.0]]);
        let q = SparseMatrix::<f64>::identity(1);
        let bd = SparseMatrix::block_diag(&[&k, &q]);
        assert_eq!(
            bd.to_dense(),
            array![[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 1.0]]
        );
        let h = SparseMatrix::hstack(&[&k, &SparseMatrix::identity(2)]).unwrap();
        assert_eq!(h.shape(), (2, 4));
        assert_eq!(h.value(1, 3), 1.0);
        assert!(SparseMatrix::hstack(&[&k, &q]).is_err());
    }

    #[test]
    fn negativity_and_symmetry_checks() {
        let m = SparseMatrix::from_dense(&array![[1.0, -1.0], [-1.0, 1.0]]);
        assert!(m.is_symmetric());
        assert_eq!(m.first_negative(), Some((1, 0, -1.0)));
        assert!(m.require_nonnegative("A").is_err());
        assert!(!m.is_diagonal());
    }
}

use std::fmt;

use crate::error::{Error, Result};
use crate::sparse::Permutation;

/// Binary sparsity structure stored in compressed-column form.
///
/// Row indices inside each column are strictly increasing, so the entry set is
/// column-major sorted with no duplicates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparsePattern {
    nrows: usize,
    ncols: usize,
    colptr: Vec<usize>,
    rowind: Vec<usize>,
}

/// Outcome of a `P1 >= P2` comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    Covered,
    /// First entry of `P2` (column-major) that is absent from `P1`.
    Uncovered {
        row: usize,
        col: usize,
    },
}

impl Coverage {
    pub fn is_covered(self) -> bool {
        matches!(self, Coverage::Covered)
    }

    pub fn witness(self) -> Option<(usize, usize)> {
        match self {
            Coverage::Covered => None,
            Coverage::Uncovered { row, col } => Some((row, col)),
        }
    }
}

impl SparsePattern {
    /// Builds a pattern from arbitrary `(row, col)` pairs; duplicates are merged.
    pub fn new<I>(nrows: usize, ncols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); ncols];
        for (row, col) in entries {
            if row >= nrows || col >= ncols {
                return Err(Error::OutOfBounds {
                    row,
                    col,
                    nrows,
                    ncols,
                });
            }
            cols[col].push(row);
        }
        Ok(Self::from_columns(nrows, cols))
    }

    pub(crate) fn from_columns(nrows: usize, mut cols: Vec<Vec<usize>>) -> Self {
        let ncols = cols.len();
        let mut colptr = Vec::with_capacity(ncols + 1);
        let mut rowind = Vec::new();
        colptr.push(0);
        for col in cols.iter_mut() {
            col.sort_unstable();
            col.dedup();
            rowind.extend_from_slice(col);
            colptr.push(rowind.len());
        }
        SparsePattern {
            nrows,
            ncols,
            colptr,
            rowind,
        }
    }

    /// Wraps raw compressed-column arrays after validating them.
    pub fn from_csc(
        nrows: usize,
        ncols: usize,
        colptr: Vec<usize>,
        rowind: Vec<usize>,
    ) -> Result<Self> {
        validate_csc(nrows, ncols, &colptr, &rowind)?;
        Ok(SparsePattern {
            nrows,
            ncols,
            colptr,
            rowind,
        })
    }

    pub(crate) fn from_csc_unchecked(
        nrows: usize,
        ncols: usize,
        colptr: Vec<usize>,
        rowind: Vec<usize>,
    ) -> Self {
        debug_assert!(validate_csc(nrows, ncols, &colptr, &rowind).is_ok());
        SparsePattern {
            nrows,
            ncols,
            colptr,
            rowind,
        }
    }

    pub fn empty(nrows: usize, ncols: usize) -> Self {
        SparsePattern {
            nrows,
            ncols,
            colptr: vec![0; ncols + 1],
            rowind: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparsePattern {
            nrows: n,
            ncols: n,
            colptr: (0..=n).collect(),
            rowind: (0..n).collect(),
        }
    }

    pub fn dense(nrows: usize, ncols: usize) -> Self {
        let cols = (0..ncols).map(|_| (0..nrows).collect()).collect();
        Self::from_columns(nrows, cols)
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

    /// Row indices of column `j`.
    #[inline]
    pub fn col(&self, j: usize) -> &[usize] {
        &self.rowind[self.colptr[j]..self.colptr[j + 1]]
    }

    /// Storage position of `(row, col)`, if present.
    #[inline]
    pub fn position(&self, row: usize, col: usize) -> Option<usize> {
        if col >= self.ncols {
            return None;
        }
        let start = self.colptr[col];
        self.col(col).binary_search(&row).ok().map(|p| start + p)
    }

    #[inline]
    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.position(row, col).is_some()
    }

    /// Entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.ncols).flat_map(move |j| self.col(j).iter().map(move |&i| (i, j)))
    }

    pub fn transpose(&self) -> SparsePattern {
        let mut counts = vec![0usize; self.nrows + 1];
        for &i in &self.rowind {
            counts[i + 1] += 1;
        }
        for i in 0..self.nrows {
            counts[i + 1] += counts[i];
        }
        let colptr = counts.clone();
        let mut next = counts;
        let mut rowind = vec![0; self.nnz()];
        for j in 0..self.ncols {
            for &i in self.col(j) {
                rowind[next[i]] = j;
                next[i] += 1;
            }
        }
        SparsePattern::from_csc_unchecked(self.ncols, self.nrows, colptr, rowind)
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    /// First entry whose mirror is absent, or `None` when symmetric.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((self.nrows.min(self.ncols), 0));
        }
        self.entries().find(|&(i, j)| !self.contains(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry().is_none()
    }

    pub fn missing_diagonal(&self) -> Option<usize> {
        (0..self.nrows.min(self.ncols)).find(|&i| !self.contains(i, i))
    }

    pub(crate) fn require_symmetric(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "expected a square pattern, got {}x{}",
                self.nrows, self.ncols
            )));
        }
        match self.asymmetry() {
            Some((row, col)) => Err(Error::NotSymmetric { row, col }),
            None => Ok(()),
        }
    }

    fn require_same_shape(&self, other: &SparsePattern) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        Ok(())
    }

    /// Set union: the pattern of a computed sum.
    pub fn union(&self, other: &SparsePattern) -> Result<SparsePattern> {
        self.require_same_shape(other)?;
        let mut colptr = Vec::with_capacity(self.ncols + 1);
        let mut rowind = Vec::with_capacity(self.nnz().max(other.nnz()));
        colptr.push(0);
        for j in 0..self.ncols {
            let (a, b) = (self.col(j), other.col(j));
            let (mut p, mut q) = (0, 0);
            while p < a.len() || q < b.len() {
                let next = match (a.get(p), b.get(q)) {
                    (Some(&x), Some(&y)) if x == y => {
                        p += 1;
                        q += 1;
                        x
                    }
                    (Some(&x), Some(&y)) if x < y => {
                        p += 1;
                        x
                    }
                    (Some(_), Some(&y)) => {
                        q += 1;
                        y
                    }
                    (Some(&x), None) => {
                        p += 1;
                        x
                    }
                    (None, Some(&y)) => {
                        q += 1;
                        y
                    }
                    (None, None) => unreachable!(),
                };
                rowind.push(next);
            }
            colptr.push(rowind.len());
        }
        Ok(SparsePattern::from_csc_unchecked(
            self.nrows, self.ncols, colptr, rowind,
        ))
    }

    /// Boolean matrix product: `(i, j)` present iff some `k` has `(i, k)` in `self`
    /// and `(k, j)` in `other`.
    pub fn product(&self, other: &SparsePattern) -> Result<SparsePattern> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch(format!(
                "inner dimensions {}x{} * {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut mark = vec![usize::MAX; self.nrows];
        let mut colptr = Vec::with_capacity(other.ncols + 1);
        let mut rowind = Vec::new();
        colptr.push(0);
        for j in 0..other.ncols {
            let start = rowind.len();
            for &k in other.col(j) {
                for &i in self.col(k) {
                    if mark[i] != j {
                        mark[i] = j;
                        rowind.push(i);
                    }
                }
            }
            rowind[start..].sort_unstable();
            colptr.push(rowind.len());
        }
        Ok(SparsePattern::from_csc_unchecked(
            self.nrows,
            other.ncols,
            colptr,
            rowind,
        ))
    }

    /// Elementwise `self >= other`, i.e. every entry of `other` is present in `self`.
    pub fn covers(&self, other: &SparsePattern) -> Result<Coverage> {
        self.require_same_shape(other)?;
        Ok(match self.uncovered_iter(other).next() {
            None => Coverage::Covered,
            Some((row, col)) => Coverage::Uncovered { row, col },
        })
    }

    /// All entries of `other` absent from `self`, column-major.
    pub fn uncovered(&self, other: &SparsePattern) -> Result<Vec<(usize, usize)>> {
        self.require_same_shape(other)?;
        Ok(self.uncovered_iter(other).collect())
    }

    fn uncovered_iter<'a>(
        &'a self,
        other: &'a SparsePattern,
    ) -> impl Iterator<Item = (usize, usize)> + 'a {
        (0..other.ncols).flat_map(move |j| {
            let mine = self.col(j);
            other
                .col(j)
                .iter()
                .filter(move |i| mine.binary_search(i).is_err())
                .map(move |&i| (i, j))
        })
    }

    /// Entries with `row >= col`.
    pub fn lower_triangle(&self) -> SparsePattern {
        self.filter(|i, j| i >= j)
    }

    /// Entries with `row <= col`.
    pub fn upper_triangle(&self) -> SparsePattern {
        self.filter(|i, j| i <= j)
    }

    pub fn filter<F: Fn(usize, usize) -> bool>(&self, keep: F) -> SparsePattern {
        let mut colptr = Vec::with_capacity(self.ncols + 1);
        let mut rowind = Vec::new();
        colptr.push(0);
        for j in 0..self.ncols {
            rowind.extend(self.col(j).iter().copied().filter(|&i| keep(i, j)));
            colptr.push(rowind.len());
        }
        SparsePattern::from_csc_unchecked(self.nrows, self.ncols, colptr, rowind)
    }

    /// `self ∪ selfᵀ` for a square pattern.
    pub fn symmetric_closure(&self) -> Result<SparsePattern> {
        self.union(&self.transpose())
    }

    /// Largest `|i - j|` over the stored entries.
    pub fn bandwidth(&self) -> usize {
        self.entries()
            .map(|(i, j)| i.abs_diff(j))
            .max()
            .unwrap_or(0)
    }

    /// True when every row and every column holds exactly one entry.
    pub fn is_permutation_pattern(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let mut seen = vec![false; self.nrows];
        for j in 0..self.ncols {
            let col = self.col(j);
            if col.len() != 1 || std::mem::replace(&mut seen[col[0]], true) {
                return false;
            }
        }
        true
    }

    /// `Π P Πᵀ`, relabelling index `old` as `perm.new_index(old)`.
    pub fn permute_symmetric(&self, perm: &Permutation) -> Result<SparsePattern> {
        if !self.is_square() || perm.len() != self.nrows {
            return Err(Error::DimensionMismatch(format!(
                "permutation of length {} applied to {}x{} pattern",
                perm.len(),
                self.nrows,
                self.ncols
            )));
        }
        let cols = (0..self.ncols)
            .map(|new_j| {
                let old_j = perm.old_index(new_j);
                self.col(old_j).iter().map(|&i| perm.new_index(i)).collect()
            })
            .collect();
        Ok(SparsePattern::from_columns(self.nrows, cols))
    }

    /// Dense boolean rendering, row-major. Intended for small patterns.
    pub fn to_dense(&self) -> Vec<Vec<bool>> {
        let mut out = vec![vec![false; self.ncols]; self.nrows];
        for (i, j) in self.entries() {
            out[i][j] = true;
        }
        out
    }
}

impl fmt::Debug for SparsePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SparsePattern")
            .field("shape", &(self.nrows, self.ncols))
            .field("nnz", &self.nnz())
            .finish()
    }
}

pub(crate) fn validate_csc(
    nrows: usize,
    ncols: usize,
    colptr: &[usize],
    rowind: &[usize],
) -> Result<()> {
    if colptr.len() != ncols + 1 || colptr[0] != 0 || colptr[ncols] != rowind.len() {
        return Err(Error::InvalidArgument(
            "column pointer array is inconsistent".into(),
        ));
    }
    for j in 0..ncols {
        if colptr[j] > colptr[j + 1] {
            return Err(Error::InvalidArgument(
                "column pointers must be nondecreasing".into(),
            ));
        }
        let col = &rowind[colptr[j]..colptr[j + 1]];
        for w in col.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidArgument(format!(
                    "row indices of column {j} are not strictly increasing"
                )));
            }
        }
        if let Some(&last) = col.last() {
            if last >= nrows {
                return Err(Error::OutOfBounds {
                    row: last,
                    col: j,
                    nrows,
                    ncols,
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(n: usize, e: &[(usize, usize)]) -> SparsePattern {
        SparsePattern::new(n, n, e.iter().copied()).unwrap()
    }

    fn tridiagonal(n: usize) -> SparsePattern {
        let mut e = Vec::new();
        for i in 0..n {
            e.push((i, i));
            if i + 1 < n {
                e.push((i, i + 1));
                e.push((i + 1, i));
            }
        }
        pat(n, &e)
    }

    fn banded(n: usize, b: usize) -> SparsePattern {
        let e = (0..n).flat_map(|i| {
            (0..n)
                .filter(move |&j| i.abs_diff(j) <= b)
                .map(move |j| (i, j))
        });
        SparsePattern::new(n, n, e).unwrap()
    }

    #[test]
    fn new_sorts_and_dedups() {
        let p = SparsePattern::new(3, 2, vec![(2, 0), (0, 0), (2, 0), (1, 1)]).unwrap();
        assert_eq!(p.nnz(), 3);
        assert_eq!(p.col(0), &[0, 2]);
        assert!(SparsePattern::new(2, 2, vec![(2, 0)]).is_err());
    }

    #[test]
    fn union_examples() {
        let a = pat(2, &[(0, 0)]);
        let b = pat(2, &[(1, 1)]);
        assert_eq!(a.union(&b).unwrap(), pat(2, &[(0, 0), (1, 1)]));
        let e = SparsePattern::empty(2, 2);
        assert_eq!(a.union(&e).unwrap(), a);
        assert!(a.union(&SparsePattern::empty(3, 3)).is_err());
    }

    #[test]
    fn product_examples() {
        // Row permutation via a permutation pattern.
        let perm = pat(3, &[(0, 2), (1, 0), (2, 1)]);
        let p = pat(3, &[(0, 0), (2, 1), (1, 2)]);
        let prod = perm.product(&p).unwrap();
        // Row r of result = row perm(r) of p: row 0 <- row 2, row 1 <- row 0, row 2 <- row 1.
        assert_eq!(prod, pat(3, &[(0, 1), (1, 0), (2, 2)]));

        let ones_row = SparsePattern::dense(1, 4);
        let full = ones_row.transpose().product(&ones_row).unwrap();
        assert_eq!(full, SparsePattern::dense(4, 4));
        assert!(ones_row.product(&ones_row).is_err());
    }

    #[test]
    fn covers_examples() {
        let p5 = banded(6, 2);
        let p3 = tridiagonal(6);
        assert!(p5.covers(&p5).unwrap().is_covered());
        assert!(p5.covers(&p3).unwrap().is_covered());
        let c = p3.covers(&p5).unwrap();
        assert_eq!(c, Coverage::Uncovered { row: 2, col: 0 });
        assert_eq!(p3.uncovered(&p5).unwrap().len(), p5.nnz() - p3.nnz());
    }

    #[test]
    fn symmetry_and_diagonal() {
        assert!(tridiagonal(4).is_symmetric());
        let a = pat(3, &[(0, 0), (1, 0), (1, 1)]);
        assert_eq!(a.asymmetry(), Some((1, 0)));
        assert_eq!(a.missing_diagonal(), Some(2));
        assert_eq!(a.symmetric_closure().unwrap().nnz(), 4);
    }

    #[test]
    fn bandwidth_and_triangles() {
        let p = banded(7, 3);
        assert_eq!(p.bandwidth(), 3);
        assert_eq!(
            p.lower_triangle().nnz() + p.upper_triangle().nnz(),
            p.nnz() + 7
        );
        assert!(SparsePattern::identity(4).is_permutation_pattern());
        assert!(!tridiagonal(4).is_permutation_pattern());
    }

    #[test]
    fn transpose_roundtrip() {
        let p = SparsePattern::new(3, 4, vec![(0, 3), (2, 1), (1, 1), (2, 0)]).unwrap();
        let t = p.transpose();
        assert_eq!(t.shape(), (4, 3));
        assert!(t.contains(3, 0) && t.contains(1, 2));
        assert_eq!(t.transpose(), p);
    }

    #[test]
    fn from_csc_rejects_unsorted() {
        assert!(SparsePattern::from_csc(3, 1, vec![0, 2], vec![2, 1]).is_err());
        assert!(SparsePattern::from_csc(3, 1, vec![0, 2], vec![1, 2]).is_ok());
    }
}

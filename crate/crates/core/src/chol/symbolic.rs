use crate::error::{Error, Result};
use crate::sparse::{Permutation, SparsePattern};

/// Fill-reducing permutation, elimination tree and the pattern `Lˢ` of the
/// Cholesky factor of the permuted matrix.
///
/// All indices held here refer to the permuted ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicFactor {
    perm: Permutation,
    etree: Vec<Option<usize>>,
    l_pattern: SparsePattern,
    l_rows: SparsePattern,
}

/// Symbolic factorization of a symmetric pattern with full diagonal.
///
/// The elimination tree is built with Liu's path-compressed algorithm and each
/// row of `Lˢ` is the reach of the corresponding row of the matrix in that tree
/// (the row subtree).
pub fn symbolic_cholesky(pattern: &SparsePattern, perm: Permutation) -> Result<SymbolicFactor> {
    pattern.require_symmetric()?;
    if let Some(i) = pattern.missing_diagonal() {
        return Err(Error::MissingDiagonal(i));
    }
    let n = pattern.nrows();
    if perm.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "permutation of length {} for a {n}x{n} pattern",
            perm.len()
        )));
    }
    let c = pattern.permute_symmetric(&perm)?;
    let etree = elimination_tree(&c);

    let mut mark = vec![usize::MAX; n];
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(n);
    for k in 0..n {
        mark[k] = k;
        let mut row = Vec::new();
        for &i in c.col(k).iter().take_while(|&&i| i < k) {
            let mut j = i;
            while mark[j] != k {
                mark[j] = k;
                row.push(j);
                j = etree[j].expect("a node below k in the etree has an ancestor");
            }
        }
        row.push(k);
        row.sort_unstable();
        rows.push(row);
    }
    let l_rows = SparsePattern::from_columns(n, rows);
    let l_pattern = l_rows.transpose();
    Ok(SymbolicFactor {
        perm,
        etree,
        l_pattern,
        l_rows,
    })
}

/// Elimination tree of a symmetric pattern from its upper triangle.
pub(crate) fn elimination_tree(c: &SparsePattern) -> Vec<Option<usize>> {
    let n = c.ncols();
    let mut parent = vec![None; n];
    let mut ancestor: Vec<Option<usize>> = vec![None; n];
    for k in 0..n {
        for &i in c.col(k).iter().take_while(|&&i| i < k) {
            let mut j = i;
            loop {
                match ancestor[j] {
                    Some(a) if a == k => break,
                    Some(a) => {
                        ancestor[j] = Some(k);
                        j = a;
                    }
                    None => {
                        ancestor[j] = Some(k);
                        parent[j] = Some(k);
                        break;
                    }
                }
            }
        }
    }
    parent
}

impl SymbolicFactor {
    pub(crate) fn from_parts(
        perm: Permutation,
        etree: Vec<Option<usize>>,
        l_pattern: SparsePattern,
    ) -> Result<Self> {
        let n = l_pattern.nrows();
        if perm.len() != n || etree.len() != n || !l_pattern.is_square() {
            return Err(Error::DimensionMismatch(
                "factor parts have inconsistent sizes".into(),
            ));
        }
        for j in 0..n {
            if l_pattern.col(j).first() != Some(&j) {
                return Err(Error::MissingDiagonal(j));
            }
        }
        let l_rows = l_pattern.transpose();
        Ok(SymbolicFactor {
            perm,
            etree,
            l_pattern,
            l_rows,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.l_pattern.ncols()
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    /// Parent of each column in the elimination tree; `None` for roots.
    pub fn etree(&self) -> &[Option<usize>] {
        &self.etree
    }

    /// `Lˢ`: lower triangle including the diagonal, column-compressed.
    pub fn l_pattern(&self) -> &SparsePattern {
        &self.l_pattern
    }

    /// Row structure of `Lˢ`: column `k` of this pattern lists the columns of row `k`.
    pub fn l_rows(&self) -> &SparsePattern {
        &self.l_rows
    }

    pub fn nnz(&self) -> usize {
        self.l_pattern.nnz()
    }

    pub fn bandwidth(&self) -> usize {
        self.l_pattern.bandwidth()
    }

    /// Checks the structural invariants: full diagonal, lower triangular, and
    /// closure under the elimination tree.
    pub fn verify(&self) -> Result<()> {
        let n = self.n();
        for j in 0..n {
            let col = self.l_pattern.col(j);
            if col.first() != Some(&j) {
                return Err(Error::MissingDiagonal(j));
            }
            let parent = self.etree[j];
            for &i in &col[1..] {
                match parent {
                    Some(p) if p <= i => {
                        if !self.l_pattern.contains(i, p) {
                            return Err(Error::PatternMismatch { row: i, col: p });
                        }
                    }
                    _ => return Err(Error::PatternMismatch { row: i, col: j }),
                }
            }
            if let Some(p) = parent {
                if col.get(1) != Some(&p) {
                    return Err(Error::PatternMismatch { row: p, col: j });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: usize, edges: &[(usize, usize)]) -> SparsePattern {
        let e = (0..n)
            .map(|i| (i, i))
            .chain(edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]));
        SparsePattern::new(n, n, e).unwrap()
    }

    #[test]
    fn tridiagonal_has_no_fill() {
        let n = 6;
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let p = sym(n, &edges);
        let s = symbolic_cholesky(&p, Permutation::identity(n)).unwrap();
        assert_eq!(s.l_pattern(), &p.lower_triangle());
        assert_eq!(s.bandwidth(), 1);
        s.verify().unwrap();
        assert_eq!(s.etree()[2], Some(3));
        assert_eq!(s.etree()[n - 1], None);
    }

    #[test]
    fn arrow_hub_first_fills_completely() {
        let n = 6;
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        let p = sym(n, &edges);
        let s = symbolic_cholesky(&p, Permutation::identity(n)).unwrap();
        assert_eq!(s.nnz(), n * (n + 1) / 2);
        s.verify().unwrap();
    }

    #[test]
    fn arrow_hub_last_has_no_fill() {
        let n = 6;
        let edges: Vec<_> = (0..n - 1).map(|i| (i, n - 1)).collect();
        let p = sym(n, &edges);
        let s = symbolic_cholesky(&p, Permutation::identity(n)).unwrap();
        assert_eq!(s.nnz(), 2 * n - 1);
        // Reversal moves the hub first and fills in.
        let r = symbolic_cholesky(&p, Permutation::reversal(n)).unwrap();
        assert_eq!(r.nnz(), n * (n + 1) / 2);
    }

    #[test]
    fn rejects_bad_input() {
        let p = SparsePattern::new(2, 2, vec![(0, 0), (1, 0), (1, 1)]).unwrap();
        assert!(matches!(
            symbolic_cholesky(&p, Permutation::identity(2)),
            Err(Error::NotSymmetric { .. })
        ));
        let q = SparsePattern::new(2, 2, vec![(0, 0)]).unwrap();
        assert!(matches!(
            symbolic_cholesky(&q, Permutation::identity(2)),
            Err(Error::MissingDiagonal(1))
        ));
        assert!(symbolic_cholesky(&SparsePattern::identity(3), Permutation::identity(2)).is_err());
    }
}

//! Pattern conditions under which the sparse inverse subset gives exact `d`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::{gram_pattern, SparseMatrix, SparsePattern};

/// Outcome of one coverage condition. Witnesses are `(j, k)` pairs with
/// `j <= k` that are required but not covered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseCheck {
    pub holds: bool,
    pub witnesses: Vec<(usize, usize)>,
}

impl CaseCheck {
    fn from_uncovered(uncovered: Vec<(usize, usize)>) -> Self {
        let witnesses: Vec<_> = uncovered.into_iter().filter(|&(j, k)| j <= k).collect();
        CaseCheck {
            holds: witnesses.is_empty(),
            witnesses,
        }
    }
}

/// Full condition report for a model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// `ones(BᵀB) >= ones(AᵀA)`.
    pub case1: bool,
    /// `ones(Q) >= ones(AᵀA)`.
    pub case2: bool,
    /// `ones(BᵀB) ∪ ones(Q) >= ones(AᵀA)`.
    pub theorem: bool,
    /// `ones(A)` is a permutation pattern, so `AᵀA` is diagonal.
    pub permutation_special_case: bool,
    pub case1_witnesses: Vec<(usize, usize)>,
    pub case2_witnesses: Vec<(usize, usize)>,
    pub theorem_witnesses: Vec<(usize, usize)>,
    /// Entries (both triangles) that padding would add to the pattern of `Q`.
    pub padding_required: usize,
}

fn require_square_match<T: Scalar>(a: &SparseMatrix<T>, q: &SparseMatrix<T>) -> Result<()> {
    if q.nrows() != a.ncols() || q.ncols() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "Q is {}x{} but A has {} columns",
            q.nrows(),
            q.ncols(),
            a.ncols()
        )));
    }
    Ok(())
}

/// Every pair co-observed by a prediction row is co-observed by some
/// observation row.
pub fn check_case1<T: Scalar>(a: &SparseMatrix<T>, b: &SparseMatrix<T>) -> Result<CaseCheck> {
    if a.ncols() != b.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "A has {} columns, B has {}",
            a.ncols(),
            b.ncols()
        )));
    }
    let ata = gram_pattern(a)?;
    b.require_nonnegative("B")?;
    let btb = gram_pattern(b)?;
    Ok(CaseCheck::from_uncovered(btb.uncovered(&ata)?))
}

/// Every pair co-observed by a prediction row is a stored entry of `Q`.
///
/// Returns the check and whether `ones(A)` is a permutation pattern.
pub fn check_case2<T: Scalar>(
    a: &SparseMatrix<T>,
    q: &SparseMatrix<T>,
) -> Result<(CaseCheck, bool)> {
    require_square_match(a, q)?;
    let ata = gram_pattern(a)?;
    let check = CaseCheck::from_uncovered(q.pattern().uncovered(&ata)?);
    let special = a.pattern().is_permutation_pattern();
    Ok((check, special))
}

pub fn check_theorem<T: Scalar>(
    a: &SparseMatrix<T>,
    b: &SparseMatrix<T>,
    q: &SparseMatrix<T>,
) -> Result<ConditionReport> {
    require_square_match(a, q)?;
    let case1 = check_case1(a, b)?;
    let (case2, special) = check_case2(a, q)?;
    let ata = gram_pattern(a)?;
    let btb = gram_pattern(b)?;
    let covered = btb.union(&q.pattern())?;
    let theorem = CaseCheck::from_uncovered(covered.uncovered(&ata)?);
    let padding_required = q.pattern().uncovered(&ata)?.len();
    Ok(ConditionReport {
        case1: case1.holds,
        case2: case2.holds,
        theorem: theorem.holds,
        permutation_special_case: special,
        case1_witnesses: case1.witnesses,
        case2_witnesses: case2.witnesses,
        theorem_witnesses: theorem.witnesses,
        padding_required,
    })
}

/// Pattern `ones(AᵀA) \ ones(Q)`, which is symmetric.
pub fn padding_pattern<T: Scalar>(
    q: &SparseMatrix<T>,
    a: &SparseMatrix<T>,
) -> Result<SparsePattern> {
    require_square_match(a, q)?;
    let ata = gram_pattern(a)?;
    let qp = q.pattern();
    Ok(ata.filter(|i, j| !qp.contains(i, j)))
}

/// `Q` with explicit zeros inserted at every entry of `ones(AᵀA)` it lacks.
/// Values are unchanged, so `Pᶜ` and `d` are unchanged.
pub fn pad_q<T: Scalar>(q: &SparseMatrix<T>, a: &SparseMatrix<T>) -> Result<SparseMatrix<T>> {
    let extra = padding_pattern(q, a)?;
    if extra.nnz() == 0 {
        return Ok(q.clone());
    }
    q.with_structural_entries(&extra)
}

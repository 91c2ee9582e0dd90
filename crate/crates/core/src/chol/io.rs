//! Persistence of factors and inverse subsets.
//!
//! Values go to a Matrix Market file; the permutation and elimination tree go
//! to a JSON sidecar with 1-based indices (parent `0` marks a root).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chol::{NumericFactor, SparseInverseSubset, SymbolicFactor};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::mmio::{self, Symmetry};
use crate::sparse::{Permutation, SparseMatrix};

#[derive(Debug, Serialize, Deserialize)]
struct Sidecar {
    n: usize,
    permutation: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    etree: Option<Vec<usize>>,
}

fn sidecar_path(path: &Path) -> std::path::PathBuf {
    path.with_extension("json")
}

fn write_sidecar(path: &Path, perm: &Permutation, etree: Option<&[Option<usize>]>) -> Result<()> {
    let side = Sidecar {
        n: perm.len(),
        permutation: perm.forward().iter().map(|&i| i + 1).collect(),
        etree: etree.map(|e| e.iter().map(|p| p.map_or(0, |p| p + 1)).collect()),
    };
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&side)?)?;
    Ok(())
}

fn read_sidecar(path: &Path) -> Result<(Permutation, Option<Vec<Option<usize>>>)> {
    let side: Sidecar = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?;
    if side.permutation.len() != side.n || side.permutation.contains(&0) {
        return Err(Error::InvalidPermutation(
            "sidecar permutation must list 1..=n".into(),
        ));
    }
    let perm = Permutation::from_forward(side.permutation.iter().map(|&i| i - 1).collect())?;
    let etree = side
        .etree
        .map(|e| e.into_iter().map(|p| p.checked_sub(1)).collect());
    Ok((perm, etree))
}

/// Writes `L` (permuted indexing) to `path` and its sidecar next to it.
pub fn save_factor<T: Scalar>(f: &NumericFactor<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    mmio::save(&f.l_matrix(), Symmetry::General, path)?;
    write_sidecar(path, f.symbolic().permutation(), Some(f.symbolic().etree()))
}

pub fn load_factor<T: Scalar>(path: impl AsRef<Path>) -> Result<NumericFactor<T>> {
    let path = path.as_ref();
    let l: SparseMatrix<T> = mmio::load(path)?;
    let (perm, etree) = read_sidecar(path)?;
    let etree = etree.ok_or_else(|| Error::InvalidArgument("factor sidecar lacks etree".into()))?;
    let symbolic = SymbolicFactor::from_parts(perm, etree, l.pattern())?;
    symbolic.verify()?;
    NumericFactor::from_parts(symbolic, l.values().to_vec())
}

/// Writes the subset as a symmetric Matrix Market file in permuted indexing.
pub fn save_subset<T: Scalar>(s: &SparseInverseSubset<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let lower = SparseMatrix::from_pattern(s.lower_pattern(), s.values().to_vec())?;
    let full = lower.add(&lower.transpose())?;
    // Restore the diagonal, which the sum doubled.
    let mut full = full;
    let n = s.n();
    let diag: Vec<T> = (0..n).map(|i| s.get_permuted(i, i).unwrap()).collect();
    for (j, &dj) in diag.iter().enumerate() {
        let (start, end) = (full.colptr()[j], full.colptr()[j + 1]);
        let pos = full.rowind()[start..end].binary_search(&j).unwrap();
        full.values_mut()[start + pos] = dj;
    }
    mmio::save(&full, Symmetry::Symmetric, path)?;
    write_sidecar(path, s.permutation(), None)
}

pub fn load_subset<T: Scalar>(path: impl AsRef<Path>) -> Result<SparseInverseSubset<T>> {
    let path = path.as_ref();
    let full: SparseMatrix<T> = mmio::load(path)?;
    let (perm, _) = read_sidecar(path)?;
    let lower = full.pattern().lower_triangle();
    let values = lower
        .entries()
        .map(|(i, j)| full.get(i, j).expect("lower entry present"))
        .collect();
    SparseInverseSubset::from_parts(perm, lower, values)
}

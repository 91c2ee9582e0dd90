use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetric reordering of `0..n`.
///
/// `forward[new] = old` and `inverse[old] = new`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            forward: (0..n).collect(),
            inverse: (0..n).collect(),
        }
    }

    /// Builds from the `new -> old` map.
    pub fn from_forward(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut inverse = vec![usize::MAX; n];
        for (new, &old) in forward.iter().enumerate() {
            if old >= n {
                return Err(Error::InvalidPermutation(format!(
                    "index {old} out of range for length {n}"
                )));
            }
            if inverse[old] != usize::MAX {
                return Err(Error::InvalidPermutation(format!(
                    "index {old} appears twice"
                )));
            }
            inverse[old] = new;
        }
        Ok(Permutation { forward, inverse })
    }

    pub fn reversal(n: usize) -> Self {
        Self::from_forward((0..n).rev().collect()).expect("reversal is a bijection")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.forward.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Original index placed at position `new`.
    #[inline]
    pub fn old_index(&self, new: usize) -> usize {
        self.forward[new]
    }

    /// Position that original index `old` moves to.
    #[inline]
    pub fn new_index(&self, old: usize) -> usize {
        self.inverse[old]
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn inverted(&self) -> Permutation {
        Permutation {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// Reorders a vector given in original indexing into permuted indexing.
    pub fn apply<T: Copy>(&self, x: &[T]) -> Vec<T> {
        self.forward.iter().map(|&old| x[old]).collect()
    }

    /// Maps a vector in permuted indexing back to original indexing.
    pub fn apply_inverse<T: Copy>(&self, y: &[T]) -> Vec<T> {
        self.inverse.iter().map(|&new| y[new]).collect()
    }
}

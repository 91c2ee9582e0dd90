//! Fill-reducing symmetric orderings.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::{Permutation, SparsePattern};

/// Which symmetric permutation to apply before factorization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ordering {
    /// No permutation.
    Natural,
    /// Reverse Cuthill–McKee.
    #[default]
    Rcm,
}

impl Ordering {
    pub fn compute(self, pattern: &SparsePattern) -> Result<Permutation> {
        match self {
            Ordering::Natural => {
                pattern.require_symmetric()?;
                Ok(Permutation::identity(pattern.nrows()))
            }
            Ordering::Rcm => rcm_ordering(pattern),
        }
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ordering::Natural => "natural",
            Ordering::Rcm => "rcm",
        })
    }
}

impl FromStr for Ordering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "natural" => Ok(Ordering::Natural),
            "rcm" => Ok(Ordering::Rcm),
            other => Err(Error::InvalidArgument(format!(
                "unknown ordering '{other}'"
            ))),
        }
    }
}

/// Reverse Cuthill–McKee ordering of a symmetric pattern.
///
/// Each connected component starts from a pseudo-peripheral vertex found by the
/// George–Liu level-structure search, seeded at the lowest-index vertex of
/// minimum degree. Neighbours are queued by increasing degree, ties by index.
pub fn rcm_ordering(pattern: &SparsePattern) -> Result<Permutation> {
    pattern.require_symmetric()?;
    let n = pattern.nrows();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|j| pattern.col(j).iter().copied().filter(|&i| i != j).collect())
        .collect();
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();

    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut levels = LevelScratch::new(n);

    while order.len() < n {
        let seed = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| (degree[v], v))
            .expect("unplaced vertex exists");
        let start = pseudo_peripheral(seed, &adj, &degree, &mut levels);

        let mut queue = VecDeque::from([start]);
        placed[start] = true;
        let mut nbrs = Vec::new();
        while let Some(v) = queue.pop_front() {
            order.push(v);
            nbrs.clear();
            nbrs.extend(adj[v].iter().copied().filter(|&w| !placed[w]));
            nbrs.sort_unstable_by_key(|&w| (degree[w], w));
            for &w in &nbrs {
                placed[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    Permutation::from_forward(order)
}

struct LevelScratch {
    depth: Vec<usize>,
    touched: Vec<usize>,
}

impl LevelScratch {
    fn new(n: usize) -> Self {
        LevelScratch {
            depth: vec![usize::MAX; n],
            touched: Vec::new(),
        }
    }

    /// Breadth-first level structure rooted at `root`; returns (eccentricity, last level).
    fn build(&mut self, root: usize, adj: &[Vec<usize>]) -> (usize, Vec<usize>) {
        for &v in &self.touched {
            self.depth[v] = usize::MAX;
        }
        self.touched.clear();
        self.depth[root] = 0;
        self.touched.push(root);
        let mut head = 0;
        while head < self.touched.len() {
            let v = self.touched[head];
            head += 1;
            for &w in &adj[v] {
                if self.depth[w] == usize::MAX {
                    self.depth[w] = self.depth[v] + 1;
                    self.touched.push(w);
                }
            }
        }
        let ecc = self.depth[*self.touched.last().unwrap()];
        let last = self
            .touched
            .iter()
            .copied()
            .filter(|&v| self.depth[v] == ecc)
            .collect();
        (ecc, last)
    }
}

fn pseudo_peripheral(
    seed: usize,
    adj: &[Vec<usize>],
    degree: &[usize],
    scratch: &mut LevelScratch,
) -> usize {
    let mut root = seed;
    let (mut ecc, mut last) = scratch.build(root, adj);
    loop {
        let candidate = *last
            .iter()
            .min_by_key(|&&v| (degree[v], v))
            .expect("last level is nonempty");
        let (cand_ecc, cand_last) = scratch.build(candidate, adj);
        if cand_ecc > ecc {
            root = candidate;
            ecc = cand_ecc;
            last = cand_last;
        } else {
            return root;
        }
    }
}

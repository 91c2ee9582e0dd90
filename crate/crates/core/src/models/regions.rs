use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;

/// Areal units with a neighbour graph, optional weights (e.g. population), and
/// memberships in successively coarser partitions.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionGraph {
    adjacency: Vec<Vec<usize>>,
    weights: Option<Vec<f64>>,
    levels: Vec<Level>,
}

#[derive(Clone, Debug, PartialEq)]
struct Level {
    membership: Vec<usize>,
    count: usize,
}

impl RegionGraph {
    /// Graph on `n` regions from undirected edges; duplicates are merged.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a}, {b}) out of range for {n} regions"
                )));
            }
            if a == b {
                return Err(Error::InvalidArgument(format!("self-edge at region {a}")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
            nb.dedup();
        }
        Ok(RegionGraph {
            adjacency,
            weights: None,
            levels: Vec::new(),
        })
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} regions",
                weights.len(),
                self.len()
            )));
        }
        if let Some(i) = weights.iter().position(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "weight {} of region {i} is not a finite nonnegative number",
                weights[i]
            )));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    /// Appends a coarser level: `membership[i]` is the coarse region of region `i`.
    pub fn with_level(mut self, membership: Vec<usize>) -> Result<Self> {
        if membership.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "membership of length {} for {} regions",
                membership.len(),
                self.len()
            )));
        }
        let count = membership.iter().map(|&k| k + 1).max().unwrap_or(0);
        self.levels.push(Level { membership, count });
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn membership(&self, level: usize) -> &[usize] {
        &self.levels[level].membership
    }

    pub fn num_coarse(&self, level: usize) -> usize {
        self.levels[level].count
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// Each region of level `l` lies inside a single region of level `l + 1`.
    pub fn is_nested(&self) -> bool {
        self.nesting_violation().is_none()
    }

    /// First region whose level-`l` unit straddles two level-`l + 1` units:
    /// `(level, region)`.
    pub fn nesting_violation(&self) -> Option<(usize, usize)> {
        for (l, pair) in self.levels.windows(2).enumerate() {
            let (fine, coarse) = (&pair[0], &pair[1]);
            let mut parent = vec![usize::MAX; fine.count];
            for (i, (&f, &c)) in fine.membership.iter().zip(&coarse.membership).enumerate() {
                if parent[f] == usize::MAX {
                    parent[f] = c;
                } else if parent[f] != c {
                    return Some((l, i));
                }
            }
        }
        None
    }

    /// Weighted aggregation onto `level`: `B[k, i] = w_i / Σ_{i' ∈ k} w_i'` for
    /// members `i` of coarse region `k`. Zero-weight members are not stored;
    /// unweighted graphs use unit weights.
    pub fn aggregation_matrix<T: Scalar>(&self, level: usize) -> Result<SparseMatrix<T>> {
        let lv = self.levels.get(level).ok_or_else(|| {
            Error::InvalidArgument(format!("level {level} of {}", self.levels.len()))
        })?;
        let w = |i: usize| self.weights.as_ref().map_or(1.0, |w| w[i]);
        let mut total = vec![0.0; lv.count];
        for (i, &k) in lv.membership.iter().enumerate() {
            total[k] += w(i);
        }
        if let Some(k) = total.iter().position(|&t| !(t > 0.0)) {
            return Err(Error::ZeroWeight(k));
        }
        let trip: Vec<_> = lv
            .membership
            .iter()
            .enumerate()
            .filter(|&(i, _)| w(i) > 0.0)
            .map(|(i, &k)| (k, i, T::of(w(i) / total[k])))
            .collect();
        SparseMatrix::from_triplets(lv.count, self.len(), &trip)
    }

    /// Loads a graph from CSV files with 1-based region ids.
    ///
    /// `edges`: rows `from,to`. `membership` (optional): rows `region,level1,...`
    /// listing coarse ids from finest to coarsest. `weights` (optional): rows
    /// `region,weight`. Each file starts with a header row.
    pub fn from_csv(
        n: usize,
        edges: impl AsRef<Path>,
        membership: Option<&Path>,
        weights: Option<&Path>,
    ) -> Result<Self> {
        let rows = read_csv(edges.as_ref())?;
        let mut e = Vec::with_capacity(rows.len());
        for (line, row) in rows.iter().enumerate() {
            let a = parse_id(row, 0, line)?;
            let b = parse_id(row, 1, line)?;
            e.push((a, b));
        }
        let mut g = RegionGraph::new(n, &e)?;
        if let Some(path) = weights {
            let mut w = vec![f64::NAN; n];
            for (line, row) in read_csv(path)?.iter().enumerate() {
                let i = parse_id(row, 0, line)?;
                let v = parse_field::<f64>(row, 1, line)?;
                *w.get_mut(i)
                    .ok_or_else(|| parse_error(line, "region id out of range"))? = v;
            }
            g = g.with_weights(w)?;
        }
        if let Some(path) = membership {
            let rows = read_csv(path)?;
            let levels = rows.first().map_or(0, |r| r.len().saturating_sub(1));
            let mut maps = vec![vec![usize::MAX; n]; levels];
            for (line, row) in rows.iter().enumerate() {
                let i = parse_id(row, 0, line)?;
                if i >= n {
                    return Err(parse_error(line, "region id out of range"));
                }
                for (l, map) in maps.iter_mut().enumerate() {
                    map[i] = parse_id(row, l + 1, line)?;
                }
            }
            for map in maps {
                if let Some(i) = map.iter().position(|&k| k == usize::MAX) {
                    return Err(Error::InvalidArgument(format!(
                        "region {} has no membership",
                        i + 1
                    )));
                }
                g = g.with_level(map)?;
            }
        }
        Ok(g)
    }
}

fn read_csv(path: &Path) -> Result<Vec<csv::StringRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(csv_error)?;
    rdr.records()
        .collect::<std::result::Result<_, _>>()
        .map_err(csv_error)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse {
        line,
        msg: e.to_string(),
    }
}

fn parse_error(line: usize, msg: &str) -> Error {
    Error::Parse {
        line: line + 2,
        msg: msg.into(),
    }
}

fn parse_field<V: std::str::FromStr>(
    row: &csv::StringRecord,
    col: usize,
    line: usize,
) -> Result<V> {
    row.get(col)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| parse_error(line, &format!("bad or missing field {}", col + 1)))
}

fn parse_id(row: &csv::StringRecord, col: usize, line: usize) -> Result<usize> {
    let id: usize = parse_field(row, col, line)?;
    id.checked_sub(1)
        .ok_or_else(|| parse_error(line, "ids are 1-based"))
}

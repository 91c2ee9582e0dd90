#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use takvar::sparse::{SparseMatrix, SparsePattern};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn to_dense(m: &SparseMatrix<f64>) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(m.nrows(), m.ncols());
    for (i, j, v) in m.iter() {
        d[(i, j)] = v;
    }
    d
}

pub fn pattern_to_bool(p: &SparsePattern) -> DMatrix<bool> {
    let mut d = DMatrix::from_element(p.nrows(), p.ncols(), false);
    for (i, j) in p.entries() {
        d[(i, j)] = true;
    }
    d
}

pub fn bool_product(a: &DMatrix<bool>, b: &DMatrix<bool>) -> DMatrix<bool> {
    DMatrix::from_fn(a.nrows(), b.ncols(), |i, j| {
        (0..a.ncols()).any(|k| a[(i, k)] && b[(k, j)])
    })
}

/// Random symmetric pattern with full diagonal, one of several shapes.
pub fn random_symmetric_pattern(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    match rng.random_range(0..3) {
        0 => {
            let b = rng.random_range(1..=5.min(n.max(2) - 1));
            for i in 0..n {
                for j in i + 1..(i + b + 1).min(n) {
                    edges.push((i, j));
                }
            }
        }
        1 => {
            let size = rng.random_range(2..=8);
            for i in 0..n {
                for j in i + 1..n {
                    if i / size == j / size || rng.random::<f64>() < 0.5 / n as f64 {
                        edges.push((i, j));
                    }
                }
            }
        }
        _ => {
            let p = rng.random_range(1.0..4.0) / n as f64;
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random::<f64>() < p {
                        edges.push((i, j));
                    }
                }
            }
        }
    }
    edges
}

/// Diagonally dominant SPD matrix on the given off-diagonal edges.
pub fn spd_from_edges(
    n: usize,
    edges: &[(usize, usize)],
    rng: &mut ChaCha8Rng,
) -> SparseMatrix<f64> {
    let mut trip = Vec::new();
    let mut rowsum = vec![0.0; n];
    for &(i, j) in edges {
        let v: f64 = rng.random_range(-1.0..1.0);
        trip.push((i, j, v));
        trip.push((j, i, v));
        rowsum[i] += v.abs();
        rowsum[j] += v.abs();
    }
    for (i, s) in rowsum.iter().enumerate() {
        trip.push((i, i, s + rng.random_range(0.1..2.0)));
    }
    SparseMatrix::from_triplets(n, n, &trip).unwrap()
}

pub fn random_spd(n: usize, rng: &mut ChaCha8Rng) -> SparseMatrix<f64> {
    let edges = random_symmetric_pattern(n, rng);
    spd_from_edges(n, &edges, rng)
}

/// Random nonnegative sparse matrix with density `p`.
pub fn random_nonnegative(
    nrows: usize,
    ncols: usize,
    p: f64,
    rng: &mut ChaCha8Rng,
) -> SparseMatrix<f64> {
    let mut trip = Vec::new();
    for i in 0..nrows {
        for j in 0..ncols {
            if rng.random::<f64>() < p {
                trip.push((i, j, rng.random_range(0.0..2.0)));
            }
        }
    }
    SparseMatrix::from_triplets(nrows, ncols, &trip).unwrap()
}

pub fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / y.abs())
        .fold(0.0, f64::max)
}

mod common;

use common::*;
use ndarray::Array2;
use rand::Rng;
use takvar::chol::{
    backward_solve, cholesky, forward_solve, io, numeric_cholesky, symbolic_cholesky, takahashi,
};
use takvar::models::synthetic::Car1dStudy;
use takvar::sparse::{Ordering, PatternMode, Permutation, SparseMatrix, SparsePattern};
use takvar::variance::{assemble_precision, HierarchicalModel};

/// `L^s_ji = 1` (j > i) iff some path from `i` to `j` has all interior vertices below `i`.
fn separation_pattern(p: &SparsePattern) -> SparsePattern {
    let n = p.nrows();
    let mut entries = Vec::new();
    for i in 0..n {
        entries.push((i, i));
        let mut seen = vec![false; n];
        let mut stack = vec![i];
        seen[i] = true;
        let mut reach = vec![false; n];
        while let Some(v) = stack.pop() {
            for &w in p.col(v) {
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                if w > i {
                    reach[w] = true;
                } else if w < i {
                    stack.push(w);
                }
            }
        }
        entries.extend((i + 1..n).filter(|&j| reach[j]).map(|j| (j, i)));
    }
    SparsePattern::new(n, n, entries).unwrap()
}

fn dense_cholesky_pattern(p: &SparseMatrix<f64>) -> SparsePattern {
    let l = to_dense(p).cholesky().expect("SPD").l();
    let n = l.nrows();
    let e = (0..n).flat_map(|j| (j..n).map(move |i| (i, j)));
    SparsePattern::new(
        n,
        n,
        e.filter(|&(i, j)| l[(i, j)] != 0.0).collect::<Vec<_>>(),
    )
    .unwrap()
}

#[test]
fn symbolic_matches_separation_and_dense_cholesky() {
    let mut r = rng(11);
    for _ in 0..40 {
        let n = r.random_range(2..=25);
        let p = random_spd(n, &mut r);
        let sym = symbolic_cholesky(&p.pattern(), Permutation::identity(n)).unwrap();
        sym.verify().unwrap();
        assert_eq!(sym.l_pattern(), &separation_pattern(&p.pattern()));
        assert_eq!(sym.l_pattern(), &dense_cholesky_pattern(&p));
    }
}

#[test]
fn takahashi_matches_dense_inverse() {
    let mut r = rng(12);
    for _ in 0..30 {
        let n = r.random_range(5..=120);
        let p = random_spd(n, &mut r);
        let inv = to_dense(&p).try_inverse().unwrap();
        for ordering in [Ordering::Natural, Ordering::Rcm] {
            let f = cholesky(&p, ordering).unwrap();
            let s = takahashi(&f).unwrap();
            let perm = s.permutation().clone();
            for (i, j) in s.pattern().entries() {
                let (oi, oj) = (perm.old_index(i), perm.old_index(j));
                let got = s.get_permuted(i, j).unwrap();
                let want = inv[(oi, oj)];
                assert!(
                    (got - want).abs() <= 1e-10 * want.abs().max(inv[(oi, oi)]),
                    "{got} vs {want}"
                );
            }
            assert!(s.diagonal().iter().all(|&v| v > 0.0));
            assert!(s.to_matrix().is_symmetric());
        }
    }
}

fn car_precision(n: usize, m: usize) -> SparseMatrix<f64> {
    let model: HierarchicalModel<f64> = Car1dStudy::new(n, m, 10, 5).build().unwrap();
    assemble_precision(&model).unwrap()
}

#[test]
fn pentadiagonal_precision_residual_and_inverse() {
    let p = car_precision(50, 100);
    let f = cholesky(&p, Ordering::Natural).unwrap();
    let l = to_dense(&f.l_matrix());
    let res = (&l * l.transpose() - to_dense(&p)).abs().max();
    assert!(res / to_dense(&p).abs().max() < 1e-12);

    let p = car_precision(200, 400);
    let s = takahashi(&cholesky(&p, Ordering::Rcm).unwrap()).unwrap();
    let inv = to_dense(&p).try_inverse().unwrap();
    for (i, j, v) in s.to_matrix().iter() {
        assert!((v - inv[(i, j)]).abs() < 1e-10);
    }
}

#[test]
fn banded_subset_keeps_bandwidth_and_ops_bound() {
    let mut r = rng(13);
    for b in [1usize, 2, 5] {
        let n = 300;
        let edges: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..(i + b + 1).min(n)).map(move |j| (i, j)))
            .collect();
        let p = spd_from_edges(n, &edges, &mut r);
        let f = cholesky(&p, Ordering::Natural).unwrap();
        assert_eq!(f.bandwidth(), b);
        let s = takahashi(&f).unwrap();
        assert_eq!(s.pattern().bandwidth(), b);
        assert!(s.ops() <= ((b + 1) * (b + 1)) as u64 * n as u64);
        assert!(s.ops() <= ((b + 2) * f.nnz()) as u64);
        let l_value = f.l_matrix().ones(PatternMode::Value);
        assert!(f
            .symbolic()
            .l_pattern()
            .covers(&l_value)
            .unwrap()
            .is_covered());
    }
}

#[test]
fn triangular_solve_residuals() {
    let mut r = rng(14);
    for _ in 0..10 {
        let n = r.random_range(10..=150);
        let p = random_spd(n, &mut r);
        let f = cholesky(&p, Ordering::Natural).unwrap();
        let l = to_dense(&f.l_matrix());
        let bt = random_nonnegative(n, 7, 0.1, &mut r);
        let g = forward_solve(&f, &bt).unwrap();
        let gm = nalgebra::DMatrix::from_fn(n, 7, |i, j| g[[i, j]]);
        let res = (&l * &gm - to_dense(&bt)).abs().max();
        assert!(res <= 1e-10 * to_dense(&bt).abs().max().max(1.0));

        let w = Array2::from_shape_fn((n, 3), |_| r.random_range(-1.0..1.0));
        let v = backward_solve(&f, &w).unwrap();
        let vm = nalgebra::DMatrix::from_fn(n, 3, |i, j| v[[i, j]]);
        let wm = nalgebra::DMatrix::from_fn(n, 3, |i, j| w[[i, j]]);
        assert!((l.transpose() * vm - wm).abs().max() < 1e-10);
    }
}

#[test]
fn factor_and_subset_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = car_precision(30, 60);
    let f = cholesky(&p, Ordering::Rcm).unwrap();
    io::save_factor(&f, dir.path().join("L.mtx")).unwrap();
    let g = io::load_factor::<f64>(dir.path().join("L.mtx")).unwrap();
    assert_eq!(g.symbolic(), f.symbolic());
    for (a, b) in g.values().iter().zip(f.values()) {
        assert!((a - b).abs() <= 1e-15 * b.abs());
    }
    let s = takahashi(&f).unwrap();
    io::save_subset(&s, dir.path().join("S.mtx")).unwrap();
    let t = io::load_subset::<f64>(dir.path().join("S.mtx")).unwrap();
    assert_eq!(t.lower_pattern(), s.lower_pattern());
    assert_eq!(t.permutation(), s.permutation());
    for (a, b) in t.values().iter().zip(s.values()) {
        assert!((a - b).abs() <= 1e-15 * b.abs());
    }
    let sidecar = std::fs::read_to_string(dir.path().join("L.json")).unwrap();
    assert!(sidecar.contains("\"etree\""));
}

#[test]
fn numeric_factor_reuses_symbolic_analysis() {
    let mut r = rng(15);
    let p = random_spd(40, &mut r);
    let sym =
        symbolic_cholesky(&p.pattern(), Ordering::Rcm.compute(&p.pattern()).unwrap()).unwrap();
    let f1 = numeric_cholesky(&p, &sym).unwrap();
    let f2 = numeric_cholesky(&p.scale(4.0), &sym).unwrap();
    for (a, b) in f1.values().iter().zip(f2.values()) {
        assert!((2.0 * a - b).abs() <= 1e-12 * b.abs().max(1.0));
    }
}

#[test]
fn f32_factor_agrees_with_f64() {
    let p = car_precision(40, 80);
    let s64 = takahashi(&cholesky(&p, Ordering::Rcm).unwrap()).unwrap();
    let s32 = takahashi(&cholesky(&p.cast::<f32>(), Ordering::Rcm).unwrap()).unwrap();
    for (a, b) in s32.diagonal().iter().zip(s64.diagonal()) {
        assert!((*a as f64 - b).abs() <= 1e-4 * b);
    }
}

mod common;

use common::*;
use rand::Rng;
use takvar::models::synthetic::{nested_aggregation_model, nested_partition, FrkCar1d};
use takvar::models::{car1d_second_order, car_first_order, frk_car_assemble, RegionGraph};
use takvar::sparse::SparseMatrix;
use takvar::variance::{
    check_case1, check_case2, compute_variances, pad_q, HierarchicalModel, Method, VarianceOptions,
};

fn min_eigenvalue(m: &SparseMatrix<f64>) -> f64 {
    to_dense(m).symmetric_eigenvalues().min()
}

#[test]
fn second_order_car_is_spd() {
    for n in [3, 30, 200] {
        let q = car1d_second_order(n, 1.0 / 12.0, 12.0).unwrap();
        assert!(q.is_symmetric());
        assert!(min_eigenvalue(&q) > 0.0);
    }
}

fn random_planar_like(n: usize, seed: u64) -> RegionGraph {
    let mut r = rng(seed);
    // Grid with random diagonals.
    let side = (n as f64).sqrt().ceil() as usize;
    let mut edges = Vec::new();
    for i in 0..n {
        let x = i % side;
        if x + 1 < side && i + 1 < n {
            edges.push((i, i + 1));
        }
        if i + side < n {
            edges.push((i, i + side));
            if x + 1 < side && i + side + 1 < n && r.random::<bool>() {
                edges.push((i, i + side + 1));
            }
        }
    }
    RegionGraph::new(n, &edges).unwrap()
}

#[test]
fn first_order_car_is_spd() {
    for seed in 0..5 {
        let g = random_planar_like(150, seed);
        assert!(g.is_connected());
        let q = car_first_order(&g, 0.9, 2.0).unwrap();
        assert!(q.is_symmetric());
        assert!(min_eigenvalue(&q) > 0.0);
        for j in 0..g.len() {
            assert_eq!(q.value(j, j), 2.0 * g.neighbors(j).len() as f64);
        }
    }
}

#[test]
fn aggregation_rows_sum_to_one() {
    for seed in 0..10 {
        let g = nested_partition(200, 40, 6, seed).unwrap();
        for level in 0..2 {
            let b: SparseMatrix<f64> = g.aggregation_matrix(level).unwrap();
            let sums = b.mul_vec(&vec![1.0; 200]).unwrap();
            assert!(sums.iter().all(|s| (s - 1.0).abs() < 1e-14));
            for (k, i, _) in b.iter() {
                assert_eq!(g.membership(level)[i], k);
            }
        }
    }
}

#[test]
fn nested_levels_satisfy_case1() {
    for seed in 0..20 {
        let g = nested_partition(120, 30, 5, seed).unwrap();
        let m: HierarchicalModel<f64> = nested_aggregation_model(&g, 0.9, 1.0).unwrap();
        assert!(check_case1(m.a(), m.b()).unwrap().holds);
        let direct = compute_variances(
            &m,
            &VarianceOptions {
                method: Method::Direct,
                ..Default::default()
            },
        )
        .unwrap();
        let sparse = compute_variances(&m, &VarianceOptions::default()).unwrap();
        assert!(max_rel_diff(&sparse.d, &direct.d) < 1e-10);
    }
}

#[test]
fn frk_car_padding_and_exactness() {
    let model: HierarchicalModel<f64> = FrkCar1d::new(400, 20, 600, 11).build().unwrap();
    assert!(!check_case2(model.a(), model.q()).unwrap().0.holds);
    let padded = model.with_q(pad_q(model.q(), model.a()).unwrap()).unwrap();
    assert!(check_case2(padded.a(), padded.q()).unwrap().0.holds);
    let direct = compute_variances(
        &padded,
        &VarianceOptions {
            method: Method::Direct,
            ..Default::default()
        },
    )
    .unwrap();
    let sparse = compute_variances(&padded, &VarianceOptions::default()).unwrap();
    assert!(max_rel_diff(&sparse.d, &direct.d) < 1e-9);
}

#[test]
fn frk_assemble_pads_at_basis_support() {
    let a = SparseMatrix::from_triplets(6, 1, &[(1, 0, 0.4), (2, 0, 1.0), (3, 0, 0.4)]).unwrap();
    let k = ndarray::array![[1.5]];
    let q_xi = car_first_order(
        &RegionGraph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap(),
        0.5,
        1.0,
    )
    .unwrap();
    let h = SparseMatrix::identity(6);
    let (m, added) = frk_car_assemble(&a, &a, &h, &k, &q_xi, &SparseMatrix::identity(6)).unwrap();
    assert_eq!(added, 6);
    let extra: Vec<_> = m
        .q()
        .iter()
        .filter(|&(_, _, v)| v == 0.0)
        .map(|(i, j, _)| (i, j))
        .collect();
    assert_eq!(extra, vec![(2, 0), (3, 0), (4, 0), (0, 2), (0, 3), (0, 4)]);
}

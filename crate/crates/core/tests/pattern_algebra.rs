mod common;

use common::*;
use proptest::prelude::*;
use takvar::sparse::{
    gram_pattern, mmio, pattern_add, pattern_geq, pattern_mul, permute_symmetric, rcm_ordering,
    PatternMode, Permutation, SparseMatrix, SparsePattern,
};

fn pattern(nrows: usize, ncols: usize) -> impl Strategy<Value = SparsePattern> {
    proptest::collection::vec(any::<bool>(), nrows * ncols).prop_map(move |bits| {
        let e = (0..nrows * ncols)
            .filter(|&k| bits[k])
            .map(|k| (k % nrows, k / nrows));
        SparsePattern::new(nrows, ncols, e).unwrap()
    })
}

fn nonneg_matrix(nrows: usize, ncols: usize) -> impl Strategy<Value = SparseMatrix<f64>> {
    proptest::collection::vec(prop_oneof![3 => Just(0.0), 2 => 0.0f64..3.0], nrows * ncols)
        .prop_map(move |v| {
            let t: Vec<_> = (0..nrows * ncols)
                .filter(|&k| v[k] != 0.0)
                .map(|k| (k % nrows, k / nrows, v[k]))
                .collect();
            SparseMatrix::from_triplets(nrows, ncols, &t).unwrap()
        })
}

fn value_pattern_of_dense(d: &nalgebra::DMatrix<f64>) -> SparsePattern {
    let e = (0..d.ncols()).flat_map(|j| (0..d.nrows()).map(move |i| (i, j)));
    SparsePattern::new(
        d.nrows(),
        d.ncols(),
        e.filter(|&(i, j)| d[(i, j)] != 0.0).collect::<Vec<_>>(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn union_is_a_semilattice(a in pattern(6, 5), b in pattern(6, 5), c in pattern(6, 5)) {
        prop_assert_eq!(pattern_add(&a, &b).unwrap(), pattern_add(&b, &a).unwrap());
        prop_assert_eq!(
            pattern_add(&pattern_add(&a, &b).unwrap(), &c).unwrap(),
            pattern_add(&a, &pattern_add(&b, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(pattern_add(&a, &a).unwrap(), a.clone());
        prop_assert_eq!(pattern_add(&a, &SparsePattern::empty(6, 5)).unwrap(), a);
    }

    #[test]
    fn product_matches_boolean_oracle(a in pattern(5, 7), b in pattern(7, 4)) {
        let got = pattern_to_bool(&pattern_mul(&a, &b).unwrap());
        prop_assert_eq!(got, bool_product(&pattern_to_bool(&a), &pattern_to_bool(&b)));
    }

    #[test]
    fn scaling_keeps_value_pattern(m in nonneg_matrix(6, 6), c in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0]) {
        prop_assert_eq!(m.scale(c).ones(PatternMode::Value), m.ones(PatternMode::Value));
    }

    #[test]
    fn coverage_is_preserved_by_sums(y in pattern(6, 6), extra in pattern(6, 6), d in pattern(6, 6)) {
        let x = pattern_add(&y, &extra).unwrap();
        prop_assert!(pattern_geq(&x, &y).unwrap().is_covered());
        let lhs = pattern_add(&x, &d).unwrap();
        let rhs = pattern_add(&y, &d).unwrap();
        prop_assert!(pattern_geq(&lhs, &rhs).unwrap().is_covered());
    }

    #[test]
    fn coverage_is_preserved_by_products(
        y in pattern(5, 5), extra in pattern(5, 5), d in pattern(4, 5), e in pattern(5, 3)
    ) {
        let x = pattern_add(&y, &extra).unwrap();
        let lhs = pattern_mul(&d, &pattern_mul(&x, &e).unwrap()).unwrap();
        let rhs = pattern_mul(&d, &pattern_mul(&y, &e).unwrap()).unwrap();
        prop_assert!(pattern_geq(&lhs, &rhs).unwrap().is_covered());
    }

    #[test]
    fn nonnegative_products_have_no_cancellation(x in nonneg_matrix(9, 6), y in nonneg_matrix(9, 5)) {
        let structural = pattern_mul(&x.ones(PatternMode::Value).transpose(), &y.ones(PatternMode::Value)).unwrap();
        let dense = to_dense(&x).transpose() * to_dense(&y);
        prop_assert_eq!(structural, value_pattern_of_dense(&dense));
    }

    #[test]
    fn gram_pattern_matches_dense(a in nonneg_matrix(12, 8)) {
        let dense = to_dense(&a).transpose() * to_dense(&a);
        prop_assert_eq!(gram_pattern(&a).unwrap(), value_pattern_of_dense(&dense));
    }

    #[test]
    fn geq_witness_is_a_real_violation(a in pattern(5, 5), b in pattern(5, 5)) {
        match pattern_geq(&a, &b).unwrap().witness() {
            Some((i, j)) => prop_assert!(b.contains(i, j) && !a.contains(i, j)),
            None => prop_assert!(b.entries().all(|(i, j)| a.contains(i, j))),
        }
    }

    #[test]
    fn permute_symmetric_matches_dense(seed in any::<u64>(), n in 2usize..20) {
        let mut r = rng(seed);
        let m = random_spd(n, &mut r);
        let mut fwd: Vec<usize> = (0..n).collect();
        use rand::seq::SliceRandom;
        fwd.shuffle(&mut r);
        let p = Permutation::from_forward(fwd).unwrap();
        let pm = permute_symmetric(&m, &p).unwrap();
        prop_assert_eq!(pm.nnz(), m.nnz());
        prop_assert!(pm.is_symmetric());
        let d = to_dense(&m);
        let dp = to_dense(&pm);
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(dp[(i, j)], d[(p.old_index(i), p.old_index(j))]);
            }
        }
    }

    #[test]
    fn rcm_never_increases_bandwidth(seed in any::<u64>(), n in 2usize..60) {
        let mut r = rng(seed);
        let p = random_spd(n, &mut r).pattern();
        let perm = rcm_ordering(&p).unwrap();
        prop_assert!(p.permute_symmetric(&perm).unwrap().bandwidth() <= p.bandwidth());
    }
}

#[test]
fn car_precision_is_pentadiagonal() {
    let q: SparseMatrix<f64> = takvar::models::car1d_second_order(5, 1.0 / 12.0, 12.0).unwrap();
    let p = q.ones(PatternMode::Value);
    assert_eq!(p.col(2).len(), 5);
    assert_eq!(p.bandwidth(), 2);
}

#[test]
fn structural_zero_modes() {
    let m =
        SparseMatrix::from_triplets(3, 3, &[(0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0), (0, 1, 0.0)])
            .unwrap();
    assert!(!m.ones(PatternMode::Value).contains(0, 1));
    assert!(m.ones(PatternMode::Structural).contains(0, 1));
}

#[test]
fn matrix_market_keeps_structural_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let m = SparseMatrix::from_triplets(3, 2, &[(0, 0, 1.5), (2, 1, 0.0), (1, 0, -2.0)]).unwrap();
    let path = dir.path().join("m.mtx");
    mmio::save(&m, mmio::Symmetry::General, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains(mmio::STRUCTURAL_ZEROS_COMMENT));
    assert_eq!(mmio::load::<f64>(&path).unwrap(), m);

    let q: SparseMatrix<f64> = takvar::models::car1d_second_order(6, 1.0 / 12.0, 12.0).unwrap();
    let padded = q
        .with_structural_entries(&SparsePattern::new(6, 6, vec![(0, 5), (5, 0)]).unwrap())
        .unwrap();
    mmio::save(&padded, mmio::Symmetry::Symmetric, &path).unwrap();
    assert_eq!(mmio::load::<f64>(&path).unwrap(), padded);
}

//! Seeded synthetic instances of the model families.

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{
    bisquare_eval, car1d_second_order, car_first_order, frk_car_model, Basis1D, RegionGraph,
};
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;
use crate::variance::HierarchicalModel;

/// 1D study: bisquare basis with `n` centroids, `m` observations at uniform
/// random locations, `num_predictions` equally spaced prediction locations,
/// second-order CAR prior.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Car1dStudy {
    pub n: usize,
    pub m: usize,
    pub num_predictions: usize,
    pub rho: f64,
    pub tau: f64,
    pub noise_variance: f64,
    pub seed: u64,
}

impl Car1dStudy {
    pub fn new(n: usize, m: usize, num_predictions: usize, seed: u64) -> Self {
        Car1dStudy {
            n,
            m,
            num_predictions,
            rho: 1.0 / 12.0,
            tau: 12.0,
            noise_variance: 0.1,
            seed,
        }
    }

    pub fn observation_locations(&self) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.m).map(|_| rng.random::<f64>()).collect()
    }

    pub fn prediction_locations(&self) -> Vec<f64> {
        equispaced(self.num_predictions)
    }

    pub fn build<T: Scalar>(&self) -> Result<HierarchicalModel<T>> {
        if self.num_predictions == 0 {
            return Err(Error::InvalidArgument(
                "need at least one prediction".into(),
            ));
        }
        let basis = Basis1D::equispaced(self.n)?;
        let a = bisquare_eval(&basis, &self.prediction_locations())?;
        let b = bisquare_eval(&basis, &self.observation_locations())?;
        let q = car1d_second_order(self.n, self.rho, self.tau)?;
        let r = SparseMatrix::identity(self.m).scale(T::of(1.0 / self.noise_variance));
        HierarchicalModel::new(a, b, q, r)
    }
}

/// `k` equally spaced points on `[0, 1]` (the midpoint when `k = 1`).
pub fn equispaced(k: usize) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => (0..k).map(|i| i as f64 / (k - 1) as f64).collect(),
    }
}

/// 1D analogue of the basis-plus-CAR model: `n_xi` fine cells on `[0, 1]`,
/// `rank` bisquare basis functions, exponential covariance `K` between basis
/// centroids, first-order CAR on the chain of cells, and `m` observations at
/// uniform random locations. Predictions are at the cell centres.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrkCar1d {
    pub n_xi: usize,
    pub rank: usize,
    pub m: usize,
    pub seed: u64,
    pub range: f64,
    pub rho: f64,
    pub tau: f64,
    pub noise_variance: f64,
}

impl FrkCar1d {
    pub fn new(n_xi: usize, rank: usize, m: usize, seed: u64) -> Self {
        FrkCar1d {
            n_xi,
            rank,
            m,
            seed,
            range: 0.3,
            rho: 0.9,
            tau: 4.0,
            noise_variance: 0.5,
        }
    }

    /// Unpadded model.
    pub fn build<T: Scalar>(&self) -> Result<HierarchicalModel<T>> {
        if self.rank < 2 || self.n_xi < 2 {
            return Err(Error::InvalidArgument(
                "need rank >= 2 and n_xi >= 2".into(),
            ));
        }
        let basis = Basis1D::equispaced_with_aperture(self.rank, 2.5 / (self.rank - 1) as f64)?;
        let cells: Vec<f64> = (0..self.n_xi)
            .map(|i| (i as f64 + 0.5) / self.n_xi as f64)
            .collect();
        let a_basis = bisquare_eval(&basis, &cells)?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let obs: Vec<f64> = (0..self.m).map(|_| rng.random::<f64>()).collect();
        let b_basis = bisquare_eval(&basis, &obs)?;
        let cell_of = |s: f64| ((s * self.n_xi as f64) as usize).min(self.n_xi - 1);
        let h_trip: Vec<_> = obs
            .iter()
            .enumerate()
            .map(|(k, &s)| (k, cell_of(s), T::one()))
            .collect();
        let h = SparseMatrix::from_triplets(self.m, self.n_xi, &h_trip)?;
        let c = basis.centroids();
        let k = Array2::from_shape_fn((self.rank, self.rank), |(i, j)| {
            T::of((-(c[i] - c[j]).abs() / self.range).exp())
        });
        let edges: Vec<_> = (1..self.n_xi).map(|i| (i - 1, i)).collect();
        let graph = RegionGraph::new(self.n_xi, &edges)?;
        let q_xi = car_first_order(&graph, self.rho, self.tau)?;
        let r = SparseMatrix::identity(self.m).scale(T::of(1.0 / self.noise_variance));
        frk_car_model(&a_basis, &b_basis, &h, &k, &q_xi, &r)
    }
}

/// Random two-level nested partition of `n` regions on a chain graph:
/// level 0 has `n_mid` units and level 1 has `n_coarse` units, each unit
/// nonempty, with weights drawn uniformly from `[0.5, 2)`.
pub fn nested_partition(n: usize, n_mid: usize, n_coarse: usize, seed: u64) -> Result<RegionGraph> {
    if !(n_coarse >= 1 && n_coarse <= n_mid && n_mid <= n) {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= coarse ({n_coarse}) <= mid ({n_mid}) <= regions ({n})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mid = surjection(n, n_mid, &mut rng);
    let mid_to_coarse = surjection(n_mid, n_coarse, &mut rng);
    let coarse = mid.iter().map(|&k| mid_to_coarse[k]).collect();
    let weights = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    RegionGraph::new(n, &edges)?
        .with_weights(weights)?
        .with_level(mid)?
        .with_level(coarse)
}

/// Random map from `0..n` onto `0..k`.
fn surjection(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut map: Vec<usize> = (0..n)
        .map(|i| if i < k { i } else { rng.random_range(0..k) })
        .collect();
    map.shuffle(rng);
    map
}

/// Fine units aggregated to level 0 for prediction and to level 1 for
/// observation, first-order CAR prior on the fine graph.
pub fn nested_aggregation_model<T: Scalar>(
    graph: &RegionGraph,
    rho: f64,
    tau: f64,
) -> Result<HierarchicalModel<T>> {
    let a = graph.aggregation_matrix(0)?;
    let b = graph.aggregation_matrix(1)?;
    let q = car_first_order(graph, rho, tau)?;
    let r = SparseMatrix::identity(b.nrows()).scale(T::of(100.0));
    HierarchicalModel::new(a, b, q, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variance::{check_case1, check_case2, check_theorem};

    #[test]
    fn car1d_study_satisfies_case2() {
        let model: HierarchicalModel<f64> = Car1dStudy::new(50, 200, 40, 3).build().unwrap();
        assert!(check_case2(model.a(), model.q()).unwrap().0.holds);
        assert_eq!(model.r().value(0, 0), 10.0);
        assert_eq!(
            Car1dStudy::new(50, 200, 40, 3)
                .observation_locations()
                .len(),
            200
        );
    }

    #[test]
    fn nested_partition_is_nested() {
        let g = nested_partition(60, 15, 4, 9).unwrap();
        assert!(g.is_nested());
        assert_eq!(g.num_coarse(0), 15);
        assert_eq!(g.num_coarse(1), 4);
        let m: HierarchicalModel<f64> = nested_aggregation_model(&g, 0.9, 1.0).unwrap();
        assert!(check_case1(m.a(), m.b()).unwrap().holds);
    }

    #[test]
    fn frk_model_needs_padding() {
        let m: HierarchicalModel<f64> = FrkCar1d::new(40, 5, 30, 1).build().unwrap();
        assert!(!check_case2(m.a(), m.q()).unwrap().0.holds);
        assert!(!check_theorem(m.a(), m.b(), m.q()).unwrap().theorem);
        assert_eq!(m.n(), 45);
    }
}

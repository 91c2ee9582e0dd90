//! Conditional autoregressive prior precisions.

use crate::chol::cholesky;
use crate::error::{Error, Result};
use crate::models::RegionGraph;
use crate::scalar::Scalar;
use crate::sparse::{Ordering, SparseMatrix};

fn require_spd<T: Scalar>(q: &SparseMatrix<T>) -> Result<()> {
    cholesky(q, Ordering::Rcm).map(|_| ())
}

/// `Q = τ(I − ρW)` on a regular 1D lattice where `W` has weight 4 at lag 1 and
/// weight 1 at lag 2. Lags that fall outside `0..n` are dropped.
pub fn car1d_second_order<T: Scalar>(n: usize, rho: f64, tau: f64) -> Result<SparseMatrix<T>> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("lattice size {n} < 3")));
    }
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tau = {tau} must be positive"
        )));
    }
    let mut trip = Vec::with_capacity(5 * n);
    for i in 0..n {
        trip.push((i, i, T::of(tau)));
        if rho != 0.0 {
            for (lag, w) in [(1, 4.0), (2, 1.0)] {
                if i + lag < n {
                    let v = T::of(-tau * rho * w);
                    trip.push((i, i + lag, v));
                    trip.push((i + lag, i, v));
                }
            }
        }
    }
    let q = SparseMatrix::from_triplets(n, n, &trip)?;
    require_spd(&q)?;
    Ok(q)
}

/// `Q = τ D_w (I − ρ W̃)` with `W̃ = D_w⁻¹ W`, so `Q_jj = τ deg(j)` and
/// `Q_jk = −τρ` for neighbours `j ~ k`.
pub fn car_first_order<T: Scalar>(
    graph: &RegionGraph,
    rho: f64,
    tau: f64,
) -> Result<SparseMatrix<T>> {
    if !(rho.abs() < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "|rho| = {} must be < 1",
            rho.abs()
        )));
    }
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tau = {tau} must be positive"
        )));
    }
    if !graph.is_connected() {
        log::warn!("CAR graph with {} regions is not connected", graph.len());
    }
    let n = graph.len();
    let mut trip = Vec::with_capacity(n + 2 * graph.num_edges());
    for j in 0..n {
        let nbrs = graph.neighbors(j);
        trip.push((j, j, T::of(tau * nbrs.len() as f64)));
        if rho != 0.0 {
            trip.extend(nbrs.iter().map(|&k| (j, k, T::of(-tau * rho))));
        }
    }
    let q = SparseMatrix::from_triplets(n, n, &trip)?;
    require_spd(&q)?;
    Ok(q)
}

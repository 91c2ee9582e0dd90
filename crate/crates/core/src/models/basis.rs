use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;

/// Bisquare basis on `[0, 1]`: `φ_i(s) = (1 − (|s − c_i| / r)²)²` for
/// `|s − c_i| < r`, zero otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis1D {
    centroids: Vec<f64>,
    aperture: f64,
}

impl Basis1D {
    pub fn new(centroids: Vec<f64>, aperture: f64) -> Result<Self> {
        if !(aperture > 0.0 && aperture.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "aperture {aperture} must be positive"
            )));
        }
        if centroids.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument(
                "centroids must be strictly increasing".into(),
            ));
        }
        Ok(Basis1D {
            centroids,
            aperture,
        })
    }

    /// `n` centroids `i / (n − 1)` with aperture `1 / n`.
    pub fn equispaced(n: usize) -> Result<Self> {
        Self::equispaced_with_aperture(n, 1.0 / n as f64)
    }

    pub fn equispaced_with_aperture(n: usize, aperture: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 basis functions, got {n}"
            )));
        }
        let step = 1.0 / (n - 1) as f64;
        Self::new((0..n).map(|i| i as f64 * step).collect(), aperture)
    }

    pub fn len(&self) -> usize {
        self.centroids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centroids.is_empty()
    }

    pub fn centroids(&self) -> &[f64] {
        &self.centroids
    }

    pub fn aperture(&self) -> f64 {
        self.aperture
    }

    /// `φ_i(s)`.
    pub fn value(&self, i: usize, s: f64) -> f64 {
        bisquare(s - self.centroids[i], self.aperture)
    }
}

#[inline]
fn bisquare(dist: f64, r: f64) -> f64 {
    let u = dist.abs() / r;
    if u < 1.0 {
        let t = 1.0 - u * u;
        t * t
    } else {
        0.0
    }
}

/// `Φ` with `Φ[k, i] = φ_i(s_k)`; only positive values are stored.
pub fn bisquare_eval<T: Scalar>(basis: &Basis1D, locations: &[f64]) -> Result<SparseMatrix<T>> {
    let c = basis.centroids();
    let r = basis.aperture();
    let mut trip = Vec::new();
    for (k, &s) in locations.iter().enumerate() {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidArgument(format!(
                "location {s} outside [0, 1]"
            )));
        }
        let lo = c.partition_point(|&x| x <= s - r);
        for (i, &ci) in c.iter().enumerate().skip(lo) {
            if ci >= s + r {
                break;
            }
            let v = bisquare(s - ci, r);
            if v > 0.0 {
                trip.push((k, i, T::of(v)));
            }
        }
    }
    SparseMatrix::from_triplets(locations.len(), c.len(), &trip)
}

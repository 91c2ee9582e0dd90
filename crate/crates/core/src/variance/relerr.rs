//! Relative error of simulated prediction standard deviations.

use serde::{Deserialize, Serialize};

use crate::chol::NumericFactor;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::variance::{sample_variances, simulate_predictions, HierarchicalModel, PerPhase};

/// Mean and spread of `R_i = (σ̂_i − σ_i) / σ_i` across predictions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelErrRow {
    pub samples: usize,
    pub r_hat: f64,
    pub s_hat: f64,
}

/// `(r̂, ŝ)`: mean of `R_i` and its sample standard deviation (divisor `N − 1`).
pub fn relative_error_summary<T: Scalar>(d_exact: &[T], d_hat: &[T]) -> Result<(f64, f64)> {
    if d_exact.len() != d_hat.len() || d_exact.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "{} exact and {} estimated variances",
            d_exact.len(),
            d_hat.len()
        )));
    }
    let mut rel = Vec::with_capacity(d_exact.len());
    for (i, (&d, &dh)) in d_exact.iter().zip(d_hat).enumerate() {
        let sigma = d.as_f64().sqrt();
        if !(sigma > 0.0) {
            return Err(Error::ZeroVariance(i));
        }
        rel.push((dh.as_f64().max(0.0).sqrt() - sigma) / sigma);
    }
    let n = rel.len() as f64;
    let mean = rel.iter().sum::<f64>() / n;
    let spread = if rel.len() > 1 {
        (rel.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok((mean, spread))
}

/// Whether each simulation count gets fresh draws or a prefix of one ensemble.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DrawMode {
    #[default]
    Redraw,
    Reuse,
}

/// Seed used for the ensemble of size `samples` in [`DrawMode::Redraw`].
pub fn redraw_seed(seed: u64, samples: usize) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ (samples as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One [`RelErrRow`] per entry of `sample_counts`.
pub fn relerr_study<T: Scalar>(
    model: &HierarchicalModel<T>,
    factor: &NumericFactor<T>,
    d_exact: &[T],
    sample_counts: &[usize],
    seed: u64,
    mode: DrawMode,
) -> Result<Vec<RelErrRow>> {
    let mut timings = PerPhase::default();
    let mut ops = PerPhase::default();
    let mut rows = Vec::with_capacity(sample_counts.len());
    let shared = match mode {
        DrawMode::Reuse => {
            let max = sample_counts.iter().copied().max().unwrap_or(0);
            Some(simulate_predictions(
                model,
                factor,
                max,
                seed,
                &mut timings,
                &mut ops,
            )?)
        }
        DrawMode::Redraw => None,
    };
    for &m in sample_counts {
        let d_hat = match &shared {
            Some(y) => sample_variances(y.view(), m)?,
            None => {
                let y = simulate_predictions(
                    model,
                    factor,
                    m,
                    redraw_seed(seed, m),
                    &mut timings,
                    &mut ops,
                )?;
                sample_variances(y.view(), m)?
            }
        };
        let (r_hat, s_hat) = relative_error_summary(d_exact, &d_hat)?;
        rows.push(RelErrRow {
            samples: m,
            r_hat,
            s_hat,
        });
    }
    Ok(rows)
}

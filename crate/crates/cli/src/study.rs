//! Relative error of conditional simulation against exact variances.

use serde::Serialize;
use takvar::models::synthetic::Car1dStudy;
use takvar::sparse::Ordering;
use takvar::variance::{
    factorize, relerr_study, variances_sparse_inv, DrawMode, HierarchicalModel, RelErrRow,
};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
pub struct RelErrSpec {
    pub n: usize,
    pub m: usize,
    pub num_predictions: usize,
    pub sample_counts: Vec<usize>,
    pub seed: u64,
    pub mode: DrawMode,
    pub ordering: Ordering,
}

impl Default for RelErrSpec {
    fn default() -> Self {
        RelErrSpec {
            n: 500,
            m: 2_000,
            num_predictions: 1_000,
            sample_counts: (1..=10).map(|k| 10 * k).collect(),
            seed: 0,
            mode: DrawMode::Redraw,
            ordering: Ordering::Rcm,
        }
    }
}

/// CSV row, with `ŝ·√M` alongside.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelErrCsvRow {
    #[serde(rename = "M")]
    pub samples: usize,
    pub r_hat: f64,
    pub s_hat: f64,
    pub s_hat_sqrt_m: f64,
}

impl From<RelErrRow> for RelErrCsvRow {
    fn from(r: RelErrRow) -> Self {
        RelErrCsvRow {
            samples: r.samples,
            r_hat: r.r_hat,
            s_hat: r.s_hat,
            s_hat_sqrt_m: r.s_hat * (r.samples as f64).sqrt(),
        }
    }
}

/// Study on a second-order CAR model: exact `d` from the sparse inverse, then
/// one `(r̂, ŝ)` row per simulation count.
pub fn run_relerr(spec: &RelErrSpec) -> CliResult<Vec<RelErrRow>> {
    if spec.sample_counts.iter().any(|&k| k < 2) {
        return Err(CliError::Grid("every M must be at least 2".into()));
    }
    let model: HierarchicalModel<f64> =
        Car1dStudy::new(spec.n, spec.m, spec.num_predictions, spec.seed).build()?;
    let fact = factorize(&model, spec.ordering)?;
    let subset = takvar::chol::takahashi(&fact.factor)?;
    let exact = variances_sparse_inv(&model, &subset, false)?.d;
    Ok(relerr_study(
        &model,
        &fact.factor,
        &exact,
        &spec.sample_counts,
        spec.seed,
        spec.mode,
    )?)
}

use std::time::Instant;

use ndarray::{s, Array2, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::chol::{
    backward_solve_in_place, forward_solve_in_place, numeric_cholesky, symbolic_cholesky,
    takahashi, NumericFactor, SparseInverseSubset,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::{Ordering, SparseMatrix};
use crate::variance::{
    assemble_precision, check_theorem, ConditionReport, HierarchicalModel, Method, PerPhase, Phase,
    VarianceReport,
};

/// Name of the generator behind conditional simulation draws.
pub const SIMULATION_RNG: &str = "ChaCha8 (seed_from_u64, one stream per replicate)";

/// Right-hand-side columns solved together in the direct method.
const DIRECT_BLOCK: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct VarianceOptions {
    pub method: Method,
    pub ordering: Ordering,
    /// Number of simulations for [`Method::CondSim`].
    pub samples: usize,
    pub seed: u64,
    /// Run the sparse inverse method even when exactness is not certified.
    pub skip_check: bool,
}

impl Default for VarianceOptions {
    fn default() -> Self {
        VarianceOptions {
            method: Method::SparseInv,
            ordering: Ordering::Rcm,
            samples: 50,
            seed: 0,
            skip_check: false,
        }
    }
}

/// Assembled precision and its Cholesky factor.
#[derive(Clone, Debug)]
pub struct Factorization<T> {
    pub precision: SparseMatrix<T>,
    pub factor: NumericFactor<T>,
    pub ordering: Ordering,
    pub seconds: f64,
}

/// Assembles `Pᶜ`, orders it, and factors it.
pub fn factorize<T: Scalar>(
    model: &HierarchicalModel<T>,
    ordering: Ordering,
) -> Result<Factorization<T>> {
    let start = Instant::now();
    let precision = assemble_precision(model)?;
    let pattern = precision.pattern();
    let perm = ordering.compute(&pattern)?;
    let symbolic = symbolic_cholesky(&pattern, perm)?;
    let factor = numeric_cholesky(&precision, &symbolic)?;
    Ok(Factorization {
        precision,
        factor,
        ordering,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn base_report<T: Scalar>(
    method: Method,
    d: Vec<T>,
    factor: &NumericFactor<T>,
) -> VarianceReport<T> {
    let mut r = VarianceReport::new(method, d);
    r.n = factor.n();
    r.nnz_l = factor.nnz();
    r.bandwidth_l = factor.bandwidth();
    r
}

/// `d_i = Σ_k G_ki²` with `LG = (ΠAᵀ)`, streaming `G` in column blocks.
pub fn variances_direct<T: Scalar>(
    model: &HierarchicalModel<T>,
    factor: &NumericFactor<T>,
) -> Result<VarianceReport<T>> {
    let n = factor.n();
    if model.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "model has {} coefficients, factor has order {n}",
            model.n()
        )));
    }
    let perm = factor.symbolic().permutation();
    let at = model.a().transpose();
    let big_n = at.ncols();
    let mut d = vec![T::zero(); big_n];
    let mut timings = PerPhase::<f64>::default();
    let mut ops = PerPhase::<u64>::default();
    let mut buf = vec![T::zero(); n * DIRECT_BLOCK.min(big_n.max(1))];

    for start in (0..big_n).step_by(DIRECT_BLOCK) {
        let width = DIRECT_BLOCK.min(big_n - start);
        let block = &mut buf[..n * width];
        let solve_ops: u64 = timings.time(Phase::Solve, || {
            block
                .par_chunks_mut(n)
                .enumerate()
                .map(|(c, x)| {
                    x.fill(T::zero());
                    let (rows, vals) = at.col(start + c);
                    for (&j, &v) in rows.iter().zip(vals) {
                        x[perm.new_index(j)] = v;
                    }
                    forward_solve_in_place(factor, x)
                })
                .sum()
        });
        ops.add(Phase::Solve, solve_ops);
        timings.time(Phase::Hadamard, || {
            d[start..start + width]
                .par_iter_mut()
                .zip(block.par_chunks(n))
                .for_each(|(di, g)| *di = g.iter().map(|&v| v * v).sum());
        });
        ops.add(Phase::Hadamard, (n * width) as u64);
    }

    let mut report = base_report(Method::Direct, d, factor);
    report.timings = timings;
    report.op_counts = ops;
    Ok(report)
}

/// Row sums of `A ∘ (A S̃)` evaluated only on the support of each row of `A`.
///
/// Entries of `S̃` at `(j, k)` with `[AᵀA]_jk = 0` are never read. A required
/// entry missing from the subset contributes zero. Returns `d` and the number of
/// multiplications.
pub fn hadamard_variances<T: Scalar>(
    a: &SparseMatrix<T>,
    subset: &SparseInverseSubset<T>,
) -> (Vec<T>, u64) {
    let perm = subset.permutation();
    let at = a.transpose();
    let rows: Vec<(T, u64)> = (0..at.ncols())
        .into_par_iter()
        .map(|i| {
            let (cols, vals) = at.col(i);
            let idx: Vec<usize> = cols.iter().map(|&j| perm.new_index(j)).collect();
            let mut di = T::zero();
            for (p, &aj) in vals.iter().enumerate() {
                let mut row = T::zero();
                for (q, &ak) in vals.iter().enumerate() {
                    if let Some(s) = subset.get_permuted(idx[p], idx[q]) {
                        row += ak * s;
                    }
                }
                di += aj * row;
            }
            let k = vals.len() as u64;
            (di, k * (k + 1))
        })
        .collect();
    let ops = rows.iter().map(|r| r.1).sum();
    (rows.into_iter().map(|r| r.0).collect(), ops)
}

fn require_theorem<T: Scalar>(model: &HierarchicalModel<T>) -> Result<ConditionReport> {
    let report = check_theorem(model.a(), model.b(), model.q())?;
    if let Some(&(row, col)) = report.theorem_witnesses.first() {
        return Err(Error::ConditionFailed {
            count: report.theorem_witnesses.len(),
            row,
            col,
        });
    }
    Ok(report)
}

/// `d` from a sparse inverse subset of the model's `Pᶜ`.
///
/// Refuses unless `ones(BᵀB) ∪ ones(Q) >= ones(AᵀA)`, which guarantees every
/// entry read is in the subset and the result is exact; `skip_check` overrides.
pub fn variances_sparse_inv<T: Scalar>(
    model: &HierarchicalModel<T>,
    subset: &SparseInverseSubset<T>,
    skip_check: bool,
) -> Result<VarianceReport<T>> {
    if subset.n() != model.n() {
        return Err(Error::DimensionMismatch(format!(
            "model has {} coefficients, subset has order {}",
            model.n(),
            subset.n()
        )));
    }
    let condition = if skip_check {
        None
    } else {
        Some(require_theorem(model)?)
    };
    let mut timings = PerPhase::<f64>::default();
    let (d, ops) = timings.time(Phase::Hadamard, || hadamard_variances(model.a(), subset));
    let mut report = VarianceReport::new(Method::SparseInv, d);
    report.n = subset.n();
    report.timings = timings;
    report.op_counts.add(Phase::Hadamard, ops);
    report.condition = condition;
    Ok(report)
}

fn replicate_rng(seed: u64, replicate: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate as u64);
    rng
}

/// Conditional simulation ensemble `Y = A V` (`N × samples`), where each column
/// of `V` solves `Lᵀv = w` with `w ~ N(0, I)`, mapped back to original indexing.
pub fn simulate_predictions<T: Scalar>(
    model: &HierarchicalModel<T>,
    factor: &NumericFactor<T>,
    samples: usize,
    seed: u64,
    timings: &mut PerPhase<f64>,
    ops: &mut PerPhase<u64>,
) -> Result<Array2<T>> {
    let n = factor.n();
    if model.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "model has {} coefficients, factor has order {n}",
            model.n()
        )));
    }
    let perm = factor.symbolic().permutation();
    let draws: Vec<(Vec<T>, u64)> = timings.time(Phase::Sim, || {
        (0..samples)
            .into_par_iter()
            .map(|r| {
                let mut rng = replicate_rng(seed, r);
                let mut w: Vec<T> = (0..n)
                    .map(|_| T::of(rng.sample::<f64, _>(StandardNormal)))
                    .collect();
                let o = backward_solve_in_place(factor, &mut w);
                (perm.apply_inverse(&w), o)
            })
            .collect()
    });
    ops.add(Phase::Sim, draws.iter().map(|x| x.1).sum());

    let a = model.a();
    let big_n = a.nrows();
    let y = timings.time(Phase::Interp, || {
        let cols: Vec<Vec<T>> = draws
            .par_iter()
            .map(|(v, _)| a.mul_vec(v).expect("dimensions checked"))
            .collect();
        let mut y = Array2::from_elem((big_n, samples), T::zero());
        for (r, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                y[[i, r]] = v;
            }
        }
        y
    });
    ops.add(Phase::Interp, (samples * a.nnz()) as u64);
    Ok(y)
}

/// Per-row sample variances over the first `samples` columns (divisor `samples - 1`).
pub fn sample_variances<T: Scalar>(y: ArrayView2<T>, samples: usize) -> Result<Vec<T>> {
    if samples < 2 || samples > y.ncols() {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= samples <= {}, got {samples}",
            y.ncols()
        )));
    }
    let cnt = T::of(samples as f64);
    let denom = T::of((samples - 1) as f64);
    Ok(y.slice(s![.., ..samples])
        .rows()
        .into_iter()
        .map(|row| {
            let mean = row.iter().copied().sum::<T>() / cnt;
            row.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / denom
        })
        .collect())
}

/// Empirical prediction variances from `samples` conditional simulations.
pub fn variances_cond_sim<T: Scalar>(
    model: &HierarchicalModel<T>,
    factor: &NumericFactor<T>,
    samples: usize,
    seed: u64,
) -> Result<VarianceReport<T>> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "conditional simulation needs at least 2 samples, got {samples}"
        )));
    }
    let mut timings = PerPhase::<f64>::default();
    let mut ops = PerPhase::<u64>::default();
    let y = simulate_predictions(model, factor, samples, seed, &mut timings, &mut ops)?;
    let d = timings.time(Phase::Interp, || sample_variances(y.view(), samples))?;
    ops.add(Phase::Interp, (y.nrows() * samples) as u64);
    let mut report = base_report(Method::CondSim, d, factor);
    report.timings = timings;
    report.op_counts = ops;
    report.samples = Some(samples);
    report.seed = Some(seed);
    report.rng = Some(SIMULATION_RNG.to_string());
    Ok(report)
}

/// Full pipeline: check (sparse inverse only), assemble, factor, and compute `d`.
pub fn compute_variances<T: Scalar>(
    model: &HierarchicalModel<T>,
    opts: &VarianceOptions,
) -> Result<VarianceReport<T>> {
    let condition = match opts.method {
        Method::SparseInv if !opts.skip_check => Some(require_theorem(model)?),
        _ => None,
    };
    let fact = factorize(model, opts.ordering)?;
    let factor = &fact.factor;
    let mut report = match opts.method {
        Method::Direct => variances_direct(model, factor)?,
        Method::CondSim => variances_cond_sim(model, factor, opts.samples, opts.seed)?,
        Method::SparseInv => {
            let start = Instant::now();
            let subset = takahashi(factor)?;
            let part_inv = start.elapsed();
            let mut r = variances_sparse_inv(model, &subset, true)?;
            r.timings.add_duration(Phase::PartInv, part_inv);
            r.op_counts.add(Phase::PartInv, subset.ops());
            r.condition = condition;
            r
        }
    };
    report.timings.add(Phase::Cholesky, fact.seconds);
    report.op_counts.add(Phase::Cholesky, factor.ops());
    report.ordering = opts.ordering;
    report.n = factor.n();
    report.nnz_l = factor.nnz();
    report.bandwidth_l = factor.bandwidth();
    Ok(report)
}

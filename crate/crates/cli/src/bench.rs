//! Timing grid for the 1D second-order CAR study.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use takvar::chol::symbolic_cholesky;
use takvar::models::synthetic::Car1dStudy;
use takvar::sparse::Ordering;
use takvar::variance::{
    assemble_precision, compute_variances, HierarchicalModel, Method, Phase, VarianceOptions,
    VarianceReport,
};

use crate::error::{CliError, CliResult};

/// Bumped whenever a column of the timing or summary tables changes.
pub const SCHEMA_VERSION: u32 = 1;

pub const DESK_MAX_N: usize = 10_000;
pub const DESK_MAX_PREDICTIONS: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentGrid {
    pub n_values: Vec<usize>,
    pub prediction_counts: Vec<usize>,
    pub m: usize,
    pub methods: Vec<Method>,
    /// Simulations per conditional-simulation run.
    pub samples: usize,
    pub seed: u64,
    pub repetitions: usize,
    pub ordering: Ordering,
    /// Lift the desk-scale caps on `n` and `N`.
    pub full: bool,
    /// Run cells concurrently. Timings then contend; use for correctness runs.
    pub parallel_cells: bool,
    pub memory_limit_mb: u64,
}

impl ExperimentGrid {
    pub fn desk() -> Self {
        ExperimentGrid {
            n_values: vec![100, 1_000, 10_000],
            prediction_counts: vec![10, 100, 1_000, 10_000, 100_000],
            m: 10_000,
            methods: Method::ALL.to_vec(),
            samples: 50,
            seed: 0,
            repetitions: 1,
            ordering: Ordering::Rcm,
            full: false,
            parallel_cells: false,
            memory_limit_mb: 4_096,
        }
    }

    /// Desk grid plus `n = 10⁵`.
    pub fn full() -> Self {
        let mut g = Self::desk();
        g.n_values.push(100_000);
        g.full = true;
        g
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Grid(msg));
        if self.n_values.is_empty() || self.prediction_counts.is_empty() || self.methods.is_empty()
        {
            return bad("n values, N values and methods must be nonempty".into());
        }
        if self
            .n_values
            .iter()
            .chain(&self.prediction_counts)
            .any(|&v| v == 0)
            || self.m == 0
        {
            return bad("all counts must be positive".into());
        }
        if self.n_values.iter().any(|&n| n < 3) {
            return bad("the second-order CAR prior needs n >= 3".into());
        }
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1".into());
        }
        if self.methods.contains(&Method::CondSim) && self.samples < 2 {
            return bad("conditional simulation needs M >= 2".into());
        }
        if !self.full {
            if let Some(n) = self.n_values.iter().find(|&&n| n > DESK_MAX_N) {
                return bad(format!(
                    "n = {n} exceeds the desk cap {DESK_MAX_N}; pass --full"
                ));
            }
            if let Some(k) = self
                .prediction_counts
                .iter()
                .find(|&&k| k > DESK_MAX_PREDICTIONS)
            {
                return bad(format!(
                    "N = {k} exceeds the desk cap {DESK_MAX_PREDICTIONS}; pass --full"
                ));
            }
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(usize, usize)> {
        let mut cells = Vec::new();
        for &n in &self.n_values {
            for &k in &self.prediction_counts {
                cells.push((n, k));
            }
        }
        cells
    }
}

/// One row of the timing table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimingRow {
    pub schema_version: u32,
    pub n: usize,
    #[serde(rename = "N")]
    pub num_predictions: usize,
    pub m: usize,
    pub method: String,
    pub ordering: String,
    pub repetition: usize,
    pub seed: u64,
    #[serde(rename = "M")]
    pub samples: Option<usize>,
    pub total_secs: f64,
    pub cholesky_secs: f64,
    pub solve_secs: f64,
    pub hadamard_secs: f64,
    pub part_inv_secs: f64,
    pub sim_secs: f64,
    pub interp_secs: f64,
    pub dominant_phase: String,
    pub cholesky_ops: u64,
    pub solve_ops: u64,
    pub hadamard_ops: u64,
    pub part_inv_ops: u64,
    pub sim_ops: u64,
    pub interp_ops: u64,
    pub nnz_l: usize,
    pub bandwidth_l: usize,
}

impl TimingRow {
    fn new(
        grid: &ExperimentGrid,
        m: usize,
        repetition: usize,
        report: &VarianceReport<f64>,
    ) -> Self {
        let t = |p| report.timings.get(p);
        let o = |p| report.op_counts.get(p);
        TimingRow {
            schema_version: SCHEMA_VERSION,
            n: report.n,
            num_predictions: report.num_predictions,
            m,
            method: report.method.name().to_string(),
            ordering: report.ordering.to_string(),
            repetition,
            seed: grid.seed,
            samples: report.samples,
            total_secs: report.total_secs(),
            cholesky_secs: t(Phase::Cholesky),
            solve_secs: t(Phase::Solve),
            hadamard_secs: t(Phase::Hadamard),
            part_inv_secs: t(Phase::PartInv),
            sim_secs: t(Phase::Sim),
            interp_secs: t(Phase::Interp),
            dominant_phase: report.dominant_phase().name().to_string(),
            cholesky_ops: o(Phase::Cholesky),
            solve_ops: o(Phase::Solve),
            hadamard_ops: o(Phase::Hadamard),
            part_inv_ops: o(Phase::PartInv),
            sim_ops: o(Phase::Sim),
            interp_ops: o(Phase::Interp),
            nnz_l: report.nnz_l,
            bandwidth_l: report.bandwidth_l,
        }
    }

    pub fn phase_secs(&self, phase: Phase) -> f64 {
        match phase {
            Phase::Cholesky => self.cholesky_secs,
            Phase::Solve => self.solve_secs,
            Phase::Hadamard => self.hadamard_secs,
            Phase::PartInv => self.part_inv_secs,
            Phase::Sim => self.sim_secs,
            Phase::Interp => self.interp_secs,
        }
    }
}

/// Per-cell summary over repetitions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub schema_version: u32,
    pub n: usize,
    #[serde(rename = "N")]
    pub num_predictions: usize,
    pub method: String,
    pub repetitions: usize,
    pub median_total_secs: f64,
    pub min_total_secs: f64,
    pub max_total_secs: f64,
    /// Dominant phase of the per-phase medians.
    pub dominant_phase: String,
    /// Largest `|d − d_direct| / d_direct` when the direct method ran in the same cell.
    pub max_rel_dev_vs_direct: Option<f64>,
}

#[derive(Clone, Debug, Default)]
pub struct GridResult {
    pub rows: Vec<TimingRow>,
    pub summary: Vec<SummaryRow>,
}

impl GridResult {
    pub fn summary_for(
        &self,
        n: usize,
        num_predictions: usize,
        method: Method,
    ) -> Option<&SummaryRow> {
        self.summary
            .iter()
            .find(|s| s.n == n && s.num_predictions == num_predictions && s.method == method.name())
    }
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}

fn summarize(
    n: usize,
    num_predictions: usize,
    method: Method,
    rows: &[TimingRow],
    dev: Option<f64>,
) -> SummaryRow {
    let mut totals: Vec<f64> = rows.iter().map(|r| r.total_secs).collect();
    let min = totals.iter().copied().fold(f64::INFINITY, f64::min);
    let max = totals.iter().copied().fold(0.0, f64::max);
    let dominant = Phase::ALL
        .into_iter()
        .map(|p| {
            let mut v: Vec<f64> = rows.iter().map(|r| r.phase_secs(p)).collect();
            (p, median(&mut v))
        })
        .fold((Phase::Cholesky, f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        })
        .0;
    SummaryRow {
        schema_version: SCHEMA_VERSION,
        n,
        num_predictions,
        method: method.name().to_string(),
        repetitions: rows.len(),
        median_total_secs: median(&mut totals),
        min_total_secs: min,
        max_total_secs: max,
        dominant_phase: dominant.name().to_string(),
        max_rel_dev_vs_direct: dev,
    }
}

/// Rough peak bytes for one method on one cell, from the symbolic factor.
fn estimate_bytes(
    model: &HierarchicalModel<f64>,
    ordering: Ordering,
    method: Method,
    samples: usize,
) -> CliResult<u64> {
    let p = assemble_precision(model)?;
    let pattern = p.pattern();
    let symbolic = symbolic_cholesky(&pattern, ordering.compute(&pattern)?)?;
    let n = model.n() as u64;
    let big_n = model.num_predictions() as u64;
    // values plus row indices, for P and L
    let base = 16 * (symbolic.nnz() as u64 + p.nnz() as u64) + 16 * model.a().nnz() as u64;
    let extra = match method {
        Method::Direct => 8 * n * big_n.min(256) + 8 * big_n,
        Method::SparseInv => 16 * 2 * symbolic.nnz() as u64 + 8 * big_n,
        Method::CondSim => 8 * samples as u64 * (n + big_n),
    };
    Ok(base + extra)
}

fn max_rel_dev(d: &[f64], reference: &[f64]) -> f64 {
    d.iter()
        .zip(reference)
        .map(|(x, y)| (x - y).abs() / y.abs())
        .fold(0.0, f64::max)
}

fn run_cell(grid: &ExperimentGrid, n: usize, big_n: usize) -> CliResult<GridResult> {
    let model: HierarchicalModel<f64> = Car1dStudy::new(n, grid.m, big_n, grid.seed).build()?;
    for &method in &grid.methods {
        let needed = estimate_bytes(&model, grid.ordering, method, grid.samples)?;
        let limit = grid.memory_limit_mb * 1024 * 1024;
        if needed > limit {
            return Err(CliError::MemoryGuard {
                n,
                big_n,
                method: method.name().to_string(),
                needed_mb: needed.div_ceil(1024 * 1024),
                limit_mb: grid.memory_limit_mb,
            });
        }
    }

    let mut out = GridResult::default();
    let mut direct_d: Option<Vec<f64>> = None;
    let mut methods = grid.methods.clone();
    // direct first, so the others can be compared against it
    methods.sort_by_key(|&m| m != Method::Direct);
    for method in methods {
        let opts = VarianceOptions {
            method,
            ordering: grid.ordering,
            samples: grid.samples,
            seed: grid.seed,
            skip_check: false,
        };
        let mut rows = Vec::with_capacity(grid.repetitions);
        let mut dev = None;
        for rep in 0..grid.repetitions {
            let report = compute_variances(&model, &opts)?;
            log::debug!(
                "n={n} N={big_n} {} rep {rep}: {:.4}s",
                method.name(),
                report.total_secs()
            );
            if rep == 0 {
                match (&direct_d, method) {
                    (None, Method::Direct) => direct_d = Some(report.d.clone()),
                    (Some(reference), m) if m != Method::Direct => {
                        dev = Some(max_rel_dev(&report.d, reference))
                    }
                    _ => {}
                }
            }
            rows.push(TimingRow::new(grid, grid.m, rep, &report));
        }
        out.summary.push(summarize(n, big_n, method, &rows, dev));
        out.rows.extend(rows);
    }
    Ok(out)
}

/// Runs every `(n, N)` cell for every method and repetition.
pub fn run_grid(grid: &ExperimentGrid) -> CliResult<GridResult> {
    grid.validate()?;
    let cells = grid.cells();
    let results: Vec<CliResult<GridResult>> = if grid.parallel_cells {
        cells
            .par_iter()
            .map(|&(n, k)| run_cell(grid, n, k))
            .collect()
    } else {
        cells
            .iter()
            .map(|&(n, k)| {
                log::info!("cell n={n} N={k}");
                run_cell(grid, n, k)
            })
            .collect()
    };
    let mut all = GridResult::default();
    for r in results {
        let r = r?;
        all.rows.extend(r.rows);
        all.summary.extend(r.summary);
    }
    Ok(all)
}

pub fn write_csv<S: Serialize>(path: &Path, rows: &[S]) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `timings.csv` and `summary.csv` into `dir`.
pub fn write_grid(dir: &Path, result: &GridResult) -> CliResult<()> {
    write_csv(&dir.join("timings.csv"), &result.rows)?;
    write_csv(&dir.join("summary.csv"), &result.summary)
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use takvar::sparse::Ordering;
use takvar::variance::{DrawMode, Method, VarianceOptions};
use takvar_cli::bench::{run_grid, write_grid, ExperimentGrid};
use takvar_cli::commands::{cmd_check, cmd_gen_bundle, cmd_variances, BundleSpec, VarianceFlags};
use takvar_cli::study::{run_relerr, RelErrCsvRow, RelErrSpec};
use takvar_cli::{bench, init_threads, CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "takvar",
    version,
    about = "Exact GMRF prediction variances via sparse inverse subsets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Direct,
    SparseInv,
    CondSim,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Direct => Method::Direct,
            MethodArg::SparseInv => Method::SparseInv,
            MethodArg::CondSim => Method::CondSim,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderingArg {
    Natural,
    Rcm,
}

impl From<OrderingArg> for Ordering {
    fn from(o: OrderingArg) -> Self {
        match o {
            OrderingArg::Natural => Ordering::Natural,
            OrderingArg::Rcm => Ordering::Rcm,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BundleKind {
    Car1d,
    NestedAggregation,
    FrkCar,
}

#[derive(Subcommand)]
enum Command {
    /// Timing grid on the 1D second-order CAR model.
    SimulateCar1d {
        /// Basis sizes (comma-separated).
        #[arg(long = "n", value_delimiter = ',')]
        n: Option<Vec<usize>>,
        /// Prediction counts (comma-separated).
        #[arg(long = "N", value_delimiter = ',')]
        big_n: Option<Vec<usize>>,
        #[arg(long, default_value_t = 10_000)]
        m: usize,
        #[arg(long, value_enum, value_delimiter = ',')]
        method: Option<Vec<MethodArg>>,
        /// Simulations per conditional-simulation run.
        #[arg(long = "M", default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        repetitions: usize,
        #[arg(long, value_enum, default_value = "rcm")]
        ordering: OrderingArg,
        /// Lift the desk-scale caps (n <= 10^4, N <= 10^5) and add n = 10^5.
        #[arg(long)]
        full: bool,
        /// Run grid cells concurrently (timings will contend).
        #[arg(long)]
        parallel_cells: bool,
        #[arg(long, default_value_t = 4096)]
        memory_limit_mb: u64,
        /// Output directory for timings.csv and summary.csv.
        #[arg(long)]
        out: PathBuf,
    },
    /// Relative error of conditional-simulation standard deviations.
    RelerrStudy {
        #[arg(long = "n", default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 2_000)]
        m: usize,
        #[arg(long = "N", default_value_t = 1_000)]
        big_n: usize,
        /// Simulation counts (comma-separated).
        #[arg(
            long = "M",
            value_delimiter = ',',
            default_value = "10,20,30,40,50,60,70,80,90,100"
        )]
        samples: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Take each M as a prefix of one ensemble instead of redrawing.
        #[arg(long)]
        reuse_draws: bool,
        #[arg(long, value_enum, default_value = "rcm")]
        ordering: OrderingArg,
        /// Output CSV file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the exactness condition of a bundle. Exit 0: holds, 2: padding
    /// fixes it, 3: cannot be fixed, 1: unreadable bundle.
    Check { bundle: PathBuf },
    /// Compute prediction variances for a bundle.
    Variances {
        bundle: PathBuf,
        #[arg(long, value_enum, default_value = "sparse-inv")]
        method: MethodArg,
        #[arg(long = "M", default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "rcm")]
        ordering: OrderingArg,
        /// Pad Q with explicit zeros so the condition holds.
        #[arg(long)]
        pad: bool,
        /// Run the sparse inverse method without the condition check.
        #[arg(long)]
        unsafe_skip_check: bool,
        /// Output directory for d.csv and telemetry.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a synthetic model bundle.
    GenBundle {
        #[arg(value_enum)]
        kind: BundleKind,
        /// Basis size (car1d), fine regions (nested-aggregation) or fine cells (frk-car).
        #[arg(long = "n")]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long = "N")]
        big_n: Option<usize>,
        /// Basis functions (frk-car).
        #[arg(long, default_value_t = 20)]
        rank: usize,
        /// Mid-level units (nested-aggregation).
        #[arg(long, default_value_t = 40)]
        mid: usize,
        /// Coarse units (nested-aggregation).
        #[arg(long, default_value_t = 8)]
        coarse: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pad Q before writing (frk-car).
        #[arg(long)]
        pad: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cmd: Command) -> CliResult<i32> {
    match cmd {
        Command::SimulateCar1d {
            n,
            big_n,
            m,
            method,
            samples,
            seed,
            repetitions,
            ordering,
            full,
            parallel_cells,
            memory_limit_mb,
            out,
        } => {
            init_threads(Some(1))?;
            let mut grid = if full {
                ExperimentGrid::full()
            } else {
                ExperimentGrid::desk()
            };
            if let Some(n) = n {
                grid.n_values = n;
            }
            if let Some(k) = big_n {
                grid.prediction_counts = k;
            }
            if let Some(methods) = method {
                grid.methods = methods.into_iter().map(Method::from).collect();
            }
            grid.m = m;
            grid.samples = samples;
            grid.seed = seed;
            grid.repetitions = repetitions;
            grid.ordering = ordering.into();
            grid.parallel_cells = parallel_cells;
            grid.memory_limit_mb = memory_limit_mb;
            let result = run_grid(&grid)?;
            write_grid(&out, &result)?;
            log::info!(
                "wrote {} timing rows to {}",
                result.rows.len(),
                out.display()
            );
        }
        Command::RelerrStudy {
            n,
            m,
            big_n,
            samples,
            seed,
            reuse_draws,
            ordering,
            out,
        } => {
            init_threads(None)?;
            let spec = RelErrSpec {
                n,
                m,
                num_predictions: big_n,
                sample_counts: samples,
                seed,
                mode: if reuse_draws {
                    DrawMode::Reuse
                } else {
                    DrawMode::Redraw
                },
                ordering: ordering.into(),
            };
            let rows: Vec<RelErrCsvRow> = run_relerr(&spec)?.into_iter().map(Into::into).collect();
            bench::write_csv(&out, &rows)?;
        }
        Command::Check { bundle } => {
            let out = cmd_check(&bundle)?;
            println!("{}", serde_json::to_string_pretty(&out)?);
            return Ok(out.exit_code);
        }
        Command::Variances {
            bundle,
            method,
            samples,
            seed,
            ordering,
            pad,
            unsafe_skip_check,
            out,
        } => {
            init_threads(None)?;
            let flags = VarianceFlags {
                options: VarianceOptions {
                    method: method.into(),
                    ordering: ordering.into(),
                    samples,
                    seed,
                    skip_check: unsafe_skip_check,
                },
                pad,
            };
            if unsafe_skip_check {
                log::warn!("condition check skipped; sparse_inv results may be inexact");
            }
            let report = cmd_variances(&bundle, &flags, &out)?;
            log::info!(
                "{} variances in {:.3}s, dominant phase {}",
                report.d.len(),
                report.total_secs(),
                report.dominant_phase().name()
            );
        }
        Command::GenBundle {
            kind,
            n,
            m,
            big_n,
            rank,
            mid,
            coarse,
            seed,
            pad,
            out,
        } => {
            let spec = match kind {
                BundleKind::Car1d => BundleSpec::Car1d {
                    n: n.unwrap_or(100),
                    m: m.unwrap_or(1_000),
                    num_predictions: big_n.unwrap_or(100),
                },
                BundleKind::NestedAggregation => BundleSpec::NestedAggregation {
                    regions: n.unwrap_or(200),
                    mid,
                    coarse,
                },
                BundleKind::FrkCar => BundleSpec::FrkCar {
                    n_xi: n.unwrap_or(400),
                    rank,
                    m: m.unwrap_or(600),
                    pad,
                },
            };
            let bundle = cmd_gen_bundle(&spec, seed, &out)?;
            println!("{}", serde_json::to_string_pretty(&bundle.manifest)?);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Core(takvar::Error::ConditionFailed { .. }) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

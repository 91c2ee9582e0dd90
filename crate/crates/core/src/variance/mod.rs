//! Prediction variances `d = diag(A S Aᵀ)` with `S = (BᵀRB + Q)⁻¹`.

mod conditions;
mod engine;
mod model;
mod relerr;
mod report;

pub use conditions::{
    check_case1, check_case2, check_theorem, pad_q, padding_pattern, CaseCheck, ConditionReport,
};
pub use engine::{
    compute_variances, factorize, hadamard_variances, sample_variances, simulate_predictions,
    variances_cond_sim, variances_direct, variances_sparse_inv, Factorization, VarianceOptions,
    SIMULATION_RNG,
};
pub use model::{assemble_precision, HierarchicalModel};
pub use relerr::{redraw_seed, relative_error_summary, relerr_study, DrawMode, RelErrRow};
pub use report::{Method, PerPhase, Phase, VarianceReport};

//! Front end for `takvar`: model bundles, condition checks, and the timing
//! and relative-error studies.

pub mod bench;
pub mod bundle;
pub mod commands;
pub mod error;
pub mod study;

pub use error::{CliError, CliResult};

/// Builds the global rayon pool, capped by `TAKVAR_THREADS` when set and by
/// `default_threads` otherwise (`None` leaves rayon's default).
pub fn init_threads(default_threads: Option<usize>) -> CliResult<()> {
    let from_env = std::env::var("TAKVAR_THREADS")
        .ok()
        .map(|v| {
            v.trim().parse::<usize>().map_err(|_| {
                CliError::Grid(format!(
                    "TAKVAR_THREADS must be a positive integer, got '{v}'"
                ))
            })
        })
        .transpose()?;
    if let Some(t) = from_env.or(default_threads) {
        // a second call in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global();
    }
    Ok(())
}

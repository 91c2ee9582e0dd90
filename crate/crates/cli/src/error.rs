use thiserror::Error;

#[derive(Error, Debug)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] takvar::Error),
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: takvar::Error,
    },
    #[error("bundle manifest: {0}")]
    Manifest(String),
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error(
        "cell n={n} N={big_n} method={method} needs about {needed_mb} MB, limit is {limit_mb} MB"
    )]
    MemoryGuard {
        n: usize,
        big_n: usize,
        method: String,
        needed_mb: u64,
        limit_mb: u64,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

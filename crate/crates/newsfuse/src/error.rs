use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// CSV structure or content problem, reported with its line number.
    #[error("{path}:{line}: {message}")]
    Csv {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("invalid statistic descriptor: {0}")]
    InvalidDescriptor(String),

    /// A statistic is undefined on the given data (e.g. zero variance).
    #[error("degenerate statistic: {0}")]
    Degenerate(String),

    #[error("row index {index} out of range for dataset with {n_rows} rows")]
    IndexOutOfRange { index: usize, n_rows: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("covariance matrix has no positive spectrum")]
    NoPositiveSpectrum,

    #[error("eigendecomposition did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("bootstrap replicate {replicate} failed {attempts} consecutive times: {message}")]
    BootstrapDegenerate {
        replicate: usize,
        attempts: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by bad inputs or files rather than by the
    /// numerics of a computation. The CLI maps these to a distinct exit code.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::Degenerate(_)
                | Error::NoPositiveSpectrum
                | Error::NoConvergence(_)
                | Error::BootstrapDegenerate { .. }
        )
    }
}

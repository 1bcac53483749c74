use std::path::PathBuf;

use num_complex::Complex64;

/// Errors produced by the library.
///
/// The CLI maps [`Error::is_usage`] variants to exit code 2 and everything
/// else to exit code 1.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no strictly dominant top-degree coefficient; inclusion radii do not apply")]
    NotDominant,

    #[error("finiteness not established (certificate: {0})")]
    FinitenessNotEstablished(String),

    #[error("unsupported mid-range count k = {k} for degree n = {n}")]
    UnsupportedCount { n: usize, k: usize },

    #[error("zero on curve near {at} (|P| = {modulus:e})")]
    ZeroOnCurve { at: Complex64, modulus: f64 },

    #[error("cannot certify winding: {0}")]
    CannotCertify(String),

    #[error("nonisolated or clustered zero near {0}")]
    NonIsolatedZero(Complex64),

    #[error("singular point at {0} (Jacobian below floor)")]
    Singular(Complex64),

    #[error("extremal schedule: {0}")]
    Schedule(String),

    #[error("value range exceeded: {0}")]
    Range(String),

    #[error("extremal verification failed: {0}")]
    Verification(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for malformed input (bad arguments, unparsable files).
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::InvalidArgument(_))
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

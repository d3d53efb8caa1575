use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// The auxiliary inverse u(t, θ) could not be evaluated.
    #[error("model error: {0}")]
    Model(String),

    #[error("convergence failure in {routine}: {detail}")]
    Convergence { routine: &'static str, detail: String },

    /// Interval inversion was given a bracket whose ends are not below α.
    #[error("bracket error: {0}")]
    Bracket(String),

    #[error("empty region: maximum plausibility {max_pl} does not exceed alpha {alpha}")]
    EmptyRegion { max_pl: f64, alpha: f64 },

    /// A 2-D level set reaches the edge of the evaluation window.
    #[error("level set clipped by grid bounds; expand the bounds ({0})")]
    BoundsClipped(String),

    /// Monte Carlo table too small for the requested level.
    #[error("resolution error: alpha * B = {alpha_b} < 1")]
    Resolution { alpha_b: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    /// A coverage replicate failed; `seed` and `replicate` replay it.
    #[error("replicate {replicate} (seed {seed}) failed: {source}")]
    Replicate {
        replicate: u64,
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of iterative solvers, including ones wrapped in a
    /// replicate failure.
    pub fn is_convergence(&self) -> bool {
        match self {
            Error::Convergence { .. } => true,
            Error::Replicate { source, .. } => source.is_convergence(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

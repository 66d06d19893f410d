use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The argument has negative valuation, so it lies outside the domain of
    /// the pseudostandard part.
    #[error("not v-finite: valuation {valuation} is negative")]
    NotVFinite { valuation: String },

    /// The source text denotes a germ outside the moderate-growth ring
    /// (e.g. `exp(x)`).
    #[error("not a moderate-growth germ: {what} (at byte {offset})")]
    NotModerate { what: String, offset: usize },

    /// Division by a germ that is not multiplication invertible.
    #[error("non-invertible divisor: {what} (at byte {offset})")]
    NonInvertibleDivisor { what: String, offset: usize },

    /// Malformed expression text.
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    /// Evaluation point is too small for the iterated-log depth present.
    #[error("evaluation point {x} is too small for iterated-log depth {depth}")]
    XTooSmall { x: f64, depth: usize },

    /// Sample set unusable for valuation estimation.
    #[error("bad samples: {0}")]
    BadSamples(String),

    /// All samples vanish; the germ is a null-function candidate.
    #[error("all samples are zero: null-function candidate")]
    AllSamplesZero,

    /// Basis Gram matrix too ill-conditioned for a reliable fit.
    #[error("ill-conditioned basis: condition number {cond:.3e} exceeds {max:.3e}")]
    IllConditioned { cond: f64, max: f64 },

    /// Residual does not decay past the current exponent; the basis is
    /// likely incomplete.
    #[error("no valuation gap after exponent {exponent}: best residual estimate {best}")]
    NoValuationGap { exponent: f64, best: f64 },

    /// Quadrature refinement stalled before reaching the tolerance.
    #[error("quadrature did not converge at {nodes} nodes per panel")]
    NonConvergent { nodes: usize },

    /// Requested tolerance lies below the cancellation floor of the integral.
    #[error("requested precision unreachable: {0}")]
    PrecisionTooLow(String),

    /// Series/partial-sum index out of range.
    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    /// A v-asymptotic series invariant is violated.
    #[error("invalid series: {0}")]
    InvalidSeries(String),

    /// Invalid basis for a coefficient span.
    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

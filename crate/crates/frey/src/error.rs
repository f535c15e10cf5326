use thiserror::Error;

/// Errors raised by the library.
///
/// Input problems (bad parameters, excluded loci) are distinguished from
/// certificate failures, where a mathematical invariant that should hold
/// was found violated. The CLI maps the former to exit status 1 and the
/// latter to exit status 2.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreyError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid solution: gcd({a}, {b}) != 1")]
    InvalidSolution { a: String, b: String },

    #[error("singular curve: a^r + b^r = 0 for (r, a, b) = ({r}, {a}, {b})")]
    SingularCurve { r: u64, a: String, b: String },

    #[error("unsupported parity at q = 2: need a even and b = 1 mod 4, got (a, b) = ({a}, {b})")]
    UnsupportedParity { a: String, b: String },

    #[error("degenerate Legendre curve: ab = 0 forces t0 in {{0, 1}}")]
    DegenerateLegendre,

    #[error("bad reduction at q = {q}: {detail}")]
    BadReduction { q: u64, detail: String },

    #[error("prime q = {q} is out of scope: {detail}")]
    OutOfScopePrime { q: u64, detail: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("non-integral element at the prime above {q}: denominator {den} is not invertible")]
    NonIntegral { q: u64, den: String },

    #[error("invalid unit: {0}")]
    InvalidUnit(String),

    #[error("missing eigenvalue at q = {q}, prime label {label}")]
    MissingEigenvalue { q: u64, label: String },

    #[error("inconsistent L-polynomial: {0}")]
    InconsistentLPoly(String),

    #[error("trace recognition failed: {0}")]
    Recognition(String),

    /// A certificate check failed. `invariant` names the violated invariant.
    #[error("certificate failure [{invariant}]: {detail}")]
    Certificate { invariant: String, detail: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl FreyError {
    pub fn certificate(invariant: impl Into<String>, detail: impl Into<String>) -> Self {
        FreyError::Certificate {
            invariant: invariant.into(),
            detail: detail.into(),
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        FreyError::InvalidParameter(msg.into())
    }

    /// True when the error reports a violated mathematical invariant rather
    /// than bad input.
    pub fn is_certificate_failure(&self) -> bool {
        matches!(
            self,
            FreyError::Certificate { .. }
                | FreyError::NonIntegral { .. }
                | FreyError::InvalidUnit(_)
                | FreyError::MissingEigenvalue { .. }
                | FreyError::InconsistentLPoly(_)
                | FreyError::Recognition(_)
        )
    }

    /// Name of the violated invariant, for certificate failures.
    pub fn invariant(&self) -> Option<&str> {
        Some(match self {
            FreyError::Certificate { invariant, .. } => invariant,
            FreyError::NonIntegral { .. } => "integral-element",
            FreyError::InvalidUnit(_) => "unit",
            FreyError::MissingEigenvalue { .. } => "eigenvalue-present",
            FreyError::InconsistentLPoly(_) => "lpoly-consistent",
            FreyError::Recognition(_) => "trace-recognition",
            _ => return None,
        })
    }
}

pub type Result<T> = std::result::Result<T, FreyError>;

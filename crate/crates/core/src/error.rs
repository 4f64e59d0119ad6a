use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("float precision of {0} bits is below the minimum of 64")]
    PrecisionTooLow(u32),

    #[error("{op} requires exact (rational) operands")]
    NotExact { op: &'static str },

    #[error("{op} is undefined for the zero polynomial")]
    ZeroPolynomial { op: &'static str },

    #[error("interval [{lo}, {hi}] shows no sign change")]
    NoSignChange { lo: String, hi: String },

    #[error("degenerate mixed basis: the decomposition system is singular")]
    DegenerateBasis,

    #[error("mixed basis of length {needed} needs {needed} affine pairs, got {got}")]
    InsufficientPairs { needed: usize, got: usize },

    #[error("polynomial of degree {degree} does not fit a basis of degree {m}")]
    DegreeExceedsBasis { degree: usize, m: usize },

    #[error("{family}: {reason}")]
    InvalidParams { family: String, reason: String },

    #[error("{family}: missing parameter `{name}`")]
    MissingParam { family: String, name: String },

    #[error("malformed schedule: {0}")]
    MalformedSchedule(String),

    #[error("pole of the moment ratio at k = {k}, mu = {mu}")]
    Pole { k: usize, mu: String },

    #[error("{op}: {reason}")]
    OutsideDomain { op: &'static str, reason: String },

    #[error("{op} is not defined for the {family} family")]
    Unsupported { op: &'static str, family: String },

    #[error("infinite q-product: {0}")]
    InfiniteProduct(String),

    #[error("cannot parse `{0}` as a rational literal")]
    Parse(String),

    #[error("non-finite float value produced by {0}")]
    NonFinite(&'static str),

    #[error("series did not converge after {terms} terms")]
    SeriesDiverged { terms: usize },

    #[error("quadrature did not reach the requested tolerance (estimate {estimate}, error {error})")]
    QuadratureFailed { estimate: String, error: String },
}

pub type Result<T> = std::result::Result<T, Error>;

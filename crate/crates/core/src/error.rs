use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a unit: valuation of leading part is positive")]
    NotAUnit,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("non-integral exponent: {0}")]
    NonIntegralExponent(String),
    #[error("fixed-point iteration did not stabilize within the cap")]
    IterationCap,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("unsupported kind: {0}")]
    UnsupportedKind(String),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("dynamics undetermined at this point: {0}")]
    UndeterminedDynamics(String),
    #[error("too singular: partial Hodge heights not determined by valuations")]
    TooSingular,
    #[error("normalization violated: {0}")]
    NormalizationViolated(String),
    #[error("linear system not solvable: {0}")]
    NotSolvable(String),
    #[error("stability failure: {0}")]
    StabilityFailure(String),
    #[error("bad input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

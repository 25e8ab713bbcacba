use thiserror::Error;

/// Errors raised by the equivalence pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid observation `{id}`: {reason}")]
    InvalidObservation { id: String, reason: String },

    #[error("invalid mixture prior: {0}")]
    InvalidPrior(String),

    #[error("empty discovery set: no probability is >= {threshold}")]
    EmptyDiscoverySet { threshold: f64 },

    #[error("initial block {block} is empty (m = {m}, weights = {weights:?})")]
    EmptyBlock {
        block: usize,
        m: usize,
        weights: [f64; 3],
    },

    #[error("component {component} has zero responsibility mass")]
    ZeroResponsibility { component: usize },

    #[error("log-likelihood underflow: mixture density of gene {index} is zero")]
    LikelihoodUnderflow { index: usize },

    #[error("quadrature did not reach tolerance (estimate {value}, error {error})")]
    QuadratureFailure { value: f64, error: f64 },

    #[error("lemma hypotheses violated: {0}")]
    HypothesisViolation(String),

    #[error("every start failed to initialize: {0}")]
    NoUsableStart(String),
}

pub type Result<T> = std::result::Result<T, Error>;

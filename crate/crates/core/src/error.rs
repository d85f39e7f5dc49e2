use thiserror::Error;

/// Errors raised while building quadrature rules or reading tables.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    /// A requested precision exceeds the configured ceiling.
    #[error("resource limit: {requested} digits requested, ceiling is {limit}")]
    ResourceLimit { requested: u32, limit: u32 },

    /// Escalation reached `max_digits` without two consecutive runs agreeing.
    #[error("stabilization failed at {digits} digits: element {index} still disagrees")]
    StabilizationFailure { index: usize, digits: u32 },

    /// The working precision is too small for the computation to be trusted.
    /// Callers respond by escalating the precision.
    #[error("precision loss: {0}")]
    PrecisionLoss(String),

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Malformed or inconsistent table file.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A user-supplied integrand failed at a node.
    #[error("integrand failed at node {index}: {message}")]
    Integrand { index: usize, message: String },
}

pub type Result<T, E = QuadError> = std::result::Result<T, E>;

impl QuadError {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        QuadError::Contract(msg.into())
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        QuadError::PrecisionLoss(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        QuadError::Parse {
            line,
            message: msg.into(),
        }
    }
}

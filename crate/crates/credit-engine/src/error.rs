use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid instrument or curve definition.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A root search could not bracket a solution.
    #[error("no solution for {what} in bracket [{lo}, {hi}]")]
    Bracket { what: String, lo: f64, hi: f64 },

    /// A hedge solve produced an all-zero position vector.
    #[error("degenerate trade: least-squares solution is identically zero")]
    DegenerateTrade,
}

pub type Result<T> = std::result::Result<T, EngineError>;

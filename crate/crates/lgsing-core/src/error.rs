use thiserror::Error;

/// Errors surfaced by the engine.
#[derive(Error, Debug, Clone)]
pub enum EngineError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("denominator `{0}` does not simplify to a monomial")]
    NonMonomialDenominator(String),
    #[error("step budget exceeded in {0}")]
    BudgetExceeded(String),
    #[error("degree budget exceeded: {0}")]
    DegreeBudget(String),
    #[error("zero polynomial not allowed: {0}")]
    ZeroPolynomial(String),
    #[error("extension polynomial is reducible: {0}")]
    ReducibleExtension(String),
    #[error("unsupported field tower operation: {0}")]
    UnsupportedField(String),
    #[error("degree overflow building pencil: {0}")]
    DegreeOverflow(String),
    #[error("pencil has a fixed component: gcd(N, D) = {0}")]
    FixedComponent(String),
    #[error("clearing monomial does not clear denominators of `{0}`")]
    NotCleared(String),
    #[error("blow-up center disjoint from chart {0}")]
    CenterDisjoint(String),
    #[error("strict transform vanishes identically on the exceptional divisor")]
    StrictTransformZero,
    #[error("positive-dimensional component where points were expected: {0}")]
    PositiveDimensional(String),
    #[error("unsupported solution structure: {0}")]
    UnsupportedSolution(String),
    #[error("classification failed: {0}")]
    Classification(String),
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("script error in family {family}: {msg}")]
    Script { family: String, msg: String },
    #[error("catalog error: {0}")]
    Catalog(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, EngineError>;

impl From<std::io::Error> for EngineError {
    fn from(e: std::io::Error) -> Self {
        EngineError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for EngineError {
    fn from(e: serde_json::Error) -> Self {
        EngineError::Io(e.to_string())
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),
    #[error("length budget {budget} exceeded")]
    BudgetExceeded { budget: usize },
    #[error("division is not exact over Z[v, v^-1]")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("expression {0} is not reduced")]
    NotReduced(String),
    #[error("words {0} and {1} represent different elements")]
    DifferentElements(String, String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("conjugate {0} is not a generator in J")]
    NotInJ(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("subexpressions live on different words")]
    WordMismatch,
    #[error("target expression {0} does not represent the endpoint")]
    TargetMismatch(String),
    #[error("endpoints differ: {0} vs {1}")]
    EndpointMismatch(String, String),
    #[error("unknown format {0:?}")]
    UnknownFormat(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("{0}")]
    Parse(String),
}

use symcore::SymError;
use thiserror::Error;

use crate::report::CheckReport;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error(transparent)]
    Symbolic(#[from] SymError),
    #[error("metric is degenerate: its determinant vanishes identically")]
    DegenerateMetric,
    #[error("metric must be constant in x and the fields")]
    NonConstantMetric,
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        found: usize,
    },
    #[error("{what} must not depend on {depends_on}")]
    ForbiddenDependence { what: String, depends_on: String },
    #[error("supplied connection differs from the Levi-Civita one at {component}")]
    ConnectionMismatch { component: String },
    #[error("operator is not Hamiltonian")]
    OperatorNotHamiltonian(Box<CheckReport>),
    #[error("jet order above {max} requested while differentiating {var}")]
    JetOrderExceeded { var: String, max: u8 },
    #[error("no evolution rule available for {0}")]
    MissingRule(String),
    #[error("invalid problem file: {0}")]
    Problem(String),
    #[error("cannot parse {field}: {source}")]
    Parse {
        field: String,
        #[source]
        source: SymError,
    },
    #[error("unknown example `{0}`")]
    UnknownExample(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

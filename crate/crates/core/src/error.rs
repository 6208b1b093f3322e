use thiserror::Error;

/// Errors produced by group construction, table computation and bound evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("generator list is empty")]
    EmptyGeneratorList,

    #[error("generators have mismatched degrees ({0} vs {1})")]
    DegreeMismatch(usize, usize),

    #[error("group closure exceeded the order cap of {cap} elements")]
    OrderCapExceeded { cap: usize },

    #[error("unknown group family `{0}`")]
    UnknownFamily(String),

    #[error("group order {order} exceeds the brute-force pair budget (max {budget})")]
    BudgetExceeded { order: usize, budget: usize },

    #[error("class count {classes} exceeds the eigensolver budget (max {budget})")]
    ClassBudgetExceeded { classes: usize, budget: usize },

    #[error("eigenvalue degeneracy unresolved after {retries} random-combination retries")]
    EigenDegeneracyUnresolved { retries: usize },

    #[error("computed character table fails orthogonality checks (max residual {residual:e})")]
    OrthogonalityCheckFailed { residual: f64 },

    #[error("malformed table or group file: {0}")]
    FormatError(String),

    #[error("imported table violates invariants: {0}")]
    InvariantViolation(String),

    #[error("tensor product multiplicity for row {row} is not an integer (residual {residual:e})")]
    NonIntegerMultiplicity { row: usize, residual: f64 },

    #[error("character is not non-negative ({0}); the bound is unsound without it")]
    NotNonNegative(String),

    #[error("feasible-point sampler exhausted after {attempts} rejections")]
    SamplingExhausted { attempts: usize },

    #[error("Frobenius sum has imaginary residue {0:e}; the table is inconsistent")]
    ImaginaryResidue(f64),

    #[error("no unique permutation-character row found: {0}")]
    PermutationCharacterNotFound(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Every failure mode surfaced by the library.
///
/// Variants map one-to-one onto the certification failures the operations
/// can report; none of them is a bug in the caller's use of the API except
/// the precondition variants (`RankMismatch`, `IndexMismatch`, ...).
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("ball too wide for the requested operation: {0}")]
    BallTooWide(String),
    #[error("polynomial is reducible: {0}")]
    ReducibleDetected(String),
    #[error("rank deficient: expected {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },
    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("enumeration budget of {0} nodes exceeded")]
    EnumerationBudgetExceeded(u64),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("element is not a unit: {0}")]
    NotAUnit(String),
    #[error("not a subfield: {0}")]
    NotASubfield(String),
    #[error("field is not totally real")]
    NotTotallyReal,
    #[error("field is not Galois: only {found} of {degree} automorphisms certified")]
    NotGalois { found: usize, degree: usize },
    #[error("search exhausted after {0} candidates")]
    SearchExhausted(usize),
    #[error("vector does not come from a weak Minkowski unit (rank {rank}, need {needed})")]
    NotWeakMinkowski { rank: usize, needed: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("fixed field construction failed: {0}")]
    FixedFieldConstructionFailed(String),
    #[error("rational reconstruction failed with denominator bound {0}")]
    ReconstructionFailed(String),
    #[error("group order {order} exceeds budget {budget}")]
    OrderBudgetExceeded { order: usize, budget: usize },
    #[error("subgroup indices differ: {0} vs {1}")]
    IndexMismatch(usize, usize),
    #[error("form is not G-invariant: cross-block mass {0}")]
    InvarianceViolated(String),
    #[error("all restricted determinants vanish")]
    AllZero,
    #[error("block {0} is singular")]
    SingularBlock(usize),
    #[error("residual too large: {0}")]
    ResidualTooLarge(String),
    #[error("subgroup setup violated: {0}")]
    SetupViolated(String),
    #[error("bundle carries no class number")]
    MissingClassNumber,
    #[error("monomial count {0} exceeds budget")]
    CombinatorialBudgetExceeded(usize),
    #[error("term budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("polynomial is not even in every variable")]
    NotEven,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema(e.to_string())
    }
}

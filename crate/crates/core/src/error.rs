use thiserror::Error;

/// Every failure the library can report.
///
/// Resource and budget errors mean "infeasible at this scale", not "wrong":
/// the CLI maps them to a distinct exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("enumeration budget exceeded: {needed} points > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("alternating matrix required")]
    AlternatingRequired,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("retry exhausted after {0} attempts")]
    RetryExhausted(usize),
    #[error("construction degenerate: {0}")]
    ConstructionDegenerate(String),
    #[error("pivot degenerate: {0}")]
    PivotDegenerate(String),
    #[error("quadratic nonresidue encountered: {0}")]
    Nonresidue(String),
    #[error("zero pivot at ({0}, {1})")]
    ZeroPivot(usize, usize),
    #[error("singular input: {0}")]
    Singular(String),
    #[error("zero matrix")]
    ZeroMatrix,
    #[error("spectrum clustered: eigenvalue separation {0:e} below threshold")]
    SpectrumClustered(f64),
    #[error("input is not unitary symmetric (residual {0:e})")]
    NotUnitarySymmetric(f64),
    #[error("sample is off chart: {0}")]
    OffChart(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures that signal an exhausted budget rather than a wrong answer.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::ResourceLimit(_) | Error::BudgetExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

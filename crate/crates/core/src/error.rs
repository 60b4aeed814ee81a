use thiserror::Error;

pub type Result<T, E = RbError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum RbError {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("degenerate tightness: p = {p} rounds to b = {b} of d = {d} (effective p = {p_eff})")]
    DegenerateTightness { p: f64, d: u32, b: u32, p_eff: f64 },

    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("not a permutation of [0, {d}): {reason}")]
    NotAPermutation { d: u32, reason: String },

    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("brute force refused: d^n = {space} exceeds the limit {limit}")]
    OracleGuard { space: f64, limit: f64 },

    #[error("summation guard: n = {n} exceeds {limit}")]
    SummationGuard { n: usize, limit: usize },

    #[error("search budget of {budget} nodes exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("no swap pair for u = {u}, v = {v} outside the avoid set")]
    NoSwapPair { u: u32, v: u32 },

    #[error("variable {0} occurs in no constraint")]
    UnconstrainedVariable(usize),

    #[error("variable {0} has no self-unsatisfiable constraint")]
    NoSelfUnsatConstraint(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed model: {0}")]
    MalformedModel(String),

    #[error(transparent)]
    Dimacs(#[from] crate::encode::DimacsError),

    #[error(transparent)]
    Persist(#[from] crate::harness::PersistError),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

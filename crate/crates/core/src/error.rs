use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not square: {0} x {1}")]
    NotSquare(usize, usize),

    #[error("eigendecomposition did not converge")]
    EigenNoConvergence,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("infeasible planted block: {0}")]
    Infeasible(String),

    #[error("resampling cap of {0} attempts exceeded")]
    ResampleCap(usize),

    #[error("outside graph violates the eigenvalue condition: witness {witness} <= threshold {threshold}")]
    ConditionViolated { witness: f64, threshold: f64 },

    #[error("adversary edge {{{0}, {1}}} touches the planted set")]
    AdversaryTouchesPlanted(usize, usize),

    #[error("perturbation matrix is undefined after adversary edges were added")]
    AdversaryModified,

    #[error("extraction returned {found} vertices, expected {expected}")]
    ExtractionSize { found: usize, expected: usize },

    #[error("epsilon net needs {required} points, cap is {cap}")]
    NetCapExceeded { required: f64, cap: usize },

    #[error("brute force budget exceeded: C({n},{k}) = {count} > {cap}")]
    BudgetExceeded {
        n: usize,
        k: usize,
        count: u128,
        cap: u128,
    },

    #[error("LP solver could not certify either feasibility or infeasibility: {0}")]
    LpNumerical(String),

    #[error("certificate support violation at ({0}, {1})")]
    SupportViolation(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

use thiserror::Error;

use crate::graph::PointId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown point {0}")]
    UnknownPoint(PointId),
    #[error("({0}, {1}) is not an edge")]
    UnknownEdge(PointId, PointId),
    #[error("duplicate point {0}")]
    DuplicatePoint(PointId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(PointId, PointId),
    #[error("self-loop at point {0}")]
    SelfLoop(PointId),
    #[error("empty graph")]
    Empty,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("rim {0:?} is not contractible")]
    RimNotContractible(Vec<PointId>),
    #[error("edge ({0}, {1}) would not be simple after attachment")]
    EdgeNotSimple(PointId, PointId),
    #[error("space is not a digital {0}-sphere")]
    NotSphere(usize),
    #[error("point {0} is not simple")]
    NotSimple(PointId),
    #[error("dimension must be at least {min}, got {got}")]
    Dimension { min: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error("integer overflow during Smith normal form elimination")]
    Overflow,
    #[error("clique of dimension above the cap {0}; raise the cap to compute homology")]
    CliqueCapExceeded(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    Unknown(String),
    #[error("catalog entry `{name}` failed verification: {reason}")]
    Verification { name: String, reason: String },
    #[error("reading catalog data `{path}`: {reason}")]
    Data { path: String, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Invariants(#[from] InvariantsError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("coefficient c[{p}][{k}] = {value} lies outside the ball of point {p}")]
    Support { p: PointId, k: PointId, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("column {k} of the coefficient matrix sums to {sum}, not 1")]
    ColumnSum { k: PointId, sum: f64 },
    #[error("negative coefficient c[{p}][{k}] = {value}")]
    Negative { p: PointId, k: PointId, value: f64 },
    #[error("not a diffusion matrix (entries must be nonnegative, columns must sum to 1)")]
    NotDiffusion,
    #[error("coefficient matrix is not primitive; inspect limit_matrix diagnostics")]
    NotPrimitive,
    #[error("problem has a boundary clause; use solve_bvp")]
    UnexpectedBoundary,
    #[error("problem has no boundary clause; use solve_ivp")]
    MissingBoundary,
    #[error("norm {norm} exceeded the blow-up limit {limit} at step {step}")]
    Divergence { step: u64, norm: f64, limit: f64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid problem: {0}")]
    Problem(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

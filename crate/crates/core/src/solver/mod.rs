//! Explicit difference scheme `f^{t+1} = C f^t + g^t` on a digital space.

mod coefficients;
mod problem;
mod scheme;
mod spectral;

pub use coefficients::{stability_bound_check, CoefficientMatrix, Diagonal, COLUMN_SUM_TOL};
pub use problem::{
    solve, BoundarySpec, CoefficientSpec, DiagRule, DiagSpec, InitialSpec, Orientation, ProblemSpec, SpaceSpec,
};
pub use scheme::{
    elliptic_residual, elliptic_residual_on, solve_bvp, solve_ivp, step, Boundary, Coefficients, FieldState, Problem,
    Schedule, Trajectory, DEFAULT_BLOW_UP, DEFAULT_MAX_STEPS, DEFAULT_TOL,
};
pub use spectral::{
    is_irreducible, is_primitive, limit_matrix, period, stationary_solution, SpectralReport, DEFAULT_LIMIT_ITERS,
    DEFAULT_LIMIT_TOL,
};

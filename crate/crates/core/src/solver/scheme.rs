//! The explicit scheme `f^{t+1} = C(t) f^t + g^t` and its initial and
//! boundary value problems.

use std::fmt;
use std::sync::Arc;

use crate::error::SolverError;
use crate::graph::{DigitalSpace, PointId};
use crate::solver::CoefficientMatrix;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;
pub const DEFAULT_BLOW_UP: f64 = 1e6;

#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    pub t: u64,
    pub values: Vec<f64>,
}

impl FieldState {
    pub fn new(values: Vec<f64>) -> Self {
        FieldState { t: 0, values }
    }

    /// Sum of values, left to right.
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn norm1(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn distance1(&self, other: &FieldState) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).sum()
    }
}

type MatrixRule = Arc<dyn Fn(u64) -> CoefficientMatrix + Send + Sync>;
type VectorRule = Arc<dyn Fn(u64) -> Vec<f64> + Send + Sync>;

/// Constant `C` or a rule producing `C(t)`.
#[derive(Clone)]
pub enum Coefficients {
    Constant(CoefficientMatrix),
    Varying(MatrixRule),
}

impl Coefficients {
    pub fn at(&self, t: u64) -> CoefficientMatrix {
        match self {
            Coefficients::Constant(c) => c.clone(),
            Coefficients::Varying(rule) => rule(t),
        }
    }

    pub fn constant(&self) -> Option<&CoefficientMatrix> {
        match self {
            Coefficients::Constant(c) => Some(c),
            Coefficients::Varying(_) => None,
        }
    }
}

impl fmt::Debug for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            Coefficients::Varying(_) => f.write_str("Varying(<rule>)"),
        }
    }
}

/// Per-point values that may depend on the step index.
#[derive(Clone)]
pub enum Schedule {
    Constant(Vec<f64>),
    Varying(VectorRule),
}

impl Schedule {
    pub fn at(&self, t: u64) -> Vec<f64> {
        match self {
            Schedule::Constant(v) => v.clone(),
            Schedule::Varying(rule) => rule(t),
        }
    }
}

impl fmt::Debug for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Constant(v) => f.debug_tuple("Constant").field(v).finish(),
            Schedule::Varying(_) => f.write_str("Varying(<rule>)"),
        }
    }
}

/// Clamped subgraph `H` with values `s_k^t`, one per listed point.
#[derive(Clone, Debug)]
pub struct Boundary {
    pub points: Vec<PointId>,
    pub values: Schedule,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub space: DigitalSpace,
    pub coefficients: Coefficients,
    /// Source term `g^t`; `None` means homogeneous.
    pub source: Option<Schedule>,
    pub initial: Vec<f64>,
    pub boundary: Option<Boundary>,
    pub max_steps: u64,
    /// Stop once `||f^{t+1} - f^t||_1 < tol`.
    pub tol: Option<f64>,
    /// Abort when `||f^t||_1` exceeds this multiple of `max(||f^0||_1, 1)`.
    pub blow_up: f64,
}

impl Problem {
    /// Homogeneous initial value problem with default horizon settings.
    pub fn ivp(space: DigitalSpace, coefficients: CoefficientMatrix, initial: Vec<f64>) -> Self {
        Problem {
            space,
            coefficients: Coefficients::Constant(coefficients),
            source: None,
            initial,
            boundary: None,
            max_steps: DEFAULT_MAX_STEPS,
            tol: Some(DEFAULT_TOL),
            blow_up: DEFAULT_BLOW_UP,
        }
    }

    pub fn with_boundary(mut self, points: Vec<PointId>, values: Schedule) -> Self {
        self.boundary = Some(Boundary { points, values });
        self
    }

    pub fn with_horizon(mut self, max_steps: u64, tol: Option<f64>) -> Self {
        self.max_steps = max_steps;
        self.tol = tol;
        self
    }

    /// Checks sizes, support of constant coefficients and boundary points.
    pub fn validate(&self) -> Result<(), SolverError> {
        let n = self.space.len();
        if self.initial.len() != n {
            return Err(SolverError::Dimension {
                expected: n,
                got: self.initial.len(),
            });
        }
        if let Some(c) = self.coefficients.constant() {
            c.check_support(&self.space)?;
        }
        if let Some(Schedule::Constant(g)) = &self.source {
            if g.len() != n {
                return Err(SolverError::Dimension {
                    expected: n,
                    got: g.len(),
                });
            }
        }
        if let Some(b) = &self.boundary {
            for &p in &b.points {
                if !self.space.contains(p) {
                    return Err(crate::error::GraphError::UnknownPoint(p).into());
                }
            }
            if let Schedule::Constant(v) = &b.values {
                if v.len() != b.points.len() {
                    return Err(SolverError::Dimension {
                        expected: b.points.len(),
                        got: v.len(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// States `t = 0..=T` with the conserved sum and 1-norm of each.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub labels: Vec<PointId>,
    pub states: Vec<FieldState>,
    pub sums: Vec<f64>,
    pub norms: Vec<f64>,
    /// Whether the run stopped on the tolerance rather than the step cap.
    pub converged: bool,
}

impl Trajectory {
    pub fn last(&self) -> &FieldState {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// CSV with header `t,f_<label>...,S,norm1`, one row per state.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for l in &self.labels {
            out.push_str(&format!(",f_{l}"));
        }
        out.push_str(",S,norm1\n");
        for ((state, s), norm) in self.states.iter().zip(&self.sums).zip(&self.norms) {
            out.push_str(&state.t.to_string());
            for v in &state.values {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push_str(&format!(",{s},{norm}\n"));
        }
        out
    }

    /// Values of point `label` over time.
    pub fn series(&self, label: PointId) -> Option<Vec<f64>> {
        let i = self.labels.iter().position(|&l| l == label)?;
        Some(self.states.iter().map(|s| s.values[i]).collect())
    }
}

/// One application of the scheme: `C f + g`, with `t` advanced.
pub fn step(f: &FieldState, c: &CoefficientMatrix, g: Option<&[f64]>) -> Result<FieldState, SolverError> {
    if c.size() != f.values.len() {
        return Err(SolverError::Dimension {
            expected: f.values.len(),
            got: c.size(),
        });
    }
    let mut values = c.apply(&f.values);
    if let Some(g) = g {
        if g.len() != values.len() {
            return Err(SolverError::Dimension {
                expected: values.len(),
                got: g.len(),
            });
        }
        for (v, s) in values.iter_mut().zip(g) {
            *v += s;
        }
    }
    Ok(FieldState { t: f.t + 1, values })
}

pub fn solve_ivp(problem: &Problem) -> Result<Trajectory, SolverError> {
    if problem.boundary.is_some() {
        return Err(SolverError::UnexpectedBoundary);
    }
    run(problem, None)
}

/// Like [`solve_ivp`], overwriting the clamped points at `t = 0` and after
/// every step. Clamped values still act as sources for the next step.
pub fn solve_bvp(problem: &Problem) -> Result<Trajectory, SolverError> {
    let boundary = problem.boundary.as_ref().ok_or(SolverError::MissingBoundary)?;
    let idx = boundary
        .points
        .iter()
        .map(|&p| {
            problem
                .space
                .index_of(p)
                .ok_or(crate::error::GraphError::UnknownPoint(p))
        })
        .collect::<Result<Vec<_>, _>>()?;
    run(problem, Some((boundary, idx)))
}

fn clamp(state: &mut FieldState, boundary: &Boundary, idx: &[usize]) -> Result<(), SolverError> {
    let values = boundary.values.at(state.t);
    if values.len() != idx.len() {
        return Err(SolverError::Dimension {
            expected: idx.len(),
            got: values.len(),
        });
    }
    for (&i, v) in idx.iter().zip(values) {
        state.values[i] = v;
    }
    Ok(())
}

fn run(problem: &Problem, boundary: Option<(&Boundary, Vec<usize>)>) -> Result<Trajectory, SolverError> {
    problem.validate()?;
    let mut state = FieldState::new(problem.initial.clone());
    if let Some((b, idx)) = &boundary {
        clamp(&mut state, b, idx)?;
    }
    let limit = problem.blow_up * state.norm1().max(1.0);
    let mut traj = Trajectory {
        labels: problem.space.points().to_vec(),
        sums: vec![state.sum()],
        norms: vec![state.norm1()],
        states: vec![state],
        converged: false,
    };
    for _ in 0..problem.max_steps {
        let prev = traj.last();
        let c = problem.coefficients.at(prev.t);
        if problem.coefficients.constant().is_none() {
            c.check_support(&problem.space)?;
        }
        let g = problem.source.as_ref().map(|s| s.at(prev.t));
        let mut next = step(prev, &c, g.as_deref())?;
        if let Some((b, idx)) = &boundary {
            clamp(&mut next, b, idx)?;
        }
        let norm = next.norm1();
        if !norm.is_finite() || norm > limit {
            return Err(SolverError::Divergence {
                step: next.t,
                norm,
                limit,
            });
        }
        let delta = next.distance1(prev);
        traj.sums.push(next.sum());
        traj.norms.push(norm);
        traj.states.push(next);
        if problem.tol.is_some_and(|tol| delta < tol) {
            traj.converged = true;
            break;
        }
    }
    Ok(traj)
}

/// `||f - C f||_1`; zero exactly at fixed points of `C`.
pub fn elliptic_residual(c: &CoefficientMatrix, f: &[f64]) -> f64 {
    elliptic_residual_on(c, f, |_| true)
}

/// Residual restricted to the indices `keep` accepts.
pub fn elliptic_residual_on(c: &CoefficientMatrix, f: &[f64], keep: impl Fn(usize) -> bool) -> f64 {
    c.apply(f)
        .iter()
        .zip(f)
        .enumerate()
        .filter(|(i, _)| keep(*i))
        .map(|(_, (cf, x))| (x - cf).abs())
        .sum()
}

//! The six reference runs: heat and diffusion on the Klein bottle,
//! projective plane, Moebius strip and 4-sphere, plus the directed network
//! on the 8-point 2-sphere.

use std::collections::BTreeMap;

use digispace::solver::{
    elliptic_residual, elliptic_residual_on, solve, CoefficientSpec, DiagRule, DiagSpec, InitialSpec, Orientation,
    Problem, ProblemSpec, SpaceSpec, Trajectory,
};
use digispace::{PointId, SolverError};

use crate::error::CliError;

pub const EXPERIMENT_IDS: &[&str] = &[
    "klein_ivp",
    "projective_ivp",
    "projective_bvp",
    "moebius_ivp",
    "s4_ivp",
    "network_s2",
];

pub const HORIZON: u64 = 2000;
pub const TOL: f64 = 1e-10;
pub const LIMIT_TOL: f64 = 1e-6;
pub const SUM_TOL: f64 = 1e-9;
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Flow table of the directed network, `(from, to, share)`. Each source
/// keeps 0.2 and passes the rest along its outgoing arcs.
pub const NETWORK_FLOWS: &[(PointId, PointId, f64)] = &[
    (1, 1, 0.2),
    (1, 2, 0.2),
    (1, 3, 0.2),
    (1, 4, 0.2),
    (1, 5, 0.2),
    (2, 2, 0.2),
    (2, 1, 0.4),
    (2, 8, 0.4),
    (3, 3, 0.2),
    (3, 4, 0.4),
    (3, 8, 0.4),
    (4, 4, 0.2),
    (4, 5, 0.4),
    (4, 8, 0.4),
    (5, 5, 0.2),
    (5, 6, 0.4),
    (5, 8, 0.4),
    (6, 6, 0.2),
    (6, 7, 0.4),
    (6, 1, 0.4),
    (7, 7, 0.2),
    (7, 2, 0.4),
    (7, 1, 0.4),
    (8, 8, 0.2),
    (8, 6, 0.4),
    (8, 7, 0.4),
];

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub id: &'static str,
    pub title: &'static str,
    pub problem: ProblemSpec,
    pub plot_points: Vec<PointId>,
    pub expected_limit: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub id: &'static str,
    pub problem: Problem,
    pub trajectory: Trajectory,
    pub checks: Vec<Check>,
}

impl ExperimentOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn uniform(offdiag: f64, diag: DiagSpec) -> CoefficientSpec {
    CoefficientSpec {
        uniform_offdiag: Some(offdiag),
        diag: Some(diag),
        ..Default::default()
    }
}

fn impulse(point: PointId, value: f64) -> InitialSpec {
    InitialSpec::Impulse {
        point,
        value,
        rest: 0.0,
    }
}

fn base(space: &str, coefficients: CoefficientSpec, initial: InitialSpec) -> ProblemSpec {
    ProblemSpec {
        space: SpaceSpec::Named(space.to_owned()),
        coefficients,
        initial,
        boundary: None,
        source: None,
        steps: Some(HORIZON),
        tol: Some(TOL),
        blow_up: None,
    }
}

pub fn experiment(id: &str) -> Result<ExperimentSpec, CliError> {
    let spec = match id {
        "klein_ivp" => ExperimentSpec {
            id: "klein_ivp",
            title: "Klein bottle K, heat equation",
            problem: base("klein_bottle_16", uniform(0.1, DiagSpec::Value(0.4)), impulse(1, 16.0)),
            plot_points: vec![1, 3],
            expected_limit: Some(1.0),
        },
        "projective_ivp" => ExperimentSpec {
            id: "projective_ivp",
            title: "Projective plane P, diffusion",
            problem: base(
                "projective_plane_11",
                uniform(0.1, DiagSpec::Rule(DiagRule::Complement)),
                impulse(1, 11.0),
            ),
            plot_points: vec![1, 2, 10],
            expected_limit: Some(1.0),
        },
        "projective_bvp" => {
            let mut problem = base(
                "projective_plane_11",
                uniform(0.1, DiagSpec::Rule(DiagRule::Complement)),
                InitialSpec::Values(vec![0.0; 11]),
            );
            problem.boundary = Some(digispace::solver::BoundarySpec {
                points: vec![1, 11],
                values: vec![1.0, 4.0],
            });
            ExperimentSpec {
                id: "projective_bvp",
                title: "Projective plane P, boundary value problem",
                problem,
                plot_points: vec![2, 9, 10],
                expected_limit: None,
            }
        }
        "moebius_ivp" => {
            let diag_map: BTreeMap<PointId, f64> = (1..=12).map(|p| (p, if p <= 8 { 0.6 } else { 0.4 })).collect();
            let coefficients = CoefficientSpec {
                uniform_offdiag: Some(0.1),
                diag_map: Some(diag_map),
                ..Default::default()
            };
            ExperimentSpec {
                id: "moebius_ivp",
                title: "Moebius strip M, heat equation",
                problem: base("moebius_12", coefficients, impulse(1, 12.0)),
                plot_points: vec![1, 2, 12],
                expected_limit: Some(1.0),
            }
        }
        "s4_ivp" => ExperimentSpec {
            id: "s4_ivp",
            title: "4-sphere, heat equation",
            problem: base("s4_min", uniform(0.01, DiagSpec::Value(0.92)), impulse(1, 1.0)),
            plot_points: vec![1, 2, 6],
            expected_limit: Some(0.1),
        },
        "network_s2" => {
            let coefficients = CoefficientSpec {
                entries: Some(NETWORK_FLOWS.to_vec()),
                orientation: Orientation::SourceDestination,
                ..Default::default()
            };
            ExperimentSpec {
                id: "network_s2",
                title: "Directed network on the 8-point 2-sphere",
                problem: base("sphere2_8", coefficients, impulse(1, 8.0)),
                plot_points: vec![1, 2, 8],
                expected_limit: None,
            }
        }
        _ => return Err(CliError::Input(format!("unknown experiment '{id}'"))),
    };
    Ok(spec)
}

/// Solves the experiment and evaluates its expectations.
pub fn run(spec: &ExperimentSpec) -> Result<ExperimentOutcome, CliError> {
    let problem = spec.problem.resolve().map_err(|e| CliError::Input(e.to_string()))?;
    let trajectory = solve(&problem).map_err(|e| match e {
        SolverError::Divergence { .. } => CliError::Failure(e.to_string()),
        other => CliError::Input(other.to_string()),
    })?;
    let c = problem
        .coefficients
        .constant()
        .expect("experiments use constant coefficients")
        .clone();
    let mut checks = Vec::new();
    let last = trajectory.last();

    checks.push(Check {
        name: "diffusion",
        passed: c.is_diffusion(),
        detail: format!("column sums {:?}", round_all(&c.column_sums())),
    });
    checks.push(Check {
        name: "converged",
        passed: trajectory.converged,
        detail: format!("{} steps", last.t),
    });

    match &problem.boundary {
        None => {
            let s0 = trajectory.sums[0];
            let drift = trajectory.sums.iter().fold(0.0f64, |m, s| m.max((s - s0).abs()));
            checks.push(Check {
                name: "conservation",
                passed: drift < SUM_TOL,
                detail: format!("S = {s0}, max drift {drift:.3e}"),
            });
            let residual = elliptic_residual(&c, &last.values);
            checks.push(Check {
                name: "stationary",
                passed: residual < RESIDUAL_TOL,
                detail: format!("residual {residual:.3e}"),
            });
        }
        Some(b) => {
            let idx: Vec<usize> = b.points.iter().map(|&p| problem.space.index_of(p).unwrap()).collect();
            let clamps = b.values.at(0);
            let held = trajectory
                .states
                .iter()
                .all(|s| idx.iter().zip(&clamps).all(|(&i, &v)| s.values[i] == v));
            checks.push(Check {
                name: "clamps",
                passed: held,
                detail: format!("points {:?} held at {:?}", b.points, clamps),
            });
            let residual = elliptic_residual_on(&c, &last.values, |i| !idx.contains(&i));
            checks.push(Check {
                name: "stationary",
                passed: residual < RESIDUAL_TOL,
                detail: format!("residual on free points {residual:.3e}"),
            });
        }
    }
    if let Some(limit) = spec.expected_limit {
        let worst = last.values.iter().fold(0.0f64, |m, v| m.max((v - limit).abs()));
        checks.push(Check {
            name: "limit",
            passed: worst < LIMIT_TOL,
            detail: format!("max |f - {limit}| = {worst:.3e}"),
        });
    }
    Ok(ExperimentOutcome {
        id: spec.id,
        problem,
        trajectory,
        checks,
    })
}

fn round_all(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e9).round() / 1e9).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_experiment_resolves() {
        for id in EXPERIMENT_IDS {
            let spec = experiment(id).unwrap();
            assert_eq!(spec.id, *id);
            spec.problem.resolve().unwrap();
        }
        assert!(matches!(experiment("nope"), Err(CliError::Input(_))));
    }

    #[test]
    fn network_table_literal_reading_is_not_column_stochastic() {
        let spec = experiment("network_s2").unwrap();
        let mut literal = spec.problem.coefficients.clone();
        literal.orientation = Orientation::DestinationSource;
        let space = digispace::catalog::space("sphere2_8").unwrap();
        let c = literal.bind(&space).unwrap();
        assert!(!c.is_diffusion());
        assert!(c.row_sums().iter().all(|s| (s - 1.0).abs() < 1e-12));
        let err = c.check_diffusion(&space).unwrap_err();
        assert!(matches!(err, SolverError::ColumnSum { k: 1, .. }));
        let flows = spec.problem.coefficients.bind(&space).unwrap();
        assert!(flows.is_diffusion());
    }

    #[test]
    fn moebius_coefficients_are_doubly_stochastic() {
        let p = experiment("moebius_ivp").unwrap().problem.resolve().unwrap();
        let c = p.coefficients.constant().unwrap();
        assert!(c.is_diffusion());
        assert!(c.row_sums().iter().all(|s| (s - 1.0).abs() < 1e-12));
    }
}

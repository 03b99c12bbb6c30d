//! Problem files: the JSON form of an initial or boundary value problem.
//!
//! ```json
//! {
//!   "space": "klein_bottle_16",
//!   "coefficients": { "uniform_offdiag": 0.1, "diag": 0.4 },
//!   "initial": { "point": 1, "value": 16, "rest": 0 },
//!   "boundary": null,
//!   "steps": 2000,
//!   "tol": 1e-10
//! }
//! ```
//!
//! `space` is a catalog name or an inline graph. Coefficients are either
//! explicit `entries` (`[p, k, c_pk]`, destination first) or a uniform
//! off-diagonal value; `diag` is a number or `"complement"` and `diag_map`
//! overrides single diagonal entries. With `"orientation":
//! "source_destination"` each entry `[a, b, v]` is read as flow from `a`
//! to `b`, i.e. `c_ba = v`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::SolverError;
use crate::graph::{DigitalSpace, GraphJson, PointId};
use crate::solver::{
    solve_bvp, solve_ivp, Boundary, CoefficientMatrix, Coefficients, Diagonal, Problem, Schedule, Trajectory,
    DEFAULT_BLOW_UP, DEFAULT_MAX_STEPS, DEFAULT_TOL,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub space: SpaceSpec,
    pub coefficients: CoefficientSpec,
    pub initial: InitialSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundarySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blow_up: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceSpec {
    Named(String),
    Inline(GraphJson),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    #[default]
    DestinationSource,
    SourceDestination,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<(PointId, PointId, f64)>>,
    #[serde(default)]
    pub orientation: Orientation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform_offdiag: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diag: Option<DiagSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diag_map: Option<BTreeMap<PointId, f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DiagSpec {
    Value(f64),
    Rule(DiagRule),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagRule {
    Complement,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialSpec {
    Values(Vec<f64>),
    Impulse {
        point: PointId,
        value: f64,
        #[serde(default)]
        rest: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    pub points: Vec<PointId>,
    pub values: Vec<f64>,
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self, SolverError> {
        serde_json::from_str(text).map_err(|e| SolverError::Problem(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem spec serializes")
    }

    /// Loads the space, binds the coefficients and validates the result.
    pub fn resolve(&self) -> Result<Problem, SolverError> {
        let space = match &self.space {
            SpaceSpec::Named(name) => catalog::space(name)?,
            SpaceSpec::Inline(g) => DigitalSpace::from_json(g)?,
        };
        let c = self.coefficients.bind(&space)?;
        let initial = match &self.initial {
            InitialSpec::Values(v) => v.clone(),
            InitialSpec::Impulse { point, value, rest } => {
                let i = space
                    .index_of(*point)
                    .ok_or(crate::error::GraphError::UnknownPoint(*point))?;
                let mut v = vec![*rest; space.len()];
                v[i] = *value;
                v
            }
        };
        let mut problem = Problem::ivp(space, c, initial).with_horizon(
            self.steps.unwrap_or(DEFAULT_MAX_STEPS),
            Some(self.tol.unwrap_or(DEFAULT_TOL)),
        );
        problem.blow_up = self.blow_up.unwrap_or(DEFAULT_BLOW_UP);
        problem.source = self.source.clone().map(Schedule::Constant);
        problem.boundary = self.boundary.as_ref().map(|b| Boundary {
            points: b.points.clone(),
            values: Schedule::Constant(b.values.clone()),
        });
        problem.validate()?;
        Ok(problem)
    }
}

impl CoefficientSpec {
    pub fn bind(&self, space: &DigitalSpace) -> Result<CoefficientMatrix, SolverError> {
        let diag = self.diagonal_rule();
        match (&self.entries, self.uniform_offdiag) {
            (Some(_), Some(_)) => Err(SolverError::Problem(
                "coefficients: give either entries or uniform_offdiag, not both".into(),
            )),
            (Some(entries), None) => {
                let triples: Vec<_> = entries
                    .iter()
                    .map(|&(a, b, v)| match self.orientation {
                        Orientation::DestinationSource => (a, b, v),
                        Orientation::SourceDestination => (b, a, v),
                    })
                    .collect();
                let listed: BTreeSet<PointId> = triples.iter().filter(|t| t.0 == t.1).map(|t| t.0).collect();
                let mut c = CoefficientMatrix::bind(space, triples)?;
                if let Some(diag) = diag {
                    for (k, &label) in space.points().iter().enumerate() {
                        if listed.contains(&label) {
                            if self.diag_map.as_ref().is_some_and(|m| m.contains_key(&label)) {
                                return Err(SolverError::Problem(format!(
                                    "diagonal of point {label} given in entries and diag_map"
                                )));
                            }
                            continue;
                        }
                        let off: f64 = (0..space.len()).filter(|&p| p != k).map(|p| c.get(p, k)).sum();
                        c.set(k, k, diag.value(label, off));
                    }
                }
                Ok(c)
            }
            (None, offdiag) => {
                if offdiag.is_none() && self.diag_map.is_none() {
                    return Err(SolverError::Problem(
                        "coefficients: need entries, uniform_offdiag or diag_map".into(),
                    ));
                }
                let diag = diag.unwrap_or(Diagonal::ColumnComplement);
                if let Some(map) = &self.diag_map {
                    if let Some(p) = map.keys().find(|p| !space.contains(**p)) {
                        return Err(crate::error::GraphError::UnknownPoint(*p).into());
                    }
                }
                CoefficientMatrix::uniform(space, offdiag.unwrap_or(0.0), &diag)
            }
        }
    }

    fn diagonal_rule(&self) -> Option<Diagonal> {
        let base = self.diag.map(|d| match d {
            DiagSpec::Value(v) => Diagonal::Constant(v),
            DiagSpec::Rule(DiagRule::Complement) => Diagonal::ColumnComplement,
        });
        match &self.diag_map {
            Some(map) => Some(Diagonal::PerPoint(
                map.clone(),
                Box::new(base.unwrap_or(Diagonal::ColumnComplement)),
            )),
            None => base,
        }
    }
}

impl From<CoefficientMatrix> for Coefficients {
    fn from(c: CoefficientMatrix) -> Self {
        Coefficients::Constant(c)
    }
}

/// Runs `solve_bvp` when the problem has a boundary clause, `solve_ivp`
/// otherwise.
pub fn solve(problem: &Problem) -> Result<Trajectory, SolverError> {
    if problem.boundary.is_some() {
        solve_bvp(problem)
    } else {
        solve_ivp(problem)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_problem_parses() {
        let spec = ProblemSpec::from_json(
            r#"{"space":"klein_bottle_16","coefficients":{"uniform_offdiag":0.1,"diag":0.4},
                "initial":{"point":1,"value":16},"steps":5}"#,
        )
        .unwrap();
        let p = spec.resolve().unwrap();
        assert_eq!(p.initial[0], 16.0);
        assert_eq!(p.initial[1..].iter().sum::<f64>(), 0.0);
        assert_eq!(p.max_steps, 5);
        let c = p.coefficients.constant().unwrap();
        assert!(c.is_diffusion());
        let back = ProblemSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn inline_graph_and_entries() {
        let spec = ProblemSpec::from_json(
            r#"{"space":{"points":[1,2],"edges":[[1,2]]},
                "coefficients":{"entries":[[1,2,0.3],[2,1,0.5]],"diag":"complement"},
                "initial":[1,0],"boundary":null}"#,
        )
        .unwrap();
        let c = spec.resolve().unwrap().coefficients.constant().unwrap().clone();
        assert!((c.get(0, 1) - 0.3).abs() < 1e-15);
        assert!((c.get(0, 0) - 0.5).abs() < 1e-15);
        assert!((c.get(1, 1) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn orientation_transposes() {
        let g = DigitalSpace::path(2).unwrap();
        let spec = CoefficientSpec {
            entries: Some(vec![(1, 2, 0.25)]),
            orientation: Orientation::SourceDestination,
            ..Default::default()
        };
        let c = spec.bind(&g).unwrap();
        assert_eq!(c.get(1, 0), 0.25);
        assert_eq!(c.get(0, 1), 0.0);
    }

    #[test]
    fn diag_map_overrides() {
        let g = DigitalSpace::path(3).unwrap();
        let spec = CoefficientSpec {
            uniform_offdiag: Some(0.1),
            diag_map: Some(BTreeMap::from([(2, 0.5)])),
            ..Default::default()
        };
        let c = spec.bind(&g).unwrap();
        assert_eq!(c.get(1, 1), 0.5);
        assert!((c.get(0, 0) - 0.9).abs() < 1e-15);
    }

    #[test]
    fn bad_problems_are_rejected() {
        let bad = [
            r#"{"space":"nowhere","coefficients":{"uniform_offdiag":0.1},"initial":[1]}"#,
            r#"{"space":"s0_min","coefficients":{"uniform_offdiag":0.1},"initial":[1]}"#,
            r#"{"space":"s0_min","coefficients":{},"initial":[1,0]}"#,
            r#"{"space":"s0_min","coefficients":{"entries":[[1,2,0.5]]},"initial":[1,0]}"#,
            r#"{"space":"s0_min","coefficients":{"uniform_offdiag":0},"initial":[1,0],
                "boundary":{"points":[7],"values":[1]}}"#,
            r#"{"space":"s0_min","coefficients":{"uniform_offdiag":0},"initial":[1,0],"extra":1}"#,
        ];
        for text in bad {
            let r = ProblemSpec::from_json(text).and_then(|s| s.resolve());
            assert!(r.is_err(), "{text}");
        }
    }

    #[test]
    fn solve_dispatches_on_boundary() {
        let spec = ProblemSpec::from_json(
            r#"{"space":"s1_min","coefficients":{"uniform_offdiag":0.25,"diag":"complement"},
                "initial":[0,0,0,0],"boundary":{"points":[1],"values":[2]},"steps":3}"#,
        )
        .unwrap();
        let t = solve(&spec.resolve().unwrap()).unwrap();
        assert!(t.states.iter().all(|s| s.values[0] == 2.0));
    }
}

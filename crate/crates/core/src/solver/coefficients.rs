//! Coefficient matrices `C = [c_pk]` of the explicit scheme.
//!
//! Row `p` is the destination and column `k` the source, so one step is
//! `f_p <- sum_k c_pk f_k`. A diffusion matrix is column stochastic: the
//! amount leaving point `k` is redistributed in full over its ball.

use std::collections::BTreeMap;

use crate::error::SolverError;
use crate::graph::{DigitalSpace, PointId};

/// Absolute tolerance on column sums for [`CoefficientMatrix::is_diffusion`].
pub const COLUMN_SUM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientMatrix {
    n: usize,
    values: Vec<f64>,
}

/// How the diagonal of a uniform coefficient table is filled.
#[derive(Clone, Debug, PartialEq)]
pub enum Diagonal {
    Constant(f64),
    /// `c_kk = 1 - sum_{p != k} c_pk`, making every column sum to 1.
    ColumnComplement,
    /// Per-point values; points not listed fall back to the inner rule.
    PerPoint(BTreeMap<PointId, f64>, Box<Diagonal>),
}

impl CoefficientMatrix {
    pub fn zeros(n: usize) -> Self {
        CoefficientMatrix {
            n,
            values: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Row-major dense values.
    pub fn from_dense(n: usize, values: Vec<f64>) -> Result<Self, SolverError> {
        if values.len() != n * n {
            return Err(SolverError::Dimension {
                expected: n * n,
                got: values.len(),
            });
        }
        Ok(CoefficientMatrix { n, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, SolverError> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(SolverError::Dimension {
                expected: n,
                got: r.len(),
            });
        }
        Ok(CoefficientMatrix {
            n,
            values: rows.concat(),
        })
    }

    /// Builds a matrix from `(p, k, value)` label triples and checks that
    /// every nonzero entry lies inside a ball of `space`. Repeated pairs are
    /// rejected rather than summed.
    pub fn bind<I>(space: &DigitalSpace, entries: I) -> Result<Self, SolverError>
    where
        I: IntoIterator<Item = (PointId, PointId, f64)>,
    {
        let n = space.len();
        let mut m = Self::zeros(n);
        let mut seen = vec![false; n * n];
        for (p, k, value) in entries {
            let ip = space.index_of(p).ok_or(crate::error::GraphError::UnknownPoint(p))?;
            let ik = space.index_of(k).ok_or(crate::error::GraphError::UnknownPoint(k))?;
            if std::mem::replace(&mut seen[ip * n + ik], true) {
                return Err(SolverError::Problem(format!("coefficient c[{p}][{k}] given twice")));
            }
            m.set(ip, ik, value);
        }
        m.check_support(space)?;
        Ok(m)
    }

    /// `offdiag` on every edge in both directions, diagonal per `diag`.
    pub fn uniform(space: &DigitalSpace, offdiag: f64, diag: &Diagonal) -> Result<Self, SolverError> {
        let n = space.len();
        let mut m = Self::zeros(n);
        for (u, v) in space.edges() {
            let (iu, iv) = (space.index_of(u).unwrap(), space.index_of(v).unwrap());
            m.set(iu, iv, offdiag);
            m.set(iv, iu, offdiag);
        }
        for (k, &label) in space.points().iter().enumerate() {
            let off: f64 = (0..n).filter(|&p| p != k).map(|p| m.get(p, k)).sum();
            m.set(k, k, diag.value(label, off));
        }
        Ok(m)
    }

    /// Rejects nonzero entries between distinct non-adjacent points.
    pub fn check_support(&self, space: &DigitalSpace) -> Result<(), SolverError> {
        if space.len() != self.n {
            return Err(SolverError::Dimension {
                expected: space.len(),
                got: self.n,
            });
        }
        for p in 0..self.n {
            for k in 0..self.n {
                let value = self.get(p, k);
                if value != 0.0 && p != k {
                    let (lp, lk) = (space.points()[p], space.points()[k]);
                    if !space.has_edge(lp, lk) {
                        return Err(SolverError::Support { p: lp, k: lk, value });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for p in 0..self.n {
            for k in 0..self.n {
                t.set(k, p, self.get(p, k));
            }
        }
        t
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, p: usize, k: usize) -> f64 {
        self.values[p * self.n + k]
    }

    pub fn set(&mut self, p: usize, k: usize, v: f64) {
        self.values[p * self.n + k] = v;
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.n).map(|k| (0..self.n).map(|p| self.get(p, k)).sum()).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|p| self.values[p * self.n..(p + 1) * self.n].iter().sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Nonnegative entries and every column summing to 1 within
    /// [`COLUMN_SUM_TOL`].
    pub fn is_diffusion(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0) && self.column_sums().iter().all(|s| (s - 1.0).abs() <= COLUMN_SUM_TOL)
    }

    /// Like [`is_diffusion`](Self::is_diffusion), naming the first failing
    /// entry or column.
    pub fn check_diffusion(&self, space: &DigitalSpace) -> Result<(), SolverError> {
        for p in 0..self.n {
            for k in 0..self.n {
                let value = self.get(p, k);
                if value < 0.0 {
                    return Err(SolverError::Negative {
                        p: space.points()[p],
                        k: space.points()[k],
                        value,
                    });
                }
            }
        }
        for (k, sum) in self.column_sums().into_iter().enumerate() {
            if (sum - 1.0).abs() > COLUMN_SUM_TOL {
                return Err(SolverError::ColumnSum {
                    k: space.points()[k],
                    sum,
                });
            }
        }
        Ok(())
    }

    /// `C f`, summing each row left to right.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|p| {
                self.values[p * self.n..(p + 1) * self.n]
                    .iter()
                    .zip(f)
                    .map(|(c, x)| c * x)
                    .sum()
            })
            .collect()
    }

    pub fn mul(&self, other: &CoefficientMatrix) -> CoefficientMatrix {
        assert_eq!(self.n, other.n, "matrix sizes differ");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.values[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &CoefficientMatrix) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Nonzero entries as `(p, k, value)` index triples.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(move |(i, &v)| (i / self.n, i % self.n, v))
    }
}

impl Diagonal {
    pub(crate) fn value(&self, label: PointId, offdiag_column_sum: f64) -> f64 {
        match self {
            Diagonal::Constant(v) => *v,
            Diagonal::ColumnComplement => 1.0 - offdiag_column_sum,
            Diagonal::PerPoint(map, fallback) => match map.get(&label) {
                Some(v) => *v,
                None => fallback.value(label, offdiag_column_sum),
            },
        }
    }
}

/// Sufficient stability condition: every `|c_pk|` strictly below `1/n` at
/// every sampled time.
pub fn stability_bound_check<'a, I>(samples: I, n: usize) -> bool
where
    I: IntoIterator<Item = &'a CoefficientMatrix>,
{
    let bound = 1.0 / n as f64;
    samples.into_iter().all(|c| c.max_abs() < bound)
}

//! Limit behaviour of constant diffusion matrices: irreducibility,
//! primitivity, the limit matrix `C^inf` and stationary solutions.

use std::collections::VecDeque;

use crate::error::SolverError;
use crate::solver::{CoefficientMatrix, FieldState};

pub const DEFAULT_LIMIT_TOL: f64 = 1e-13;
pub const DEFAULT_LIMIT_ITERS: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    pub irreducible: bool,
    pub primitive: bool,
    /// `lim C^t`, when the powers settle and the limit satisfies
    /// `C C^inf = C^inf`.
    pub limit: Option<CoefficientMatrix>,
    /// Common column of the limit, present only when all columns agree.
    pub stationary: Option<Vec<f64>>,
    /// Number of squarings performed.
    pub iterations: usize,
    /// `max |C C^inf - C^inf|` for the last power computed.
    pub residual: f64,
}

/// Successors of each index in the support digraph (edge `k -> p` when
/// `c_pk != 0`, i.e. mass flows from `k` to `p`).
fn successors(c: &CoefficientMatrix) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); c.size()];
    for (p, k, _) in c.nonzeros() {
        out[k].push(p);
    }
    out
}

fn bfs_levels(adj: &[Vec<usize>], start: usize) -> Vec<Option<usize>> {
    let mut level = vec![None; adj.len()];
    level[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let next = level[v].unwrap() + 1;
        for &w in &adj[v] {
            if level[w].is_none() {
                level[w] = Some(next);
                queue.push_back(w);
            }
        }
    }
    level
}

/// The support digraph is strongly connected.
pub fn is_irreducible(c: &CoefficientMatrix) -> bool {
    let n = c.size();
    if n == 0 {
        return false;
    }
    let fwd = successors(c);
    let mut bwd = vec![Vec::new(); n];
    for (k, succ) in fwd.iter().enumerate() {
        for &p in succ {
            bwd[p].push(k);
        }
    }
    bfs_levels(&fwd, 0).iter().all(Option::is_some) && bfs_levels(&bwd, 0).iter().all(Option::is_some)
}

/// Gcd of cycle lengths of an irreducible support digraph.
///
/// With BFS levels from any root, the period is the gcd of
/// `level(k) + 1 - level(p)` over all support edges `k -> p`.
pub fn period(c: &CoefficientMatrix) -> Option<usize> {
    if !is_irreducible(c) {
        return None;
    }
    let succ = successors(c);
    let level = bfs_levels(&succ, 0);
    let mut g = 0usize;
    for (k, ps) in succ.iter().enumerate() {
        for &p in ps {
            let lk = level[k].unwrap() as i64;
            let lp = level[p].unwrap() as i64;
            g = gcd(g, (lk + 1 - lp).unsigned_abs() as usize);
        }
    }
    Some(g)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Irreducible with period 1.
pub fn is_primitive(c: &CoefficientMatrix) -> bool {
    period(c) == Some(1)
}

/// Repeated squaring of a constant diffusion matrix.
///
/// Stops when successive powers differ by less than `tol` in max-norm. A
/// settled power only counts as the limit if it is also a fixed point of
/// `C` (periodic matrices can square to a fixed point that `C^t` never
/// approaches).
pub fn limit_matrix(c: &CoefficientMatrix, tol: f64, max_iter: usize) -> Result<SpectralReport, SolverError> {
    if !c.is_diffusion() {
        return Err(SolverError::NotDiffusion);
    }
    let irreducible = is_irreducible(c);
    let primitive = irreducible && is_primitive(c);
    let mut power = c.clone();
    let mut iterations = 0;
    let mut settled = false;
    while iterations < max_iter {
        let next = power.mul(&power);
        iterations += 1;
        let diff = next.max_abs_diff(&power);
        power = next;
        if diff < tol {
            settled = true;
            break;
        }
    }
    let residual = c.mul(&power).max_abs_diff(&power);
    let limit = (settled && residual < tol.max(1e-12) * 10.0).then_some(power);
    let stationary = limit.as_ref().and_then(|l| equal_column(l, tol.max(1e-12) * 10.0));
    Ok(SpectralReport {
        irreducible,
        primitive: primitive && stationary.is_some(),
        limit,
        stationary,
        iterations,
        residual,
    })
}

/// The column shared by every column of `m`, averaged, if they agree
/// within `tol`.
fn equal_column(m: &CoefficientMatrix, tol: f64) -> Option<Vec<f64>> {
    let n = m.size();
    for k in 1..n {
        for p in 0..n {
            if (m.get(p, k) - m.get(p, 0)).abs() > tol {
                return None;
            }
        }
    }
    Some(
        (0..n)
            .map(|p| (0..n).map(|k| m.get(p, k)).sum::<f64>() / n as f64)
            .collect(),
    )
}

/// `f^inf = S c` for a primitive diffusion matrix, with `S = sum f^0`.
pub fn stationary_solution(c: &CoefficientMatrix, f0: &FieldState) -> Result<FieldState, SolverError> {
    if f0.values.len() != c.size() {
        return Err(SolverError::Dimension {
            expected: c.size(),
            got: f0.values.len(),
        });
    }
    if !c.is_diffusion() {
        return Err(SolverError::NotDiffusion);
    }
    if !is_primitive(c) {
        return Err(SolverError::NotPrimitive);
    }
    let report = limit_matrix(c, DEFAULT_LIMIT_TOL, DEFAULT_LIMIT_ITERS)?;
    let column = report.stationary.ok_or(SolverError::NotPrimitive)?;
    let s = f0.sum();
    Ok(FieldState {
        t: f0.t,
        values: column.iter().map(|ck| s * ck).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::solver::{elliptic_residual, Diagonal};

    fn klein_matrix() -> CoefficientMatrix {
        let k = catalog::klein_bottle_16().unwrap().space;
        CoefficientMatrix::uniform(&k, 0.1, &Diagonal::Constant(0.4)).unwrap()
    }

    #[test]
    fn identity_is_reducible() {
        let id = CoefficientMatrix::identity(3);
        assert!(!is_irreducible(&id));
        assert!(!is_primitive(&id));
        let r = limit_matrix(&id, 1e-12, 32).unwrap();
        assert!(!r.primitive);
        assert!(r.stationary.is_none());
        assert_eq!(
            stationary_solution(&id, &FieldState::new(vec![1.0, 0.0, 0.0])),
            Err(SolverError::NotPrimitive)
        );
    }

    #[test]
    fn two_cycle_is_periodic() {
        let swap = CoefficientMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(is_irreducible(&swap));
        assert_eq!(period(&swap), Some(2));
        assert!(!is_primitive(&swap));
        let r = limit_matrix(&swap, 1e-12, 32).unwrap();
        assert!(r.limit.is_none());
        assert!(!r.primitive);
    }

    #[test]
    fn klein_limit_is_uniform() {
        let c = klein_matrix();
        assert!(is_irreducible(&c));
        assert!(is_primitive(&c));
        let r = limit_matrix(&c, 1e-13, 64).unwrap();
        assert!(r.primitive);
        for v in r.stationary.as_ref().unwrap() {
            assert!((v - 1.0 / 16.0).abs() < 1e-12);
        }
        let l = r.limit.unwrap();
        assert!(c.mul(&l).max_abs_diff(&l) < 1e-12);
        let mut f0 = vec![0.0; 16];
        f0[0] = 16.0;
        let f = stationary_solution(&c, &FieldState::new(f0)).unwrap();
        for v in &f.values {
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert!(elliptic_residual(&c, &f.values) < 1e-9);
    }

    #[test]
    fn stationary_input_is_returned() {
        let c = klein_matrix();
        let f0 = FieldState::new(vec![0.5; 16]);
        let f = stationary_solution(&c, &f0).unwrap();
        assert!(f.distance1(&f0) < 1e-12);
    }

    #[test]
    fn non_diffusion_rejected() {
        let m = CoefficientMatrix::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert_eq!(limit_matrix(&m, 1e-12, 10), Err(SolverError::NotDiffusion));
    }
}

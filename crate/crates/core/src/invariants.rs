//! Euler characteristic and integral homology of the clique complex.

use serde::Serialize;

use crate::error::InvariantsError;
use crate::graph::{DigitalSpace, PointId};

/// Default cap on simplex dimension for homology.
pub const DEFAULT_MAX_DIM: usize = 6;

/// Cliques of a graph grouped by dimension (a k-simplex has k+1 points).
///
/// Simplices are sorted label lists; each dimension is sorted
/// lexicographically, which fixes the boundary-matrix bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueComplex {
    simplices: Vec<Vec<Vec<PointId>>>,
    truncated: bool,
}

impl CliqueComplex {
    /// Highest dimension with at least one simplex, `None` when empty.
    pub fn max_dim(&self) -> Option<usize> {
        self.simplices.iter().rposition(|s| !s.is_empty())
    }

    pub fn simplices(&self, k: usize) -> &[Vec<PointId>] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn counts(&self) -> Vec<usize> {
        let top = self.max_dim().map_or(0, |d| d + 1);
        self.simplices[..top].iter().map(Vec::len).collect()
    }

    /// True when some clique was larger than the dimension cap allowed.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.counts())
    }
}

fn alternating_sum(counts: &[usize]) -> i64 {
    counts
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

/// Enumerates every clique with at most `max_dim + 1` points.
pub fn clique_complex(g: &DigitalSpace, max_dim: usize) -> CliqueComplex {
    let mut simplices: Vec<Vec<Vec<PointId>>> = vec![Vec::new(); max_dim + 1];
    let mut truncated = false;
    let mut current = Vec::new();
    for i in 0..g.len() {
        let cand: Vec<usize> = g.neighbor_indices(i).iter().copied().filter(|&j| j > i).collect();
        current.push(i);
        expand(g, &mut current, &cand, max_dim, &mut simplices, &mut truncated);
        current.pop();
    }
    for dim in &mut simplices {
        dim.sort();
    }
    CliqueComplex { simplices, truncated }
}

fn expand(
    g: &DigitalSpace,
    current: &mut Vec<usize>,
    cand: &[usize],
    max_dim: usize,
    out: &mut [Vec<Vec<PointId>>],
    truncated: &mut bool,
) {
    out[current.len() - 1].push(current.iter().map(|&i| g.points()[i]).collect());
    if current.len() == max_dim + 1 {
        *truncated |= !cand.is_empty();
        return;
    }
    for (pos, &w) in cand.iter().enumerate() {
        let nbrs = g.neighbor_indices(w);
        let next: Vec<usize> = cand[pos + 1..]
            .iter()
            .copied()
            .filter(|x| nbrs.binary_search(x).is_ok())
            .collect();
        current.push(w);
        expand(g, current, &next, max_dim, out, truncated);
        current.pop();
    }
}

/// Alternating sum of clique counts over all clique sizes.
pub fn euler_characteristic(g: &DigitalSpace) -> i64 {
    let mut counts: Vec<usize> = Vec::new();
    fn count(g: &DigitalSpace, size: usize, cand: &[usize], counts: &mut Vec<usize>) {
        if counts.len() < size {
            counts.push(0);
        }
        counts[size - 1] += 1;
        for (pos, &w) in cand.iter().enumerate() {
            let nbrs = g.neighbor_indices(w);
            let next: Vec<usize> = cand[pos + 1..]
                .iter()
                .copied()
                .filter(|x| nbrs.binary_search(x).is_ok())
                .collect();
            count(g, size + 1, &next, counts);
        }
    }
    for i in 0..g.len() {
        let cand: Vec<usize> = g.neighbor_indices(i).iter().copied().filter(|&j| j > i).collect();
        count(g, 1, &cand, &mut counts);
    }
    alternating_sum(&counts)
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Checked product; `None` on overflow or shape mismatch.
    pub fn checked_mul(&self, other: &IntMatrix) -> Option<IntMatrix> {
        if self.cols != other.rows {
            return None;
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).checked_add(a.checked_mul(other.get(k, j))?)?;
                    out.set(i, j, v);
                }
            }
        }
        Some(out)
    }
}

/// Boundary map from k-simplices to (k-1)-simplices.
///
/// Rows index the (k-1)-simplices and columns the k-simplices, both in
/// lexicographic order. Omitting vertex `i` of a simplex contributes
/// `(-1)^i`. For `k = 0` the matrix has zero rows.
pub fn boundary_matrix(complex: &CliqueComplex, k: usize) -> IntMatrix {
    let cols = complex.simplices(k);
    if k == 0 {
        return IntMatrix::zeros(0, cols.len());
    }
    let rows = complex.simplices(k - 1);
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for (c, simplex) in cols.iter().enumerate() {
        for i in 0..simplex.len() {
            let mut face = simplex.clone();
            face.remove(i);
            let r = rows.binary_search(&face).expect("clique complex is closed under faces");
            m.set(r, c, if i % 2 == 0 { 1 } else { -1 });
        }
    }
    m
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Elementary divisors `d1 | d2 | ...` (all positive) of an integer matrix.
///
/// Elimination uses checked `i64` arithmetic; any overflow is reported as
/// [`InvariantsError::Overflow`].
pub fn smith_normal_form(m: &IntMatrix) -> Result<Vec<i64>, InvariantsError> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero magnitude in the trailing block.
        let mut pivot = None;
        for i in t..rows {
            for j in t..cols {
                let v = a.get(i, j);
                if v != 0 && pivot.is_none_or(|(_, _, p): (usize, usize, i64)| v.abs() < p) {
                    pivot = Some((i, j, v.abs()));
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        swap_rows(&mut a, t, pi);
        swap_cols(&mut a, t, pj);
        loop {
            let p = a.get(t, t);
            let mut clean = true;
            for i in t + 1..rows {
                let v = a.get(i, t);
                if v != 0 {
                    let q = v / p;
                    row_axpy(&mut a, i, t, q)?;
                    if a.get(i, t) != 0 {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                let v = a.get(t, j);
                if v != 0 {
                    let q = v / p;
                    col_axpy(&mut a, j, t, q)?;
                    if a.get(t, j) != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
            // A remainder survived: move the smallest entry of row/column t
            // into the pivot and repeat.
            let mut best = (t, t, a.get(t, t).abs());
            for i in t + 1..rows {
                let v = a.get(i, t).abs();
                if v != 0 && v < best.2 {
                    best = (i, t, v);
                }
            }
            for j in t + 1..cols {
                let v = a.get(t, j).abs();
                if v != 0 && v < best.2 {
                    best = (t, j, v);
                }
            }
            swap_rows(&mut a, t, best.0);
            swap_cols(&mut a, t, best.1);
        }
        diag.push(a.get(t, t).abs());
        t += 1;
    }
    // Diagonal to divisibility chain: (a, b) ~ (gcd, lcm).
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = gcd(diag[i], diag[j]);
            let l = (diag[i] / g).checked_mul(diag[j]).ok_or(InvariantsError::Overflow)?;
            diag[i] = g;
            diag[j] = l;
        }
    }
    Ok(diag)
}

fn swap_rows(a: &mut IntMatrix, r1: usize, r2: usize) {
    if r1 != r2 {
        for c in 0..a.cols {
            a.data.swap(r1 * a.cols + c, r2 * a.cols + c);
        }
    }
}

fn swap_cols(a: &mut IntMatrix, c1: usize, c2: usize) {
    if c1 != c2 {
        for r in 0..a.rows {
            a.data.swap(r * a.cols + c1, r * a.cols + c2);
        }
    }
}

/// row[dst] -= q * row[src]
fn row_axpy(a: &mut IntMatrix, dst: usize, src: usize, q: i64) -> Result<(), InvariantsError> {
    for c in 0..a.cols {
        let s = a.get(src, c);
        if s != 0 {
            let v = s
                .checked_mul(q)
                .and_then(|x| a.get(dst, c).checked_sub(x))
                .ok_or(InvariantsError::Overflow)?;
            a.set(dst, c, v);
        }
    }
    Ok(())
}

/// col[dst] -= q * col[src]
fn col_axpy(a: &mut IntMatrix, dst: usize, src: usize, q: i64) -> Result<(), InvariantsError> {
    for r in 0..a.rows {
        let s = a.get(r, src);
        if s != 0 {
            let v = s
                .checked_mul(q)
                .and_then(|x| a.get(r, dst).checked_sub(x))
                .ok_or(InvariantsError::Overflow)?;
            a.set(r, dst, v);
        }
    }
    Ok(())
}

/// Euler characteristic, Betti numbers and torsion of the clique complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    #[serde(rename = "chi")]
    pub euler_characteristic: i64,
    pub betti: Vec<usize>,
    /// Torsion coefficients (> 1) of `H_k`, one list per dimension.
    pub torsion: Vec<Vec<i64>>,
}

impl HomologyProfile {
    /// Profile with no torsion.
    pub fn free(betti: &[usize]) -> Self {
        HomologyProfile {
            euler_characteristic: alternating_sum(betti),
            betti: betti.to_vec(),
            torsion: vec![Vec::new(); betti.len()],
        }
    }

    pub fn with_torsion(mut self, dim: usize, coeffs: &[i64]) -> Self {
        self.torsion[dim] = coeffs.to_vec();
        self
    }

    /// Same groups in every dimension, treating missing dimensions as
    /// trivial.
    pub fn same_groups(&self, other: &HomologyProfile) -> bool {
        let dims = self.betti.len().max(other.betti.len());
        let empty = Vec::new();
        (0..dims).all(|k| {
            self.betti.get(k).copied().unwrap_or(0) == other.betti.get(k).copied().unwrap_or(0)
                && self.torsion.get(k).unwrap_or(&empty) == other.torsion.get(k).unwrap_or(&empty)
        })
    }

    /// Euler characteristic recomputed from the Betti numbers.
    pub fn betti_euler(&self) -> i64 {
        alternating_sum(&self.betti)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("profile serializes")
    }
}

pub fn homology(g: &DigitalSpace) -> Result<HomologyProfile, InvariantsError> {
    homology_with_cap(g, DEFAULT_MAX_DIM)
}

pub fn homology_with_cap(g: &DigitalSpace, max_dim: usize) -> Result<HomologyProfile, InvariantsError> {
    let complex = clique_complex(g, max_dim);
    if complex.truncated() {
        return Err(InvariantsError::CliqueCapExceeded(max_dim));
    }
    complex_homology(&complex)
}

pub fn complex_homology(complex: &CliqueComplex) -> Result<HomologyProfile, InvariantsError> {
    let Some(top) = complex.max_dim() else {
        return Ok(HomologyProfile {
            euler_characteristic: 0,
            betti: Vec::new(),
            torsion: Vec::new(),
        });
    };
    // divisors[k] = elementary divisors of the boundary map out of dimension k.
    let divisors = (0..=top + 1)
        .map(|k| {
            if k == 0 {
                Ok(Vec::new())
            } else {
                smith_normal_form(&boundary_matrix(complex, k))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut betti = Vec::with_capacity(top + 1);
    let mut torsion = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let cycles = complex.simplices(k).len() - divisors[k].len();
        betti.push(cycles - divisors[k + 1].len());
        torsion.push(divisors[k + 1].iter().copied().filter(|&d| d > 1).collect());
    }
    Ok(HomologyProfile {
        euler_characteristic: complex.euler_characteristic(),
        betti,
        torsion,
    })
}

//! Canonical forms for small graphs.
//!
//! Individualization-refinement search: colors are refined to an equitable
//! partition, then the first smallest non-singleton cell is split by
//! individualizing each of its points in turn. Leaves are compared by the
//! adjacency bit string in color order and the largest wins. Twins (points
//! with identical neighborhoods apart from each other) inside one cell are
//! swapped by an automorphism that fixes the coloring, so only one of them is
//! branched on.

use crate::graph::DigitalSpace;

/// Label-independent encoding of a graph: point count plus the upper
/// triangle of the adjacency matrix under the canonical ordering.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    n: usize,
    bits: Vec<u64>,
}

impl CanonicalForm {
    pub fn point_count(&self) -> usize {
        self.n
    }
}

struct Dense {
    n: usize,
    adj: Vec<Vec<bool>>,
    nbrs: Vec<Vec<usize>>,
}

pub fn canonical_form(g: &DigitalSpace) -> CanonicalForm {
    let n = g.len();
    let mut adj = vec![vec![false; n]; n];
    let nbrs: Vec<Vec<usize>> = (0..n).map(|i| g.neighbor_indices(i).to_vec()).collect();
    for (i, ns) in nbrs.iter().enumerate() {
        for &j in ns {
            adj[i][j] = true;
        }
    }
    let dense = Dense { n, adj, nbrs };
    let colors = refine(&dense, vec![0; n]);
    let mut best: Option<Vec<u64>> = None;
    search(&dense, colors, &mut best);
    CanonicalForm {
        n,
        bits: best.unwrap_or_default(),
    }
}

/// Exact isomorphism test via canonical forms, after cheap degree pruning.
pub fn is_isomorphic(a: &DigitalSpace, b: &DigitalSpace) -> bool {
    if a.len() != b.len() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da = a.degrees();
    let mut db = b.degrees();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    canonical_form(a) == canonical_form(b)
}

/// Refines `colors` (values are cell ranks) until equitable.
fn refine(g: &Dense, mut colors: Vec<usize>) -> Vec<usize> {
    loop {
        let mut sigs: Vec<(usize, Vec<usize>)> = (0..g.n)
            .map(|i| {
                let mut s: Vec<usize> = g.nbrs[i].iter().map(|&j| colors[j]).collect();
                s.sort_unstable();
                (colors[i], s)
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort();
        sorted.dedup();
        let next: Vec<usize> = sigs.drain(..).map(|s| sorted.binary_search(&s).unwrap()).collect();
        let before = count_cells(&colors);
        let after = sorted.len();
        colors = next;
        if after == before {
            return colors;
        }
    }
}

fn count_cells(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn search(g: &Dense, colors: Vec<usize>, best: &mut Option<Vec<u64>>) {
    let n = g.n;
    let cells = count_cells(&colors);
    if cells == n {
        let mut order = vec![0; n];
        for (i, &c) in colors.iter().enumerate() {
            order[c] = i;
        }
        let code = encode(g, &order);
        if best.as_ref().is_none_or(|b| code > *b) {
            *best = Some(code);
        }
        return;
    }
    // First smallest non-singleton cell.
    let mut sizes = vec![0usize; n];
    for &c in &colors {
        sizes[c] += 1;
    }
    let target = (0..n)
        .filter(|&c| sizes[c] > 1)
        .min_by_key(|&c| (sizes[c], c))
        .expect("non-discrete coloring has a non-singleton cell");
    let members: Vec<usize> = (0..n).filter(|&i| colors[i] == target).collect();
    let mut explored: Vec<usize> = Vec::new();
    for &v in &members {
        if explored.iter().any(|&u| are_twins(g, u, v)) {
            continue;
        }
        explored.push(v);
        // Individualize v: it takes rank `target`, the rest of the cell shifts up.
        let split: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if c > target || (c == target && i != v) {
                    c + 1
                } else {
                    c
                }
            })
            .collect();
        search(g, refine(g, split), best);
    }
}

fn are_twins(g: &Dense, u: usize, v: usize) -> bool {
    (0..g.n).all(|w| w == u || w == v || g.adj[u][w] == g.adj[v][w])
}

fn encode(g: &Dense, order: &[usize]) -> Vec<u64> {
    let n = g.n;
    let total = n * n.saturating_sub(1) / 2;
    let mut bits = vec![0u64; total.div_ceil(64)];
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            if g.adj[order[a]][order[b]] {
                bits[k / 64] |= 1 << (63 - k % 64);
            }
            k += 1;
        }
    }
    bits
}

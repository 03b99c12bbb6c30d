//! Bitmask views of induced subgraphs, used by the contractibility search.
//!
//! Every state of a deletion search is an induced subgraph of one root
//! graph, so a set of point indices identifies it exactly.

use std::collections::HashMap;

use crate::graph::DigitalSpace;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Mask(Vec<u64>);

impl Mask {
    pub(crate) fn empty(n: usize) -> Self {
        Mask(vec![0; n.div_ceil(64).max(1)])
    }

    pub(crate) fn full(n: usize) -> Self {
        let mut m = Mask::empty(n);
        for i in 0..n {
            m.insert(i);
        }
        m
    }

    pub(crate) fn from_indices(n: usize, idx: &[usize]) -> Self {
        let mut m = Mask::empty(n);
        for &i in idx {
            m.insert(i);
        }
        m
    }

    pub(crate) fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    pub(crate) fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn and(&self, other: &Mask) -> Mask {
        Mask(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    pub(crate) fn without(&self, i: usize) -> Mask {
        let mut m = self.clone();
        m.remove(i);
        m
    }

    pub(crate) fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            })
        })
    }

    /// Members strictly greater than `i`.
    fn above(&self, i: usize) -> Mask {
        let mut m = self.clone();
        for (k, w) in m.0.iter_mut().enumerate() {
            let lo = k * 64;
            if i + 1 >= lo + 64 {
                *w = 0;
            } else if i + 1 > lo {
                *w &= !0u64 << (i + 1 - lo);
            }
        }
        m
    }
}

/// Simple-point deletion search over the induced subgraphs of one root.
pub(crate) struct Engine {
    adj: Vec<Mask>,
    n: usize,
    reducible: HashMap<Mask, bool>,
}

impl Engine {
    pub(crate) fn new(g: &DigitalSpace) -> Self {
        let n = g.len();
        let adj = (0..n).map(|i| Mask::from_indices(n, g.neighbor_indices(i))).collect();
        Engine {
            adj,
            n,
            reducible: HashMap::new(),
        }
    }

    pub(crate) fn full(&self) -> Mask {
        Mask::full(self.n)
    }

    pub(crate) fn rim(&self, v: usize, m: &Mask) -> Mask {
        self.adj[v].and(m)
    }

    pub(crate) fn is_connected(&self, m: &Mask) -> bool {
        let Some(start) = m.first() else {
            return false;
        };
        let mut seen = Mask::empty(self.n);
        seen.insert(start);
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for w in self.adj[v].and(m).iter() {
                if !seen.contains(w) {
                    seen.insert(w);
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == m.count()
    }

    /// Euler characteristic of the clique complex of the induced subgraph.
    pub(crate) fn euler(&self, m: &Mask) -> i64 {
        fn rec(adj: &[Mask], size: usize, cand: &Mask) -> i64 {
            let mut total = if size % 2 == 1 { 1 } else { -1 };
            for w in cand.iter() {
                let next = cand.and(&adj[w]).above(w);
                total += rec(adj, size + 1, &next);
            }
            total
        }
        m.iter().map(|v| rec(&self.adj, 1, &m.and(&self.adj[v]).above(v))).sum()
    }

    /// Whether the induced subgraph on `m` is contractible.
    pub(crate) fn contractible(&mut self, m: &Mask) -> bool {
        match m.count() {
            0 => return false,
            1 => return true,
            _ => {}
        }
        if let Some(&r) = self.reducible.get(m) {
            return r;
        }
        // Simple-point deletions preserve connectivity and the Euler
        // characteristic, so both are checked once at the entry state.
        if !self.is_connected(m) || self.euler(m) != 1 {
            self.reducible.insert(m.clone(), false);
            return false;
        }
        self.reduce(m)
    }

    fn reduce(&mut self, m: &Mask) -> bool {
        if m.count() == 1 {
            return true;
        }
        if let Some(&r) = self.reducible.get(m) {
            return r;
        }
        let members: Vec<usize> = m.iter().collect();
        let mut found = false;
        for v in members {
            let rim = self.rim(v, m);
            if self.contractible(&rim) && self.reduce(&m.without(v)) {
                found = true;
                break;
            }
        }
        self.reducible.insert(m.clone(), found);
        found
    }

    /// Deletion order reducing a contractible `m` to one point.
    pub(crate) fn witness(&mut self, m: &Mask) -> Option<Vec<usize>> {
        if !self.contractible(m) {
            return None;
        }
        let mut cur = m.clone();
        let mut order = Vec::new();
        while cur.count() > 1 {
            let next = cur
                .iter()
                .find(|&v| {
                    let rim = self.rim(v, &cur);
                    self.contractible(&rim) && self.reduce(&cur.without(v))
                })
                .expect("contractible state has a reducing simple point");
            order.push(next);
            cur.remove(next);
        }
        Some(order)
    }

    pub(crate) fn is_simple(&mut self, v: usize, m: &Mask) -> bool {
        let rim = self.rim(v, m);
        self.contractible(&rim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn above_masks_across_words() {
        let m = Mask::full(130);
        assert_eq!(m.above(0).count(), 129);
        assert_eq!(m.above(63).count(), 66);
        assert_eq!(m.above(64).count(), 65);
        assert_eq!(m.above(129).count(), 0);
    }

    #[test]
    fn euler_of_small_graphs() {
        let tri = DigitalSpace::complete(3);
        let e = Engine::new(&tri);
        assert_eq!(e.euler(&e.full()), 1);
        let c4 = DigitalSpace::cycle(4).unwrap();
        let e = Engine::new(&c4);
        assert_eq!(e.euler(&e.full()), 0);
    }
}

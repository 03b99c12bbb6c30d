//! Finite simple undirected graphs viewed as digital spaces.
//!
//! Points carry stable integer labels. A [`DigitalSpace`] keeps its labels
//! sorted ascending and never reorders them, so a label always names the same
//! point across transformations that keep it. Every transformation returns a
//! new value.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Point label as used in experiment configs and graph JSON.
pub type PointId = u32;

#[derive(Clone, PartialEq, Eq)]
pub struct DigitalSpace {
    name: Option<String>,
    points: Vec<PointId>,
    /// Sorted neighbor indices (positions in `points`).
    adjacency: Vec<Vec<usize>>,
}

/// Interchange form: `{ "name", "points", "edges" }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    #[serde(default)]
    pub name: String,
    pub points: Vec<PointId>,
    pub edges: Vec<[PointId; 2]>,
}

impl DigitalSpace {
    /// Builds a space from labels and unordered edges.
    ///
    /// Rejects self-loops, duplicate labels, duplicate edges (in either
    /// orientation) and edges touching unknown points.
    pub fn new<I>(name: Option<&str>, points: &[PointId], edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (PointId, PointId)>,
    {
        let mut sorted = points.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicatePoint(w[0]));
            }
        }
        let mut space = DigitalSpace {
            name: name.map(str::to_owned),
            adjacency: vec![Vec::new(); sorted.len()],
            points: sorted,
        };
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let iu = space.index_of(u).ok_or(GraphError::UnknownPoint(u))?;
            let iv = space.index_of(v).ok_or(GraphError::UnknownPoint(v))?;
            if !seen.insert((iu.min(iv), iu.max(iv))) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            space.adjacency[iu].push(iv);
            space.adjacency[iv].push(iu);
        }
        for nbrs in &mut space.adjacency {
            nbrs.sort_unstable();
        }
        Ok(space)
    }

    /// The one-point graph.
    pub fn point(id: PointId) -> Self {
        DigitalSpace {
            name: None,
            points: vec![id],
            adjacency: vec![Vec::new()],
        }
    }

    /// Points labelled `1..=n`, no edges.
    pub fn discrete(n: usize) -> Self {
        DigitalSpace {
            name: None,
            points: (1..=n as PointId).collect(),
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Cycle on points `1..=n` in order.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::Invalid(format!("a cycle needs at least 3 points, got {n}")));
        }
        let points: Vec<PointId> = (1..=n as PointId).collect();
        let edges = (0..n).map(|i| (points[i], points[(i + 1) % n]));
        DigitalSpace::new(None, &points, edges)
    }

    /// Path on points `1..=n` in order.
    pub fn path(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let points: Vec<PointId> = (1..=n as PointId).collect();
        let edges = points.windows(2).map(|w| (w[0], w[1]));
        DigitalSpace::new(None, &points, edges)
    }

    /// Complete graph on points `1..=n`.
    pub fn complete(n: usize) -> Self {
        let points: Vec<PointId> = (1..=n as PointId).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((points[i], points[j]));
            }
        }
        DigitalSpace::new(None, &points, edges).expect("complete graph is simple")
    }

    pub fn from_json(json: &GraphJson) -> Result<Self, GraphError> {
        let name = if json.name.is_empty() {
            None
        } else {
            Some(json.name.as_str())
        };
        DigitalSpace::new(name, &json.points, json.edges.iter().map(|e| (e[0], e[1])))
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            name: self.name.clone().unwrap_or_default(),
            points: self.points.clone(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Position of a label in [`points`](Self::points).
    pub fn index_of(&self, p: PointId) -> Option<usize> {
        self.points.binary_search(&p).ok()
    }

    pub fn contains(&self, p: PointId) -> bool {
        self.index_of(p).is_some()
    }

    fn require(&self, p: PointId) -> Result<usize, GraphError> {
        self.index_of(p).ok_or(GraphError::UnknownPoint(p))
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (PointId, PointId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(move |(i, nbrs)| {
            nbrs.iter()
                .filter(move |&&j| j > i)
                .map(move |&j| (self.points[i], self.points[j]))
        })
    }

    pub fn has_edge(&self, u: PointId, v: PointId) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(i), Some(j)) => self.adjacency[i].binary_search(&j).is_ok(),
            _ => false,
        }
    }

    /// Neighbor labels of `p`, ascending.
    pub fn neighbors(&self, p: PointId) -> Result<Vec<PointId>, GraphError> {
        let i = self.require(p)?;
        Ok(self.adjacency[i].iter().map(|&j| self.points[j]).collect())
    }

    pub fn degree(&self, p: PointId) -> Result<usize, GraphError> {
        Ok(self.adjacency[self.require(p)?].len())
    }

    /// Sorted neighbor indices of the point at index `i`.
    pub(crate) fn neighbor_indices(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    /// Degrees in point order.
    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Rim `O(v)`: the subgraph induced on the neighbors of `v`.
    pub fn rim(&self, v: PointId) -> Result<Subspace<'_>, GraphError> {
        let i = self.require(v)?;
        Ok(Subspace::from_indices(self, self.adjacency[i].clone()))
    }

    /// Ball `U(v)`: the rim together with `v`.
    pub fn ball(&self, v: PointId) -> Result<Subspace<'_>, GraphError> {
        let i = self.require(v)?;
        let mut idx = self.adjacency[i].clone();
        let pos = idx.binary_search(&i).unwrap_err();
        idx.insert(pos, i);
        Ok(Subspace::from_indices(self, idx))
    }

    /// Rim `O(uv) = O(u) ∩ O(v)` of an existing edge.
    pub fn edge_rim(&self, u: PointId, v: PointId) -> Result<Subspace<'_>, GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::UnknownEdge(u, v));
        }
        self.common_neighbors(u, v)
    }

    /// Subgraph induced on the common neighbors of `u` and `v`, edge or not.
    pub fn common_neighbors(&self, u: PointId, v: PointId) -> Result<Subspace<'_>, GraphError> {
        let (iu, iv) = (self.require(u)?, self.require(v)?);
        let a = &self.adjacency[iu];
        let b = &self.adjacency[iv];
        let common = a
            .iter()
            .copied()
            .filter(|j| b.binary_search(j).is_ok() && *j != iu && *j != iv)
            .collect();
        Ok(Subspace::from_indices(self, common))
    }

    /// Subgraph induced on the given labels.
    pub fn induced(&self, set: &[PointId]) -> Result<Subspace<'_>, GraphError> {
        let mut idx = set.iter().map(|&p| self.require(p)).collect::<Result<Vec<_>, _>>()?;
        idx.sort_unstable();
        idx.dedup();
        Ok(Subspace::from_indices(self, idx))
    }

    pub fn delete_point(&self, v: PointId) -> Result<DigitalSpace, GraphError> {
        let i = self.require(v)?;
        let keep: Vec<usize> = (0..self.len()).filter(|&j| j != i).collect();
        let mut out = Subspace::from_indices(self, keep).to_space();
        out.name = self.name.clone();
        Ok(out)
    }

    pub fn delete_points(&self, vs: &[PointId]) -> Result<DigitalSpace, GraphError> {
        let drop = vs
            .iter()
            .map(|&v| self.require(v))
            .collect::<Result<BTreeSet<_>, _>>()?;
        let keep: Vec<usize> = (0..self.len()).filter(|j| !drop.contains(j)).collect();
        let mut out = Subspace::from_indices(self, keep).to_space();
        out.name = self.name.clone();
        Ok(out)
    }

    pub fn delete_edge(&self, u: PointId, v: PointId) -> Result<DigitalSpace, GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::UnknownEdge(u, v));
        }
        let (iu, iv) = (self.index_of(u).unwrap(), self.index_of(v).unwrap());
        let mut out = self.clone();
        out.adjacency[iu].retain(|&j| j != iv);
        out.adjacency[iv].retain(|&j| j != iu);
        Ok(out)
    }

    /// Adds a new point adjacent to exactly `neighbors`.
    pub fn add_point(&self, id: PointId, neighbors: &[PointId]) -> Result<DigitalSpace, GraphError> {
        if self.contains(id) {
            return Err(GraphError::DuplicatePoint(id));
        }
        for &p in neighbors {
            self.require(p)?;
        }
        let mut points = self.points.clone();
        points.push(id);
        let edges = self.edges().chain(neighbors.iter().map(|&p| (p, id)));
        let mut out = DigitalSpace::new(None, &points, edges)?;
        out.name = self.name.clone();
        Ok(out)
    }

    pub fn add_edge(&self, u: PointId, v: PointId) -> Result<DigitalSpace, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let (iu, iv) = (self.require(u)?, self.require(v)?);
        if self.adjacency[iu].binary_search(&iv).is_ok() {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        let mut out = self.clone();
        let pos = out.adjacency[iu].binary_search(&iv).unwrap_err();
        out.adjacency[iu].insert(pos, iv);
        let pos = out.adjacency[iv].binary_search(&iu).unwrap_err();
        out.adjacency[iv].insert(pos, iu);
        Ok(out)
    }

    /// Shifts every label by `offset`.
    pub fn relabel_offset(&self, offset: PointId) -> DigitalSpace {
        DigitalSpace {
            name: self.name.clone(),
            points: self.points.iter().map(|p| p + offset).collect(),
            adjacency: self.adjacency.clone(),
        }
    }

    /// Relabels points to `1..=n` preserving order.
    pub fn relabel_sequential(&self) -> DigitalSpace {
        DigitalSpace {
            name: self.name.clone(),
            points: (1..=self.len() as PointId).collect(),
            adjacency: self.adjacency.clone(),
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        self.component_of(0).len() == self.len()
    }

    /// Indices reachable from index `start`.
    pub(crate) fn component_of(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut out = Vec::new();
        while let Some(i) = stack.pop() {
            out.push(i);
            for &j in &self.adjacency[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Connected components as label lists, ordered by smallest label.
    pub fn components(&self) -> Vec<Vec<PointId>> {
        let mut assigned = vec![false; self.len()];
        let mut out = Vec::new();
        for i in 0..self.len() {
            if assigned[i] {
                continue;
            }
            let comp = self.component_of(i);
            for &j in &comp {
                assigned[j] = true;
            }
            out.push(comp.into_iter().map(|j| self.points[j]).collect());
        }
        out
    }
}

impl fmt::Debug for DigitalSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DigitalSpace")
            .field("name", &self.name)
            .field("points", &self.points)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Join `G ⊕ H`: disjoint union plus every cross edge.
///
/// Labels of `h` are shifted past the largest label of `g` so the point sets
/// are disjoint.
pub fn join(g: &DigitalSpace, h: &DigitalSpace) -> DigitalSpace {
    let offset = g.points.last().copied().unwrap_or(0);
    let h = h.relabel_offset(offset);
    let mut points = g.points.clone();
    points.extend_from_slice(&h.points);
    let mut edges: Vec<(PointId, PointId)> = g.edges().chain(h.edges()).collect();
    for &a in &g.points {
        for &b in &h.points {
            edges.push((a, b));
        }
    }
    DigitalSpace::new(None, &points, edges).expect("join of simple graphs is simple")
}

/// An induced subgraph of a parent space: exactly the parent edges with both
/// endpoints in the point subset.
#[derive(Clone)]
pub struct Subspace<'a> {
    parent: &'a DigitalSpace,
    indices: Vec<usize>,
}

impl<'a> Subspace<'a> {
    fn from_indices(parent: &'a DigitalSpace, indices: Vec<usize>) -> Self {
        Subspace { parent, indices }
    }

    pub fn parent(&self) -> &'a DigitalSpace {
        self.parent
    }

    /// Point labels, ascending.
    pub fn points(&self) -> Vec<PointId> {
        self.indices.iter().map(|&i| self.parent.points[i]).collect()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, p: PointId) -> bool {
        self.parent
            .index_of(p)
            .is_some_and(|i| self.indices.binary_search(&i).is_ok())
    }

    /// Induced edges as label pairs `(u, v)` with `u < v`.
    pub fn edges(&self) -> Vec<(PointId, PointId)> {
        let mut out = Vec::new();
        for &i in &self.indices {
            for &j in &self.parent.adjacency[i] {
                if j > i && self.indices.binary_search(&j).is_ok() {
                    out.push((self.parent.points[i], self.parent.points[j]));
                }
            }
        }
        out
    }

    /// Materializes the subspace as a standalone space with the same labels.
    pub fn to_space(&self) -> DigitalSpace {
        let mut pos = vec![usize::MAX; self.parent.len()];
        for (k, &i) in self.indices.iter().enumerate() {
            pos[i] = k;
        }
        let adjacency = self
            .indices
            .iter()
            .map(|&i| {
                self.parent.adjacency[i]
                    .iter()
                    .filter_map(|&j| (pos[j] != usize::MAX).then_some(pos[j]))
                    .collect()
            })
            .collect();
        DigitalSpace {
            name: None,
            points: self.points(),
            adjacency,
        }
    }
}

impl fmt::Debug for Subspace<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subspace")
            .field("points", &self.points())
            .field("edges", &self.edges())
            .finish()
    }
}

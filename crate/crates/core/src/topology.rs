//! Contractibility, contractible transformations and recognition of digital
//! spheres, manifolds and surfaces.
//!
//! Recognition is recursive: a point passes at dimension `n` when its rim
//! passes at `n - 1`. Rim verdicts are memoized per thread by canonical form,
//! since the same small rims recur across points and calls.

use std::cell::RefCell;
use std::collections::HashMap;

use serde::Serialize;

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{GraphError, TopologyError};
use crate::graph::{join, DigitalSpace, PointId};
use crate::mask::{Engine, Mask};

/// Graphs above this size are not memoized by canonical form.
const CACHE_LIMIT: usize = 32;

thread_local! {
    static RIM_VERDICTS: RefCell<HashMap<(CanonicalForm, usize), Verdict>> = RefCell::new(HashMap::new());
    static CONTRACTIBLE: RefCell<HashMap<CanonicalForm, bool>> = RefCell::new(HashMap::new());
}

/// Strongest class established for a space at a stated dimension.
///
/// Ordered so that `Sphere > Manifold > Surface > None`; a sphere is a
/// manifold and a manifold is a surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    None,
    Surface,
    Manifold,
    Sphere,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::None => "none",
            Verdict::Surface => "surface",
            Verdict::Manifold => "manifold",
            Verdict::Sphere => "sphere",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointVerdict {
    pub point: PointId,
    pub rim_size: usize,
    /// Verdict of the rim at dimension `n - 1`.
    pub rim_verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub point: Option<PointId>,
    pub reason: String,
    /// Report for the witness point's rim at dimension `n - 1`, when the
    /// failure is local.
    pub rim: Option<Box<ManifoldReport>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldReport {
    pub space: String,
    pub n: usize,
    /// The class the caller asked about.
    pub claim: Verdict,
    pub verdict: Verdict,
    pub points: Vec<PointVerdict>,
    pub witness: Option<Witness>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    space: &'a str,
    n: usize,
    verdict: &'static str,
    witness: Option<WitnessJson<'a>>,
}

#[derive(Serialize)]
struct WitnessJson<'a> {
    point: Option<PointId>,
    reason: &'a str,
}

impl ManifoldReport {
    pub fn passed(&self) -> bool {
        self.verdict >= self.claim
    }

    /// `{ "space", "n", "verdict", "witness": {point, reason} | null }`
    pub fn to_json(&self) -> serde_json::Value {
        let view = ReportJson {
            space: &self.space,
            n: self.n,
            verdict: self.verdict.as_str(),
            witness: self.witness.as_ref().map(|w| WitnessJson {
                point: w.point,
                reason: &w.reason,
            }),
        };
        serde_json::to_value(view).expect("report serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionStep {
    DeletePoint(PointId),
    DeleteEdge(PointId, PointId),
}

/// Sequence of simple deletions and the graph it ends at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub terminal: DigitalSpace,
}

impl ReductionTrace {
    /// Re-applies the steps to `start`, checking simplicity at each one.
    pub fn replay(&self, start: &DigitalSpace) -> Result<DigitalSpace, TopologyError> {
        let mut g = start.clone();
        for step in &self.steps {
            g = match *step {
                ReductionStep::DeletePoint(v) => delete_simple_point(&g, v)?,
                ReductionStep::DeleteEdge(u, v) => delete_simple_edge(&g, u, v)?,
            };
        }
        Ok(g)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "steps": self.steps,
            "terminal": self.terminal.to_json(),
        })
    }
}

fn space_label(g: &DigitalSpace) -> String {
    g.name().unwrap_or("unnamed").to_owned()
}

fn mask_points(g: &DigitalSpace, m: &Mask) -> Vec<PointId> {
    m.iter().map(|i| g.points()[i]).collect()
}

fn contractible_cached(g: &DigitalSpace) -> bool {
    if g.len() <= 1 {
        return g.len() == 1;
    }
    let key = (g.len() <= CACHE_LIMIT).then(|| canonical_form(g));
    if let Some(k) = &key {
        if let Some(r) = CONTRACTIBLE.with(|c| c.borrow().get(k).copied()) {
            return r;
        }
    }
    let mut engine = Engine::new(g);
    let r = engine.contractible(&engine.full());
    if let Some(k) = key {
        CONTRACTIBLE.with(|c| c.borrow_mut().insert(k, r));
    }
    r
}

/// Contractibility with a witnessing deletion trace.
///
/// Returns `Some(trace)` when the space reduces to one point by deleting
/// simple points, `None` otherwise. The search backtracks over deletion
/// choices, memoizing dead ends, so a contractible space is never reported
/// as non-contractible because of an unlucky order.
pub fn is_contractible(g: &DigitalSpace) -> Result<Option<ReductionTrace>, TopologyError> {
    if g.is_empty() {
        return Err(GraphError::Empty.into());
    }
    if !contractible_cached(g) {
        return Ok(None);
    }
    let mut engine = Engine::new(g);
    let order = engine
        .witness(&engine.full())
        .expect("cached verdict agrees with search");
    let deleted: Vec<PointId> = order.iter().map(|&i| g.points()[i]).collect();
    let terminal = g.delete_points(&deleted)?;
    Ok(Some(ReductionTrace {
        steps: deleted.into_iter().map(ReductionStep::DeletePoint).collect(),
        terminal,
    }))
}

/// Shorthand for `is_contractible(g)?.is_some()`; empty graphs are not
/// contractible.
pub fn contractible(g: &DigitalSpace) -> bool {
    contractible_cached(g)
}

pub fn is_simple_point(g: &DigitalSpace, v: PointId) -> Result<bool, TopologyError> {
    Ok(contractible(&g.rim(v)?.to_space()))
}

pub fn is_simple_edge(g: &DigitalSpace, u: PointId, v: PointId) -> Result<bool, TopologyError> {
    Ok(contractible(&g.edge_rim(u, v)?.to_space()))
}

pub fn delete_simple_point(g: &DigitalSpace, v: PointId) -> Result<DigitalSpace, TopologyError> {
    if !is_simple_point(g, v)? {
        return Err(TopologyError::NotSimple(v));
    }
    Ok(g.delete_point(v)?)
}

pub fn delete_simple_edge(g: &DigitalSpace, u: PointId, v: PointId) -> Result<DigitalSpace, TopologyError> {
    if !is_simple_edge(g, u, v)? {
        return Err(TopologyError::EdgeNotSimple(u, v));
    }
    Ok(g.delete_edge(u, v)?)
}

/// Glues a new point whose rim is the subgraph induced on `rim`.
pub fn attach_point(g: &DigitalSpace, rim: &[PointId], new_id: PointId) -> Result<DigitalSpace, TopologyError> {
    if g.contains(new_id) {
        return Err(GraphError::DuplicatePoint(new_id).into());
    }
    let sub = g.induced(rim)?;
    if !contractible(&sub.to_space()) {
        return Err(TopologyError::RimNotContractible(sub.points()));
    }
    Ok(g.add_point(new_id, &sub.points())?)
}

/// Adds the edge `(u, v)` if it would be simple once present.
///
/// The rim of an edge only depends on the common neighbors of its
/// endpoints, so the check runs on the common neighbors before insertion.
pub fn attach_edge(g: &DigitalSpace, u: PointId, v: PointId) -> Result<DigitalSpace, TopologyError> {
    if u == v {
        return Err(GraphError::SelfLoop(u).into());
    }
    if g.has_edge(u, v) {
        return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)).into());
    }
    let common = g.common_neighbors(u, v)?.to_space();
    if !contractible(&common) {
        return Err(TopologyError::EdgeNotSimple(u, v));
    }
    Ok(g.add_edge(u, v)?)
}

/// Join of `n + 1` copies of the 0-sphere: points `1..=2(n+1)`, where
/// `2i - 1` and `2i` are the only non-adjacent pairs.
pub fn minimal_sphere(n: usize) -> DigitalSpace {
    let s0 = DigitalSpace::discrete(2);
    let mut s = s0.clone();
    for _ in 0..n {
        s = join(&s, &s0);
    }
    s.with_name(format!("s{n}_min"))
}

/// Replaces the edge `(u, v)` with a new point adjacent to `u`, `v` and
/// their common neighbors, then deletes the edge.
pub fn r_transform(m: &DigitalSpace, u: PointId, v: PointId, new_id: PointId) -> Result<DigitalSpace, TopologyError> {
    let mut rim = m.edge_rim(u, v)?.points();
    if m.contains(new_id) {
        return Err(GraphError::DuplicatePoint(new_id).into());
    }
    rim.push(u);
    rim.push(v);
    let attached = m.add_point(new_id, &rim)?;
    Ok(attached.delete_edge(u, v)?)
}

/// A digital disk `M - v` cut from a sphere, with boundary `O(v)`.
#[derive(Clone, Debug)]
pub struct DigitalDisk {
    pub space: DigitalSpace,
    pub boundary: Vec<PointId>,
    pub interior: Vec<PointId>,
}

impl DigitalDisk {
    pub fn boundary(&self) -> crate::graph::Subspace<'_> {
        self.space
            .induced(&self.boundary)
            .expect("boundary points belong to the disk")
    }

    pub fn interior(&self) -> crate::graph::Subspace<'_> {
        self.space
            .induced(&self.interior)
            .expect("interior points belong to the disk")
    }
}

pub fn disk_from_sphere(m: &DigitalSpace, n: usize, v: PointId) -> Result<DigitalDisk, TopologyError> {
    if n == 0 {
        return Err(TopologyError::Dimension { min: 1, got: 0 });
    }
    let boundary = m.rim(v)?.points();
    if !is_n_sphere(m, n).passed() {
        return Err(TopologyError::NotSphere(n));
    }
    let space = m.delete_point(v)?;
    let interior = space
        .points()
        .iter()
        .copied()
        .filter(|p| boundary.binary_search(p).is_err())
        .collect();
    Ok(DigitalDisk {
        space,
        boundary,
        interior,
    })
}

/// Greedily deletes simple points (smallest label first) until none remain.
///
/// The result is homotopy equivalent to the input; it is not guaranteed to
/// be the smallest such graph.
pub fn homotopy_reduce(g: &DigitalSpace) -> Result<(DigitalSpace, ReductionTrace), TopologyError> {
    if g.is_empty() {
        return Err(GraphError::Empty.into());
    }
    let mut engine = Engine::new(g);
    let mut cur = engine.full();
    let mut steps = Vec::new();
    // Greedy deletion can stall on a contractible graph; follow a full
    // reduction order there instead.
    if let Some(order) = engine.witness(&cur) {
        for v in order {
            steps.push(ReductionStep::DeletePoint(g.points()[v]));
            cur.remove(v);
        }
    }
    'outer: loop {
        if cur.count() == 1 {
            break;
        }
        let members: Vec<usize> = cur.iter().collect();
        for v in members {
            if engine.is_simple(v, &cur) {
                steps.push(ReductionStep::DeletePoint(g.points()[v]));
                cur.remove(v);
                continue 'outer;
            }
        }
        break;
    }
    let terminal = g.induced(&mask_points(g, &cur))?.to_space();
    let terminal = match g.name() {
        Some(name) => terminal.with_name(format!("{name}_reduced")),
        None => terminal,
    };
    Ok((terminal.clone(), ReductionTrace { steps, terminal }))
}

/// Verdict at dimension `n` with the full sphere test, memoized for small
/// graphs.
fn rim_verdict(rim: &DigitalSpace, n: usize) -> Verdict {
    let key = (rim.len() <= CACHE_LIMIT).then(|| (canonical_form(rim), n));
    if let Some(k) = &key {
        if let Some(v) = RIM_VERDICTS.with(|c| c.borrow().get(k).copied()) {
            return v;
        }
    }
    let v = classify(rim, n, Verdict::Sphere).verdict;
    if let Some(k) = key {
        RIM_VERDICTS.with(|c| c.borrow_mut().insert(k, v));
    }
    v
}

fn zero_sphere_verdict(g: &DigitalSpace) -> Verdict {
    if g.len() == 2 && g.edge_count() == 0 {
        Verdict::Sphere
    } else {
        Verdict::None
    }
}

/// Picks the most connected failing point, smallest label on ties.
fn pick_witness(g: &DigitalSpace, failing: impl Iterator<Item = PointId>) -> Option<PointId> {
    failing.max_by(|&a, &b| {
        let (da, db) = (g.degree(a).unwrap(), g.degree(b).unwrap());
        da.cmp(&db).then(b.cmp(&a))
    })
}

/// Classifies `g` at dimension `n`, stopping once `claim` is settled.
///
/// The sphere stage (every `G - v` contractible) only runs when `claim` is
/// [`Verdict::Sphere`], so manifold and surface checks report at most
/// [`Verdict::Manifold`].
pub fn classify(g: &DigitalSpace, n: usize, claim: Verdict) -> ManifoldReport {
    let mut report = ManifoldReport {
        space: space_label(g),
        n,
        claim,
        verdict: Verdict::None,
        points: Vec::new(),
        witness: None,
    };
    if n == 0 {
        report.verdict = zero_sphere_verdict(g);
        if report.verdict == Verdict::None {
            report.witness = Some(Witness {
                point: g.points().first().copied(),
                reason: format!(
                    "a 0-sphere is two non-adjacent points; got {} points and {} edges",
                    g.len(),
                    g.edge_count()
                ),
                rim: None,
            });
        }
        return report;
    }
    if g.is_empty() {
        report.witness = Some(Witness {
            point: None,
            reason: "space is empty".into(),
            rim: None,
        });
        return report;
    }
    if !g.is_connected() {
        let comps = g.components();
        report.witness = Some(Witness {
            point: Some(comps[1][0]),
            reason: format!("space is disconnected ({} components)", comps.len()),
            rim: None,
        });
        return report;
    }

    for &p in g.points() {
        let rim = g.rim(p).expect("point of g").to_space();
        report.points.push(PointVerdict {
            point: p,
            rim_size: rim.len(),
            rim_verdict: rim_verdict(&rim, n - 1),
        });
    }
    let weakest = report
        .points
        .iter()
        .map(|pv| pv.rim_verdict)
        .min()
        .unwrap_or(Verdict::None);
    report.verdict = match weakest {
        Verdict::Sphere => Verdict::Manifold,
        Verdict::Manifold | Verdict::Surface => Verdict::Surface,
        Verdict::None => Verdict::None,
    };

    if report.verdict < claim.min(Verdict::Manifold) && claim >= Verdict::Surface {
        let needed = if claim == Verdict::Surface {
            Verdict::Surface
        } else {
            Verdict::Sphere
        };
        let failing = report
            .points
            .iter()
            .filter(|pv| pv.rim_verdict < needed)
            .map(|pv| pv.point);
        if let Some(p) = pick_witness(g, failing) {
            let rim = g.rim(p).expect("point of g").to_space();
            let rim_report = classify(&rim, n - 1, needed);
            report.witness = Some(Witness {
                point: Some(p),
                reason: format!(
                    "rim of point {p} ({} points, {} edges) is not a digital {}-{}",
                    rim.len(),
                    rim.edge_count(),
                    n - 1,
                    if needed == Verdict::Surface {
                        "surface"
                    } else {
                        "sphere"
                    }
                ),
                rim: Some(Box::new(rim_report)),
            });
        }
        return report;
    }

    if claim == Verdict::Sphere && report.verdict == Verdict::Manifold {
        let mut engine = Engine::new(g);
        let full = engine.full();
        let blocker = (0..g.len()).find(|&i| !engine.contractible(&full.without(i)));
        match blocker {
            None => report.verdict = Verdict::Sphere,
            Some(i) => {
                let p = g.points()[i];
                report.witness = Some(Witness {
                    point: Some(p),
                    reason: format!("removing point {p} leaves a non-contractible space"),
                    rim: None,
                });
            }
        }
    }
    report
}

pub fn is_n_sphere(g: &DigitalSpace, n: usize) -> ManifoldReport {
    classify(g, n, Verdict::Sphere)
}

/// Connected, with every rim a digital `(n-1)`-sphere. For `n = 0` the
/// only manifold is the 0-sphere.
pub fn is_n_manifold(g: &DigitalSpace, n: usize) -> ManifoldReport {
    classify(g, n, Verdict::Manifold)
}

pub fn is_n_surface(g: &DigitalSpace, n: usize) -> ManifoldReport {
    classify(g, n, Verdict::Surface)
}

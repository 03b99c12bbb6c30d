//! Named digital spaces: spheres, torus, Klein bottle, projective plane,
//! Moebius strip and plane patches.
//!
//! Every entry is checked against its stored expectations (classification,
//! rim sizes, Euler characteristic, homology) when it is loaded. Entries
//! whose adjacency is not forced by a construction live as graph JSON under
//! `data/`; set `DIGITAL_PDE_DATA` to load them from another directory.

use std::path::PathBuf;

use crate::error::CatalogError;
use crate::graph::{join, DigitalSpace, GraphJson, PointId};
use crate::invariants::{euler_characteristic, homology, HomologyProfile};
use crate::topology::{is_n_manifold, is_n_sphere, minimal_sphere, Verdict};

pub const DATA_DIR_ENV: &str = "DIGITAL_PDE_DATA";

const PROJECTIVE_PLANE_11: &str = include_str!("../data/projective_plane_11.json");
const MOEBIUS_12: &str = include_str!("../data/moebius_12.json");

/// Names accepted by [`entry`], in listing order.
pub const ENTRY_NAMES: &[&str] = &[
    "s0_min",
    "s1_min",
    "s2_min",
    "s3_min",
    "s4_min",
    "sphere2_8",
    "torus_16",
    "klein_bottle_16",
    "projective_plane_11",
    "moebius_12",
    "plane_patch_5x5",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Generated(&'static str),
    Stored(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Sphere,
    Manifold,
    /// Fails the manifold check; the listed points are exactly those whose
    /// rims are not `(n-1)`-spheres, and they induce a single cycle.
    ManifoldWithBoundary {
        boundary: Vec<PointId>,
    },
    /// Interior points (rims are `(n-1)`-spheres) are listed; the rest is
    /// boundary and unconstrained.
    Patch {
        interior: Vec<PointId>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RimSize {
    Uniform(usize),
    /// Size per point, in point order.
    PerPoint(Vec<usize>),
    Unspecified,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub space: DigitalSpace,
    pub dimension: usize,
    pub shape: Shape,
    pub homology: HomologyProfile,
    pub rim_size: RimSize,
    pub provenance: Provenance,
}

impl CatalogEntry {
    /// Checks the space against every stored expectation.
    pub fn verify(&self) -> Result<(), CatalogError> {
        let fail = |reason: String| CatalogError::Verification {
            name: self.name.clone(),
            reason,
        };
        let g = &self.space;
        let n = self.dimension;
        match &self.shape {
            Shape::Sphere => {
                let r = is_n_sphere(g, n);
                if !r.passed() {
                    return Err(fail(format!(
                        "not a digital {n}-sphere: {:?}",
                        r.witness.map(|w| w.reason)
                    )));
                }
            }
            Shape::Manifold => {
                let r = is_n_manifold(g, n);
                if !r.passed() {
                    return Err(fail(format!(
                        "not a digital {n}-manifold: {:?}",
                        r.witness.map(|w| w.reason)
                    )));
                }
            }
            Shape::ManifoldWithBoundary { boundary } => {
                let r = is_n_manifold(g, n);
                if r.passed() {
                    return Err(fail("expected a boundary, but every rim is a sphere".into()));
                }
                let found: Vec<PointId> = r
                    .points
                    .iter()
                    .filter(|pv| pv.rim_verdict != Verdict::Sphere)
                    .map(|pv| pv.point)
                    .collect();
                if &found != boundary {
                    return Err(fail(format!("boundary points {found:?}, expected {boundary:?}")));
                }
                let cycle = g.induced(boundary)?.to_space();
                let single_cycle = cycle.is_connected() && cycle.degrees().iter().all(|&d| d == 2) && cycle.len() >= 4;
                if !single_cycle {
                    return Err(fail("boundary does not induce a single cycle".into()));
                }
            }
            Shape::Patch { interior } => {
                for &p in interior {
                    let rim = g.rim(p)?.to_space();
                    if !is_n_sphere(&rim, n - 1).passed() {
                        return Err(fail(format!("rim of interior point {p} is not a {}-sphere", n - 1)));
                    }
                }
            }
        }
        let sizes: Vec<usize> = g.degrees();
        match &self.rim_size {
            RimSize::Uniform(s) => {
                if let Some(i) = sizes.iter().position(|d| d != s) {
                    return Err(fail(format!(
                        "rim of point {} has {} points, expected {s}",
                        g.points()[i],
                        sizes[i]
                    )));
                }
            }
            RimSize::PerPoint(expected) => {
                if &sizes != expected {
                    return Err(fail(format!("rim sizes {sizes:?}, expected {expected:?}")));
                }
            }
            RimSize::Unspecified => {}
        }
        let h = homology(g)?;
        if h != self.homology {
            return Err(fail(format!("homology {h:?}, expected {:?}", self.homology)));
        }
        let chi = euler_characteristic(g);
        if chi != h.euler_characteristic || chi != h.betti_euler() {
            return Err(fail(format!(
                "Euler characteristic disagrees: cliques {chi}, complex {}, betti {}",
                h.euler_characteristic,
                h.betti_euler()
            )));
        }
        Ok(())
    }

    fn verified(self) -> Result<Self, CatalogError> {
        self.verify()?;
        Ok(self)
    }
}

fn sphere_homology(n: usize) -> HomologyProfile {
    let mut betti = vec![0; n + 1];
    betti[0] = 1;
    betti[n] += 1;
    HomologyProfile::free(&betti)
}

pub fn minimal_sphere_entry(n: usize) -> Result<CatalogEntry, CatalogError> {
    CatalogEntry {
        name: format!("s{n}_min"),
        space: minimal_sphere(n),
        dimension: n,
        shape: Shape::Sphere,
        homology: sphere_homology(n),
        rim_size: RimSize::Uniform(2 * n),
        provenance: Provenance::Generated("join of n+1 copies of S0"),
    }
    .verified()
}

/// Label of grid point `(i, j)` in a `w`-column grid: `i * w + j + 1`.
fn grid_label(i: usize, j: usize, w: usize) -> PointId {
    (i * w + j + 1) as PointId
}

/// Triangulated 4x4 grid with both directions wrapped.
///
/// `(i, j)` is adjacent to `(i±1, j)`, `(i, j±1)`, `(i+1, j+1)` and
/// `(i-1, j-1)`, indices mod 4.
pub fn torus_16() -> Result<CatalogEntry, CatalogError> {
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let p = grid_label(i, j, 4);
            edges.push((p, grid_label((i + 1) % 4, j, 4)));
            edges.push((p, grid_label(i, (j + 1) % 4, 4)));
            edges.push((p, grid_label((i + 1) % 4, (j + 1) % 4, 4)));
        }
    }
    let points: Vec<PointId> = (1..=16).collect();
    let space = DigitalSpace::new(Some("torus_16"), &points, edges)?;
    CatalogEntry {
        name: "torus_16".into(),
        space,
        dimension: 2,
        shape: Shape::Manifold,
        homology: HomologyProfile::free(&[1, 2, 1]),
        rim_size: RimSize::Uniform(6),
        provenance: Provenance::Generated("Z4 x Z4 grid with (1,1) diagonals"),
    }
    .verified()
}

/// Torus template with the wrap in `i` reversing `j`.
///
/// Rows `i = 0..3` use the torus neighbors; row 3 glues to row 0 through
/// `(4, j) ~ (0, -j)`, so `(3, j)` meets `(0, -j)` and `(0, -j-1)`.
pub fn klein_bottle_16() -> Result<CatalogEntry, CatalogError> {
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let p = grid_label(i, j, 4);
            edges.push((p, grid_label(i, (j + 1) % 4, 4)));
            if i < 3 {
                edges.push((p, grid_label(i + 1, j, 4)));
                edges.push((p, grid_label(i + 1, (j + 1) % 4, 4)));
            } else {
                edges.push((p, grid_label(0, (4 - j) % 4, 4)));
                edges.push((p, grid_label(0, (7 - j) % 4, 4)));
            }
        }
    }
    let points: Vec<PointId> = (1..=16).collect();
    let space = DigitalSpace::new(Some("klein_bottle_16"), &points, edges)?;
    CatalogEntry {
        name: "klein_bottle_16".into(),
        space,
        dimension: 2,
        shape: Shape::Manifold,
        homology: HomologyProfile::free(&[1, 1, 0]).with_torsion(1, &[2]),
        rim_size: RimSize::Uniform(6),
        provenance: Provenance::Generated("4x4 grid, orientation-reversing wrap in one direction"),
    }
    .verified()
}

fn load_stored(file: &str, embedded: &str) -> Result<DigitalSpace, CatalogError> {
    let (text, path) = match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) => {
            let path = PathBuf::from(dir).join(file);
            let text = std::fs::read_to_string(&path).map_err(|e| CatalogError::Data {
                path: path.display().to_string(),
                reason: e.to_string(),
            })?;
            (text, path.display().to_string())
        }
        None => (embedded.to_owned(), format!("<embedded>/{file}")),
    };
    let json: GraphJson = serde_json::from_str(&text).map_err(|e| CatalogError::Data {
        path,
        reason: e.to_string(),
    })?;
    Ok(DigitalSpace::from_json(&json)?)
}

/// Eleven-point projective plane; every rim is a 1-sphere of 4 to 6 points.
pub fn projective_plane_11() -> Result<CatalogEntry, CatalogError> {
    let space = load_stored("projective_plane_11.json", PROJECTIVE_PLANE_11)?.with_name("projective_plane_11");
    CatalogEntry {
        name: "projective_plane_11".into(),
        space,
        dimension: 2,
        shape: Shape::Manifold,
        homology: HomologyProfile::free(&[1, 0, 0]).with_torsion(1, &[2]),
        rim_size: RimSize::Unspecified,
        provenance: Provenance::Stored("data/projective_plane_11.json"),
    }
    .verified()
}

/// Twelve-point Moebius strip: boundary 8-cycle `1..=8`, core 4-cycle
/// `9..=12`.
pub fn moebius_12() -> Result<CatalogEntry, CatalogError> {
    let space = load_stored("moebius_12.json", MOEBIUS_12)?.with_name("moebius_12");
    let mut sizes = vec![4; 8];
    sizes.extend([6; 4]);
    CatalogEntry {
        name: "moebius_12".into(),
        space,
        dimension: 2,
        shape: Shape::ManifoldWithBoundary {
            boundary: (1..=8).collect(),
        },
        homology: HomologyProfile::free(&[1, 1, 0]),
        rim_size: RimSize::PerPoint(sizes),
        provenance: Provenance::Stored("data/moebius_12.json"),
    }
    .verified()
}

/// Suspension of a 6-cycle: poles 1 and 8, equator `2..=7` in cyclic order.
pub fn sphere2_8() -> Result<CatalogEntry, CatalogError> {
    let poles = DigitalSpace::discrete(2);
    let equator = DigitalSpace::cycle(6)?;
    // join labels the equator 3..=8; move the second pole to 8.
    let j = join(&poles, &equator);
    let relabel = |p: PointId| match p {
        1 => 1,
        2 => 8,
        q => q - 1,
    };
    let points: Vec<PointId> = (1..=8).collect();
    let space = DigitalSpace::new(
        Some("sphere2_8"),
        &points,
        j.edges().map(|(a, b)| (relabel(a), relabel(b))),
    )?;
    CatalogEntry {
        name: "sphere2_8".into(),
        space,
        dimension: 2,
        shape: Shape::Sphere,
        homology: sphere_homology(2),
        rim_size: RimSize::PerPoint(vec![6, 4, 4, 4, 4, 4, 4, 6]),
        provenance: Provenance::Generated("S0 joined with a 6-cycle"),
    }
    .verified()
}

/// Triangulated `w x h` patch with the torus neighbor template, no wrap.
pub fn digital_plane_patch(w: usize, h: usize) -> Result<CatalogEntry, CatalogError> {
    if w < 3 || h < 3 {
        return Err(CatalogError::Verification {
            name: format!("plane_patch_{w}x{h}"),
            reason: "patch needs at least 3 columns and 3 rows".into(),
        });
    }
    let mut edges = Vec::new();
    for i in 0..h {
        for j in 0..w {
            let p = grid_label(i, j, w);
            if i + 1 < h {
                edges.push((p, grid_label(i + 1, j, w)));
            }
            if j + 1 < w {
                edges.push((p, grid_label(i, j + 1, w)));
            }
            if i + 1 < h && j + 1 < w {
                edges.push((p, grid_label(i + 1, j + 1, w)));
            }
        }
    }
    let name = format!("plane_patch_{w}x{h}");
    let points: Vec<PointId> = (1..=(w * h) as PointId).collect();
    let space = DigitalSpace::new(Some(&name), &points, edges)?;
    let interior = (1..h - 1)
        .flat_map(|i| (1..w - 1).map(move |j| grid_label(i, j, w)))
        .collect();
    CatalogEntry {
        name,
        space,
        dimension: 2,
        shape: Shape::Patch { interior },
        homology: HomologyProfile::free(&[1, 0, 0]),
        rim_size: RimSize::Unspecified,
        provenance: Provenance::Generated("triangulated grid patch"),
    }
    .verified()
}

/// Orthogonal finite-difference grid: `(i, j)` adjacent to `(i±1, j)` and
/// `(i, j±1)` only. Not a catalog entry; rims are isolated points.
pub fn orthogonal_grid(w: usize, h: usize) -> Result<DigitalSpace, CatalogError> {
    let mut edges = Vec::new();
    for i in 0..h {
        for j in 0..w {
            let p = grid_label(i, j, w);
            if i + 1 < h {
                edges.push((p, grid_label(i + 1, j, w)));
            }
            if j + 1 < w {
                edges.push((p, grid_label(i, j + 1, w)));
            }
        }
    }
    let points: Vec<PointId> = (1..=(w * h) as PointId).collect();
    Ok(DigitalSpace::new(
        Some(&format!("orthogonal_grid_{w}x{h}")),
        &points,
        edges,
    )?)
}

fn parse_dims(rest: &str) -> Option<(usize, usize)> {
    let (w, h) = rest.split_once('x')?;
    Some((w.parse().ok()?, h.parse().ok()?))
}

/// Loads and verifies a catalog entry by name.
///
/// Besides [`ENTRY_NAMES`], accepts `s<n>_min` for any `n` and
/// `plane_patch_<w>x<h>`.
pub fn entry(name: &str) -> Result<CatalogEntry, CatalogError> {
    match name {
        "torus_16" => torus_16(),
        "klein_bottle_16" => klein_bottle_16(),
        "projective_plane_11" => projective_plane_11(),
        "moebius_12" => moebius_12(),
        "sphere2_8" => sphere2_8(),
        _ => {
            if let Some(n) = name.strip_prefix('s').and_then(|r| r.strip_suffix("_min")) {
                if let Ok(n) = n.parse() {
                    return minimal_sphere_entry(n);
                }
            }
            if let Some((w, h)) = name.strip_prefix("plane_patch_").and_then(parse_dims) {
                return digital_plane_patch(w, h);
            }
            Err(CatalogError::Unknown(name.to_owned()))
        }
    }
}

/// Resolves a space by name: catalog entries plus `orthogonal_grid_<w>x<h>`.
pub fn space(name: &str) -> Result<DigitalSpace, CatalogError> {
    if let Some((w, h)) = name.strip_prefix("orthogonal_grid_").and_then(parse_dims) {
        return orthogonal_grid(w, h);
    }
    Ok(entry(name)?.space)
}

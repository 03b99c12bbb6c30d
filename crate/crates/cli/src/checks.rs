//! Seeded randomized checks of the scheme's theorems and of the
//! topological transformations, shared by `digispace check` and the
//! acceptance suite.

use digispace::catalog::{self, Shape, ENTRY_NAMES};
use digispace::graph::join;
use digispace::invariants::{euler_characteristic, homology};
use digispace::solver::{
    limit_matrix, solve_ivp, stability_bound_check, stationary_solution, step, CoefficientMatrix, FieldState, Problem,
};
use digispace::topology::{homotopy_reduce, is_n_manifold, is_n_sphere, is_simple_point, minimal_sphere, r_transform};
use digispace::{DigitalSpace, PointId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20150117;
pub const DEFAULT_CASES: usize = 200;
const STEPS: usize = 30;

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!("{status} {} ({} cases)", self.name, self.cases);
        if let Some(first) = self.failures.first() {
            s.push_str(&format!(": {} failures, first: {first}", self.failures.len()));
        }
        s
    }
}

fn spaces() -> Vec<DigitalSpace> {
    ENTRY_NAMES
        .iter()
        .map(|n| catalog::space(n).expect("catalog entries load"))
        .collect()
}

/// Random column-stochastic matrix supported on the balls of `g`. With
/// `positive` every ball entry is nonzero, which makes the matrix primitive
/// on a connected space.
pub fn random_diffusion(g: &DigitalSpace, rng: &mut impl Rng, positive: bool) -> CoefficientMatrix {
    let n = g.len();
    let mut c = CoefficientMatrix::zeros(n);
    for k in 0..n {
        let mut ball: Vec<usize> = g
            .neighbors(g.points()[k])
            .unwrap()
            .iter()
            .map(|&p| g.index_of(p).unwrap())
            .collect();
        ball.push(k);
        let raw: Vec<f64> = ball
            .iter()
            .map(|_| {
                if positive || rng.gen_bool(0.7) {
                    rng.gen_range(0.05..1.0)
                } else {
                    0.0
                }
            })
            .collect();
        let total: f64 = raw.iter().sum();
        if total == 0.0 {
            c.set(k, k, 1.0);
            continue;
        }
        for (&p, r) in ball.iter().zip(&raw) {
            c.set(p, k, r / total);
        }
    }
    c
}

fn random_field(rng: &mut impl Rng, n: usize, signed: bool) -> Vec<f64> {
    let lo = if signed { -10.0 } else { 0.0 };
    (0..n).map(|_| rng.gen_range(lo..10.0)).collect()
}

struct Cases<'a> {
    rng: ChaCha8Rng,
    spaces: &'a [DigitalSpace],
}

impl Cases<'_> {
    fn space(&mut self) -> &DigitalSpace {
        let i = self.rng.gen_range(0..self.spaces.len());
        &self.spaces[i]
    }
}

fn suite<F>(name: &'static str, seed: u64, cases: usize, mut case: F) -> SuiteResult
where
    F: FnMut(&mut ChaCha8Rng, &DigitalSpace) -> Result<(), String>,
{
    let spaces = spaces();
    let mut cs = Cases {
        rng: ChaCha8Rng::seed_from_u64(seed),
        spaces: &spaces,
    };
    let mut failures = Vec::new();
    for i in 0..cases {
        let g = cs.space().clone();
        if let Err(e) = case(&mut cs.rng, &g) {
            failures.push(format!("case {i} on {}: {e}", g.name().unwrap_or("unnamed")));
        }
    }
    SuiteResult { name, cases, failures }
}

/// The total `S^t` stays at `S^0` under every diffusion step.
pub fn conservation(seed: u64, cases: usize) -> SuiteResult {
    suite("conservation", seed, cases, |rng, g| {
        let c = random_diffusion(g, rng, false);
        let mut f = FieldState::new(random_field(rng, g.len(), true));
        let s0 = f.sum();
        for _ in 0..STEPS {
            f = step(&f, &c, None).map_err(|e| e.to_string())?;
            if (f.sum() - s0).abs() >= 1e-9 * s0.abs().max(1.0) {
                return Err(format!("sum {} drifted from {s0} at t={}", f.sum(), f.t));
            }
        }
        Ok(())
    })
}

/// `||f^{t+1}||_1 <= ||f^t||_1` for diffusion matrices and sign-mixed data.
pub fn monotonicity(seed: u64, cases: usize) -> SuiteResult {
    suite("norm monotonicity", seed ^ 0x9e37, cases, |rng, g| {
        let c = random_diffusion(g, rng, false);
        let mut f = FieldState::new(random_field(rng, g.len(), true));
        for _ in 0..STEPS {
            let next = step(&f, &c, None).map_err(|e| e.to_string())?;
            if next.norm1() > f.norm1() + 1e-12 {
                return Err(format!(
                    "norm grew from {} to {} at t={}",
                    f.norm1(),
                    next.norm1(),
                    next.t
                ));
            }
            f = next;
        }
        Ok(())
    })
}

/// Coefficients strictly below `1/n` in absolute value keep the norm
/// bounded by the initial one.
pub fn stability(seed: u64, cases: usize) -> SuiteResult {
    suite("stability bound", seed ^ 0x51ab, cases, |rng, g| {
        let n = g.len();
        let bound = 1.0 / n as f64;
        let mut c = CoefficientMatrix::zeros(n);
        for k in 0..n {
            c.set(k, k, rng.gen_range(-bound..bound) * 0.999);
            for &p in &g.neighbors(g.points()[k]).unwrap() {
                c.set(g.index_of(p).unwrap(), k, rng.gen_range(-bound..bound) * 0.999);
            }
        }
        if !stability_bound_check([&c], n) {
            return Err("generated matrix violates the bound".into());
        }
        let f0 = FieldState::new(random_field(rng, n, true));
        let mut f = f0.clone();
        for _ in 0..STEPS {
            f = step(&f, &c, None).map_err(|e| e.to_string())?;
            if f.norm1() > f0.norm1() + 1e-12 {
                return Err(format!("norm {} exceeds initial {}", f.norm1(), f0.norm1()));
            }
        }
        Ok(())
    })
}

/// For primitive diffusion matrices the limit depends on `f^0` only through
/// its sum, the iteration reaches it, and `C C^inf = C^inf`.
pub fn limit_independence(seed: u64, cases: usize) -> SuiteResult {
    suite("limit independence", seed ^ 0x7f4a, cases, |rng, g| {
        if g.len() < 2 || !g.is_connected() {
            return Ok(());
        }
        let c = random_diffusion(g, rng, true);
        let report = limit_matrix(&c, 1e-13, 64).map_err(|e| e.to_string())?;
        let Some(l) = &report.limit else {
            return Err(format!("no limit after {} squarings", report.iterations));
        };
        let drift = c.mul(l).max_abs_diff(l);
        if drift >= 1e-9 {
            return Err(format!("|C C^inf - C^inf| = {drift:e}"));
        }
        let a = random_field(rng, g.len(), false);
        let mut b = random_field(rng, g.len(), false);
        let (sa, sb): (f64, f64) = (a.iter().sum(), b.iter().sum());
        b.iter_mut().for_each(|x| *x *= sa / sb);
        let fa = stationary_solution(&c, &FieldState::new(a.clone())).map_err(|e| e.to_string())?;
        let run_a = solve_ivp(&Problem::ivp(g.clone(), c.clone(), a).with_horizon(20_000, Some(1e-12)))
            .map_err(|e| e.to_string())?;
        let run_b = solve_ivp(&Problem::ivp(g.clone(), c.clone(), b).with_horizon(20_000, Some(1e-12)))
            .map_err(|e| e.to_string())?;
        for ((x, y), z) in run_a.last().values.iter().zip(&run_b.last().values).zip(&fa.values) {
            if (x - y).abs() >= 1e-6 || (x - z).abs() >= 1e-6 {
                return Err(format!("terminal states {x}, {y} and stationary {z} disagree"));
            }
        }
        Ok(())
    })
}

pub fn theorem_suites(seed: u64, cases: usize) -> Vec<SuiteResult> {
    vec![
        conservation(seed, cases),
        monotonicity(seed, cases),
        stability(seed, cases),
        limit_independence(seed, cases),
    ]
}

fn manifold_entries() -> Vec<catalog::CatalogEntry> {
    ENTRY_NAMES
        .iter()
        .map(|n| catalog::entry(n).expect("catalog entries load"))
        .filter(|e| e.dimension >= 1 && matches!(e.shape, Shape::Sphere | Shape::Manifold))
        .collect()
}

/// R-transforms keep the manifold verdict and the homology.
pub fn r_transform_suite(seed: u64, edges: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2a);
    let entries = manifold_entries();
    let mut failures = Vec::new();
    for e in &entries {
        let all: Vec<(PointId, PointId)> = e.space.edges().collect();
        let new_id = e.space.points().last().unwrap() + 1;
        for _ in 0..edges {
            let (u, v) = *all.choose(&mut rng).unwrap();
            let t = match r_transform(&e.space, u, v, new_id) {
                Ok(t) => t,
                Err(err) => {
                    failures.push(format!("{} ({u},{v}): {err}", e.name));
                    continue;
                }
            };
            if !is_n_manifold(&t, e.dimension).passed() {
                failures.push(format!("{} ({u},{v}): no longer a {}-manifold", e.name, e.dimension));
            }
            match homology(&t) {
                Ok(h) if h.same_groups(&e.homology) => {}
                Ok(h) => failures.push(format!("{} ({u},{v}): homology {:?}", e.name, h.betti)),
                Err(err) => failures.push(format!("{} ({u},{v}): {err}", e.name)),
            }
        }
    }
    SuiteResult {
        name: "r-transform invariance",
        cases: entries.len() * edges,
        failures,
    }
}

/// Deleting simple points keeps the Euler characteristic and homology.
pub fn simple_deletion_suite(seed: u64, cases: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x3c);
    let mut starts: Vec<DigitalSpace> = vec![
        catalog::space("moebius_12").unwrap(),
        catalog::space("plane_patch_5x5").unwrap(),
    ];
    for e in manifold_entries() {
        let v = e.space.points()[0];
        starts.push(e.space.delete_point(v).unwrap());
    }
    let mut failures = Vec::new();
    for i in 0..cases {
        let mut g = starts[i % starts.len()].clone();
        let before = homology(&g).unwrap();
        let chi = euler_characteristic(&g);
        let simple: Vec<PointId> = g
            .points()
            .iter()
            .copied()
            .filter(|&p| is_simple_point(&g, p).unwrap())
            .collect();
        let Some(&p) = simple.choose(&mut rng) else {
            continue;
        };
        g = g.delete_point(p).unwrap();
        let after = homology(&g).unwrap();
        if euler_characteristic(&g) != chi || !after.same_groups(&before) {
            failures.push(format!(
                "deleting {p}: chi {chi} -> {}, {:?} -> {:?}",
                after.euler_characteristic, before.betti, after.betti
            ));
        }
    }
    SuiteResult {
        name: "simple-point deletion invariance",
        cases,
        failures,
    }
}

/// Every punctured projective plane reduces to a homotopy circle.
pub fn punctured_projective_plane() -> SuiteResult {
    let p = catalog::space("projective_plane_11").unwrap();
    let mut failures = Vec::new();
    for &v in p.points() {
        let (r, _) = homotopy_reduce(&p.delete_point(v).unwrap()).unwrap();
        let h = homology(&r).unwrap();
        let circle = digispace::invariants::HomologyProfile::free(&[1, 1]);
        if !h.same_groups(&circle) || euler_characteristic(&r) != 0 {
            failures.push(format!(
                "P - {v} reduces to {} points with betti {:?}",
                r.len(),
                h.betti
            ));
        }
    }
    SuiteResult {
        name: "punctured projective plane",
        cases: p.len(),
        failures,
    }
}

/// The suspension of a 6-point circle is a 2-sphere.
pub fn sphere_join() -> SuiteResult {
    let g = join(&minimal_sphere(0), &DigitalSpace::cycle(6).unwrap());
    let r = is_n_sphere(&g, 2);
    SuiteResult {
        name: "join of S0 and a 6-point S1",
        cases: 1,
        failures: if r.passed() {
            Vec::new()
        } else {
            vec![format!("verdict {:?}", r.verdict)]
        },
    }
}

pub fn topology_suites(seed: u64, edges: usize) -> Vec<SuiteResult> {
    vec![
        r_transform_suite(seed, edges),
        simple_deletion_suite(seed, edges * 4),
        punctured_projective_plane(),
        sphere_join(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_matrices_are_diffusion() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for g in spaces() {
            let c = random_diffusion(&g, &mut rng, false);
            assert!(c.is_diffusion());
            c.check_support(&g).unwrap();
        }
    }

    #[test]
    fn small_suites_pass() {
        for r in theorem_suites(3, 10) {
            assert!(r.passed(), "{}", r.line());
        }
    }

    #[test]
    fn failure_line_names_first_case() {
        let r = SuiteResult {
            name: "x",
            cases: 2,
            failures: vec!["a".into()],
        };
        assert_eq!(r.line(), "FAIL x (2 cases): 1 failures, first: a");
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::process::ExitCode;

use digispace::catalog::{self, orthogonal_grid, ENTRY_NAMES};
use digispace::invariants::{boundary_matrix, clique_complex, homology, HomologyProfile, DEFAULT_MAX_DIM};
use digispace::solver::{elliptic_residual, elliptic_residual_on, solve, solve_ivp};
use digispace::topology::{is_n_manifold, is_n_sphere, minimal_sphere, Verdict};
use digispace_cli::checks::{self, SuiteResult};
use digispace_cli::experiments::{self, RESIDUAL_TOL};

const SEED: u64 = 0x00D1_6175;
const THEOREM_CASES: usize = 200;
const R_TRANSFORM_EDGES: usize = 50;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs an experiment and checks the limit and the conserved sum.
fn heat_run(id: &str, limit: f64, sum: f64) -> Outcome {
    let spec = experiments::experiment(id).map_err(|e| e.to_string())?;
    let out = experiments::run(&spec).map_err(|e| e.to_string())?;
    let t = &out.trajectory;
    let last = t.last();
    ensure(last.t <= 2000, || format!("needed {} steps", last.t))?;
    let worst = last.values.iter().fold(0.0f64, |m, v| m.max((v - limit).abs()));
    ensure(worst < 1e-6, || format!("max |f - {limit}| = {worst:e}"))?;
    let drift = t.sums.iter().fold(0.0f64, |m, s| m.max((s - sum).abs()));
    ensure(drift < 1e-9, || format!("sum drifted {drift:e} from {sum}"))?;
    Ok(format!(
        "t={}, max |f-{limit}|={worst:.1e}, sum drift {drift:.1e}",
        last.t
    ))
}

fn projective_bvp() -> Outcome {
    let spec = experiments::experiment("projective_bvp").map_err(|e| e.to_string())?;
    let out = experiments::run(&spec).map_err(|e| e.to_string())?;
    let g = &out.problem.space;
    let (i1, i11) = (g.index_of(1).unwrap(), g.index_of(11).unwrap());
    let held = out
        .trajectory
        .states
        .iter()
        .all(|s| s.values[i1] == 1.0 && s.values[i11] == 4.0);
    ensure(held, || "a clamped value moved".into())?;
    let c = out.problem.coefficients.constant().unwrap();
    let residual = elliptic_residual_on(c, &out.trajectory.last().values, |i| i != i1 && i != i11);
    ensure(residual < RESIDUAL_TOL, || format!("residual {residual:e}"))?;
    Ok(format!(
        "{} recorded steps clamped, free residual {residual:.1e}",
        out.trajectory.states.len()
    ))
}

fn network() -> Outcome {
    let spec = experiments::experiment("network_s2").map_err(|e| e.to_string())?;
    let problem = spec.problem.resolve().map_err(|e| e.to_string())?;
    let c = problem.coefficients.constant().unwrap().clone();
    c.check_diffusion(&problem.space).map_err(|e| e.to_string())?;
    // Fixed 30-step window first, then the run to convergence.
    let window = solve_ivp(&problem.clone().with_horizon(30, None)).map_err(|e| e.to_string())?;
    ensure(window.states.len() == 31, || format!("{} states", window.states.len()))?;
    let full = solve(&problem).map_err(|e| e.to_string())?;
    let drift = window
        .sums
        .iter()
        .chain(&full.sums)
        .fold(0.0f64, |m, s| m.max((s - 8.0).abs()));
    ensure(drift < 1e-9, || format!("sum drift {drift:e}"))?;
    ensure(full.converged, || "no convergence".into())?;
    let residual = elliptic_residual(&c, &full.last().values);
    ensure(residual < 1e-8, || format!("residual {residual:e}"))?;
    Ok(format!(
        "column sums 1, sum drift {drift:.1e}, converged at t={}, residual {residual:.1e}",
        full.last().t
    ))
}

fn catalog_verification() -> Outcome {
    for n in 0..=4 {
        let s = minimal_sphere(n);
        ensure(s.len() == 2 * (n + 1), || format!("S{n}_min has {} points", s.len()))?;
        ensure(is_n_sphere(&s, n).passed(), || format!("S{n}_min is not an {n}-sphere"))?;
    }
    for name in ["torus_16", "klein_bottle_16"] {
        let g = catalog::space(name).map_err(|e| e.to_string())?;
        ensure(is_n_manifold(&g, 2).passed(), || format!("{name} is not a 2-manifold"))?;
        for &p in g.points() {
            let rim = g.rim(p).unwrap().to_space();
            ensure(rim.len() == 6 && is_n_sphere(&rim, 1).passed(), || {
                format!("{name}: rim of {p} is not a 6-point 1-sphere")
            })?;
        }
    }
    for name in ["projective_plane_11", "sphere2_8"] {
        let g = catalog::space(name).map_err(|e| e.to_string())?;
        ensure(is_n_manifold(&g, 2).passed(), || format!("{name} is not a 2-manifold"))?;
    }
    let m = catalog::space("moebius_12").map_err(|e| e.to_string())?;
    let report = is_n_manifold(&m, 2);
    ensure(!report.passed(), || "moebius_12 passed as a closed manifold".into())?;
    for p in 9..=12 {
        let rim = m.rim(p).unwrap().to_space();
        ensure(is_n_sphere(&rim, 1).passed(), || {
            format!("interior rim of {p} is not a 1-sphere")
        })?;
    }
    let boundary: Vec<u32> = report
        .points
        .iter()
        .filter(|pv| pv.rim_verdict != Verdict::Sphere)
        .map(|pv| pv.point)
        .collect();
    ensure(boundary == (1..=8).collect::<Vec<_>>(), || {
        format!("boundary {boundary:?}")
    })?;
    let cycle = m.induced(&boundary).unwrap().to_space();
    ensure(
        cycle.is_connected() && cycle.degrees().iter().all(|&d| d == 2) && cycle.len() == 8,
        || "boundary is not a single 8-cycle".into(),
    )?;
    Ok("spheres S0..S4, T, K, P, S2 and the Moebius strip as expected".into())
}

fn profile(betti: &[usize], torsion: Option<(usize, i64)>) -> HomologyProfile {
    let p = HomologyProfile::free(betti);
    match torsion {
        Some((k, t)) => p.with_torsion(k, &[t]),
        None => p,
    }
}

fn invariant_oracle() -> Outcome {
    let expected: [(&str, i64, HomologyProfile); 7] = [
        ("torus_16", 0, profile(&[1, 2, 1], None)),
        ("klein_bottle_16", 0, profile(&[1, 1, 0], Some((1, 2)))),
        ("projective_plane_11", 1, profile(&[1, 0, 0], Some((1, 2)))),
        ("moebius_12", 0, profile(&[1, 1, 0], None)),
        ("sphere2_8", 2, profile(&[1, 0, 1], None)),
        ("s2_min", 2, profile(&[1, 0, 1], None)),
        ("s4_min", 2, profile(&[1, 0, 0, 0, 1], None)),
    ];
    for (name, chi, want) in &expected {
        let g = catalog::space(name).map_err(|e| e.to_string())?;
        let h = homology(&g).map_err(|e| e.to_string())?;
        ensure(h.euler_characteristic == *chi, || {
            format!("{name}: chi {}", h.euler_characteristic)
        })?;
        ensure(&h == want, || format!("{name}: {h:?}"))?;
    }
    for name in ENTRY_NAMES {
        let complex = clique_complex(&catalog::space(name).unwrap(), DEFAULT_MAX_DIM);
        for k in 2..=complex.max_dim().unwrap_or(0) {
            let dd = boundary_matrix(&complex, k - 1)
                .checked_mul(&boundary_matrix(&complex, k))
                .ok_or_else(|| format!("{name}: overflow in d d"))?;
            ensure(dd.is_zero(), || format!("{name}: d{} d{k} != 0", k - 1))?;
        }
    }
    Ok(format!(
        "T, K, P, M, S2, S4 match; dd = 0 on {} complexes",
        ENTRY_NAMES.len()
    ))
}

fn suites(results: Vec<SuiteResult>) -> Outcome {
    let summary: Vec<String> = results.iter().map(|r| format!("{} x{}", r.name, r.cases)).collect();
    match results.iter().find(|r| !r.passed()) {
        Some(r) => Err(r.line()),
        None => Ok(summary.join(", ")),
    }
}

fn theorem_suites() -> Outcome {
    let results = checks::theorem_suites(SEED, THEOREM_CASES);
    ensure(results.iter().all(|r| r.cases >= 200), || "fewer than 200 cases".into())?;
    suites(results)
}

fn topology_suites() -> Outcome {
    suites(vec![
        checks::r_transform_suite(SEED, R_TRANSFORM_EDGES),
        checks::simple_deletion_suite(SEED, 200),
        checks::punctured_projective_plane(),
        checks::sphere_join(),
    ])
}

fn grid_negative_control() -> Outcome {
    let g = orthogonal_grid(5, 5).map_err(|e| e.to_string())?;
    let report = is_n_manifold(&g, 2);
    ensure(!report.passed(), || "orthogonal grid passed as a 2-manifold".into())?;
    let w = report.witness.as_ref().ok_or("no witness")?;
    let p = w.point.ok_or("witness has no point")?;
    let rim = g.rim(p).unwrap().to_space();
    ensure(rim.len() == 4 && rim.edge_count() == 0, || {
        format!("witness {p} has rim {rim:?}")
    })?;
    let sub = w.rim.as_ref().ok_or("witness carries no rim report")?;
    ensure(!sub.passed(), || "witness rim passed".into())?;
    Ok(format!("witness point {p}, rim = 4 isolated points"))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("1 Klein bottle heat run", || heat_run("klein_ivp", 1.0, 16.0)),
        ("2 S4 heat run", || heat_run("s4_ivp", 0.1, 1.0)),
        ("3 Moebius heat run", || heat_run("moebius_ivp", 1.0, 12.0)),
        ("4 projective plane IVP", || heat_run("projective_ivp", 1.0, 11.0)),
        ("5 projective plane BVP", projective_bvp),
        ("6 directed network", network),
        ("7 catalog verification", catalog_verification),
        ("8 invariant oracle", invariant_oracle),
        ("9 theorem property suites", theorem_suites),
        ("10 topology property suites", topology_suites),
        ("11 orthogonal grid negative control", grid_negative_control),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = std::time::Instant::now();
        match f() {
            Ok(detail) => println!("PASS {name}: {detail} [{:.2}s]", start.elapsed().as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 11 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 11 criteria failed");
        ExitCode::FAILURE
    }
}

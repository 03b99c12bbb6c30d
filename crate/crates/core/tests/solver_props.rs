use digispace::catalog;
use digispace::solver::{
    elliptic_residual, is_irreducible, is_primitive, limit_matrix, solve_ivp, stability_bound_check,
    stationary_solution, step, CoefficientMatrix, FieldState, Problem,
};
use digispace::DigitalSpace;
use proptest::prelude::*;

const SPACES: &[&str] = &[
    "s1_min",
    "s2_min",
    "sphere2_8",
    "klein_bottle_16",
    "moebius_12",
    "projective_plane_11",
];

/// Column-stochastic matrix supported on balls, built from raw weights.
/// With `positive` every ball entry is nonzero.
fn diffusion_from_weights(g: &DigitalSpace, weights: &[f64], positive: bool) -> CoefficientMatrix {
    let n = g.len();
    let mut c = CoefficientMatrix::zeros(n);
    let mut w = weights.iter().cycle();
    for k in 0..n {
        let ball: Vec<usize> = g
            .ball(g.points()[k])
            .unwrap()
            .points()
            .iter()
            .map(|&p| g.index_of(p).unwrap())
            .collect();
        let raw: Vec<f64> = ball
            .iter()
            .map(|_| {
                let x = *w.next().unwrap();
                if positive {
                    0.05 + x
                } else if x < 0.3 {
                    0.0
                } else {
                    x
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

fn space_and_weights() -> impl Strategy<Value = (DigitalSpace, Vec<f64>)> {
    (0..SPACES.len(), proptest::collection::vec(0.0f64..1.0, 64))
        .prop_map(|(i, w)| (catalog::space(SPACES[i]).unwrap(), w))
}

fn field(n: usize, raw: &[f64]) -> Vec<f64> {
    (0..n).map(|i| raw[i % raw.len()]).collect()
}

/// Support pattern power `A^m` as booleans.
fn pattern_power(c: &CoefficientMatrix, m: usize) -> Vec<Vec<bool>> {
    let n = c.size();
    let a: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| c.get(i, j) != 0.0).collect()).collect();
    let mut p = a.clone();
    for _ in 1..m {
        p = (0..n)
            .map(|i| (0..n).map(|j| (0..n).any(|k| p[i][k] && a[k][j])).collect())
            .collect();
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conservation((g, w) in space_and_weights(), f0 in proptest::collection::vec(-5.0f64..20.0, 16)) {
        let c = diffusion_from_weights(&g, &w, false);
        prop_assert!(c.is_diffusion());
        c.check_support(&g).unwrap();
        let mut f = FieldState::new(field(g.len(), &f0));
        let s0 = f.sum();
        for _ in 0..40 {
            let next = step(&f, &c, None).unwrap();
            prop_assert!((next.sum() - f.sum()).abs() < 1e-9 * s0.abs().max(1.0));
            f = next;
        }
    }

    #[test]
    fn norm_is_monotone((g, w) in space_and_weights(), f0 in proptest::collection::vec(-10.0f64..10.0, 16)) {
        let c = diffusion_from_weights(&g, &w, false);
        let mut f = FieldState::new(field(g.len(), &f0));
        for _ in 0..40 {
            let next = step(&f, &c, None).unwrap();
            prop_assert!(next.norm1() <= f.norm1() + 1e-12);
            f = next;
        }
    }

    #[test]
    fn stability_condition_bounds_norm(
        (g, w) in space_and_weights(),
        f0 in proptest::collection::vec(-10.0f64..10.0, 16),
        signs in proptest::collection::vec(any::<bool>(), 64),
    ) {
        let n = g.len();
        let bound = 1.0 / n as f64;
        let mut c = diffusion_from_weights(&g, &w, true);
        // Rescale into the strict bound with random signs.
        for (i, (p, k, v)) in c.clone().nonzeros().enumerate() {
            let s = if signs[i % signs.len()] { 1.0 } else { -1.0 };
            c.set(p, k, s * v * bound * 0.999 / (n as f64));
        }
        prop_assert!(stability_bound_check([&c], n));
        let f0 = FieldState::new(field(n, &f0));
        let mut f = f0.clone();
        for _ in 0..40 {
            f = step(&f, &c, None).unwrap();
            prop_assert!(f.norm1() <= f0.norm1() + 1e-12);
        }
    }

    #[test]
    fn limit_is_set_by_the_sum(
        (g, w) in space_and_weights(),
        a in proptest::collection::vec(0.0f64..5.0, 16),
        b in proptest::collection::vec(0.0f64..5.0, 16),
    ) {
        let c = diffusion_from_weights(&g, &w, true);
        prop_assert!(is_primitive(&c));
        let report = limit_matrix(&c, 1e-13, 64).unwrap();
        let l = report.limit.clone().unwrap();
        prop_assert!(c.mul(&l).max_abs_diff(&l) < 1e-9);
        let fa = field(g.len(), &a);
        let mut fb = field(g.len(), &b);
        // Rescale b to the same total as a.
        let (sa, sb): (f64, f64) = (fa.iter().sum(), fb.iter().sum());
        fb.iter_mut().for_each(|x| *x *= sa / sb);
        let limit_a = stationary_solution(&c, &FieldState::new(fa.clone())).unwrap();
        let limit_b = stationary_solution(&c, &FieldState::new(fb.clone())).unwrap();
        prop_assert!(limit_a.distance1(&limit_b) < 1e-9 * g.len() as f64 * sa.max(1.0));
        prop_assert!(elliptic_residual(&c, &limit_a.values) < 1e-9);
        let run = solve_ivp(&Problem::ivp(g.clone(), c.clone(), fa).with_horizon(20_000, Some(1e-13))).unwrap();
        for (x, y) in run.last().values.iter().zip(&limit_a.values) {
            prop_assert!((x - y).abs() < 1e-6);
        }
    }

    #[test]
    fn primitivity_matches_wielandt((g, w) in space_and_weights(), drop_diag in any::<bool>()) {
        let mut c = diffusion_from_weights(&g, &w, true);
        if drop_diag {
            for k in 0..c.size() {
                c.set(k, k, 0.0);
            }
        }
        let n = c.size();
        let wielandt = pattern_power(&c, n * n - 2 * n + 2).iter().all(|r| r.iter().all(|&x| x));
        prop_assert_eq!(is_primitive(&c), wielandt);
        prop_assert!(is_irreducible(&c));
    }
}

#[test]
fn bipartite_support_is_periodic() {
    let c4 = DigitalSpace::cycle(4).unwrap();
    let c = CoefficientMatrix::uniform(&c4, 0.5, &digispace::solver::Diagonal::Constant(0.0)).unwrap();
    assert!(is_irreducible(&c));
    assert!(!is_primitive(&c));
    let c5 = DigitalSpace::cycle(5).unwrap();
    let c = CoefficientMatrix::uniform(&c5, 0.5, &digispace::solver::Diagonal::Constant(0.0)).unwrap();
    assert!(is_primitive(&c));
}

#[test]
fn disconnected_support_is_reducible() {
    let g = DigitalSpace::discrete(3);
    let c = CoefficientMatrix::identity(3);
    c.check_support(&g).unwrap();
    assert!(!is_irreducible(&c));
}

use std::f64::consts::TAU;

use proptest::prelude::*;

use dirichlet_eigen::bounds::{
    enumerate_configurations, isoperimetric_lower_bound, ConstraintFunctional, ConstraintKind,
};
use dirichlet_eigen::experiments::{convex_hull, half_disk_integrals, polygon_objective, OptimizerOptions};
use dirichlet_eigen::fem2d::{dirichlet_eigs, triangulate_convex, ConvexDomain2D, Point};
use dirichlet_eigen::{ball_eigenvalues, bessel_j, harmonic_multiplicity, nth_zero, Order};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ball_spectrum_is_sorted_and_counts_multiplicity(m in 2usize..9, count in 1usize..120) {
        let s = ball_eigenvalues(m, count).unwrap();
        prop_assert_eq!(s.eigenvalues.len(), count);
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0].value <= w[1].value));
        for level in &s.levels {
            prop_assert_eq!(level.multiplicity, harmonic_multiplicity(m, level.degree).unwrap());
            let listed = s.eigenvalues.iter()
                .filter(|e| e.degree == level.degree && e.radial_index == level.radial_index)
                .count() as u128;
            prop_assert!(listed <= level.multiplicity);
        }
        // every listed value is a squared Bessel zero
        for e in s.eigenvalues.iter().take(10) {
            let nu = e.degree as f64 + m as f64 / 2.0 - 1.0;
            let j = bessel_j(Order::new(nu).unwrap(), e.value.sqrt()).unwrap();
            prop_assert!(j.abs() < 1e-8, "J_{}({}) = {}", nu, e.value.sqrt(), j);
        }
    }

    #[test]
    fn ground_state_bound_is_attained_by_the_ball(m in 2usize..12, budget in 0.1f64..10.0) {
        for kind in [ConstraintKind::LebesgueMeasure, ConstraintKind::TorsionalRigidity] {
            let unit = ConstraintFunctional::new(kind, m, 1.0).unwrap().unit_ball_value();
            let c = ConstraintFunctional::new(kind, m, budget * unit).unwrap();
            let bound = isoperimetric_lower_bound(1, &c).unwrap();
            // the ball with that budget has radius budget^{1/β}
            let j = nth_zero(Order::new(m as f64 / 2.0 - 1.0).unwrap(), 1, 1e-14).unwrap().value;
            let truth = j * j / budget.powf(2.0 / c.beta);
            prop_assert!((bound / truth - 1.0).abs() < 1e-10);
            let two = isoperimetric_lower_bound(2, &c).unwrap();
            prop_assert!((two / bound - 2f64.powf(2.0 / c.beta)).abs() < 1e-10);
        }
    }

    #[test]
    fn configurations_are_admissible(m in 2usize..30, k in 2usize..40, refined: bool) {
        let beta = m as f64;
        let cs = enumerate_configurations(m, k, beta, refined).unwrap();
        let per = if refined { 3 } else { 2 };
        let spectrum = ball_eigenvalues(m, k).unwrap();
        let cap = (spectrum.lambda(k).unwrap() / spectrum.lambda(1).unwrap()).powf(beta / 2.0);
        prop_assert!(cs.windows(2).all(|w| w[0].omega <= w[1].omega));
        for c in &cs {
            prop_assert_eq!(c.omega, c.k1 + c.k2);
            prop_assert!(c.omega >= 1);
            prop_assert!((c.k1 + 2 * c.k2) as f64 <= cap + 1e-9);
            if c.k2 == 0 {
                prop_assert_eq!(c.k1, k);
            } else {
                prop_assert!(c.k1 + per * c.k2 <= k);
            }
        }
        if refined {
            let loose = enumerate_configurations(m, k, beta, false).unwrap();
            prop_assert!(cs.iter().all(|c| loose.contains(c)));
        }
    }

    #[test]
    fn hull_is_convex_and_contains_its_input(
        pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3..40)
    ) {
        let pts: Vec<Point> = pts.into_iter().map(|(x, y)| [x, y]).collect();
        let hull = convex_hull(&pts);
        prop_assume!(hull.len() >= 3);
        let n = hull.len();
        for i in 0..n {
            let (a, b) = (hull[i], hull[(i + 1) % n]);
            let c = hull[(i + 2) % n];
            prop_assert!((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) > 0.0);
            for p in &pts {
                let side = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
                prop_assert!(side >= -1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn quadrature_ratio_is_stable_under_refinement(nr in 24usize..64, nt in 24usize..64) {
        let (a, b) = half_disk_integrals(nr, nt).unwrap();
        let (c, d) = half_disk_integrals(2 * nr, 2 * nt).unwrap();
        prop_assert!((a / b - c / d).abs() < 1e-10);
        prop_assert!((a / b - 0.75).abs() < 1e-10);
    }

    #[test]
    fn eigenvalues_scale_inversely_with_area(alpha in 0.3f64..4.0, n in 5usize..9) {
        let d = ConvexDomain2D::regular_polygon(n, 1.0).unwrap();
        let mesh = triangulate_convex(&d, 0.15).unwrap();
        let base = dirichlet_eigs(&mesh, 3, 1e-10).unwrap().eigenvalues;
        let scaled = dirichlet_eigs(&mesh.scaled(alpha), 3, 1e-10).unwrap().eigenvalues;
        for (a, b) in base.iter().zip(&scaled) {
            prop_assert!((b * alpha * alpha / a - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn polygon_objective_ignores_size_and_position(
        scale in 0.2f64..5.0, dx in -3.0f64..3.0, dy in -3.0f64..3.0
    ) {
        let opts = OptimizerOptions { target_h: 0.12, ..OptimizerOptions::default() };
        let d = ConvexDomain2D::regular_polygon(9, 1.0).unwrap();
        let p = d.polygon_vertices().unwrap();
        let moved: Vec<Point> = p.iter().map(|v| [scale * v[0] + dx, scale * v[1] + dy]).collect();
        let a = polygon_objective(p, 2, &opts).unwrap();
        let b = polygon_objective(&moved, 2, &opts).unwrap();
        prop_assert!((a / b - 1.0).abs() < 1e-6, "{} vs {}", a, b);
    }
}

#[test]
fn fem_disk_tracks_the_ball_spectrum() {
    let mesh = triangulate_convex(&ConvexDomain2D::disk(1.0).unwrap(), 0.05).unwrap();
    let fem = dirichlet_eigs(&mesh, 5, 1e-10).unwrap().eigenvalues;
    let exact = ball_eigenvalues(2, 5).unwrap().values();
    for (f, e) in fem.iter().zip(&exact) {
        // conforming P1 approximates from above
        assert!(f >= e && f / e - 1.0 < 0.01, "{f} vs {e}");
    }
}

#[test]
fn regular_polygon_objective_is_near_the_disk_value() {
    let opts = OptimizerOptions { target_h: 0.06, ..OptimizerOptions::default() };
    let d = ConvexDomain2D::regular_polygon(16, 1.0).unwrap();
    let v = polygon_objective(d.polygon_vertices().unwrap(), 2, &opts).unwrap();
    let j1 = 3.831_705_970_207_512;
    let disk = TAU * TAU * j1 * j1;
    assert!((v / disk - 1.0).abs() < 0.03, "{v} vs {disk}");
}

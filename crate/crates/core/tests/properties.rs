use std::sync::Arc;

use proptest::prelude::*;

use prli::cost::{example_quadratic, ConvexFeasibleSet, FnMeasure};
use prli::hybrid::{build_prli, solve, HybridArc, SolveHorizon};
use prli::linalg::Vector;
use prli::optimizers::{gd_scheme, hb_scheme};
use prli::oracle::{quadrature_oracle, OracleConfig};
use prli::signals::{example_signal, sinusoidal_upe, Quadrature};

fn vec3(range: f64) -> impl Strategy<Value = Vector> {
    prop::array::uniform3(-range..range).prop_map(|a| Vector::from_row_slice(&a))
}

fn feasible_set() -> impl Strategy<Value = ConvexFeasibleSet> {
    prop_oneof![
        (vec3(5.0), 0.1..5.0f64).prop_map(|(c, r)| ConvexFeasibleSet::ball(c, r).unwrap()),
        (vec3(5.0), prop::array::uniform3(0.0..4.0f64)).prop_map(|(lo, w)| {
            let hi = &lo + Vector::from_row_slice(&w);
            ConvexFeasibleSet::boxed(lo, hi).unwrap()
        }),
        (vec3(3.0), -5.0..5.0f64)
            .prop_filter("nonzero normal", |(n, _)| n.norm() > 1e-3)
            .prop_map(|(n, b)| ConvexFeasibleSet::halfspace(n, b).unwrap()),
    ]
}

fn small_oracle() -> OracleConfig {
    OracleConfig::new(0.1, sinusoidal_upe(3).unwrap(), Quadrature::simpson(256).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_lands_in_the_set_and_is_idempotent(set in feasible_set(), u in vec3(20.0)) {
        let p = set.project(&u);
        prop_assert!(set.contains(&p));
        prop_assert_eq!(set.project(&p), p);
    }

    #[test]
    fn projection_is_non_expansive(set in feasible_set(), u in vec3(20.0), w in vec3(20.0)) {
        let d = (set.project(&u) - set.project(&w)).norm();
        prop_assert!(d <= (&u - &w).norm() * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn oracle_is_linear_in_the_measurement(
        u in vec3(5.0),
        alpha in -3.0..3.0f64,
        beta in -3.0..3.0f64,
        c in vec3(2.0),
    ) {
        let cfg = small_oracle();
        let cc = c.clone();
        let g = FnMeasure::new(3, move |x: &Vector| x.dot(&cc).exp().min(1e6));
        let ff = FnMeasure::new(3, |x: &Vector| (x[0] * x[1]).sin() + x[2].powi(3));
        let cg = c.clone();
        let mix = FnMeasure::new(3, move |x: &Vector| {
            alpha * ((x[0] * x[1]).sin() + x[2].powi(3)) + beta * x.dot(&cg).exp().min(1e6)
        });
        let lhs = quadrature_oracle(&mix, &u, &cfg).unwrap();
        let rhs = quadrature_oracle(&ff, &u, &cfg).unwrap() * alpha + quadrature_oracle(&g, &u, &cfg).unwrap() * beta;
        let scale = 1.0 + lhs.norm().max(rhs.norm());
        prop_assert!((lhs - rhs).norm() <= 1e-9 * scale);
    }

    #[test]
    fn oracle_ignores_constant_offsets(u in vec3(10.0), offset in -100.0..100.0f64) {
        let cfg = OracleConfig::with_signal(0.1, example_signal(true)).unwrap();
        let cost = example_quadratic();
        let shifted = FnMeasure::new(3, move |x: &Vector| example_quadratic().value(x) + offset);
        let a = quadrature_oracle(&cost, &u, &cfg).unwrap();
        let b = quadrature_oracle(&shifted, &u, &cfg).unwrap();
        prop_assert!((a - b).norm() <= 1e-8 * (1.0 + offset.abs()));
    }

    #[test]
    fn arcs_reset_at_unit_intervals(u0 in vec3(8.0), gamma in 0.05..0.6f64, momentum in any::<bool>(), jumps in 1usize..6) {
        let scheme = if momentum { hb_scheme(gamma, 0.1) } else { gd_scheme(gamma) };
        let sys = build_prli(Arc::new(example_quadratic()), scheme, small_oracle()).unwrap();
        let arc = solve(&sys, &sys.initial_state(&u0), SolveHorizon::jumps(jumps), 0.01).unwrap();
        let lay = arc.layout.unwrap();
        prop_assert_eq!(arc.jumps(), jumps);
        for (k, t) in arc.jump_times.iter().enumerate() {
            prop_assert!((t - (k + 1) as f64).abs() <= 1e-9);
        }
        for j in 1..=jumps {
            let s = &arc.samples[arc.jump_index(j).unwrap()];
            prop_assert_eq!(lay.tau(&s.x), 0.0);
            prop_assert!(lay.p(&s.x).iter().all(|v| *v == 0.0));
        }
        for w in arc.samples.windows(2) {
            prop_assert!(w[1].t >= w[0].t && w[1].j >= w[0].j && w[1].j <= w[0].j + 1);
            prop_assert!((0.0..=1.0).contains(&lay.tau(&w[1].x)));
        }
    }

    #[test]
    fn csv_round_trip(u0 in vec3(8.0), jumps in 1usize..4) {
        let sys = build_prli(Arc::new(example_quadratic()), gd_scheme(0.3), small_oracle()).unwrap();
        let arc = solve(&sys, &sys.initial_state(&u0), SolveHorizon::jumps(jumps), 0.05).unwrap();
        let text = arc.to_csv().unwrap();
        let back = HybridArc::read_csv(text.as_bytes()).unwrap();
        prop_assert_eq!(back.samples.len(), arc.samples.len());
        prop_assert_eq!(&back.jump_times, &arc.jump_times);
        for (a, b) in arc.samples.iter().zip(&back.samples) {
            prop_assert_eq!(a.t, b.t);
            prop_assert_eq!(a.j, b.j);
            prop_assert_eq!(&a.x, &b.x);
        }
        prop_assert_eq!(back.to_csv().unwrap(), text);
    }
}

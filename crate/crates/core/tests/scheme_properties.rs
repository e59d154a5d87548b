use liftoff_core::{
    solve, step, Advection, DriftProfile, OuterBoundary, RadialField, RadialGrid, RadialOperator, SolverConfig,
};
use proptest::prelude::*;

fn profiles() -> Vec<DriftProfile> {
    vec![
        DriftProfile::power_law(3.0, -1.0, 1.0).unwrap(),
        DriftProfile::power_law(-1.5, 0.5, 2.0).unwrap(),
        DriftProfile::log_corrected(2, 2.0, 2.0).unwrap(),
        DriftProfile::Linear,
        DriftProfile::Zero,
        DriftProfile::tabulated(vec![0.0, 2.0, 5.0, 16.0], vec![0.0, 1.5, -0.5, 2.0]).unwrap(),
    ]
}

fn arb_profile() -> impl Strategy<Value = DriftProfile> {
    prop_oneof![
        (-4.0f64..4.0, -2.5f64..1.0, 0.5f64..3.0).prop_map(|(a, b, r0)| DriftProfile::power_law(a, b, r0).unwrap()),
        (1usize..4, -2.0f64..3.0, 1.2f64..3.0)
            .prop_map(|(n, alpha, r0)| DriftProfile::log_corrected(n, alpha, r0).unwrap()),
        Just(DriftProfile::Linear),
        Just(DriftProfile::Zero),
        prop::collection::vec(-3.0f64..3.0, 4).prop_map(|v| {
            DriftProfile::tabulated(vec![0.0, 1.0, 4.0, 9.0, 12.0], vec![0.0, v[0], v[1], v[2], v[3]]).unwrap()
        }),
    ]
}

fn arb_config() -> impl Strategy<Value = SolverConfig> {
    (1e-3f64..0.2, 0.0f64..=1.0, prop::bool::ANY, prop::bool::ANY).prop_map(|(dt, theta, neumann, upwind)| {
        SolverConfig {
            dt,
            theta,
            outer_bc: if neumann {
                OuterBoundary::Neumann
            } else {
                OuterBoundary::DirichletFrozen
            },
            advection: if upwind { Advection::Upwind } else { Advection::Centered },
            snapshot_stride: 1,
        }
    })
}

/// Radially non-increasing, non-negative data built from random decrements.
fn arb_decreasing(nodes: usize) -> impl Strategy<Value = Vec<f64>> {
    (prop::collection::vec(0.0f64..1.0, nodes), 0.0f64..0.5).prop_map(|(steps, floor)| {
        let total: f64 = steps.iter().sum::<f64>().max(1e-12);
        let mut v = 1.0 + floor;
        steps
            .iter()
            .map(|s| {
                let out = v;
                v -= s / total;
                out.max(floor)
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constants_are_stationary(profile in arb_profile(), config in arb_config(), c in -5.0f64..5.0, n_dim in 1usize..5) {
        let grid = RadialGrid::new(12.0, 97, n_dim).unwrap();
        let u = RadialField::constant(grid, c).unwrap();
        let next = step(&u, &profile, &config).unwrap();
        for &v in next.values() {
            prop_assert!((v - c).abs() <= 4.0 * f64::EPSILON * c.abs());
        }
    }

    #[test]
    fn monotone_scheme_obeys_maximum_principle(
        profile in arb_profile(),
        values in prop::collection::vec(-1.0f64..2.0, 97),
        dt in 1e-3f64..1.0,
        neumann in prop::bool::ANY,
    ) {
        let grid = RadialGrid::new(12.0, 97, 2).unwrap();
        let u = RadialField::new(grid, values).unwrap();
        let config = SolverConfig {
            outer_bc: if neumann { OuterBoundary::Neumann } else { OuterBoundary::DirichletFrozen },
            ..SolverConfig::monotone(dt)
        };
        let op = RadialOperator::for_config(&grid, &profile, &config).unwrap();
        prop_assert!(op.implicit_matrix(1.0, dt).has_m_matrix_signs());
        let (lo, hi) = (u.inf(), u.sup());
        let scale = lo.abs().max(hi.abs());
        let next = step(&u, &profile, &config).unwrap();
        for &v in next.values() {
            prop_assert!(v >= lo - 1e-12 * scale && v <= hi + 1e-12 * scale, "{v} outside [{lo}, {hi}]");
        }
    }

    #[test]
    fn monotone_scheme_preserves_radial_monotonicity(
        profile in arb_profile(),
        values in arb_decreasing(97),
        dt in 1e-3f64..1.0,
        neumann in prop::bool::ANY,
    ) {
        let grid = RadialGrid::new(12.0, 97, 3).unwrap();
        let u = RadialField::new(grid, values).unwrap();
        let config = SolverConfig {
            outer_bc: if neumann { OuterBoundary::Neumann } else { OuterBoundary::DirichletFrozen },
            ..SolverConfig::monotone(dt)
        };
        let traj = solve(&u, &profile, &config, 5.0 * dt).unwrap();
        for frame in &traj.frames {
            for w in frame.values().windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-10);
            }
        }
    }

    #[test]
    fn solution_map_is_linear(
        profile in arb_profile(),
        config in arb_config(),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        u_vals in prop::collection::vec(-1.0f64..1.0, 65),
        v_vals in prop::collection::vec(-1.0f64..1.0, 65),
    ) {
        let grid = RadialGrid::new(12.0, 65, 2).unwrap();
        let u = RadialField::new(grid, u_vals).unwrap();
        let v = RadialField::new(grid, v_vals).unwrap();
        let config = SolverConfig { dt: config.dt.min(0.02), ..config };
        let t_end = 4.5 * config.dt;
        let combo = u.linear_combination(a, &v, b).unwrap();
        let tu = solve(&u, &profile, &config, t_end).unwrap();
        let tv = solve(&v, &profile, &config, t_end).unwrap();
        let tc = solve(&combo, &profile, &config, t_end).unwrap();
        for ((fu, fv), fc) in tu.frames.iter().zip(&tv.frames).zip(&tc.frames) {
            let expected = fu.linear_combination(a, fv, b).unwrap();
            let scale = expected.values().iter().fold(1e-300f64, |m, x| m.max(x.abs()))
                .max(a.abs() * fu.sup().abs().max(fu.inf().abs()))
                .max(b.abs() * fv.sup().abs().max(fv.inf().abs()));
            for (x, y) in fc.values().iter().zip(expected.values()) {
                prop_assert!((x - y).abs() <= 1e-12 * scale, "{x} vs {y}");
            }
        }
    }
}

#[test]
fn positivity_and_positive_center() {
    let grid = RadialGrid::new(15.0, 301, 2).unwrap();
    let u0 = RadialField::from_fn(grid, |r| if r < 2.0 { 1.0 - r / 2.0 } else { 0.0 }).unwrap();
    for profile in profiles() {
        let config = SolverConfig {
            snapshot_stride: 10,
            ..SolverConfig::monotone(0.01)
        };
        let traj = solve(&u0, &profile, &config, 2.0).unwrap();
        for (t, frame) in traj.iter().skip(1) {
            assert!(frame.inf() >= -1e-12, "{profile:?} t={t}");
            assert!(frame.center() > 0.0, "{profile:?} t={t}");
        }
    }
}

#[test]
fn heat_flow_sup_decreases() {
    let grid = RadialGrid::new(20.0, 401, 3).unwrap();
    let u0 = RadialField::from_fn(grid, |r| if r < 3.0 { (3.0 - r).powi(2) } else { 0.0 }).unwrap();
    let config = SolverConfig {
        snapshot_stride: 5,
        ..SolverConfig::default()
    };
    let traj = solve(&u0, &DriftProfile::Zero, &config, 3.0).unwrap();
    for w in traj.frames.windows(2) {
        assert!(w[1].sup() < w[0].sup());
    }
}

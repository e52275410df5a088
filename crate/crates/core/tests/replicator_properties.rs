use proptest::prelude::*;
use threat_dynamics::replicator::{
    closed_form_rest_points, gradient, integrate, numeric_rest_points, phase_grid, RestPointKind,
    Stability,
};
use threat_dynamics::simplex::lattice_size;
use threat_dynamics::{payoff_matrix, Params, Point, Variant};

fn params() -> impl Strategy<Value = Params> {
    (
        -3.0..3.0f64,
        0.01..2.0f64,
        0.01..2.0f64,
        0.01..2.0f64,
        0.0..3.0f64,
        0.0..5.0f64,
        0.0..2.0f64,
    )
        .prop_map(|(s, a, b, c, p, q, theta)| {
            Params::new(s + a + b + c, s + a + b, s + a, s, p, q, theta)
        })
}

fn start(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01..1.0f64, k).prop_map(|w| {
        let t: f64 = w.iter().sum();
        w.into_iter().map(|x| x / t).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trajectories_stay_on_the_simplex(p in params(), x in start(4)) {
        let m = payoff_matrix(Variant::Threat4, &p).unwrap();
        let traj = integrate(&Point::new(x).unwrap(), &m, 0.01, 2_000).unwrap();
        prop_assert!(traj.max_sum_drift <= 1e-9);
        prop_assert!(traj.min_component >= -1e-12);
        prop_assert!(traj.max_component <= 1.0 + 1e-12);
    }

    #[test]
    fn closed_form_points_are_rest_points(p in params()) {
        for variant in [Variant::Pdc, Variant::Threat3] {
            let (points, _) = closed_form_rest_points(variant, &p).unwrap();
            let m = payoff_matrix(variant, &p).unwrap();
            for r in points {
                let g = gradient(&r.point, &m).unwrap();
                prop_assert!(g.iter().all(|v| v.abs() <= 1e-9), "{:?}", r.point);
            }
        }
    }
}

#[test]
fn phase_grid_sizes() {
    let p = Params::reference();
    assert_eq!(
        phase_grid::<f64>(Variant::Threat3, &p, 50).unwrap().len(),
        1326
    );
    assert_eq!(lattice_size(3, 50), 1326);
    assert_eq!(
        phase_grid::<f64>(Variant::Threat4, &p, 10).unwrap().len(),
        4 * 66
    );
}

#[test]
fn threat3_reference_portrait() {
    let p = Params::reference();
    let (points, omitted) = closed_form_rest_points(Variant::Threat3, &p).unwrap();
    assert!(omitted.is_empty() || omitted.iter().all(|o| !o.reason.is_empty()));
    let edge = points
        .iter()
        .find(|r| r.kind == RestPointKind::Point && (r.point[0] - 0.6).abs() < 1e-15)
        .unwrap();
    assert_eq!(edge.point[1], 0.4);
    assert!(points.iter().any(|r| r.is_segment()));

    let numeric = numeric_rest_points(Variant::Threat3, &p, 20).unwrap();
    let all_pt = numeric.iter().find(|r| r.point[0] == 1.0).unwrap();
    assert_ne!(all_pt.classification, Stability::Unstable);
}

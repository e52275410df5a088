//! Shared proptest generators for unit tests.

use proptest::prelude::*;

use crate::game::GameParams;

/// Random parameters satisfying T > R > P > S with non-negative costs.
pub(crate) fn valid_params() -> impl Strategy<Value = GameParams<f64>> {
    (
        -3.0..3.0f64,
        0.01..2.0f64,
        0.01..2.0f64,
        0.01..2.0f64,
        0.0..3.0f64,
        0.0..5.0f64,
        0.0..2.0f64,
    )
        .prop_map(|(s, gap1, gap2, gap3, p, q, theta)| {
            let pun = s + gap1;
            let r = pun + gap2;
            let t = r + gap3;
            GameParams::new(t, r, pun, s, p, q, theta)
        })
}

/// Random point of the (k-1)-simplex.
pub(crate) fn simplex_weights(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0f64, k).prop_map(|w| {
        let total: f64 = w.iter().sum();
        if total <= 1e-12 {
            let mut v = vec![0.0; w.len()];
            v[0] = 1.0;
            v
        } else {
            w.iter().map(|x| x / total).collect()
        }
    })
}

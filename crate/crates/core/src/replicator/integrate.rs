use crate::error::{Error, Result};
use crate::game::PayoffMatrix;
use crate::scalar::Real;
use crate::simplex::SimplexPoint;

use super::gradient_raw;

pub const DEFAULT_DT: f64 = 0.01;

/// Sampled solution of the replicator equation, one sample per step
/// including the initial state.
#[derive(Debug, Clone)]
pub struct Trajectory<F> {
    pub samples: Vec<(F, SimplexPoint<F>)>,
    /// Largest `|sum(x) - 1|` seen before clipping.
    pub max_sum_drift: F,
    /// Smallest component seen before clipping.
    pub min_component: F,
    /// Largest component seen before clipping.
    pub max_component: F,
}

impl<F: Real> Trajectory<F> {
    pub fn last(&self) -> &SimplexPoint<F> {
        &self
            .samples
            .last()
            .expect("trajectory holds the initial state")
            .1
    }
}

fn axpy<F: Real>(x: &[F], h: F, k: &[F]) -> Vec<F> {
    x.iter().zip(k).map(|(&a, &b)| a + h * b).collect()
}

/// Classic fourth-order Runge-Kutta on the replicator field with fixed step
/// `dt`. After every step negative components are clipped to zero and the
/// state renormalized onto the simplex.
pub fn integrate<F: Real>(
    x0: &SimplexPoint<F>,
    m: &PayoffMatrix<F>,
    dt: F,
    steps: usize,
) -> Result<Trajectory<F>> {
    if x0.dim() != m.size() {
        return Err(Error::Dimension {
            expected: m.size(),
            got: x0.dim(),
        });
    }
    if !(dt > F::zero()) || !dt.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "dt must be positive, got {dt}"
        )));
    }
    let half = F::lit(0.5);
    let sixth = F::one() / F::lit(6.0);
    let two = F::lit(2.0);

    let mut samples = Vec::with_capacity(steps + 1);
    samples.push((F::zero(), x0.clone()));
    let mut x = x0.as_slice().to_vec();
    let mut max_sum_drift = F::zero();
    let mut min_component = x.iter().copied().fold(F::infinity(), F::min);
    let mut max_component = x.iter().copied().fold(F::neg_infinity(), F::max);

    for step in 1..=steps {
        let k1 = gradient_raw(&x, m);
        let k2 = gradient_raw(&axpy(&x, half * dt, &k1), m);
        let k3 = gradient_raw(&axpy(&x, half * dt, &k2), m);
        let k4 = gradient_raw(&axpy(&x, dt, &k3), m);
        let next: Vec<F> = (0..x.len())
            .map(|i| x[i] + dt * sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]))
            .collect();

        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step });
        }
        let sum = next.iter().fold(F::zero(), |a, &b| a + b);
        max_sum_drift = max_sum_drift.max((sum - F::one()).abs());
        for &v in &next {
            min_component = min_component.min(v);
            max_component = max_component.max(v);
        }

        let clipped: Vec<F> = next.into_iter().map(|v| v.max(F::zero())).collect();
        let total = clipped.iter().fold(F::zero(), |a, &b| a + b);
        if !(total > F::zero()) {
            return Err(Error::NonFinite { step });
        }
        x = clipped
            .into_iter()
            .map(|v| (v / total).min(F::one()))
            .collect();
        let t = F::from_count(step) * dt;
        samples.push((t, SimplexPoint::from_unchecked(x.clone())));
    }

    Ok(Trajectory {
        samples,
        max_sum_drift,
        min_component,
        max_component,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{payoff_matrix, GameParams, Variant};

    fn threat3() -> PayoffMatrix<f64> {
        payoff_matrix(Variant::Threat3, &GameParams::reference()).unwrap()
    }

    #[test]
    fn vertex_is_constant() {
        let m = threat3();
        for i in 0..3 {
            let x0 = SimplexPoint::vertex(3, i);
            let traj = integrate(&x0, &m, 0.01, 500).unwrap();
            assert_eq!(traj.samples.len(), 501);
            assert!(traj.samples.iter().all(|(_, x)| x == &x0));
        }
    }

    #[test]
    fn signalling_defectors_drive_population_to_punishers() {
        let x0 = SimplexPoint::new(vec![0.1, 0.1, 0.8]).unwrap();
        let traj = integrate(&x0, &threat3(), DEFAULT_DT, 5_000).unwrap();
        let end = traj.last();
        assert!(end[0] > 0.95, "x_PT = {}", end[0]);
        assert!(end[1] < 1e-3, "x_D = {}", end[1]);
        // approach to all-PT is slow (DT is neutral there) but monotone
        assert!(traj.samples[2500..]
            .windows(2)
            .all(|w| w[1].1[0] >= w[0].1[0]));
    }

    #[test]
    fn time_stamps_strictly_increase() {
        let x0 = SimplexPoint::new(vec![0.3, 0.3, 0.4]).unwrap();
        let traj = integrate(&x0, &threat3(), 0.05, 100).unwrap();
        assert!(traj.samples.windows(2).all(|w| w[1].0 > w[0].0));
        assert!((traj.samples[100].0 - 5.0).abs() < 1e-12);
    }

    #[test]
    fn works_in_single_precision() {
        let m = payoff_matrix(Variant::Threat3, &GameParams::<f32>::reference()).unwrap();
        let x0 = SimplexPoint::new(vec![0.1f32, 0.1, 0.8]).unwrap();
        let traj = integrate(&x0, &m, 0.01, 2_000).unwrap();
        let s: f32 = traj.last().as_slice().iter().sum();
        assert!((s - 1.0).abs() < 1e-5);
    }

    #[test]
    fn rejects_bad_step() {
        let x0 = SimplexPoint::new(vec![0.3, 0.3, 0.4]).unwrap();
        assert!(integrate(&x0, &threat3(), 0.0, 10).is_err());
        assert!(integrate(&x0, &threat3(), f64::NAN, 10).is_err());
    }

    #[test]
    fn absent_strategy_stays_absent() {
        let x0 = SimplexPoint::new(vec![0.5, 0.5, 0.0]).unwrap();
        let traj = integrate(&x0, &threat3(), 0.01, 1_000).unwrap();
        assert!(traj.samples.iter().all(|(_, x)| x[2] == 0.0));
    }
}

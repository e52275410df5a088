//! Replicator dynamics for infinite well-mixed populations.
//!
//! With frequencies `x` and payoff matrix `M` the average payoff of strategy
//! `i` is `Pi_i = sum_j x_j M[i][j]`, the mean fitness is
//! `Pi_bar = sum_i x_i Pi_i`, and the selection gradient is
//! `dx_i/dt = x_i (Pi_i - Pi_bar)`.

mod integrate;
mod phase;
mod rest_points;

pub use integrate::{integrate, Trajectory, DEFAULT_DT};
pub use phase::{phase_grid, PhaseSample};
pub use rest_points::{
    classify_rest_point, closed_form_candidates, closed_form_rest_points, numeric_rest_points,
    support_label, ClosedFormPoint, ClosedFormSet, Omission, RestPoint, RestPointKind,
    RestPointSource, Stability, CLASSIFY_FD_STEP, DEDUP_TOLERANCE, EIGEN_THRESHOLD,
    NEWTON_TOLERANCE, REST_TOLERANCE,
};

use crate::error::{Error, Result};
use crate::game::PayoffMatrix;
use crate::scalar::Scalar;
use crate::simplex::SimplexPoint;

fn check_dim<S: Scalar>(x: &[S], m: &PayoffMatrix<S>) -> Result<()> {
    if x.len() != m.size() {
        return Err(Error::Dimension {
            expected: m.size(),
            got: x.len(),
        });
    }
    Ok(())
}

pub(crate) fn payoffs_raw<S: Scalar>(x: &[S], m: &PayoffMatrix<S>) -> Vec<S> {
    (0..m.size())
        .map(|i| {
            m.row(i)
                .iter()
                .zip(x)
                .fold(S::zero(), |acc, (&mij, &xj)| acc + xj * mij)
        })
        .collect()
}

pub(crate) fn mean_raw<S: Scalar>(x: &[S], payoffs: &[S]) -> S {
    x.iter()
        .zip(payoffs)
        .fold(S::zero(), |acc, (&xi, &pi)| acc + xi * pi)
}

pub(crate) fn gradient_raw<S: Scalar>(x: &[S], m: &PayoffMatrix<S>) -> Vec<S> {
    let payoffs = payoffs_raw(x, m);
    let mean = mean_raw(x, &payoffs);
    x.iter()
        .zip(&payoffs)
        .map(|(&xi, &pi)| xi * (pi - mean))
        .collect()
}

pub(crate) fn max_abs<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(|x| x.approx().abs()).fold(0.0, f64::max)
}

/// Average payoff `Pi_i` of every strategy against the population `x`.
pub fn avg_payoffs<S: Scalar>(x: &SimplexPoint<S>, m: &PayoffMatrix<S>) -> Result<Vec<S>> {
    check_dim(x.as_slice(), m)?;
    Ok(payoffs_raw(x.as_slice(), m))
}

pub fn mean_fitness<S: Scalar>(x: &SimplexPoint<S>, payoffs: &[S]) -> Result<S> {
    if payoffs.len() != x.dim() {
        return Err(Error::Dimension {
            expected: x.dim(),
            got: payoffs.len(),
        });
    }
    Ok(mean_raw(x.as_slice(), payoffs))
}

/// Selection gradient `x_i (Pi_i - Pi_bar)`.
pub fn gradient<S: Scalar>(x: &SimplexPoint<S>, m: &PayoffMatrix<S>) -> Result<Vec<S>> {
    check_dim(x.as_slice(), m)?;
    Ok(gradient_raw(x.as_slice(), m))
}

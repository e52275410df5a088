#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::len_without_is_empty)]

//! Evolution of cooperation under costly punishment with threat signalling.
//!
//! * [`game`]: strategies, variants, parameters and payoff matrices.
//! * [`replicator`]: infinite-population replicator dynamics, rest points
//!   and phase portraits.
//! * [`finite`]: average payoffs in finite populations, including the
//!   ordering effect of signalling punishers, and a sequential-encounter
//!   Monte Carlo check of those formulas.
//! * [`abm`]: the stochastic pairwise-comparison simulation.
//! * [`experiments`]: seeded parameter sweeps and ensemble statistics.
//!
//! Payoff algebra is generic over [`Scalar`]; the concrete aliases below
//! cover the common cases.

pub mod abm;
pub mod error;
pub mod experiments;
pub mod finite;
pub mod game;
pub mod replicator;
pub mod scalar;
pub mod simplex;
mod stats;

#[cfg(test)]
mod testing;

pub use error::{Error, Result};
pub use game::{payoff_matrix, validate_params, GameParams, PayoffMatrix, Strategy, Variant};
pub use scalar::{Real, Scalar};
pub use simplex::SimplexPoint;

/// Exact rational scalar.
pub type Exact = num_rational::Rational64;

pub type Params = GameParams<f64>;
pub type ExactParams = GameParams<Exact>;
pub type Matrix = PayoffMatrix<f64>;
pub type ExactMatrix = PayoffMatrix<Exact>;
pub type Point = SimplexPoint<f64>;
pub type ExactPoint = SimplexPoint<Exact>;
pub type Config = abm::AbmConfig<f64>;

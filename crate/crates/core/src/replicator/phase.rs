use rayon::prelude::*;

use crate::error::Result;
use crate::game::{payoff_matrix, GameParams, Strategy, Variant};
use crate::scalar::Real;
use crate::simplex::{lattice, SimplexPoint};

use super::gradient_raw;

/// One point of a phase portrait.
#[derive(Debug, Clone)]
pub struct PhaseSample<F> {
    /// Strategy held at zero for four-strategy faces, `None` for 3-strategy
    /// variants.
    pub face: Option<Strategy>,
    pub point: SimplexPoint<F>,
    pub gradient: Vec<F>,
    /// Euclidean norm of the gradient.
    pub speed: F,
}

/// Samples the replicator field on the barycentric lattice of resolution
/// `resolution`. Four-strategy variants are sampled face by face, each face
/// being a three-strategy lattice with the omitted strategy at zero.
pub fn phase_grid<F: Real>(
    variant: Variant,
    params: &GameParams<F>,
    resolution: usize,
) -> Result<Vec<PhaseSample<F>>> {
    let m = payoff_matrix(variant, params)?;
    let k = variant.len();
    let mut points: Vec<(Option<Strategy>, Vec<F>)> = Vec::new();
    if k == 3 {
        points.extend(
            lattice::<F>(3, resolution)
                .into_iter()
                .map(|p| (None, p.into_vec())),
        );
    } else {
        for (omit, &strategy) in variant.strategies().iter().enumerate() {
            for p in lattice::<F>(k - 1, resolution) {
                let mut coords = p.into_vec();
                coords.insert(omit, F::zero());
                points.push((Some(strategy), coords));
            }
        }
    }

    Ok(points
        .into_par_iter()
        .map(|(face, coords)| {
            let g = gradient_raw(&coords, &m);
            let speed = g.iter().fold(F::zero(), |a, &v| a + v * v).sqrt();
            PhaseSample {
                face,
                point: SimplexPoint::from_unchecked(coords),
                gradient: g,
                speed,
            }
        })
        .collect())
}

//! Frequency vectors on the probability simplex and barycentric lattices.

use std::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tolerance on `|sum(x) - 1|` accepted by [`SimplexPoint::new`].
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Strategy frequencies `x_i` in `[0, 1]` summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint<S> {
    coords: Vec<S>,
}

impl<S: Scalar> SimplexPoint<S> {
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint("empty frequency vector".into()));
        }
        let mut sum = S::zero();
        for (i, &x) in coords.iter().enumerate() {
            if !x.is_finite_value() || x < S::zero() || x > S::one() {
                return Err(Error::InvalidPoint(format!("x[{i}] = {x} outside [0, 1]")));
            }
            sum = sum + x;
        }
        let dev = (sum - S::one()).approx().abs();
        if dev > SUM_TOLERANCE {
            return Err(Error::InvalidPoint(format!(
                "frequencies sum to {sum}, not 1"
            )));
        }
        Ok(SimplexPoint { coords })
    }

    /// The monomorphic state `e_i` in a `k`-strategy simplex.
    pub fn vertex(k: usize, i: usize) -> Self {
        let mut coords = vec![S::zero(); k];
        coords[i] = S::one();
        SimplexPoint { coords }
    }

    pub fn uniform(k: usize) -> Self {
        let share = S::one() / S::from_count(k);
        SimplexPoint {
            coords: vec![share; k],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.coords
    }

    pub fn into_vec(self) -> Vec<S> {
        self.coords
    }

    pub(crate) fn from_unchecked(coords: Vec<S>) -> Self {
        SimplexPoint { coords }
    }

    /// Indices with strictly positive frequency.
    pub fn support(&self) -> Vec<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > S::zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| (a - b).approx().abs())
            .fold(0.0, f64::max)
    }
}

impl<S> Index<usize> for SimplexPoint<S> {
    type Output = S;

    fn index(&self, i: usize) -> &S {
        &self.coords[i]
    }
}

/// All integer compositions `(a_1, .., a_k)` with `sum a_i = m`, in
/// lexicographic order of `a_1, a_2, ...`.
pub fn compositions(k: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in 0..=left {
            prefix.push(a);
            rec(k - 1, left - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(k, m, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Barycentric lattice of resolution `m`: every point `a / m` with `a` a
/// composition of `m` into `k` parts.
pub fn lattice<S: Scalar>(k: usize, m: usize) -> Vec<SimplexPoint<S>> {
    let denom = S::from_count(m.max(1));
    compositions(k, m)
        .into_iter()
        .map(|a| {
            SimplexPoint::from_unchecked(
                a.into_iter().map(|ai| S::from_count(ai) / denom).collect(),
            )
        })
        .collect()
}

/// Number of lattice points: `C(m + k - 1, k - 1)`.
pub fn lattice_size(k: usize, m: usize) -> usize {
    (1..k).fold(1usize, |acc, i| acc * (m + i) / i)
}

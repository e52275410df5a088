//! Explicit sequential-encounter simulation of one generation.
//!
//! All `N (N - 1) / 2` pairs meet once, in a uniformly random order. Each
//! PT carries a flag that is raised the first time it punishes. A PT meeting
//! a D always punishes; a PT meeting a DT cooperates if its flag is up and
//! otherwise both defect-and-punish, raising the flag. Averaging over many
//! orderings estimates the per-interaction payoffs the closed-form
//! expressions in [`super`] describe.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::experiments::derive_run_seed;
use crate::game::{payoff_matrix, GameParams, PayoffMatrix, Strategy, Variant};
use crate::scalar::Scalar;

use super::PopulationCounts;

const CHUNK: usize = 512;

/// Per-strategy mean payoff per interaction; `None` for strategies without
/// members.
#[derive(Debug, Clone)]
pub struct OracleEstimate<S> {
    pub mean: Vec<Option<S>>,
    pub std_error: Vec<Option<f64>>,
    pub shuffles: usize,
}

enum Outcome {
    Static = 0,
    /// PT meets a DT before having punished anybody.
    FirstDefection = 1,
}

struct Layout {
    k: usize,
    strategy: Vec<usize>,
    pt: Option<usize>,
    d: Option<usize>,
    dt: Option<usize>,
    pairs: Vec<(u32, u32)>,
}

impl Layout {
    fn cell(&self, own: usize, other: usize, outcome: Outcome) -> usize {
        (own * self.k + other) * 2 + outcome as usize
    }

    /// Plays one random ordering and returns the payoff tallies per
    /// `(own strategy, opponent strategy, outcome)` cell.
    fn play(&self, seed: u64) -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order = self.pairs.clone();
        order.shuffle(&mut rng);
        let mut signalled = vec![false; self.strategy.len()];
        let mut tally = vec![0u64; self.k * self.k * 2];
        for (a, b) in order {
            let (a, b) = (a as usize, b as usize);
            let (sa, sb) = (self.strategy[a], self.strategy[b]);
            let punisher = match (Some(sa) == self.pt, Some(sb) == self.pt) {
                (true, false) => Some((a, sb)),
                (false, true) => Some((b, sa)),
                _ => None,
            };
            let mut outcome = |own, other, o| tally[self.cell(own, other, o)] += 1;
            match punisher {
                Some((p, other)) if Some(other) == self.d => {
                    signalled[p] = true;
                    outcome(sa, sb, Outcome::Static);
                    outcome(sb, sa, Outcome::Static);
                }
                Some((p, other)) if Some(other) == self.dt && !signalled[p] => {
                    signalled[p] = true;
                    outcome(sa, sb, Outcome::FirstDefection);
                    outcome(sb, sa, Outcome::FirstDefection);
                }
                _ => {
                    outcome(sa, sb, Outcome::Static);
                    outcome(sb, sa, Outcome::Static);
                }
            }
        }
        tally
    }
}

struct Partial {
    tally: Vec<u64>,
    /// Sums of (per-shuffle class mean - reference) and its square.
    dev: Vec<f64>,
    dev_sq: Vec<f64>,
}

fn class_means(tally: &[u64], values: &[f64], counts: &[usize], n_others: usize) -> Vec<f64> {
    let k = counts.len();
    (0..k)
        .map(|i| {
            if counts[i] == 0 {
                return 0.0;
            }
            let total: f64 = (0..k * 2)
                .map(|c| tally[i * k * 2 + c] as f64 * values[i * k * 2 + c])
                .sum();
            total / (counts[i] * n_others) as f64
        })
        .collect()
}

/// Monte Carlo estimate of per-interaction payoffs from `shuffles` random
/// encounter orders. Shuffle `s` draws from its own stream seeded by
/// `(seed, s)`, and partial results are merged in index order, so the result
/// depends only on the arguments.
pub fn sequential_oracle<S: Scalar>(
    counts: &PopulationCounts,
    params: &GameParams<S>,
    variant: Variant,
    shuffles: usize,
    seed: u64,
) -> Result<OracleEstimate<S>> {
    if shuffles == 0 {
        return Err(Error::InvalidConfig("shuffles must be >= 1".into()));
    }
    let k = variant.len();
    if counts.len() != k {
        return Err(Error::Dimension {
            expected: k,
            got: counts.len(),
        });
    }
    let m: PayoffMatrix<S> = payoff_matrix(variant, params)?;
    let n = counts.total();
    let strategy: Vec<usize> = (0..n).map(|a| counts.strategy_of(a)).collect();
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            pairs.push((a, b));
        }
    }
    let layout = Layout {
        k,
        strategy,
        pt: variant.index_of(Strategy::PT),
        d: variant.index_of(Strategy::D),
        dt: variant.index_of(Strategy::DT),
        pairs,
    };

    // payoff received in each tally cell
    let mut values = vec![S::zero(); k * k * 2];
    for i in 0..k {
        for j in 0..k {
            values[layout.cell(i, j, Outcome::Static)] = m.get(i, j);
            let first = if Some(i) == layout.pt {
                params.punisher_vs_defector()
            } else if Some(i) == layout.dt {
                params.defector_vs_punisher()
            } else {
                m.get(i, j)
            };
            values[layout.cell(i, j, Outcome::FirstDefection)] = first;
        }
    }
    let values_f64: Vec<f64> = values.iter().map(|v| v.approx()).collect();
    let reference = class_means(
        &layout.play(derive_run_seed(seed, 0, 0)),
        &values_f64,
        counts.as_slice(),
        n - 1,
    );

    let chunks: Vec<Partial> = (0..shuffles.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut part = Partial {
                tally: vec![0; k * k * 2],
                dev: vec![0.0; k],
                dev_sq: vec![0.0; k],
            };
            for s in c * CHUNK..((c + 1) * CHUNK).min(shuffles) {
                let tally = layout.play(derive_run_seed(seed, 0, s as u64));
                let means = class_means(&tally, &values_f64, counts.as_slice(), n - 1);
                for i in 0..k {
                    let d = means[i] - reference[i];
                    part.dev[i] += d;
                    part.dev_sq[i] += d * d;
                }
                for (t, v) in part.tally.iter_mut().zip(tally) {
                    *t += v;
                }
            }
            part
        })
        .collect();

    let mut tally = vec![0u64; k * k * 2];
    let mut dev = vec![0.0; k];
    let mut dev_sq = vec![0.0; k];
    for part in chunks {
        for (t, v) in tally.iter_mut().zip(&part.tally) {
            *t += v;
        }
        for i in 0..k {
            dev[i] += part.dev[i];
            dev_sq[i] += part.dev_sq[i];
        }
    }

    let to_s = |v: u64| S::from_u64(v).expect("tally representable in scalar type");
    let mut mean = Vec::with_capacity(k);
    let mut std_error = Vec::with_capacity(k);
    for i in 0..k {
        if counts.get(i) == 0 {
            mean.push(None);
            std_error.push(None);
            continue;
        }
        let total = (0..k * 2).fold(S::zero(), |acc, c| {
            acc + to_s(tally[i * k * 2 + c]) * values[i * k * 2 + c]
        });
        let interactions =
            S::from_count(shuffles) * S::from_count(counts.get(i)) * S::from_count(n - 1);
        mean.push(Some(total / interactions));
        let se = if shuffles > 1 {
            let sf = shuffles as f64;
            let var = ((dev_sq[i] - dev[i] * dev[i] / sf) / (sf - 1.0)).max(0.0);
            (var / sf).sqrt()
        } else {
            0.0
        };
        std_error.push(Some(se));
    }
    Ok(OracleEstimate {
        mean,
        std_error,
        shuffles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{threat_avg_payoffs, PayoffMode};
    use num_rational::Rational64;

    fn counts(v: &[usize]) -> PopulationCounts {
        PopulationCounts::new(v.to_vec()).unwrap()
    }

    #[test]
    fn single_defector_is_deterministic() {
        let params = GameParams::<Rational64>::reference();
        let est =
            sequential_oracle(&counts(&[99, 1, 0]), &params, Variant::Threat3, 20, 3).unwrap();
        assert_eq!(est.mean[0], Some(Rational64::new(95, 99)));
        assert_eq!(est.std_error[0], Some(0.0));
        assert_eq!(est.mean[2], None);
    }

    #[test]
    fn lone_dt_is_always_first() {
        let params = GameParams::<Rational64>::reference();
        let c = counts(&[10, 0, 1]);
        let est = sequential_oracle(&c, &params, Variant::Threat3, 50, 1).unwrap();
        let paper = threat_avg_payoffs(&c, &params, Variant::Threat3, PayoffMode::Paper).unwrap();
        assert_eq!(est.mean[0], Some(paper[0]));
        let corrected =
            threat_avg_payoffs(&c, &params, Variant::Threat3, PayoffMode::Corrected).unwrap();
        assert_eq!(est.mean[2], Some(corrected[2]));
    }

    #[test]
    fn pdc_oracle_equals_matrix_payoffs() {
        let params = GameParams::<Rational64>::reference();
        let c = counts(&[5, 4, 3]);
        let est = sequential_oracle(&c, &params, Variant::Pdc, 10, 0).unwrap();
        let m = payoff_matrix(Variant::Pdc, &params).unwrap();
        let exact = crate::finite::matrix_avg_payoffs(&c, &m).unwrap();
        for (i, e) in exact.iter().enumerate() {
            assert_eq!(est.mean[i], Some(*e));
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let params = GameParams::<f64>::reference();
        let c = counts(&[4, 3, 3]);
        let a = sequential_oracle(&c, &params, Variant::Threat3, 2000, 11).unwrap();
        let b = sequential_oracle(&c, &params, Variant::Threat3, 2000, 11).unwrap();
        assert_eq!(a.mean, b.mean);
        assert_eq!(a.std_error, b.std_error);
    }

    #[test]
    fn zero_shuffles_rejected() {
        let params = GameParams::<f64>::reference();
        assert!(sequential_oracle(&counts(&[1, 1, 1]), &params, Variant::Threat3, 0, 0).is_err());
    }
}

//! Average payoffs in finite well-mixed populations.
//!
//! Every agent meets each of the other `N - 1` agents once per generation.
//! Unconditional strategies earn the matrix payoffs with self-play removed.
//! A signalling punisher's first defector of the generation is special:
//! if it is a DT, the DT has not yet seen the signal and defects, so the
//! pair plays a punishment round instead of cooperating. The ordering
//! effect is averaged analytically through the share `n_DT / (n_D + n_DT)`.

mod oracle;

pub use oracle::{sequential_oracle, OracleEstimate};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::game::{payoff_matrix, GameParams, PayoffMatrix, Variant};
use crate::scalar::Scalar;

/// Integer head-count per strategy, in the variant's strategy order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PopulationCounts {
    counts: Vec<usize>,
}

impl PopulationCounts {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        let total: usize = counts.iter().sum();
        if total < 2 {
            return Err(Error::InvalidPopulation(format!(
                "population size {total} < 2"
            )));
        }
        Ok(PopulationCounts { counts })
    }

    /// Everybody plays strategy `i`.
    pub fn monomorphic(k: usize, i: usize, n: usize) -> Result<Self> {
        let mut counts = vec![0; k];
        counts[i] = n;
        Self::new(counts)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.counts
    }

    pub fn get(&self, i: usize) -> usize {
        self.counts[i]
    }

    pub fn is_monomorphic(&self) -> bool {
        self.counts.iter().filter(|&&c| c > 0).count() == 1
    }

    pub(crate) fn transfer(&mut self, from: usize, to: usize) {
        debug_assert!(self.counts[from] > 0);
        self.counts[from] -= 1;
        self.counts[to] += 1;
    }

    /// Strategy of the agent at position `agent` when agents are laid out in
    /// strategy blocks.
    pub(crate) fn strategy_of(&self, mut agent: usize) -> usize {
        for (i, &c) in self.counts.iter().enumerate() {
            if agent < c {
                return i;
            }
            agent -= c;
        }
        unreachable!("agent index beyond population")
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.total() as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

/// Which coefficient the DT payoff uses for its ordering correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PayoffMode {
    /// `n_DT / (n_D + n_DT)`, the original coefficient.
    #[default]
    Paper,
    /// `n_PT / (n_D + n_DT)`: the expected number of PTs for which a given
    /// DT is the first defector met.
    Corrected,
}

impl PayoffMode {
    pub fn name(self) -> &'static str {
        match self {
            PayoffMode::Paper => "paper",
            PayoffMode::Corrected => "corrected",
        }
    }
}

impl fmt::Display for PayoffMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PayoffMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(PayoffMode::Paper),
            "corrected" => Ok(PayoffMode::Corrected),
            _ => Err(Error::InvalidConfig(format!(
                "unknown payoff mode `{s}` (valid: paper, corrected)"
            ))),
        }
    }
}

fn check_counts(counts: &PopulationCounts, k: usize) -> Result<()> {
    if counts.len() != k {
        return Err(Error::Dimension {
            expected: k,
            got: counts.len(),
        });
    }
    Ok(())
}

fn signed<S: Scalar>(n: i64) -> S {
    S::from_i64(n).expect("count representable in scalar type")
}

/// `Pi_i = (sum_j n_j M[i][j] - M[i][i]) / (N - 1)`.
pub fn matrix_avg_payoffs<S: Scalar>(
    counts: &PopulationCounts,
    m: &PayoffMatrix<S>,
) -> Result<Vec<S>> {
    check_counts(counts, m.size())?;
    let others = S::from_count(counts.total() - 1);
    Ok((0..m.size())
        .map(|i| {
            let total = counts
                .as_slice()
                .iter()
                .zip(m.row(i))
                .fold(S::zero(), |acc, (&n, &mij)| acc + S::from_count(n) * mij);
            (total - m.get(i, i)) / others
        })
        .collect())
}

/// Average payoffs of PT, D, DT (and C for the four-strategy game) in a
/// finite population.
pub fn threat_avg_payoffs<S: Scalar>(
    counts: &PopulationCounts,
    params: &GameParams<S>,
    variant: Variant,
    mode: PayoffMode,
) -> Result<Vec<S>> {
    if !variant.has_threat() {
        return Err(Error::UnsupportedVariant(variant));
    }
    check_counts(counts, variant.len())?;
    let n = counts.as_slice();
    let (n1, n2, n3) = (n[0] as i64, n[1] as i64, n[2] as i64);
    let n4 = if variant == Variant::Threat4 {
        n[3] as i64
    } else {
        0
    };
    let others = S::from_count(counts.total() - 1);

    let cc = params.reward;
    let pt_d = params.punisher_vs_defector();
    let d_pt = params.defector_vs_punisher();
    let dd = params.punishment;
    let d_c = params.temptation;
    let c_d = params.sucker;

    let defectors = n2 + n3;
    let share = |num: i64| {
        if defectors == 0 {
            S::zero()
        } else {
            signed::<S>(num) / signed::<S>(defectors)
        }
    };
    let dt_coef = match mode {
        PayoffMode::Paper => share(n3),
        PayoffMode::Corrected => share(n1),
    };

    let pt =
        (signed::<S>(n1 + n3 + n4 - 1) * cc + signed::<S>(n2) * pt_d + share(n3) * (pt_d - cc))
            / others;
    let d =
        (signed::<S>(n1) * d_pt + signed::<S>(defectors - 1) * dd + signed::<S>(n4) * d_c) / others;
    let dt = (signed::<S>(n1) * cc
        + dt_coef * (d_pt - cc)
        + signed::<S>(defectors - 1) * dd
        + signed::<S>(n4) * d_c)
        / others;
    let mut out = vec![pt, d, dt];
    if variant == Variant::Threat4 {
        out.push((signed::<S>(n1 + n4 - 1) * cc + signed::<S>(defectors) * c_d) / others);
    }
    Ok(out)
}

/// Average payoff per interaction for the variant: matrix payoffs for the
/// punishment game, ordering-corrected payoffs for the threat games.
pub fn finite_avg_payoffs<S: Scalar>(
    counts: &PopulationCounts,
    params: &GameParams<S>,
    variant: Variant,
    mode: PayoffMode,
) -> Result<Vec<S>> {
    if variant.has_threat() {
        threat_avg_payoffs(counts, params, variant, mode)
    } else {
        matrix_avg_payoffs(counts, &payoff_matrix(variant, params)?)
    }
}

/// Expected number of cooperative acts of one DT per generation: it
/// cooperates with every PT except those for which it is the first
/// defector met.
pub fn dt_cooperative_acts<S: Scalar>(counts: &PopulationCounts, mode: PayoffMode) -> S {
    let n = counts.as_slice();
    let (n1, n2, n3) = (n[0], n[1], n[2]);
    if n2 + n3 == 0 {
        return S::from_count(n1);
    }
    let coef = match mode {
        PayoffMode::Paper => S::from_count(n3),
        PayoffMode::Corrected => S::from_count(n1),
    } / S::from_count(n2 + n3);
    let acts = S::from_count(n1) - coef;
    if acts < S::zero() {
        S::zero()
    } else {
        acts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::replicator::avg_payoffs;
    use crate::simplex::SimplexPoint;
    use num_rational::Rational64;

    fn counts(v: &[usize]) -> PopulationCounts {
        PopulationCounts::new(v.to_vec()).unwrap()
    }

    fn exact() -> GameParams<Rational64> {
        GameParams::reference()
    }

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn population_needs_two_agents() {
        assert!(PopulationCounts::new(vec![1, 0, 0]).is_err());
        assert!(PopulationCounts::new(vec![1, 1, 0]).is_ok());
    }

    #[test]
    fn all_cooperators_earn_reward() {
        let m = payoff_matrix(Variant::Pdc, &exact()).unwrap();
        let pi = matrix_avg_payoffs(&counts(&[0, 0, 100]), &m).unwrap();
        assert_eq!(pi[2], r(1, 1));
    }

    #[test]
    fn pdc_half_punishers() {
        let m = payoff_matrix(Variant::Pdc, &exact()).unwrap();
        let pi = matrix_avg_payoffs(&counts(&[50, 50, 0]), &m).unwrap();
        assert_eq!(pi[0], r(49 - 100, 99));
    }

    #[test]
    fn larger_populations_approach_replicator_payoffs() {
        let m = payoff_matrix(Variant::Pdc, &GameParams::<f64>::reference()).unwrap();
        let x = SimplexPoint::new(vec![0.2, 0.3, 0.5]).unwrap();
        let inf = avg_payoffs(&x, &m).unwrap();
        let mut last = f64::INFINITY;
        for n in [10usize, 100, 1000, 10000] {
            let c = counts(&[n / 5, 3 * n / 10, n / 2]);
            let pi = matrix_avg_payoffs(&c, &m).unwrap();
            let err = pi
                .iter()
                .zip(&inf)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(err < last);
            last = err;
        }
    }

    #[test]
    fn single_defector_examples() {
        let pi = threat_avg_payoffs(
            &counts(&[99, 1, 0]),
            &exact(),
            Variant::Threat3,
            PayoffMode::Paper,
        )
        .unwrap();
        assert_eq!(pi[0], r(95, 99));
        let pi = threat_avg_payoffs(
            &counts(&[99, 0, 1]),
            &exact(),
            Variant::Threat3,
            PayoffMode::Paper,
        )
        .unwrap();
        assert_eq!(pi[0], r(95, 99));
    }

    #[test]
    fn no_defectors_means_no_correction() {
        for mode in [PayoffMode::Paper, PayoffMode::Corrected] {
            let pi = threat_avg_payoffs(&counts(&[60, 0, 0, 40]), &exact(), Variant::Threat4, mode)
                .unwrap();
            assert_eq!(pi[0], r(1, 1));
            assert_eq!(pi[3], r(1, 1));
            let pi = threat_avg_payoffs(&counts(&[0, 0, 0, 40]), &exact(), Variant::Threat4, mode)
                .unwrap();
            assert!(pi.iter().all(|v| *v.denom() > 0));
        }
    }

    #[test]
    fn modes_only_differ_for_dt() {
        // without DTs present the DT entry is an invader's payoff and still
        // depends on the mode
        let c = counts(&[30, 20, 0, 50]);
        let a = threat_avg_payoffs(&c, &exact(), Variant::Threat4, PayoffMode::Paper).unwrap();
        let b = threat_avg_payoffs(&c, &exact(), Variant::Threat4, PayoffMode::Corrected).unwrap();
        assert_eq!((a[0], a[1], a[3]), (b[0], b[1], b[3]));
        assert_ne!(a[2], b[2]);
    }

    #[test]
    fn unconditional_payoffs_match_the_matrix() {
        let c = counts(&[8, 6, 4, 2]);
        let m = payoff_matrix(Variant::Threat4, &exact()).unwrap();
        let from_matrix = matrix_avg_payoffs(&c, &m).unwrap();
        let threat = threat_avg_payoffs(&c, &exact(), Variant::Threat4, PayoffMode::Paper).unwrap();
        assert_eq!(from_matrix[1], threat[1]);
        assert_eq!(from_matrix[3], threat[3]);
    }

    #[test]
    fn pdc_is_not_a_threat_variant() {
        assert!(threat_avg_payoffs(
            &counts(&[1, 1, 1]),
            &exact(),
            Variant::Pdc,
            PayoffMode::Paper
        )
        .is_err());
    }

    #[test]
    fn dt_acts_are_clamped() {
        // paper-mode coefficient n3/(n2+n3) = 1 exceeds n1 = 0
        let c = counts(&[0, 0, 10, 5]);
        assert_eq!(
            dt_cooperative_acts::<Rational64>(&c, PayoffMode::Paper),
            r(0, 1)
        );
        let c = counts(&[8, 6, 6]);
        assert_eq!(
            dt_cooperative_acts::<Rational64>(&c, PayoffMode::Paper),
            r(15, 2)
        );
        assert_eq!(
            dt_cooperative_acts::<Rational64>(&c, PayoffMode::Corrected),
            r(8, 1) - r(8, 12)
        );
    }

    mod props {
        use super::super::*;
        use num_rational::Rational64;
        use proptest::prelude::*;

        fn population() -> impl Strategy<Value = PopulationCounts> {
            prop::collection::vec(0usize..40, 4)
                .prop_filter("N >= 2", |v| v.iter().sum::<usize>() >= 2)
                .prop_map(|v| PopulationCounts::new(v).unwrap())
        }

        proptest! {
            #[test]
            fn total_payoff_mode_invariant_when_pt_equals_dt(n1 in 0usize..30, n2 in 0usize..30, n4 in 0usize..30) {
                let c = PopulationCounts::new(vec![n1, n2, n1, n4]).unwrap_or_else(|_| PopulationCounts::new(vec![1, 1, 1, 0]).unwrap());
                let params = GameParams::<Rational64>::reference();
                let total = |mode| {
                    let pi = threat_avg_payoffs(&c, &params, Variant::Threat4, mode).unwrap();
                    pi.iter().zip(c.as_slice()).fold(Rational64::from_integer(0), |acc, (p, &n)| acc + *p * Rational64::from_integer(n as i64))
                };
                prop_assert_eq!(total(PayoffMode::Paper), total(PayoffMode::Corrected));
            }

            #[test]
            fn payoffs_are_finite(c in population(), mode in prop_oneof![Just(PayoffMode::Paper), Just(PayoffMode::Corrected)]) {
                let pi = threat_avg_payoffs(&c, &GameParams::<f64>::reference(), Variant::Threat4, mode).unwrap();
                prop_assert!(pi.iter().all(|v| v.is_finite()));
            }
        }
    }
}

//! Strategies, game variants, parameters and the static payoff matrices.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    /// Unconditional cooperator.
    C,
    /// Unconditional defector.
    D,
    /// Cooperator who punishes defectors.
    P,
    /// Punisher who advertises each punishment act.
    PT,
    /// Defector who cooperates with a PT once that PT has punished someone.
    DT,
}

impl Strategy {
    pub fn label(self) -> &'static str {
        match self {
            Strategy::C => "C",
            Strategy::D => "D",
            Strategy::P => "P",
            Strategy::PT => "PT",
            Strategy::DT => "DT",
        }
    }

    /// Strategies counted as cooperative: punishers and cooperators.
    pub fn is_cooperative(self) -> bool {
        matches!(self, Strategy::C | Strategy::P | Strategy::PT)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Which strategy set is in play. The index order of [`Variant::strategies`]
/// is used for every vector, matrix row and CSV column in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Punishment without threat: P, D, C.
    Pdc,
    /// Threat without unconditional cooperators: PT, D, DT.
    Threat3,
    /// Threat with cooperators: PT, D, DT, C.
    Threat4,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Pdc, Variant::Threat3, Variant::Threat4];

    pub fn strategies(self) -> &'static [Strategy] {
        match self {
            Variant::Pdc => &[Strategy::P, Strategy::D, Strategy::C],
            Variant::Threat3 => &[Strategy::PT, Strategy::D, Strategy::DT],
            Variant::Threat4 => &[Strategy::PT, Strategy::D, Strategy::DT, Strategy::C],
        }
    }

    pub fn len(self) -> usize {
        self.strategies().len()
    }

    pub fn index_of(self, s: Strategy) -> Option<usize> {
        self.strategies().iter().position(|&t| t == s)
    }

    pub fn has_threat(self) -> bool {
        !matches!(self, Variant::Pdc)
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Pdc => "pdc",
            Variant::Threat3 => "threat3",
            Variant::Threat4 => "threat4",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pdc" => Ok(Variant::Pdc),
            "threat3" => Ok(Variant::Threat3),
            "threat4" => Ok(Variant::Threat4),
            _ => Err(Error::InvalidConfig(format!(
                "unknown variant `{s}` (valid variants: pdc, threat3, threat4)"
            ))),
        }
    }
}

/// Payoff and cost parameters of the one-shot game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameParams<S> {
    /// T, unilateral defection.
    pub temptation: S,
    /// R, mutual cooperation.
    pub reward: S,
    /// P, mutual defection.
    pub punishment: S,
    /// S, exploited cooperator.
    pub sucker: S,
    /// p, cost paid by the punisher per punishment act.
    pub punish_cost: S,
    /// q, penalty inflicted on the punished defector.
    pub penalty: S,
    /// theta, cost of advertising a punishment act.
    pub signal_cost: S,
}

impl<S: Scalar> GameParams<S> {
    pub fn new(
        temptation: S,
        reward: S,
        punishment: S,
        sucker: S,
        punish_cost: S,
        penalty: S,
        signal_cost: S,
    ) -> Self {
        GameParams {
            temptation,
            reward,
            punishment,
            sucker,
            punish_cost,
            penalty,
            signal_cost,
        }
    }

    /// T=2, R=1, P=0, S=-1, p=1, q=3, theta=1: the phase-portrait setting.
    pub fn reference() -> Self {
        let i = |v: i32| S::from_i32(v).expect("small integer");
        GameParams::new(i(2), i(1), i(0), i(-1), i(1), i(3), i(1))
    }

    pub fn validate(&self) -> Result<()> {
        validate_params(self)
    }

    /// Payoff to a PT when it punishes: S - p - theta.
    pub fn punisher_vs_defector(&self) -> S {
        self.sucker - self.punish_cost - self.signal_cost
    }

    /// Payoff to a defector being punished: T - q.
    pub fn defector_vs_punisher(&self) -> S {
        self.temptation - self.penalty
    }
}

pub fn validate_params<S: Scalar>(params: &GameParams<S>) -> Result<()> {
    let named = [
        ("T", params.temptation),
        ("R", params.reward),
        ("P", params.punishment),
        ("S", params.sucker),
        ("p", params.punish_cost),
        ("q", params.penalty),
        ("theta", params.signal_cost),
    ];
    for (name, v) in named {
        if !v.is_finite_value() {
            return Err(Error::InvalidParams(format!("{name} is not finite")));
        }
    }
    let ordering = [
        ("T > R", params.temptation, params.reward),
        ("R > P", params.reward, params.punishment),
        ("P > S", params.punishment, params.sucker),
    ];
    for (rule, hi, lo) in ordering {
        if !(hi > lo) {
            return Err(Error::InvalidParams(format!("{rule} violated")));
        }
    }
    let costs = [
        ("p", params.punish_cost),
        ("q", params.penalty),
        ("theta", params.signal_cost),
    ];
    for (name, v) in costs {
        if !(v >= S::zero()) {
            return Err(Error::InvalidParams(format!("{name} >= 0 violated")));
        }
    }
    Ok(())
}

/// Square payoff matrix, `get(i, j)` is the payoff of row strategy `i`
/// against column strategy `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix<S> {
    k: usize,
    entries: Vec<S>,
}

impl<S: Scalar> PayoffMatrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let k = rows.len();
        let mut entries = Vec::with_capacity(k * k);
        for row in rows {
            if row.len() != k {
                return Err(Error::Dimension {
                    expected: k,
                    got: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(PayoffMatrix { k, entries })
    }

    pub fn size(&self) -> usize {
        self.k
    }

    pub fn get(&self, row: usize, col: usize) -> S {
        self.entries[row * self.k + col]
    }

    pub fn row(&self, row: usize) -> &[S] {
        &self.entries[row * self.k..(row + 1) * self.k]
    }

    /// Leading principal `n x n` submatrix.
    pub fn leading(&self, n: usize) -> Self {
        let rows = (0..n).map(|i| self.row(i)[..n].to_vec()).collect();
        PayoffMatrix::from_rows(rows).expect("square by construction")
    }
}

pub fn payoff_matrix<S: Scalar>(
    variant: Variant,
    params: &GameParams<S>,
) -> Result<PayoffMatrix<S>> {
    validate_params(params)?;
    let GameParams {
        temptation: t,
        reward: r,
        punishment: p,
        sucker: s,
        punish_cost,
        ..
    } = *params;
    let punished = params.defector_vs_punisher();
    let rows = match variant {
        Variant::Pdc => vec![
            vec![r, s - punish_cost, r],
            vec![punished, p, t],
            vec![r, s, r],
        ],
        Variant::Threat3 | Variant::Threat4 => {
            let punishing = params.punisher_vs_defector();
            let full = vec![
                vec![r, punishing, r, r],
                vec![punished, p, p, t],
                vec![r, p, p, t],
                vec![r, s, s, r],
            ];
            let full = PayoffMatrix::from_rows(full)?;
            return Ok(if variant == Variant::Threat3 {
                full.leading(3)
            } else {
                full
            });
        }
    };
    PayoffMatrix::from_rows(rows)
}

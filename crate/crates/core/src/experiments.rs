//! Seeded parameter sweeps over the agent-based model.
//!
//! A sweep is a Cartesian grid over absolute parameter values with the last
//! axis varying fastest. Every `(grid point, run)` pair gets its own RNG
//! stream from [`derive_run_seed`], runs execute in parallel, and results
//! are merged by index so rows never depend on scheduling.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::abm::{run_summary, AbmConfig, RunSummary};
use crate::error::{Error, Result};
use crate::stats::Moments;

pub const DESK_RUNS: usize = 50;
pub const FULL_RUNS: usize = 500;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of run `run_index` at grid point `grid_index`: each input is
/// absorbed into a SplitMix64 state in turn.
pub fn derive_run_seed(master_seed: u64, grid_index: u64, run_index: u64) -> u64 {
    let mut h = splitmix64(master_seed.wrapping_add(GOLDEN_GAMMA));
    h = splitmix64(h ^ grid_index.wrapping_add(GOLDEN_GAMMA.wrapping_mul(2)));
    splitmix64(h ^ run_index.wrapping_add(GOLDEN_GAMMA.wrapping_mul(3)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    P,
    Q,
    Theta,
    Beta,
    Mu,
}

impl SweepParam {
    pub const ALL: [SweepParam; 5] = [
        SweepParam::P,
        SweepParam::Q,
        SweepParam::Theta,
        SweepParam::Beta,
        SweepParam::Mu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::P => "p",
            SweepParam::Q => "q",
            SweepParam::Theta => "theta",
            SweepParam::Beta => "beta",
            SweepParam::Mu => "mu",
        }
    }

    fn apply(self, cfg: &mut AbmConfig<f64>, value: f64) {
        match self {
            SweepParam::P => cfg.params.punish_cost = value,
            SweepParam::Q => cfg.params.penalty = value,
            SweepParam::Theta => cfg.params.signal_cost = value,
            SweepParam::Beta => cfg.beta = value,
            SweepParam::Mu => cfg.mu = value,
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown sweep parameter '{s}' (expected p, q, theta, beta, mu)"
                ))
            })
    }
}

/// Values `start, start + step, ...` up to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(param: SweepParam, start: f64, stop: f64, step: f64) -> Result<Self> {
        let axis = Axis {
            param,
            start,
            stop,
            step,
        };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "axis {} is not finite",
                self.param
            )));
        }
        if !(self.step > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "axis {}: step must be > 0",
                self.param
            )));
        }
        if self.start > self.stop {
            return Err(Error::InvalidConfig(format!(
                "axis {}: start > stop",
                self.param
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: AbmConfig<f64>,
    pub axes: Vec<Axis>,
    pub runs: usize,
    pub master_seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be >= 1".into()));
        }
        for (i, a) in self.axes.iter().enumerate() {
            a.validate()?;
            if self.axes[..i].iter().any(|b| b.param == a.param) {
                return Err(Error::InvalidConfig(format!(
                    "axis {} given twice",
                    a.param
                )));
            }
        }
        Ok(())
    }

    pub fn grid_len(&self) -> usize {
        self.axes.iter().map(Axis::len).product()
    }

    /// Axis values of grid point `g`, last axis fastest.
    pub fn grid_point(&self, mut g: usize) -> Vec<f64> {
        let mut values = vec![0.0; self.axes.len()];
        for (slot, axis) in values.iter_mut().zip(&self.axes).rev() {
            let n = axis.len();
            *slot = axis.value(g % n);
            g /= n;
        }
        values
    }

    /// Base configuration with grid point `g` applied; the seed is left to
    /// the caller.
    pub fn config_at(&self, g: usize) -> AbmConfig<f64> {
        let mut cfg = self.base.clone();
        for (axis, v) in self.axes.iter().zip(self.grid_point(g)) {
            axis.param.apply(&mut cfg, v);
        }
        cfg
    }
}

/// Mean and population standard deviation of one metric across runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowMetrics {
    pub freq: Vec<Stat>,
    pub coop_strategy_freq: Stat,
    pub coop_act_freq: Stat,
    pub welfare: Stat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub values: Vec<f64>,
    /// `q / p` at this grid point, `None` when `p = 0`.
    pub q_over_p: Option<f64>,
    pub runs: usize,
    /// Row-level failure, e.g. a negative cost produced by an axis.
    pub result: std::result::Result<RowMetrics, String>,
}

struct Accumulator {
    freq: Vec<Moments>,
    coop_strategy: Moments,
    coop_act: Moments,
    welfare: Moments,
}

impl Accumulator {
    fn new(k: usize) -> Self {
        Accumulator {
            freq: vec![Moments::default(); k],
            coop_strategy: Moments::default(),
            coop_act: Moments::default(),
            welfare: Moments::default(),
        }
    }

    fn push(&mut self, s: &RunSummary<f64>) -> Result<()> {
        if s.mean_freq.len() != self.freq.len() {
            return Err(Error::Dimension {
                expected: self.freq.len(),
                got: s.mean_freq.len(),
            });
        }
        for (m, &v) in self.freq.iter_mut().zip(&s.mean_freq) {
            m.push(v);
        }
        self.coop_strategy.push(s.mean_coop_strategy_freq);
        self.coop_act.push(s.mean_coop_act_freq);
        self.welfare.push(s.mean_welfare);
        Ok(())
    }

    fn finish(&self) -> RowMetrics {
        let stat = |m: &Moments| Stat {
            mean: m.mean(),
            std: m.std(),
        };
        RowMetrics {
            freq: self.freq.iter().map(stat).collect(),
            coop_strategy_freq: stat(&self.coop_strategy),
            coop_act_freq: stat(&self.coop_act),
            welfare: stat(&self.welfare),
        }
    }
}

/// Cross-run mean and population standard deviation of window-averaged run
/// summaries. The mean is an exactly rounded sum, so it does not depend on
/// the order of `summaries`.
pub fn aggregate(summaries: &[RunSummary<f64>]) -> Result<RowMetrics> {
    let first = summaries.first().ok_or(Error::EmptyAggregate)?;
    let mut acc = Accumulator::new(first.mean_freq.len());
    for s in summaries {
        acc.push(s)?;
    }
    debug_assert_eq!(acc.coop_strategy.count(), summaries.len());
    Ok(acc.finish())
}

/// Runs every grid point `spec.runs` times and returns one row per grid
/// point in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let grid = spec.grid_len();
    let configs: Vec<std::result::Result<AbmConfig<f64>, String>> = (0..grid)
        .map(|g| {
            let cfg = spec.config_at(g);
            cfg.validate().map(|_| cfg).map_err(|e| e.to_string())
        })
        .collect();

    let jobs: Vec<(usize, usize)> = (0..grid)
        .filter(|&g| configs[g].is_ok())
        .flat_map(|g| (0..spec.runs).map(move |r| (g, r)))
        .collect();
    let results: Vec<Result<RunSummary<f64>>> = jobs
        .par_iter()
        .map(|&(g, r)| {
            let mut cfg = configs[g]
                .clone()
                .expect("only valid grid points are scheduled");
            cfg.seed = derive_run_seed(spec.master_seed, g as u64, r as u64);
            run_summary(&cfg)
        })
        .collect();

    let mut results = results.into_iter();
    let mut rows = Vec::with_capacity(grid);
    for (g, cfg) in configs.iter().enumerate() {
        let result = match cfg {
            Err(e) => Err(e.clone()),
            Ok(_) => {
                let summaries = results
                    .by_ref()
                    .take(spec.runs)
                    .collect::<Result<Vec<_>>>()?;
                Ok(aggregate(&summaries)?)
            }
        };
        let cfg = spec.config_at(g);
        let p = cfg.params.punish_cost;
        rows.push(SweepRow {
            values: spec.grid_point(g),
            q_over_p: (p != 0.0).then(|| cfg.params.penalty / p),
            runs: spec.runs,
            result,
        });
    }
    Ok(rows)
}

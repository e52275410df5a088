//! Stochastic evolution of a finite well-mixed population.
//!
//! Each generation every agent's fitness is the sum of its payoffs against
//! the other `N - 1` agents, taken from the average payoffs in
//! [`crate::finite`]. Then one focal agent is updated: with probability
//! `mu` it switches to a different strategy chosen uniformly, otherwise it
//! compares itself with a uniformly chosen other agent and copies that
//! agent's strategy with the Fermi probability.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::finite::{dt_cooperative_acts, finite_avg_payoffs, PayoffMode, PopulationCounts};
use crate::game::{GameParams, Strategy, Variant};
use crate::scalar::Real;

pub const DEFAULT_POPULATION: usize = 100;
pub const DEFAULT_GENERATIONS: usize = 10_000;
pub const DEFAULT_WINDOW: usize = 1_000;

/// Beyond this `|beta (f_B - f_A)|` the Fermi probability is 0 or 1.
const FERMI_SATURATION: f64 = 700.0;

#[derive(Debug, Clone, PartialEq)]
pub struct AbmConfig<F> {
    pub variant: Variant,
    pub params: GameParams<F>,
    pub population: usize,
    /// Intensity of selection.
    pub beta: F,
    /// Probability that the focal agent mutates instead of imitating.
    pub mu: F,
    pub generations: usize,
    /// Number of trailing generations averaged into the run summary.
    pub window: usize,
    pub seed: u64,
    pub payoff_mode: PayoffMode,
}

impl<F: Real> AbmConfig<F> {
    /// N = 100, beta = 1, mu = 0.001, 10^4 generations, last 10^3 averaged.
    pub fn new(variant: Variant, params: GameParams<F>) -> Self {
        AbmConfig {
            variant,
            params,
            population: DEFAULT_POPULATION,
            beta: F::one(),
            mu: F::lit(0.001),
            generations: DEFAULT_GENERATIONS,
            window: DEFAULT_WINDOW,
            seed: 0,
            payoff_mode: PayoffMode::Paper,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.population < 2 {
            return Err(Error::InvalidConfig(format!(
                "population {} < 2",
                self.population
            )));
        }
        if !(self.beta >= F::zero()) || !self.beta.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "beta >= 0 violated ({})",
                self.beta
            )));
        }
        if !(self.mu >= F::zero() && self.mu <= F::one()) {
            return Err(Error::InvalidConfig(format!(
                "mu in [0, 1] violated ({})",
                self.mu
            )));
        }
        if self.window == 0 || self.window > self.generations {
            return Err(Error::InvalidConfig(format!(
                "window must be in 1..={} (got {})",
                self.generations, self.window
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metrics<F> {
    /// Share of punishers and unconditional cooperators.
    pub coop_strategy_freq: F,
    /// Share of all directed plays that are acts of cooperation.
    pub coop_act_freq: F,
    /// Mean fitness, `sum_i n_i f_i / N`.
    pub welfare: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord<F> {
    pub generation: usize,
    pub counts: PopulationCounts,
    pub metrics: Metrics<F>,
}

/// Window-averaged metrics of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary<F> {
    pub mean_freq: Vec<F>,
    pub mean_coop_strategy_freq: F,
    pub mean_coop_act_freq: F,
    pub mean_welfare: F,
}

#[derive(Debug, Clone)]
pub struct Run<F> {
    pub records: Vec<GenerationRecord<F>>,
    pub summary: RunSummary<F>,
}

/// What happened to the focal agent in one generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Update {
    Mutation { from: usize, to: usize },
    Imitation { from: usize, to: usize },
    Unchanged,
}

/// `(1 + exp(-beta (f_B - f_A)))^-1`, the chance that A copies B.
pub fn fermi_probability<F: Real>(f_a: F, f_b: F, beta: F) -> F {
    let z = beta * (f_b - f_a);
    let limit = F::lit(FERMI_SATURATION);
    if z > limit {
        F::one()
    } else if z < -limit {
        F::zero()
    } else if z >= F::zero() {
        F::one() / (F::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (F::one() + e)
    }
}

/// Every agent draws its strategy uniformly from the variant's set.
pub fn init_population<R: Rng + ?Sized>(
    population: usize,
    variant: Variant,
    rng: &mut R,
) -> Result<PopulationCounts> {
    let k = variant.len();
    let mut counts = vec![0usize; k];
    for _ in 0..population {
        counts[rng.gen_range(0..k)] += 1;
    }
    PopulationCounts::new(counts)
}

/// Fitness `f_i = (N - 1) Pi_i` of every strategy.
pub fn fitness<F: Real>(counts: &PopulationCounts, cfg: &AbmConfig<F>) -> Result<Vec<F>> {
    let others = F::from_count(counts.total() - 1);
    Ok(
        finite_avg_payoffs(counts, &cfg.params, cfg.variant, cfg.payoff_mode)?
            .into_iter()
            .map(|p| p * others)
            .collect(),
    )
}

fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen::<f64>()
}

/// Applies one generation's update to `counts` in place.
pub fn advance<F: Real, R: Rng + ?Sized>(
    counts: &mut PopulationCounts,
    cfg: &AbmConfig<F>,
    rng: &mut R,
) -> Result<Update> {
    let n = counts.total();
    let k = counts.len();
    let focal = counts.strategy_of(rng.gen_range(0..n));

    if uniform(rng) < cfg.mu.approx() {
        let mut to = rng.gen_range(0..k - 1);
        if to >= focal {
            to += 1;
        }
        counts.transfer(focal, to);
        return Ok(Update::Mutation { from: focal, to });
    }

    // model drawn from the N - 1 other agents
    let mut pick = rng.gen_range(0..n - 1);
    let mut model = k;
    for (i, &c) in counts.as_slice().iter().enumerate() {
        let c = if i == focal { c - 1 } else { c };
        if pick < c {
            model = i;
            break;
        }
        pick -= c;
    }
    debug_assert!(model < k);
    if model == focal {
        return Ok(Update::Unchanged);
    }
    let f = fitness(counts, cfg)?;
    let p = fermi_probability(f[focal], f[model], cfg.beta);
    if uniform(rng) < p.approx() {
        counts.transfer(focal, model);
        Ok(Update::Imitation {
            from: focal,
            to: model,
        })
    } else {
        Ok(Update::Unchanged)
    }
}

/// One generation: returns the updated counts.
pub fn generation_step<F: Real, R: Rng + ?Sized>(
    counts: &PopulationCounts,
    cfg: &AbmConfig<F>,
    rng: &mut R,
) -> Result<PopulationCounts> {
    let mut next = counts.clone();
    advance(&mut next, cfg, rng)?;
    Ok(next)
}

pub fn compute_metrics<F: Real>(
    counts: &PopulationCounts,
    cfg: &AbmConfig<F>,
) -> Result<Metrics<F>> {
    let n = counts.total();
    let nf = F::from_count(n);
    let others = F::from_count(n - 1);
    let f = fitness(counts, cfg)?;
    let strategies = cfg.variant.strategies();

    let mut coop = 0usize;
    let mut acts = F::zero();
    let mut welfare = F::zero();
    for (i, &s) in strategies.iter().enumerate() {
        let ni = counts.get(i);
        let nif = F::from_count(ni);
        welfare = welfare + nif * f[i];
        if s.is_cooperative() {
            coop += ni;
            acts = acts + nif * others;
        } else if s == Strategy::DT {
            acts = acts + nif * dt_cooperative_acts::<F>(counts, cfg.payoff_mode);
        }
    }
    Ok(Metrics {
        coop_strategy_freq: F::from_count(coop) / nf,
        coop_act_freq: acts / (nf * others),
        welfare: welfare / nf,
    })
}

struct WindowMeans<F> {
    freq: Vec<F>,
    coop_strategy: F,
    coop_act: F,
    welfare: F,
}

impl<F: Real> WindowMeans<F> {
    fn new(k: usize) -> Self {
        WindowMeans {
            freq: vec![F::zero(); k],
            coop_strategy: F::zero(),
            coop_act: F::zero(),
            welfare: F::zero(),
        }
    }

    fn add(&mut self, counts: &PopulationCounts, m: &Metrics<F>) {
        let n = F::from_count(counts.total());
        for (acc, &c) in self.freq.iter_mut().zip(counts.as_slice()) {
            *acc = *acc + F::from_count(c) / n;
        }
        self.coop_strategy = self.coop_strategy + m.coop_strategy_freq;
        self.coop_act = self.coop_act + m.coop_act_freq;
        self.welfare = self.welfare + m.welfare;
    }

    fn finish(self, window: usize) -> RunSummary<F> {
        let w = F::from_count(window);
        RunSummary {
            mean_freq: self.freq.into_iter().map(|v| v / w).collect(),
            mean_coop_strategy_freq: self.coop_strategy / w,
            mean_coop_act_freq: self.coop_act / w,
            mean_welfare: self.welfare / w,
        }
    }
}

fn simulate<F: Real>(
    cfg: &AbmConfig<F>,
    mut record: impl FnMut(GenerationRecord<F>),
) -> Result<RunSummary<F>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut counts = init_population(cfg.population, cfg.variant, &mut rng)?;
    let mut window = WindowMeans::new(cfg.variant.len());
    let first_measured = cfg.generations - cfg.window + 1;
    for generation in 1..=cfg.generations {
        advance(&mut counts, cfg, &mut rng)?;
        let metrics = compute_metrics(&counts, cfg)?;
        if generation >= first_measured {
            window.add(&counts, &metrics);
        }
        record(GenerationRecord {
            generation,
            counts: counts.clone(),
            metrics,
        });
    }
    Ok(window.finish(cfg.window))
}

/// Full run with a record per generation. Deterministic in `cfg.seed`.
pub fn run_simulation<F: Real>(cfg: &AbmConfig<F>) -> Result<Run<F>> {
    let mut records = Vec::with_capacity(cfg.generations);
    let summary = simulate(cfg, |r| records.push(r))?;
    Ok(Run { records, summary })
}

/// Same trajectory as [`run_simulation`] without keeping the records.
pub fn run_summary<F: Real>(cfg: &AbmConfig<F>) -> Result<RunSummary<F>> {
    simulate(cfg, |_| {})
}

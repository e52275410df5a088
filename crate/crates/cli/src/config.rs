//! Layered configuration: per-command defaults, then an optional TOML file,
//! then command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use serde::Deserialize;
use threat_dynamics::experiments::{Axis, SweepParam, DESK_RUNS, FULL_RUNS};
use threat_dynamics::finite::PayoffMode;
use threat_dynamics::replicator::DEFAULT_DT;
use threat_dynamics::{GameParams, Params, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Phase,
    Trajectory,
    Restpoints,
    Abm,
    Sweep,
    Oracle,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Phase => "phase",
            CommandKind::Trajectory => "trajectory",
            CommandKind::Restpoints => "restpoints",
            CommandKind::Abm => "abm",
            CommandKind::Sweep => "sweep",
            CommandKind::Oracle => "oracle",
        }
    }

    /// Base name of the CSV the command writes.
    pub fn output_stem(self) -> &'static str {
        match self {
            CommandKind::Abm => "abm_timeseries",
            other => other.name(),
        }
    }
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Desk,
    Full,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Desk => "desk",
            Profile::Full => "full",
        }
    }

    pub fn runs(self) -> usize {
        match self {
            Profile::Desk => DESK_RUNS,
            Profile::Full => FULL_RUNS,
        }
    }
}

impl FromStr for Profile {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Profile::Desk),
            "full" => Ok(Profile::Full),
            _ => bail!("unknown profile `{s}` (valid: desk, full)"),
        }
    }
}

/// One configuration layer. Every field is optional so layers can be
/// stacked; the same struct backs both the flags and the config file.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    /// Command a sidecar file was written for.
    #[arg(skip)]
    #[serde(default)]
    pub command: Option<String>,

    /// pdc, threat3 or threat4
    #[arg(long)]
    #[serde(default)]
    pub variant: Option<String>,
    /// Temptation payoff
    #[arg(long = "T", allow_hyphen_values = true)]
    #[serde(rename = "T", default)]
    pub temptation: Option<f64>,
    /// Reward payoff
    #[arg(long = "R", allow_hyphen_values = true)]
    #[serde(rename = "R", default)]
    pub reward: Option<f64>,
    /// Punishment payoff of mutual defection
    #[arg(long = "Pp", allow_hyphen_values = true)]
    #[serde(rename = "Pp", default)]
    pub punishment: Option<f64>,
    /// Sucker's payoff
    #[arg(long = "S", allow_hyphen_values = true)]
    #[serde(rename = "S", default)]
    pub sucker: Option<f64>,
    /// Cost of punishing
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    pub p: Option<f64>,
    /// Penalty on the punished defector
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    pub q: Option<f64>,
    /// Cost of signalling a threat
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    pub theta: Option<f64>,

    /// Population size
    #[arg(long = "N")]
    #[serde(rename = "N", default)]
    pub population: Option<usize>,
    /// Intensity of selection
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    pub beta: Option<f64>,
    /// Mutation probability
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    pub mu: Option<f64>,
    /// Generations per run
    #[arg(long)]
    #[serde(default)]
    pub gens: Option<usize>,
    /// Trailing generations averaged per run
    #[arg(long)]
    #[serde(default)]
    pub window: Option<usize>,
    /// Realisations (per grid point for sweeps)
    #[arg(long)]
    #[serde(default)]
    pub runs: Option<usize>,
    /// Master seed
    #[arg(long)]
    #[serde(default)]
    pub seed: Option<u64>,
    /// paper or corrected DT payoff
    #[arg(long)]
    #[serde(default)]
    pub mode: Option<String>,

    /// Lattice resolution for phase portraits and rest point search
    #[arg(long)]
    #[serde(default)]
    pub grid: Option<usize>,
    /// Integration step
    #[arg(long)]
    #[serde(default)]
    pub dt: Option<f64>,
    /// Integration steps
    #[arg(long)]
    #[serde(default)]
    pub steps: Option<usize>,
    /// Initial frequencies, comma separated
    #[arg(long)]
    #[serde(default)]
    pub x0: Option<String>,

    /// Sweep axis as param:start:stop:step (repeatable)
    #[arg(long = "axis")]
    #[serde(default)]
    pub axis: Option<Vec<String>>,
    /// desk (50 runs) or full (500 runs) sweep size
    #[arg(long)]
    #[serde(default)]
    pub profile: Option<String>,
    /// Encounter orders sampled by the oracle
    #[arg(long)]
    #[serde(default)]
    pub shuffles: Option<usize>,
    /// Strategy counts for the oracle, comma separated
    #[arg(long)]
    #[serde(default)]
    pub counts: Option<String>,

    /// Output directory
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// TOML file with any of the keys above
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Worker threads (defaults to all cores)
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),*) => {
        Layer { $($field: $top.$field.or($base.$field),)* }
    };
}

impl Layer {
    /// Fields set in `top` win.
    pub fn overlay(self, top: Layer) -> Layer {
        overlay!(
            self, top, command, variant, temptation, reward, punishment, sucker, p, q, theta,
            population, beta, mu, gens, window, runs, seed, mode, grid, dt, steps, x0, axis,
            profile, shuffles, counts, out, config, threads
        )
    }

    pub fn from_file(path: &Path) -> Result<Layer> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).map_err(|e| anyhow!("{}: {}", path.display(), e.message()))
    }
}

/// Fully resolved configuration of one invocation.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub command: CommandKind,
    pub variant: Variant,
    pub params: Params,
    pub population: usize,
    pub beta: f64,
    pub mu: f64,
    pub gens: usize,
    pub window: usize,
    pub runs: usize,
    pub seed: u64,
    pub mode: PayoffMode,
    pub grid: usize,
    pub dt: f64,
    pub steps: usize,
    pub x0: Vec<f64>,
    pub axes: Vec<Axis>,
    pub profile: Profile,
    pub shuffles: usize,
    pub counts: Option<Vec<usize>>,
    pub out: PathBuf,
    pub threads: Option<usize>,
}

fn parse_list<T: FromStr>(key: &str, s: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<T>()
                .map_err(|e| anyhow!("{key}: cannot parse `{v}`: {e}"))
        })
        .collect()
}

fn parse_axis(s: &str) -> Result<Axis> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 4 {
        bail!("axis `{s}` must look like param:start:stop:step");
    }
    let param: SweepParam = parts[0].parse()?;
    let num = |v: &str| {
        v.parse::<f64>()
            .map_err(|e| anyhow!("axis `{s}`: cannot parse `{v}`: {e}"))
    };
    Ok(Axis::new(
        param,
        num(parts[1])?,
        num(parts[2])?,
        num(parts[3])?,
    )?)
}

fn render_axis(a: &Axis) -> String {
    format!("{}:{}:{}:{}", a.param, a.start, a.stop, a.step)
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub const DEFAULT_SWEEP_AXIS: &str = "q:0:5:0.25";
pub const DEFAULT_SHUFFLES: usize = 10_000;
pub const DEFAULT_STEPS: usize = 10_000;

/// Resolves `flags` over an optional config file over the defaults of
/// `command`.
pub fn resolve(command: CommandKind, flags: Layer) -> Result<Resolved> {
    let file = match &flags.config {
        Some(path) => Layer::from_file(path)?,
        None => Layer::default(),
    };
    if let Some(c) = &file.command {
        if c != command.name() {
            bail!("config file was written for `{c}`, not `{command}`");
        }
    }
    let l = file.overlay(flags);

    let variant: Variant = l.variant.as_deref().unwrap_or("threat3").parse()?;
    let reference = GameParams::reference();
    let params = GameParams::new(
        l.temptation.unwrap_or(reference.temptation),
        l.reward.unwrap_or(reference.reward),
        l.punishment.unwrap_or(reference.punishment),
        l.sucker.unwrap_or(reference.sucker),
        l.p.unwrap_or(reference.punish_cost),
        l.q.unwrap_or(reference.penalty),
        l.theta.unwrap_or(reference.signal_cost),
    );
    params.validate()?;

    let profile: Profile = l.profile.as_deref().unwrap_or("desk").parse()?;
    let default_runs = match command {
        CommandKind::Sweep => profile.runs(),
        _ => 1,
    };
    let default_grid = match command {
        CommandKind::Restpoints => 20,
        _ => 50,
    };
    let x0 = match &l.x0 {
        Some(s) => parse_list::<f64>("x0", s)?,
        None => vec![1.0 / variant.len() as f64; variant.len()],
    };
    let axes = match &l.axis {
        Some(list) => list
            .iter()
            .map(|s| parse_axis(s))
            .collect::<Result<Vec<_>>>()?,
        None if command == CommandKind::Sweep => vec![parse_axis(DEFAULT_SWEEP_AXIS)?],
        None => Vec::new(),
    };
    let counts = l
        .counts
        .as_deref()
        .map(|s| parse_list::<usize>("counts", s))
        .transpose()?;
    if command == CommandKind::Oracle && counts.is_none() {
        bail!("missing required key `counts` for command oracle");
    }

    Ok(Resolved {
        command,
        variant,
        params,
        population: l
            .population
            .unwrap_or(threat_dynamics::abm::DEFAULT_POPULATION),
        beta: l.beta.unwrap_or(1.0),
        mu: l.mu.unwrap_or(0.001),
        gens: l.gens.unwrap_or(threat_dynamics::abm::DEFAULT_GENERATIONS),
        window: l.window.unwrap_or(threat_dynamics::abm::DEFAULT_WINDOW),
        runs: l.runs.unwrap_or(default_runs),
        seed: l.seed.unwrap_or(0),
        mode: l.mode.as_deref().unwrap_or("paper").parse()?,
        grid: l.grid.unwrap_or(default_grid),
        dt: l.dt.unwrap_or(DEFAULT_DT),
        steps: l.steps.unwrap_or(DEFAULT_STEPS),
        x0,
        axes,
        profile,
        shuffles: l.shuffles.unwrap_or(DEFAULT_SHUFFLES),
        counts,
        out: l.out.unwrap_or_else(|| PathBuf::from(".")),
        threads: l.threads,
    })
}

impl Resolved {
    /// Every setting that influences the output, in a fixed order. Output
    /// location and thread count are left out.
    pub fn entries(&self) -> Vec<(&'static str, toml::Value)> {
        use toml::Value::{Array, Float, Integer, String as Str};
        let p = &self.params;
        let mut v = vec![
            ("command", Str(self.command.name().into())),
            ("variant", Str(self.variant.name().into())),
            ("T", Float(p.temptation)),
            ("R", Float(p.reward)),
            ("Pp", Float(p.punishment)),
            ("S", Float(p.sucker)),
            ("p", Float(p.punish_cost)),
            ("q", Float(p.penalty)),
            ("theta", Float(p.signal_cost)),
            ("N", Integer(self.population as i64)),
            ("beta", Float(self.beta)),
            ("mu", Float(self.mu)),
            ("gens", Integer(self.gens as i64)),
            ("window", Integer(self.window as i64)),
            ("runs", Integer(self.runs as i64)),
            ("seed", Integer(self.seed as i64)),
            ("mode", Str(self.mode.name().into())),
            ("grid", Integer(self.grid as i64)),
            ("dt", Float(self.dt)),
            ("steps", Integer(self.steps as i64)),
            ("x0", Str(join(&self.x0))),
            (
                "axis",
                Array(self.axes.iter().map(|a| Str(render_axis(a))).collect()),
            ),
            ("profile", Str(self.profile.name().into())),
            ("shuffles", Integer(self.shuffles as i64)),
        ];
        if let Some(c) = &self.counts {
            v.push(("counts", Str(join(c))));
        }
        v
    }

    /// Single-line `key=value` rendering for CSV headers.
    pub fn header_line(&self) -> String {
        let fields: Vec<String> = self
            .entries()
            .into_iter()
            .map(|(k, v)| match v {
                toml::Value::String(s) => format!("{k}={s}"),
                toml::Value::Array(a) => {
                    let items: Vec<String> = a
                        .iter()
                        .filter_map(|x| x.as_str().map(str::to_owned))
                        .collect();
                    format!("{k}=[{}]", items.join(";"))
                }
                other => format!("{k}={other}"),
            })
            .collect();
        format!(
            "threatsim {} {}",
            env!("CARGO_PKG_VERSION"),
            fields.join(" ")
        )
    }

    /// TOML document that, passed back through `--config`, reproduces this
    /// configuration.
    pub fn sidecar(&self) -> String {
        let mut table = toml::Table::new();
        for (k, v) in self.entries() {
            table.insert(k.to_owned(), v);
        }
        format!(
            "# threatsim {}\n{}",
            env!("CARGO_PKG_VERSION"),
            toml::to_string(&table).expect("plain table serializes")
        )
    }
}

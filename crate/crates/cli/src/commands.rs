use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use threat_dynamics::abm::{run_simulation, AbmConfig};
use threat_dynamics::experiments::{derive_run_seed, run_sweep, SweepSpec};
use threat_dynamics::finite::{
    finite_avg_payoffs, sequential_oracle, PayoffMode, PopulationCounts,
};
use threat_dynamics::replicator::{
    closed_form_rest_points, integrate, numeric_rest_points, phase_grid, RestPoint, RestPointKind,
};
use threat_dynamics::{payoff_matrix, Config, Point, Variant};

use crate::config::{CommandKind, Resolved};
use crate::output::{fmt_list, fmt_num, Csv};

fn columns(prefix: &str, variant: Variant) -> Vec<String> {
    variant
        .strategies()
        .iter()
        .map(|s| format!("{prefix}{}", s.label()))
        .collect()
}

fn nums(v: &[f64]) -> Vec<String> {
    v.iter().map(|&x| fmt_num(x)).collect()
}

fn abm_config(cfg: &Resolved) -> Config {
    let mut c = AbmConfig::new(cfg.variant, cfg.params);
    c.population = cfg.population;
    c.beta = cfg.beta;
    c.mu = cfg.mu;
    c.generations = cfg.gens;
    c.window = cfg.window;
    c.seed = cfg.seed;
    c.payoff_mode = cfg.mode;
    c
}

fn phase(cfg: &Resolved) -> Result<String> {
    let samples = phase_grid::<f64>(cfg.variant, &cfg.params, cfg.grid)?;
    let four = cfg.variant.len() == 4;
    let mut header = Vec::new();
    if four {
        header.push("face".to_owned());
    }
    header.extend(columns("x_", cfg.variant));
    header.extend(columns("dx_", cfg.variant));
    header.push("speed".into());
    let mut csv = Csv::new(&cfg.header_line(), &header);
    for s in samples {
        let mut row = Vec::with_capacity(header.len());
        if four {
            row.push(s.face.map(|f| f.label().to_owned()).unwrap_or_default());
        }
        row.extend(nums(s.point.as_slice()));
        row.extend(nums(&s.gradient));
        row.push(fmt_num(s.speed));
        csv.row(&row);
    }
    Ok(csv.into_string())
}

fn trajectory(cfg: &Resolved) -> Result<String> {
    let m = payoff_matrix(cfg.variant, &cfg.params)?;
    let x0 = Point::new(cfg.x0.clone()).context("x0")?;
    let traj = integrate(&x0, &m, cfg.dt, cfg.steps)?;
    let mut header = vec!["t".to_owned()];
    header.extend(columns("x_", cfg.variant));
    let mut csv = Csv::new(&cfg.header_line(), &header);
    for (t, x) in &traj.samples {
        let mut row = vec![fmt_num(*t)];
        row.extend(nums(x.as_slice()));
        csv.row(&row);
    }
    Ok(csv.into_string())
}

fn restpoints(cfg: &Resolved) -> Result<String> {
    let mut points: Vec<RestPoint> = Vec::new();
    if cfg.variant != Variant::Threat4 {
        points.extend(closed_form_rest_points(cfg.variant, &cfg.params)?.0);
    }
    points.extend(numeric_rest_points(cfg.variant, &cfg.params, cfg.grid)?);

    let mut header = columns("x_", cfg.variant);
    for c in [
        "source",
        "classification",
        "max_abs_gradient",
        "eigen_real_parts",
        "kind",
        "segment_end",
        "face_classification",
    ] {
        header.push(c.into());
    }
    let mut csv = Csv::new(&cfg.header_line(), &header);
    for p in points {
        let mut row = nums(p.point.as_slice());
        row.push(p.source.name().into());
        row.push(p.classification.name().into());
        row.push(fmt_num(p.max_abs_gradient));
        row.push(fmt_list(&p.eigen_real_parts));
        match &p.kind {
            RestPointKind::Point => {
                row.push("point".into());
                row.push(String::new());
            }
            RestPointKind::Segment { end } => {
                row.push("segment".into());
                row.push(fmt_list(end.as_slice()));
            }
        }
        row.push(
            p.face_classification
                .map(|s| s.name().to_owned())
                .unwrap_or_default(),
        );
        csv.row(&row);
    }
    Ok(csv.into_string())
}

fn abm(cfg: &Resolved) -> Result<String> {
    if cfg.runs == 0 {
        bail!("runs must be >= 1");
    }
    let base = abm_config(cfg);
    base.validate()?;
    let runs = (0..cfg.runs)
        .into_par_iter()
        .map(|r| {
            let mut c = base.clone();
            c.seed = derive_run_seed(cfg.seed, 0, r as u64);
            run_simulation(&c)
        })
        .collect::<threat_dynamics::Result<Vec<_>>>()?;

    let mut header = vec!["run".to_owned(), "generation".to_owned()];
    header.extend(columns("n_", cfg.variant));
    for c in ["coop_strategy_freq", "coop_act_freq", "welfare"] {
        header.push(c.into());
    }
    let mut csv = Csv::new(&cfg.header_line(), &header);
    for (r, run) in runs.iter().enumerate() {
        for rec in &run.records {
            let mut row = vec![r.to_string(), rec.generation.to_string()];
            row.extend(rec.counts.as_slice().iter().map(ToString::to_string));
            row.push(fmt_num(rec.metrics.coop_strategy_freq));
            row.push(fmt_num(rec.metrics.coop_act_freq));
            row.push(fmt_num(rec.metrics.welfare));
            csv.row(&row);
        }
    }
    Ok(csv.into_string())
}

fn sweep(cfg: &Resolved) -> Result<String> {
    let spec = SweepSpec {
        base: abm_config(cfg),
        axes: cfg.axes.clone(),
        runs: cfg.runs,
        master_seed: cfg.seed,
    };
    let rows = run_sweep(&spec)?;

    let mut metrics: Vec<String> = ["coop_strategy_freq", "coop_act_freq", "welfare"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    metrics.extend(columns("freq_", cfg.variant));
    let mut header: Vec<String> = cfg.axes.iter().map(|a| a.param.name().to_owned()).collect();
    header.push("q_over_p".into());
    header.push("runs".into());
    for m in &metrics {
        header.push(format!("mean_{m}"));
        header.push(format!("std_{m}"));
    }
    header.push("error".into());

    let mut csv = Csv::new(&cfg.header_line(), &header);
    for row in rows {
        let mut out = nums(&row.values);
        out.push(row.q_over_p.map(fmt_num).unwrap_or_default());
        out.push(row.runs.to_string());
        match &row.result {
            Ok(m) => {
                let mut stats = vec![m.coop_strategy_freq, m.coop_act_freq, m.welfare];
                stats.extend(m.freq.iter().copied());
                for s in stats {
                    out.push(fmt_num(s.mean));
                    out.push(fmt_num(s.std));
                }
                out.push(String::new());
            }
            Err(e) => {
                out.extend(std::iter::repeat_n(String::new(), 2 * metrics.len()));
                out.push(e.clone());
            }
        }
        csv.row(&out);
    }
    Ok(csv.into_string())
}

fn oracle(cfg: &Resolved) -> Result<String> {
    let counts = PopulationCounts::new(
        cfg.counts
            .clone()
            .expect("resolved oracle config has counts"),
    )?;
    let est = sequential_oracle::<f64>(&counts, &cfg.params, cfg.variant, cfg.shuffles, cfg.seed)?;
    let paper = finite_avg_payoffs(&counts, &cfg.params, cfg.variant, PayoffMode::Paper)?;
    let corrected = finite_avg_payoffs(&counts, &cfg.params, cfg.variant, PayoffMode::Corrected)?;
    let header: Vec<String> = [
        "strategy",
        "n",
        "oracle_mean",
        "oracle_se",
        "closed_form_paper",
        "closed_form_corrected",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut csv = Csv::new(&cfg.header_line(), &header);
    for (i, s) in cfg.variant.strategies().iter().enumerate() {
        csv.row(&[
            s.label().to_owned(),
            counts.get(i).to_string(),
            est.mean[i].map(fmt_num).unwrap_or_default(),
            est.std_error[i].map(fmt_num).unwrap_or_default(),
            fmt_num(paper[i]),
            fmt_num(corrected[i]),
        ]);
    }
    Ok(csv.into_string())
}

/// Runs the command and writes `<stem>.csv` plus `<stem>.meta.toml` into the
/// output directory. Returns the paths written.
pub fn dispatch(cfg: &Resolved) -> Result<Vec<PathBuf>> {
    let body = match cfg.command {
        CommandKind::Phase => phase(cfg)?,
        CommandKind::Trajectory => trajectory(cfg)?,
        CommandKind::Restpoints => restpoints(cfg)?,
        CommandKind::Abm => abm(cfg)?,
        CommandKind::Sweep => sweep(cfg)?,
        CommandKind::Oracle => oracle(cfg)?,
    };
    std::fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let stem = cfg.command.output_stem();
    let csv_path = cfg.out.join(format!("{stem}.csv"));
    let meta_path = cfg.out.join(format!("{stem}.meta.toml"));
    std::fs::write(&csv_path, body).with_context(|| format!("writing {}", csv_path.display()))?;
    std::fs::write(&meta_path, cfg.sidecar())
        .with_context(|| format!("writing {}", meta_path.display()))?;
    Ok(vec![csv_path, meta_path])
}

use rayon::prelude::*;
use serde::Serialize;

use keychain_core::embed::{embed_keychain, verify_embedding, EmbedConfig};
use keychain_core::graph::{offset_probability, sample_gnp};
use keychain_core::seed::derive_seed;

use crate::config::Metric;
use crate::error::{CliError, Result};

/// Probability axis of the grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Density {
    /// `p = (ln n + c) / n`.
    Offset(Vec<f64>),
    Probability(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub ns: Vec<usize>,
    pub density: Density,
    pub trials: usize,
    pub seed: u64,
    pub metric: Metric,
    pub embed: EmbedConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRow {
    pub n: usize,
    /// `None` when the grid is given in `p`.
    pub c: Option<f64>,
    pub p: f64,
    pub trial: usize,
    /// Trial seed: the graph is `G(n, p)` with `derive_seed(seed, "graph", 0)`
    /// and the embedding run uses `derive_seed(seed, "embed", 0)`, exactly
    /// as a single `embed --seed <seed>` run.
    pub seed: u64,
    pub success: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointSummary {
    pub n: usize,
    pub c: Option<f64>,
    pub p: f64,
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub metric: Metric,
    pub summary: Vec<PointSummary>,
    pub trials: Vec<TrialRow>,
}

/// Grid points in order: every `n`, then every density value.
fn points(config: &SweepConfig) -> Result<Vec<(usize, Option<f64>, f64)>> {
    let mut out = Vec::new();
    for &n in &config.ns {
        if n == 0 {
            return Err(CliError::Usage("grid contains n = 0".into()));
        }
        match &config.density {
            Density::Offset(cs) => {
                for &c in cs {
                    if !c.is_finite() {
                        return Err(CliError::Usage(format!("offset {c} is not finite")));
                    }
                    out.push((n, Some(c), offset_probability(n, c)));
                }
            }
            Density::Probability(ps) => {
                for &p in ps {
                    if !(0.0..=1.0).contains(&p) {
                        return Err(CliError::Usage(format!("probability {p} outside [0, 1]")));
                    }
                    out.push((n, None, p));
                }
            }
        }
    }
    Ok(out)
}

/// Trial `j` at every grid point uses the seed `derive_seed(seed, "trial", j)`.
pub fn trial_seed(master: u64, trial: usize) -> u64 {
    derive_seed(master, "trial", trial as u64)
}

/// The graph a trial seed stands for.
pub fn graph_seed(trial_seed: u64) -> u64 {
    derive_seed(trial_seed, "graph", 0)
}

/// The embedding seed a trial seed stands for.
pub fn embed_seed(trial_seed: u64) -> u64 {
    derive_seed(trial_seed, "embed", 0)
}

pub fn sweep_experiment(config: &SweepConfig) -> Result<SweepResult> {
    let grid = points(config)?;
    let jobs: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|i| (0..config.trials).map(move |j| (i, j)))
        .collect();
    let trials = jobs
        .par_iter()
        .map(|&(i, j)| {
            let (n, c, p) = grid[i];
            let seed = trial_seed(config.seed, j);
            let g = sample_gnp(n, p, graph_seed(seed))?;
            let (success, detail) = match config.metric {
                Metric::Connected => (
                    g.is_connected(),
                    format!("{} components", g.components().len()),
                ),
                Metric::Embed => {
                    let run = EmbedConfig {
                        seed: embed_seed(seed),
                        ..config.embed.clone()
                    };
                    match embed_keychain(&g, &run) {
                        Ok(out) => match out.embedding() {
                            Some(e) => {
                                let ok = verify_embedding(&g, e).ok;
                                (
                                    ok,
                                    if ok {
                                        "embedded".into()
                                    } else {
                                        "verification failed".into()
                                    },
                                )
                            }
                            None => (
                                false,
                                format!(
                                    "failed at {}",
                                    out.trace().failure.clone().unwrap_or_default()
                                ),
                            ),
                        },
                        // Parameters that do not fit n are data for a sweep.
                        Err(e) => (false, e.to_string()),
                    }
                }
            };
            Ok(TrialRow {
                n,
                c,
                p,
                trial: j,
                seed,
                success,
                detail,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = grid
        .iter()
        .enumerate()
        .map(|(i, &(n, c, p))| {
            let rows = &trials[i * config.trials..(i + 1) * config.trials];
            let successes = rows.iter().filter(|r| r.success).count();
            PointSummary {
                n,
                c,
                p,
                trials: config.trials,
                successes,
                rate: if config.trials == 0 {
                    0.0
                } else {
                    successes as f64 / config.trials as f64
                },
            }
        })
        .collect();
    Ok(SweepResult {
        metric: config.metric,
        summary,
        trials,
    })
}

//! Command-line front end: argument model, subcommand handlers, the sweep
//! harness and report emission.
//!
//! A run with master seed `s` samples its graph with
//! `derive_seed(s, "graph", 0)` and seeds the embedding pipeline with
//! `derive_seed(s, "embed", 0)`; sweep trial `j` uses
//! `derive_seed(s, "trial", j)` as its master seed.

pub mod config;
pub mod error;
pub mod report;
pub mod sweep;

use std::path::Path;

use num_bigint::BigUint;
use serde::Deserialize;
use serde_json::json;

use keychain_core::embed::{
    embed_keychain, verify_embedding, EmbedConfig, EmbedOutcome, Embedding,
};
use keychain_core::graph::{
    keychain_graph, keychain_template, offset_probability, parse_edge_list, sample_gnp,
    serialize_edge_list,
};
use keychain_core::mcs::{mcs_experiment, union_bound_eval, McsMode};
use keychain_core::posa::{hamiltonize, is_hamilton_cycle, HamiltonizeConfig, HamiltonizeOutcome};
use keychain_core::properties::{check_property, CheckMode, Constants, PropertyId, Verdict};
use keychain_core::{compute_parameters, compute_parameters_big, Graph, Profile};

pub use config::{Command, Format, McsAction, Metric, RunConfig};
pub use error::{CliError, Result};
pub use report::{emit_report, write_atomic, Output, Report};
pub use sweep::{embed_seed, graph_seed, sweep_experiment, trial_seed, Density, SweepConfig};

use config::{GraphSource, McsModeArg, ModeArg, ProfileArg};

/// Default trial counts when `--trials` is absent.
const CHECK_TRIALS: usize = 200;
const MCS_TRIALS: usize = 100;
const SWEEP_TRIALS: usize = 20;

fn profile(config: &RunConfig) -> Result<Profile> {
    match config.profile {
        ProfileArg::Paper if config.growth.is_some() => Err(CliError::Usage(
            "--growth applies to the desk profile only".into(),
        )),
        ProfileArg::Paper => Ok(Profile::Paper),
        ProfileArg::Desk => Ok(Profile::Desk {
            growth: config.growth,
        }),
    }
}

fn constants(config: &RunConfig) -> Constants {
    let mut c = match config.profile {
        ProfileArg::Paper => Constants::paper(),
        ProfileArg::Desk => Constants::desk(),
    };
    if let Some(g) = config.gamma {
        c.gamma = g;
    }
    c
}

fn embed_config(config: &RunConfig, seed: u64) -> Result<EmbedConfig> {
    let mut e = EmbedConfig::for_profile(profile(config)?, seed);
    if let Some(g) = config.gamma {
        e.gamma = g;
    }
    Ok(e)
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::File {
        path: path.display().to_string(),
        source,
    })
}

fn probability(n: usize, p: Option<f64>, c: Option<f64>) -> Result<f64> {
    match (p, c) {
        (Some(p), None) => Ok(p),
        (None, Some(c)) => Ok(offset_probability(n, c)),
        _ => Err(CliError::Usage("give exactly one of --p and --c".into())),
    }
}

fn load_graph(source: &GraphSource, seed: u64) -> Result<Graph> {
    match &source.graph {
        Some(path) => Ok(parse_edge_list(&read_file(path)?)?),
        None => {
            let n = source.n.ok_or_else(|| {
                CliError::Usage("give a graph file or --n with --p or --c".into())
            })?;
            Ok(sample_gnp(
                n,
                probability(n, source.p, source.c)?,
                graph_seed(seed),
            )?)
        }
    }
}

fn text(name: &str, g: &Graph) -> Vec<Output> {
    vec![Output::Text {
        name: name.into(),
        text: serialize_edge_list(g),
    }]
}

/// Runs one subcommand. Failed embeddings and violated properties are
/// results, not errors.
pub fn run(config: &RunConfig) -> Result<Vec<Output>> {
    let seed = config.seed;
    match &config.command {
        Command::Sample(gnp) => {
            let p = probability(gnp.n, gnp.p, gnp.c)?;
            Ok(text("graph", &sample_gnp(gnp.n, p, graph_seed(seed))?))
        }
        Command::Template { n, t, ell } => {
            let g = match (t, ell) {
                (Some(t), Some(ell)) => keychain_graph(*n, *t, *ell)?,
                _ => keychain_template(&compute_parameters(*n, profile(config)?)?)?,
            };
            Ok(text("template", &g))
        }
        Command::Params { n } => params(config, n),
        Command::Check {
            source,
            properties,
            mode,
        } => check(config, source, properties, *mode),
        Command::Embed { source } => embed(config, source),
        Command::Verify { graph, embedding } => verify(graph, embedding),
        Command::Hamiltonize { source, d0 } => hamilton(config, source, *d0),
        Command::Mcs { action } => mcs(config, action),
        Command::Sweep { n, c, p, metric } => {
            let density = if p.is_empty() {
                Density::Offset(c.clone())
            } else {
                Density::Probability(p.clone())
            };
            let sc = SweepConfig {
                ns: n.clone(),
                density,
                trials: config.trials.unwrap_or(SWEEP_TRIALS),
                seed,
                metric: *metric,
                embed: embed_config(config, 0)?,
            };
            sweep_reports(&sc, &sweep_experiment(&sc)?)
        }
    }
}

fn params(config: &RunConfig, n: &str) -> Result<Vec<Output>> {
    let n: BigUint = n
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--n {n:?} is not a non-negative integer")))?;
    let p = compute_parameters_big(&n, profile(config)?)?;
    let json = p.to_json();
    let mut r = Report::new("params", &["n", "t", "ell", "j0", "a_seq"], json);
    let seq: Vec<String> = p.a_seq.iter().map(|a| a.to_string()).collect();
    r.push(vec![
        p.n.to_string(),
        p.t.to_string(),
        p.ell.to_string(),
        p.j0.to_string(),
        seq.join(" "),
    ]);
    Ok(vec![Output::Report(r)])
}

fn check(
    config: &RunConfig,
    source: &GraphSource,
    names: &[String],
    mode: ModeArg,
) -> Result<Vec<Output>> {
    let g = load_graph(source, config.seed)?;
    let c = constants(config);
    let which: Vec<PropertyId> = if names.is_empty() {
        PropertyId::ALL.to_vec()
    } else {
        names
            .iter()
            .map(|s| {
                PropertyId::parse(s)
                    .ok_or_else(|| CliError::Usage(format!("unknown property {s:?}")))
            })
            .collect::<Result<_>>()?
    };
    let mode = match mode {
        ModeArg::Exact => CheckMode::Exact,
        ModeArg::Sampled => CheckMode::Sampled {
            trials: config.trials.unwrap_or(CHECK_TRIALS),
            seed: keychain_core::seed::derive_seed(config.seed, "check", 0),
        },
    };
    let reports = which
        .iter()
        .map(|&p| check_property(&g, p, mode, &c))
        .collect::<keychain_core::Result<Vec<_>>>()?;
    let mut r = Report::new(
        "check",
        &["property", "verdict", "mode", "witness"],
        serde_json::to_value(&reports)?,
    );
    for rep in &reports {
        let verdict = match rep.verdict {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Unknown => "unknown",
        };
        let mode = match rep.mode {
            CheckMode::Exact => "exact".to_string(),
            CheckMode::Sampled { trials, .. } => format!("sampled({trials})"),
        };
        let witness = rep
            .witness
            .as_ref()
            .map(|w| serde_json::to_string(w).unwrap())
            .unwrap_or_default();
        r.push(vec![
            rep.property.to_string(),
            verdict.into(),
            mode,
            witness,
        ]);
    }
    Ok(vec![Output::Report(r)])
}

fn embed(config: &RunConfig, source: &GraphSource) -> Result<Vec<Output>> {
    let g = load_graph(source, config.seed)?;
    let out = embed_keychain(&g, &embed_config(config, embed_seed(config.seed))?)?;
    let mut r = Report::new(
        "embed",
        &["stage", "attempt", "ok", "detail"],
        serde_json::to_value(&out)?,
    );
    for s in &out.trace().stages {
        r.push(vec![
            s.stage.clone(),
            s.attempt.to_string(),
            s.ok.to_string(),
            s.detail.clone(),
        ]);
    }
    Ok(vec![Output::Report(r)])
}

/// Accepts the output of `embed` or a bare embedding.
#[derive(Deserialize)]
#[serde(untagged)]
enum EmbeddingFile {
    Outcome(EmbedOutcome),
    Bare(Embedding),
}

fn verify(graph: &Path, embedding: &Path) -> Result<Vec<Output>> {
    let g = parse_edge_list(&read_file(graph)?)?;
    let file: EmbeddingFile = serde_json::from_str(&read_file(embedding)?)?;
    let e = match file {
        EmbeddingFile::Bare(e) => e,
        EmbeddingFile::Outcome(o) => o.embedding().cloned().ok_or_else(|| {
            CliError::Usage("the embed run failed; there is no embedding to verify".into())
        })?,
    };
    let v = verify_embedding(&g, &e);
    let mut r = Report::new("verify", &["ok", "diagnosis"], serde_json::to_value(&v)?);
    r.push(vec![
        v.ok.to_string(),
        v.diagnosis.clone().unwrap_or_default(),
    ]);
    Ok(vec![Output::Report(r)])
}

fn hamilton(config: &RunConfig, source: &GraphSource, d0: Option<usize>) -> Result<Vec<Output>> {
    let g = load_graph(source, config.seed)?;
    let w: Vec<usize> = g.vertices().collect();
    let hc = HamiltonizeConfig {
        d0,
        ..HamiltonizeConfig::new(keychain_core::seed::derive_seed(
            config.seed,
            "hamiltonize",
            0,
        ))
    };
    let out = hamiltonize(&g, &w, &hc)?;
    let verified = out
        .cycle()
        .is_some_and(|c| is_hamilton_cycle(&g, &w, &c.cycle));
    let json = json!({ "outcome": out, "verified": verified });
    let mut r = Report::new(
        "hamiltonize",
        &["outcome", "rounds", "detail", "verified"],
        json,
    );
    let row = match &out {
        HamiltonizeOutcome::Cycle(c) => {
            vec![
                "cycle".into(),
                c.rounds.to_string(),
                format!("{} boosters", c.boosters.len()),
            ]
        }
        HamiltonizeOutcome::Failed(f) => vec![
            "failed".into(),
            f.rounds.to_string(),
            format!("{}; longest path {}", f.stage, f.longest_path_len),
        ],
    };
    r.push(row.into_iter().chain([verified.to_string()]).collect());
    Ok(vec![Output::Report(r)])
}

fn mcs(config: &RunConfig, action: &McsAction) -> Result<Vec<Output>> {
    match action {
        McsAction::Experiment {
            n,
            p,
            mode,
            epsilon,
        } => {
            let mode = match mode {
                McsModeArg::Exact => McsMode::Exact,
                McsModeArg::Heuristic => McsMode::Heuristic,
            };
            let trials = config.trials.unwrap_or(MCS_TRIALS);
            let e = mcs_experiment(*n, *p, trials, config.seed, mode, epsilon)?;
            let mut r = Report::new(
                "mcs",
                &["trial", "M", "mode", "seed"],
                serde_json::to_value(&e)?,
            );
            // The experiment's own CSV fixes the columns; reuse its rows.
            for line in e.csv().lines().skip(1) {
                r.push(line.split(',').map(str::to_string).collect());
            }
            Ok(vec![Output::Report(r)])
        }
        McsAction::Bound {
            n,
            epsilon,
            delta,
            p,
        } => {
            let p = p.unwrap_or_else(|| (*n as f64).powf(-1.0 + delta));
            let b = union_bound_eval(*n, *epsilon, *delta, p)?;
            let mut r = Report::new(
                "mcs_bound",
                &[
                    "n",
                    "epsilon",
                    "delta",
                    "p",
                    "m",
                    "log_bound",
                    "log_simplified",
                    "certified",
                ],
                serde_json::to_value(&b)?,
            );
            r.push(vec![
                b.n.to_string(),
                b.epsilon.to_string(),
                b.delta.to_string(),
                b.p.to_string(),
                b.m.to_string(),
                b.log_bound.to_string(),
                b.log_simplified.to_string(),
                b.certified.to_string(),
            ]);
            Ok(vec![Output::Report(r)])
        }
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn sweep_reports(config: &SweepConfig, result: &sweep::SweepResult) -> Result<Vec<Output>> {
    let metric = serde_json::to_value(result.metric)?;
    let metric = metric.as_str().unwrap_or_default().to_string();
    let mut summary = Report::new(
        "sweep_summary",
        &["n", "c", "p", "metric", "trials", "successes", "rate"],
        json!({ "config": config, "summary": result.summary }),
    );
    for s in &result.summary {
        summary.push(vec![
            s.n.to_string(),
            opt(s.c),
            s.p.to_string(),
            metric.clone(),
            s.trials.to_string(),
            s.successes.to_string(),
            s.rate.to_string(),
        ]);
    }
    let mut trials = Report::new(
        "sweep_trials",
        &[
            "n", "c", "p", "trial", "seed", "metric", "success", "detail",
        ],
        serde_json::to_value(&result.trials)?,
    );
    for t in &result.trials {
        trials.push(vec![
            t.n.to_string(),
            opt(t.c),
            t.p.to_string(),
            t.trial.to_string(),
            t.seed.to_string(),
            metric.clone(),
            t.success.to_string(),
            t.detail.clone(),
        ]);
    }
    Ok(vec![Output::Report(summary), Output::Report(trials)])
}

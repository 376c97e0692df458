//! Spanning KeyChain embedding: keys, reservoir partition, comb, closure.
//!
//! [`embed_keychain`] runs the stages in order with fresh derived seeds on
//! every retry and only reports an embedding that [`verify_embedding`]
//! accepts.

mod close;
mod comb;
mod keys;
mod partition;
mod search;
mod verify;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use close::{close_chain, CloseFailure, CloseMethod};
pub use comb::{build_comb, Comb, CombFailure, PathMethod};
pub use keys::{select_keys, KeyStrategy};
pub use partition::{
    check_partition, partition_vertices, Partition, PartitionBounds, PartitionConfig,
    PartitionFailure,
};
pub use search::{search_keychain, SearchResult};
pub use verify::{verify_embedding, Verification};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::{compute_parameters, KeyChainParams, Profile};
use crate::properties::Constants;
use crate::seed::derive_seed;

/// Template vertex `a` maps to host vertex `phi[a - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub params: KeyChainParams,
    pub phi: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbedConfig {
    pub profile: Profile,
    pub gamma: f64,
    pub strategy: KeyStrategy,
    /// `Small = D_{≤ ⌊ln n / c⌋}`.
    pub small_divisor: f64,
    pub seed: u64,
    /// Partition and comb attempts, each with a fresh partition seed.
    pub attempts: usize,
    /// Closure attempts per comb.
    pub close_retries: usize,
    pub max_resamples: usize,
    /// Overrides the parameters computed from the profile.
    pub params: Option<KeyChainParams>,
    /// Fixed keys instead of the strategy's choice.
    pub keys: Option<Vec<usize>>,
    /// Node budget of the depth-first search run after every staged
    /// attempt has failed; 0 disables it.
    pub search_budget: usize,
    /// Records wall-clock time per stage; off by default so traces are
    /// reproducible byte for byte.
    pub record_timings: bool,
}

impl EmbedConfig {
    /// `γ = 0.01`, growth `max(ln n/100, 2)`, lowest-degree keys.
    pub fn desk(seed: u64) -> Self {
        let c = Constants::desk();
        EmbedConfig {
            profile: Profile::desk(),
            gamma: c.gamma,
            strategy: KeyStrategy::LowestDegree,
            small_divisor: c.small_divisor,
            seed,
            attempts: 6,
            close_retries: 2,
            max_resamples: 50,
            params: None,
            keys: None,
            search_budget: 200_000,
            record_timings: false,
        }
    }

    pub fn paper(seed: u64) -> Self {
        let c = Constants::paper();
        EmbedConfig {
            profile: Profile::Paper,
            gamma: c.gamma,
            strategy: KeyStrategy::Paper,
            small_divisor: c.small_divisor,
            ..Self::desk(seed)
        }
    }

    pub fn for_profile(profile: Profile, seed: u64) -> Self {
        match profile {
            Profile::Paper => Self::paper(seed),
            Profile::Desk { .. } => EmbedConfig {
                profile,
                ..Self::desk(seed)
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    /// `host`, `keys`, `partition`, `comb`, `close` or `verify`.
    pub stage: String,
    pub attempt: usize,
    pub ok: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineTrace {
    pub n: usize,
    pub params: KeyChainParams,
    pub seed: u64,
    pub keys: Vec<usize>,
    pub stages: Vec<StageRecord>,
    /// Last stage that failed, when the run failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl PipelineTrace {
    pub fn retries(&self, stage: &str) -> usize {
        self.stages
            .iter()
            .filter(|s| s.stage == stage && !s.ok)
            .count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum EmbedOutcome {
    Embedded {
        embedding: Embedding,
        trace: PipelineTrace,
    },
    Failed {
        trace: PipelineTrace,
    },
}

impl EmbedOutcome {
    pub fn embedding(&self) -> Option<&Embedding> {
        match self {
            EmbedOutcome::Embedded { embedding, .. } => Some(embedding),
            EmbedOutcome::Failed { .. } => None,
        }
    }

    pub fn trace(&self) -> &PipelineTrace {
        match self {
            EmbedOutcome::Embedded { trace, .. } | EmbedOutcome::Failed { trace } => trace,
        }
    }
}

struct Recorder {
    trace: PipelineTrace,
    timings: bool,
    clock: Instant,
}

impl Recorder {
    fn start(&mut self) {
        self.clock = Instant::now();
    }

    fn push(&mut self, stage: &str, attempt: usize, ok: bool, detail: String) {
        let millis = self
            .timings
            .then(|| self.clock.elapsed().as_secs_f64() * 1e3);
        if !ok {
            self.trace.failure = Some(stage.to_string());
        }
        self.trace.stages.push(StageRecord {
            stage: stage.into(),
            attempt,
            ok,
            detail,
            millis,
        });
    }
}

/// Finds a spanning `KC(n, t, ℓ)` in `g`.
///
/// Errors are reserved for invalid input (parameters that do not fit `n`,
/// a bad `γ`); a run that does not find an embedding is a
/// [`EmbedOutcome::Failed`] with the full trace.
pub fn embed_keychain(g: &Graph, config: &EmbedConfig) -> Result<EmbedOutcome> {
    let n = g.n();
    let params = match &config.params {
        Some(p) => {
            p.validate()?;
            p.clone()
        }
        None => compute_parameters(n, config.profile)?,
    };
    if params.n != n {
        return Err(Error::Parameter(format!(
            "parameters are for n = {}, host has {n}",
            params.n
        )));
    }
    let ln = (n.max(2) as f64).ln();
    let pconf = PartitionConfig {
        gamma: config.gamma,
        small_threshold: (ln / config.small_divisor).floor() as usize,
        bounds: PartitionBounds::for_profile(config.profile, n, config.gamma),
        max_resamples: config.max_resamples,
    };
    let mut rec = Recorder {
        trace: PipelineTrace {
            n,
            params: params.clone(),
            seed: config.seed,
            keys: Vec::new(),
            stages: Vec::new(),
            failure: None,
        },
        timings: config.record_timings,
        clock: Instant::now(),
    };

    // A spanning KeyChain has minimum degree 1 and exactly t leaves.
    let leaves = g.vertices().filter(|&v| g.degree(v) == 1).count();
    if let Some(v) = g.vertices().find(|&v| g.degree(v) == 0) {
        rec.push("host", 0, false, format!("vertex {v} is isolated"));
        return Ok(EmbedOutcome::Failed { trace: rec.trace });
    }
    if leaves > params.t {
        rec.push(
            "host",
            0,
            false,
            format!("{leaves} vertices of degree 1, more than t = {}", params.t),
        );
        return Ok(EmbedOutcome::Failed { trace: rec.trace });
    }

    let chosen = match &config.keys {
        Some(k) => {
            let mut k = k.clone();
            k.sort_unstable();
            keys::check_keys(g, &k).map(|()| k)
        }
        None => select_keys(g, params.t, config.strategy),
    };
    let keys = match chosen {
        Ok(k) => k,
        Err(Error::KeySelection(msg)) => {
            rec.push("keys", 0, false, msg);
            return Ok(EmbedOutcome::Failed { trace: rec.trace });
        }
        Err(e) => return Err(e),
    };
    rec.push("keys", 0, true, format!("{} keys", keys.len()));
    rec.trace.keys = keys.clone();

    for attempt in 0..config.attempts.max(1) {
        rec.start();
        let part = partition_vertices(
            g,
            &keys,
            &pconf,
            derive_seed(config.seed, "partition", attempt as u64),
        )?;
        let part = match part {
            Ok(p) => {
                let detail = format!(
                    "|U1| = {}, |U2| = {}, |V'| = {}, {} resamples",
                    p.u1.len(),
                    p.u2.len(),
                    p.vprime.len(),
                    p.resamples
                );
                rec.push("partition", attempt, true, detail);
                p
            }
            Err(f) => {
                let first = f.violations.first().cloned().unwrap_or_default();
                let detail = format!(
                    "{} violations after {} resamples; {first}",
                    f.violations.len(),
                    f.resamples
                );
                rec.push("partition", attempt, false, detail);
                continue;
            }
        };

        rec.start();
        let shuffle = (attempt > 0).then(|| derive_seed(config.seed, "comb", attempt as u64));
        let comb = match build_comb(g, &part, &params, shuffle)? {
            Ok(c) => {
                let layered = c
                    .methods
                    .iter()
                    .filter(|&&m| m == PathMethod::Layers)
                    .count();
                let detail = format!("{} paths, {layered} layered", c.paths.len());
                rec.push("comb", attempt, true, detail);
                c
            }
            Err(f) => {
                let detail = match f.layer {
                    Some(j) => format!(
                        "path {}: {}; layers starved at {j}, {} available",
                        f.path, f.message, f.available
                    ),
                    None => format!("path {}: {}", f.path, f.message),
                };
                rec.push("comb", attempt, false, detail);
                continue;
            }
        };

        for retry in 0..config.close_retries.max(1) {
            rec.start();
            let seed = derive_seed(
                config.seed,
                "close",
                (attempt * config.close_retries.max(1) + retry) as u64,
            );
            let (embedding, method) = match close_chain(g, &part, &comb, &params, seed)? {
                Ok(e) => e,
                Err(f) => {
                    rec.push(
                        "close",
                        attempt,
                        false,
                        format!("{}: {}", f.reason, f.detail),
                    );
                    continue;
                }
            };
            let method = serde_json::to_value(method).unwrap();
            rec.push(
                "close",
                attempt,
                true,
                format!("closed by {}", method.as_str().unwrap()),
            );
            let check = verify_embedding(g, &embedding);
            if check.ok {
                rec.push("verify", attempt, true, String::new());
                rec.trace.failure = None;
                return Ok(EmbedOutcome::Embedded {
                    embedding,
                    trace: rec.trace,
                });
            }
            rec.push(
                "verify",
                attempt,
                false,
                check.diagnosis.unwrap_or_default(),
            );
        }
    }
    if config.search_budget > 0 {
        rec.start();
        match search_keychain(
            g,
            &keys,
            &params,
            config.search_budget,
            derive_seed(config.seed, "search", 0),
        ) {
            SearchResult::Found(embedding) => {
                let check = verify_embedding(g, &embedding);
                rec.push("search", 0, true, "found by depth-first search".into());
                if check.ok {
                    rec.push("verify", 0, true, String::new());
                    rec.trace.failure = None;
                    return Ok(EmbedOutcome::Embedded {
                        embedding,
                        trace: rec.trace,
                    });
                }
                rec.push("verify", 0, false, check.diagnosis.unwrap_or_default());
            }
            SearchResult::Exhausted => {
                rec.push("search", 0, false, "no KeyChain with these keys".into());
            }
            SearchResult::GaveUp => {
                let detail = format!("budget of {} nodes exhausted", config.search_budget);
                rec.push("search", 0, false, detail);
            }
        }
    }
    Ok(EmbedOutcome::Failed { trace: rec.trace })
}

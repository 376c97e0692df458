//! Checkers for the structural properties P1–P8 of sparse random graphs,
//! and log-space tail bounds for binomial variables.
//!
//! P1–P4 are always decided exactly. P5–P8 quantify over exponentially
//! many sets: exact mode enumerates them for small `n` and sampled mode
//! runs randomized adversarial searches, reporting `Unknown` when nothing
//! is found. Every `Violated` verdict carries a witness that has been
//! re-checked against the raw definition.

mod constants;
mod degree;
mod expansion;
mod tail;
mod witness;

pub use constants::{Constants, DESK_MULTIPLIER};
pub use degree::{
    check_degree_properties, check_max_degree, check_num_keys, check_small_cover,
    check_small_distance, check_small_structure, short_path_length,
};
pub use expansion::{check_set_expansion, EXACT_LIMIT, PAIR_EXACT_LIMIT};
pub use tail::{log_tail_bound, tail_bound_eval, TailBoundQuery};
pub use witness::witness_is_genuine;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PropertyId {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    P8,
}

impl PropertyId {
    pub const ALL: [PropertyId; 8] = [
        PropertyId::P1,
        PropertyId::P2,
        PropertyId::P3,
        PropertyId::P4,
        PropertyId::P5,
        PropertyId::P6,
        PropertyId::P7,
        PropertyId::P8,
    ];

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.to_string().eq_ignore_ascii_case(s))
    }
}

impl std::fmt::Display for PropertyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CheckMode {
    Exact,
    Sampled { trials: usize, seed: u64 },
}

/// Evidence for a violation. Only the fields relevant to the property are
/// set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<usize>>,
    #[serde(rename = "U", skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<usize>>,
    #[serde(rename = "W", skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<usize>>,
}

impl Witness {
    pub fn vertex(v: usize) -> Self {
        Witness {
            vertex: Some(v),
            ..Default::default()
        }
    }

    pub fn path(p: Vec<usize>) -> Self {
        Witness {
            path: Some(p),
            ..Default::default()
        }
    }

    pub fn set(u: Vec<usize>) -> Self {
        Witness {
            u: Some(u),
            ..Default::default()
        }
    }

    pub fn pair(u: Vec<usize>, w: Vec<usize>) -> Self {
        Witness {
            u: Some(u),
            w: Some(w),
            ..Default::default()
        }
    }
}

/// Thresholds a report was evaluated against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub profile: String,
    pub gamma: f64,
    pub small_threshold: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: PropertyId,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub mode: CheckMode,
    pub params: ReportParams,
}

impl PropertyReport {
    fn new(
        property: PropertyId,
        verdict: Verdict,
        witness: Option<Witness>,
        mode: CheckMode,
        g: &Graph,
        c: &Constants,
    ) -> Self {
        PropertyReport {
            property,
            verdict,
            witness,
            mode,
            params: ReportParams {
                profile: c.label.clone(),
                gamma: c.gamma,
                small_threshold: c.small_threshold(g.n()),
            },
        }
    }

    fn holds(p: PropertyId, mode: CheckMode, g: &Graph, c: &Constants) -> Self {
        Self::new(p, Verdict::Holds, None, mode, g, c)
    }

    fn violated(p: PropertyId, w: Witness, mode: CheckMode, g: &Graph, c: &Constants) -> Self {
        Self::new(p, Verdict::Violated, Some(w), mode, g, c)
    }

    fn unknown(p: PropertyId, mode: CheckMode, g: &Graph, c: &Constants) -> Self {
        Self::new(p, Verdict::Unknown, None, mode, g, c)
    }
}

/// Runs one property. P1–P4 ignore `mode` and are always exact.
pub fn check_property(
    g: &Graph,
    which: PropertyId,
    mode: CheckMode,
    c: &Constants,
) -> Result<PropertyReport> {
    Ok(match which {
        PropertyId::P1 => check_max_degree(g, c),
        PropertyId::P2 => check_num_keys(g, c),
        PropertyId::P3 => check_small_distance(g, c),
        PropertyId::P4 => check_small_cover(g, c),
        _ => check_set_expansion(g, which, mode, c)?,
    })
}

pub fn check_all(g: &Graph, mode: CheckMode, c: &Constants) -> Result<Vec<PropertyReport>> {
    PropertyId::ALL
        .into_iter()
        .map(|p| check_property(g, p, mode, c))
        .collect()
}

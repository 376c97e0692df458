//! Maximum common edge subgraph of two graphs on the same vertex set.
//!
//! `M(G1, G2)` is the largest number of edges the two graphs share under a
//! vertex bijection. A witness `pi` maps vertex `u` of `G1` to `pi[u - 1]`
//! in `G2`; the common edges are the `uv ∈ E(G1)` with `pi(u)pi(v) ∈ E(G2)`.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::graph::{sample_gnp, Graph};
use crate::seed::{derive_seed, rng_from_seed};

/// Largest `n` for [`mces_exact`]; `8! = 40320` bijections.
pub const EXACT_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum McsMode {
    Exact,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McsResult {
    pub value: usize,
    pub witness: Vec<usize>,
    pub mode: McsMode,
}

fn same_n(g1: &Graph, g2: &Graph) -> Result<usize> {
    if g1.n() != g2.n() {
        return Err(Error::Parameter(format!(
            "graphs have {} and {} vertices",
            g1.n(),
            g2.n()
        )));
    }
    Ok(g1.n())
}

/// `|E(G1) ∩ pi^{-1}(E(G2))|`. Errors unless `pi` is a bijection of `1..=n`.
pub fn common_edges(g1: &Graph, g2: &Graph, pi: &[usize]) -> Result<usize> {
    let n = same_n(g1, g2)?;
    if pi.len() != n {
        return Err(Error::Input(format!(
            "bijection has {} entries, n = {n}",
            pi.len()
        )));
    }
    let mut seen = vec![false; n + 1];
    for &v in pi {
        if v == 0 || v > n || seen[v] {
            return Err(Error::Input(format!(
                "{pi:?} is not a permutation of 1..={n}"
            )));
        }
        seen[v] = true;
    }
    Ok(count(g1, g2, pi))
}

fn count(g1: &Graph, g2: &Graph, pi: &[usize]) -> usize {
    g1.edges()
        .filter(|&(u, v)| g2.has_edge(pi[u - 1], pi[v - 1]))
        .count()
}

/// Exact `M(G1, G2)` by enumerating all bijections (Heap's algorithm).
/// The witness is the first optimum in enumeration order.
pub fn mces_exact(g1: &Graph, g2: &Graph) -> Result<McsResult> {
    let n = same_n(g1, g2)?;
    if n > EXACT_LIMIT {
        return Err(Error::Capacity {
            what: "n for exact MCES",
            actual: n,
            limit: EXACT_LIMIT,
        });
    }
    let adj2: Vec<u32> = (0..=n)
        .map(|v| {
            if v == 0 {
                0
            } else {
                g2.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)
            }
        })
        .collect();
    let edges: Vec<(usize, usize)> = g1.edges().collect();
    let eval = |pi: &[usize]| {
        edges
            .iter()
            .filter(|&&(u, v)| adj2[pi[u - 1]] >> pi[v - 1] & 1 == 1)
            .count()
    };
    let mut pi: Vec<usize> = (1..=n).collect();
    let mut best = (eval(&pi), pi.clone());
    let cap = edges.len().min(g2.m());
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n && best.0 < cap {
        if c[i] < i {
            if i % 2 == 0 {
                pi.swap(0, i);
            } else {
                pi.swap(c[i], i);
            }
            let v = eval(&pi);
            if v > best.0 {
                best = (v, pi.clone());
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(McsResult {
        value: best.0,
        witness: best.1,
        mode: McsMode::Exact,
    })
}

/// Lower bound on `M(G1, G2)`: match vertices in order of decreasing degree,
/// then apply improving transpositions of the bijection until none is left.
/// Restart 0 breaks degree ties by index, later restarts at random.
pub fn mces_heuristic(g1: &Graph, g2: &Graph, seed: u64, restarts: usize) -> Result<McsResult> {
    let n = same_n(g1, g2)?;
    let mut best: Option<(usize, Vec<usize>)> = None;
    for r in 0..restarts.max(1) {
        let order = |g: &Graph, tag: &str| {
            let mut rank: Vec<usize> = (0..=n).collect();
            if r > 0 {
                rank[1..].shuffle(&mut rng_from_seed(derive_seed(seed, tag, r as u64)));
            }
            let mut vs: Vec<usize> = g.vertices().collect();
            vs.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), rank[v]));
            vs
        };
        let (o1, o2) = (order(g1, "mcs-g1"), order(g2, "mcs-g2"));
        let mut pi = vec![0; n];
        for (&u, &v) in o1.iter().zip(&o2) {
            pi[u - 1] = v;
        }
        let value = swap_search(g1, g2, &mut pi);
        if best.as_ref().is_none_or(|b| value > b.0) {
            best = Some((value, pi));
        }
    }
    let (value, witness) = best.unwrap_or_default();
    Ok(McsResult {
        value,
        witness,
        mode: McsMode::Heuristic,
    })
}

/// First-improvement local search over transpositions of `pi`.
fn swap_search(g1: &Graph, g2: &Graph, pi: &mut [usize]) -> usize {
    let n = pi.len();
    // Common edges at u, not counting the edge to `skip`.
    let at = |pi: &[usize], u: usize, image: usize, skip: usize| {
        g1.neighbors(u)
            .iter()
            .filter(|&&w| w != skip && g2.has_edge(image, pi[w - 1]))
            .count()
    };
    let mut value = count(g1, g2, pi);
    let mut improved = true;
    while improved {
        improved = false;
        for u in 1..=n {
            for v in u + 1..=n {
                let (a, b) = (pi[u - 1], pi[v - 1]);
                let before = at(pi, u, a, v) + at(pi, v, b, u);
                let after = at(pi, u, b, v) + at(pi, v, a, u);
                if after > before {
                    pi.swap(u - 1, v - 1);
                    value += after - before;
                    improved = true;
                }
            }
        }
    }
    value
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnionBound {
    pub n: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub p: f64,
    /// `m = ⌈(1 + ε) n⌉`.
    pub m: u64,
    /// `ln( C(C(n,2), m) · n! · p^{2m} )`; `-inf` when `m > C(n,2)`.
    pub log_bound: f64,
    /// `ln( (2 n^{(−1+2δ)(1+ε)+1})^n )`, the closed-form simplification.
    pub log_simplified: f64,
    /// `log_bound < 0`, so `Pr(M ≥ m) < 1` is certified.
    pub certified: bool,
}

/// Union bound on `Pr(M(G1, G2) ≥ m)` over the choice of `m` common edges
/// and a bijection, in log space via `ln Γ`.
pub fn union_bound_eval(n: u64, epsilon: f64, delta: f64, p: f64) -> Result<UnionBound> {
    if n == 0 {
        return Err(Error::Parameter("n must be positive".into()));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Parameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Parameter(format!("p must lie in (0, 1], got {p}")));
    }
    if !delta.is_finite() {
        return Err(Error::Parameter(format!(
            "delta must be finite, got {delta}"
        )));
    }
    let nf = n as f64;
    let m = ((1.0 + epsilon) * nf).ceil() as u64;
    let pairs = nf * (nf - 1.0) / 2.0;
    let mf = m as f64;
    let log_bound = if mf > pairs {
        f64::NEG_INFINITY
    } else {
        let log_choose = ln_gamma(pairs + 1.0) - ln_gamma(mf + 1.0) - ln_gamma(pairs - mf + 1.0);
        log_choose + ln_gamma(nf + 1.0) + 2.0 * mf * p.ln()
    };
    let exponent = (-1.0 + 2.0 * delta) * (1.0 + epsilon) + 1.0;
    let log_simplified = nf * (2f64.ln() + exponent * nf.ln());
    Ok(UnionBound {
        n,
        epsilon,
        delta,
        p,
        m,
        log_bound,
        log_simplified,
        certified: log_bound < 0.0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McsTrial {
    pub trial: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub mode: McsMode,
    pub seed: u64,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonCheck {
    pub epsilon: f64,
    /// `(1 + ε) n`.
    pub threshold: f64,
    /// Trials with `M > (1 + ε) n`.
    pub exceeded: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McsExperiment {
    pub n: usize,
    pub p: f64,
    pub mode: McsMode,
    pub seed: u64,
    pub trials: Vec<McsTrial>,
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    pub checks: Vec<EpsilonCheck>,
}

impl McsExperiment {
    /// `trial,M,mode,seed` rows.
    pub fn csv(&self) -> String {
        let mut s = String::from("trial,M,mode,seed\n");
        for t in &self.trials {
            let mode = match t.mode {
                McsMode::Exact => "exact",
                McsMode::Heuristic => "heuristic",
            };
            s.push_str(&format!("{},{},{},{}\n", t.trial, t.m, mode, t.seed));
        }
        s
    }
}

/// Heuristic restarts used by [`mcs_experiment`].
pub const EXPERIMENT_RESTARTS: usize = 4;

/// Samples `trials` independent pairs of `G(n, p)` and records `M` for each.
/// Trial `i` draws both graphs from `derive_seed(seed, "mcs", i)`.
pub fn mcs_experiment(
    n: usize,
    p: f64,
    trials: usize,
    seed: u64,
    mode: McsMode,
    epsilons: &[f64],
) -> Result<McsExperiment> {
    if mode == McsMode::Exact && n > EXACT_LIMIT {
        return Err(Error::Capacity {
            what: "n for exact MCES",
            actual: n,
            limit: EXACT_LIMIT,
        });
    }
    let mut rows = Vec::with_capacity(trials);
    for trial in 0..trials {
        let s = derive_seed(seed, "mcs", trial as u64);
        let g1 = sample_gnp(n, p, derive_seed(s, "g1", 0))?;
        let g2 = sample_gnp(n, p, derive_seed(s, "g2", 0))?;
        let r = match mode {
            McsMode::Exact => mces_exact(&g1, &g2)?,
            McsMode::Heuristic => mces_heuristic(&g1, &g2, s, EXPERIMENT_RESTARTS)?,
        };
        rows.push(McsTrial {
            trial,
            m: r.value,
            mode,
            seed: s,
            witness: r.witness,
        });
    }
    let values: Vec<usize> = rows.iter().map(|r| r.m).collect();
    let checks = epsilons
        .iter()
        .map(|&e| {
            let threshold = (1.0 + e) * n as f64;
            EpsilonCheck {
                epsilon: e,
                threshold,
                exceeded: values.iter().filter(|&&v| v as f64 > threshold).count(),
            }
        })
        .collect();
    Ok(McsExperiment {
        n,
        p,
        mode,
        seed,
        min: values.iter().copied().min().unwrap_or(0),
        max: values.iter().copied().max().unwrap_or(0),
        mean: if values.is_empty() {
            0.0
        } else {
            values.iter().sum::<usize>() as f64 / values.len() as f64
        },
        trials: rows,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(n: usize) -> Graph {
        Graph::from_edges(n, (2..=n).map(|v| (1, v))).unwrap()
    }

    #[test]
    fn exact_small_cases() {
        let k3 = Graph::complete(3);
        assert_eq!(mces_exact(&k3, &k3).unwrap().value, 3);
        assert_eq!(mces_exact(&Graph::path(3), &k3).unwrap().value, 2);
        assert_eq!(mces_exact(&star(4), &Graph::path(4)).unwrap().value, 2);
    }

    #[test]
    fn exact_errors() {
        let g9 = Graph::empty(9);
        assert!(matches!(mces_exact(&g9, &g9), Err(Error::Capacity { .. })));
        assert!(matches!(
            mces_exact(&Graph::empty(3), &Graph::empty(4)),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn witnesses_recompute() {
        let g1 = sample_gnp(8, 0.5, 1).unwrap();
        let g2 = sample_gnp(8, 0.5, 2).unwrap();
        for r in [
            mces_exact(&g1, &g2).unwrap(),
            mces_heuristic(&g1, &g2, 3, 4).unwrap(),
        ] {
            assert_eq!(common_edges(&g1, &g2, &r.witness).unwrap(), r.value);
        }
        assert!(common_edges(&g1, &g2, &[1, 1, 2, 3, 4, 5, 6, 7]).is_err());
    }

    #[test]
    fn heuristic_identity_on_equal_graphs() {
        let g = sample_gnp(30, 0.2, 5).unwrap();
        assert_eq!(mces_heuristic(&g, &g, 0, 1).unwrap().value, g.m());
    }

    #[test]
    fn union_bound_at_p_one() {
        let b = union_bound_eval(20, 0.5, 0.1, 1.0).unwrap();
        assert_eq!(b.m, 30);
        assert!(b.log_bound >= 0.0 && !b.certified);
    }

    #[test]
    fn union_bound_domain() {
        assert!(union_bound_eval(0, 0.5, 0.1, 0.5).is_err());
        assert!(union_bound_eval(10, 0.0, 0.1, 0.5).is_err());
        assert!(union_bound_eval(10, 0.5, 0.1, 0.0).is_err());
    }

    #[test]
    fn experiment_extremes() {
        let e = mcs_experiment(7, 0.0, 5, 1, McsMode::Exact, &[0.5]).unwrap();
        assert!(e.trials.iter().all(|t| t.m == 0));
        let e = mcs_experiment(7, 1.0, 3, 1, McsMode::Exact, &[]).unwrap();
        assert!(e.trials.iter().all(|t| t.m == 21));
        assert!(e.csv().starts_with("trial,M,mode,seed\n0,21,exact,"));
    }
}

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::exact::adjacency_masks;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::rng_from_seed;

/// Largest vertex count for exhaustive subset checks.
pub const EXPANDER_EXACT_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertifyMethod {
    /// Check `|N(U)| ≥ α|U|` for sets `U` with `|U| ≤ k` directly.
    Direct,
    /// Check the four sufficient local conditions for an `(h/4, 2)`-expander.
    Lemma { m: usize, d: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CertifyScope {
    Exact,
    Sampled { trials: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpanderCertificate {
    pub k: usize,
    pub alpha: f64,
    pub method: CertifyMethod,
    pub accepted: bool,
    /// Whether every check enumerated its whole search space.
    pub exhaustive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_condition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

fn to_vertices(mask: u32) -> Vec<usize> {
    (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

/// Certifies that `h` is a `(k, alpha)`-expander. With the lemma method
/// the target is fixed to `(h/4, 2)` and `k`, `alpha` are ignored.
pub fn certify_expander(
    h: &Graph,
    k: usize,
    alpha: f64,
    method: CertifyMethod,
    scope: CertifyScope,
) -> Result<ExpanderCertificate> {
    let exact = match scope {
        CertifyScope::Exact if h.n() > EXPANDER_EXACT_LIMIT => {
            return Err(Error::Capacity {
                what: "vertices for exhaustive expander check",
                actual: h.n(),
                limit: EXPANDER_EXACT_LIMIT,
            })
        }
        CertifyScope::Exact => true,
        CertifyScope::Sampled { .. } => false,
    };
    let (trials, seed) = match scope {
        CertifyScope::Sampled { trials, seed } => (trials, seed),
        CertifyScope::Exact => (0, 0),
    };
    match method {
        CertifyMethod::Direct => {
            if !(alpha > 0.0) {
                return Err(Error::Parameter(format!(
                    "alpha must be positive, got {alpha}"
                )));
            }
            let failure = if exact {
                direct_exact(h, k, alpha)
            } else {
                direct_sampled(h, k, alpha, trials, seed)
            };
            Ok(ExpanderCertificate {
                k,
                alpha,
                method,
                accepted: failure.is_none(),
                exhaustive: exact,
                failing_condition: failure.as_ref().map(|_| "expansion".to_string()),
                witness: failure,
            })
        }
        CertifyMethod::Lemma { m, d } => {
            let n = h.n();
            if m == 0 || n < 4 * m {
                return Err(Error::Parameter(format!(
                    "need 1 <= m and h >= 4m, got h = {n}, m = {m}"
                )));
            }
            let mut cert = ExpanderCertificate {
                k: n / 4,
                alpha: 2.0,
                method,
                accepted: false,
                exhaustive: exact,
                failing_condition: None,
                witness: None,
            };
            let checks: [(&str, Box<dyn Fn() -> Option<Vec<usize>>>); 4] = [
                ("min-degree", Box::new(|| min_degree(h))),
                ("low-degree-separation", Box::new(|| low_degree(h, d))),
                (
                    "sparse-sets",
                    Box::new(|| sparse_sets(h, m, d, exact, trials, seed)),
                ),
                (
                    "set-pairs",
                    Box::new(|| set_pairs(h, m, exact, trials, seed)),
                ),
            ];
            for (name, check) in checks {
                if let Some(w) = check() {
                    cert.failing_condition = Some(name.to_string());
                    cert.witness = Some(w);
                    return Ok(cert);
                }
            }
            cert.accepted = true;
            Ok(cert)
        }
    }
}

fn direct_exact(h: &Graph, k: usize, alpha: f64) -> Option<Vec<usize>> {
    let n = h.n();
    let adj = adjacency_masks(h);
    let mut nb = vec![0u32; 1 << n];
    for mask in 1usize..1 << n {
        let low = mask.trailing_zeros() as usize;
        nb[mask] = nb[mask & (mask - 1)] | adj[low];
        let size = mask.count_ones() as usize;
        if size > k {
            continue;
        }
        let outer = (nb[mask] & !(mask as u32)).count_ones() as f64;
        if outer < alpha * size as f64 {
            return Some(to_vertices(mask as u32));
        }
    }
    None
}

fn outer_size(h: &Graph, inside: &[bool], members: &[usize]) -> usize {
    let mut seen = vec![false; h.n() + 1];
    let mut count = 0;
    for &v in members {
        for &x in h.neighbors(v) {
            if !inside[x] && !std::mem::replace(&mut seen[x], true) {
                count += 1;
            }
        }
    }
    count
}

/// Greedy adversary: grow a set from a start vertex, always adding the
/// vertex that enlarges the outer neighbourhood least.
fn direct_sampled(h: &Graph, k: usize, alpha: f64, trials: usize, seed: u64) -> Option<Vec<usize>> {
    let n = h.n();
    let mut starts: Vec<usize> = h.vertices().collect();
    starts.sort_by_key(|&v| (h.degree(v), v));
    let mut rest = starts.split_off(trials.min(n).min(starts.len()));
    rest.shuffle(&mut rng_from_seed(seed));
    starts.extend(rest.into_iter().take(trials));
    for &s in &starts {
        let mut inside = vec![false; n + 1];
        let mut members = vec![s];
        inside[s] = true;
        loop {
            let outer = outer_size(h, &inside, &members);
            if (outer as f64) < alpha * members.len() as f64 {
                members.sort_unstable();
                return Some(members);
            }
            if members.len() >= k {
                break;
            }
            // Candidates: outer neighbours, whose addition shrinks N(U).
            let mut best: Option<(usize, usize)> = None;
            let frontier: Vec<usize> = members
                .iter()
                .flat_map(|&v| h.neighbors(v).iter().copied())
                .collect();
            for x in frontier {
                if inside[x] {
                    continue;
                }
                inside[x] = true;
                members.push(x);
                let o = outer_size(h, &inside, &members);
                members.pop();
                inside[x] = false;
                if best.is_none_or(|b| (o, x) < b) {
                    best = Some((o, x));
                }
            }
            let Some((_, x)) = best else { break };
            inside[x] = true;
            members.push(x);
        }
    }
    None
}

fn min_degree(h: &Graph) -> Option<Vec<usize>> {
    h.vertices().find(|&v| h.degree(v) < 2).map(|v| vec![v])
}

/// Low-degree vertices (degree below `d`) must avoid 3- and 4-cycles and
/// lie at distance at least 5 from each other.
fn low_degree(h: &Graph, d: usize) -> Option<Vec<usize>> {
    let n = h.n();
    let low: Vec<bool> = (0..=n).map(|v| v > 0 && h.degree(v) < d).collect();
    let mut via = vec![0usize; n + 1];
    for v in h.vertices().filter(|&v| low[v]) {
        via.iter_mut().for_each(|x| *x = 0);
        for &a in h.neighbors(v) {
            for &x in h.neighbors(a) {
                if x == v {
                    continue;
                }
                if h.has_edge(v, x) {
                    return Some(vec![v, a, x]);
                }
                if via[x] != 0 && via[x] != a {
                    return Some(vec![v, via[x], x, a]);
                }
                via[x] = a;
            }
        }
        let dist = bounded_bfs(h, v, 4);
        if let Some(u) = h.vertices().find(|&u| u != v && low[u] && dist[u] <= 4) {
            return Some(vec![v, u]);
        }
    }
    None
}

fn bounded_bfs(h: &Graph, s: usize, depth: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; h.n() + 1];
    dist[s] = 0;
    let mut frontier = vec![s];
    for r in 1..=depth {
        let mut next = Vec::new();
        for &v in &frontier {
            for &x in h.neighbors(v) {
                if dist[x] == usize::MAX {
                    dist[x] = r;
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    dist
}

/// Every set of at most `5m` vertices spans at most `d|F|/10` edges.
fn sparse_sets(
    h: &Graph,
    m: usize,
    d: usize,
    exact: bool,
    trials: usize,
    seed: u64,
) -> Option<Vec<usize>> {
    let n = h.n();
    let cap = (5 * m).min(n);
    let dense = |edges: usize, size: usize| 10 * edges > d * size;
    if exact {
        let adj = adjacency_masks(h);
        let mut e = vec![0u16; 1 << n];
        for mask in 1usize..1 << n {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            e[mask] = e[rest] + (adj[low] & rest as u32).count_ones() as u16;
            let size = mask.count_ones() as usize;
            if size <= cap && dense(e[mask] as usize, size) {
                return Some(to_vertices(mask as u32));
            }
        }
        return None;
    }
    // Greedy densest growth from the highest-degree vertices and a sample
    // of random ones.
    let mut starts: Vec<usize> = h.vertices().collect();
    starts.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
    let mut rest = starts.split_off(trials.min(starts.len()));
    rest.shuffle(&mut rng_from_seed(seed ^ 0x5157));
    starts.extend(rest.into_iter().take(trials));
    for &s in &starts {
        let mut inside = vec![false; n + 1];
        let mut into = vec![0usize; n + 1];
        let mut members = vec![s];
        let mut edges = 0usize;
        inside[s] = true;
        for &x in h.neighbors(s) {
            into[x] += 1;
        }
        while members.len() < cap {
            let mut best: Option<(usize, usize)> = None;
            for &v in &members {
                for &x in h.neighbors(v) {
                    if !inside[x]
                        && best.is_none_or(|(c, y)| {
                            (into[x], std::cmp::Reverse(x)) > (c, std::cmp::Reverse(y))
                        })
                    {
                        best = Some((into[x], x));
                    }
                }
            }
            let Some((c, x)) = best else { break };
            inside[x] = true;
            members.push(x);
            edges += c;
            for &y in h.neighbors(x) {
                into[y] += 1;
            }
            if dense(edges, members.len()) {
                members.sort_unstable();
                return Some(members);
            }
        }
    }
    None
}

/// Every two disjoint `m`-sets are joined by an edge, i.e. no `m`-set `F`
/// leaves `m` vertices outside its closed neighbourhood. The witness is `F`
/// followed by `m` unreachable vertices.
fn set_pairs(h: &Graph, m: usize, exact: bool, trials: usize, seed: u64) -> Option<Vec<usize>> {
    let n = h.n();
    let witness = |closed: &[bool], f: &[usize]| {
        let mut out = f.to_vec();
        out.sort_unstable();
        out.extend(h.vertices().filter(|&v| !closed[v]).take(m));
        out
    };
    let closed_of = |f: &[usize]| {
        let mut closed = vec![false; n + 1];
        for &v in f {
            closed[v] = true;
            for &x in h.neighbors(v) {
                closed[x] = true;
            }
        }
        closed
    };
    let outside = |closed: &[bool]| h.vertices().filter(|&v| !closed[v]).count();

    if exact {
        let adj = adjacency_masks(h);
        let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut f: u32 = (1u32 << m) - 1;
        while f <= full {
            let mut closed = f;
            let mut bits = f;
            while bits != 0 {
                closed |= adj[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            if (full & !closed).count_ones() as usize >= m {
                let fv = to_vertices(f);
                return Some(witness(&closed_of(&fv), &fv));
            }
            // Next subset of the same size.
            let c = f & f.wrapping_neg();
            let r = f + c;
            if r == 0 || r > full {
                break;
            }
            f = (((r ^ f) >> 2) / c) | r;
        }
        return None;
    }
    // Greedy: grow F by the vertex adding the fewest new covered vertices.
    let mut starts: Vec<usize> = h.vertices().collect();
    starts.sort_by_key(|&v| (h.degree(v), v));
    let mut rest = starts.split_off(trials.min(starts.len()));
    rest.shuffle(&mut rng_from_seed(seed ^ 0xa11ce));
    starts.extend(rest.into_iter().take(trials));
    for &s in &starts {
        let mut f = vec![s];
        let mut closed = closed_of(&f);
        while f.len() < m {
            let best = h
                .vertices()
                .filter(|v| !f.contains(v))
                .min_by_key(|&v| {
                    let gain = usize::from(!closed[v])
                        + h.neighbors(v).iter().filter(|&&x| !closed[x]).count();
                    (gain, v)
                })
                .unwrap();
            f.push(best);
            closed[best] = true;
            for &x in h.neighbors(best) {
                closed[x] = true;
            }
        }
        if outside(&closed) >= m {
            return Some(witness(&closed, &f));
        }
    }
    None
}

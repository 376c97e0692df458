use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::booster::rotation_pairs;
use super::expander::{certify_expander, CertifyMethod, CertifyScope, EXPANDER_EXACT_LIMIT};
use super::rotation::{close_to_cycle, extend_maximal, rotation_closure};
use super::{is_hamilton_cycle, is_path};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::{derive_seed, rng_from_seed};

/// Second-level closures explored per booster round.
const SECOND_LEVEL: usize = 32;
/// Extra start vertices tried when looking for a long path.
const RESTARTS: usize = 4;
/// Random trials for sampled certification at scale.
const CERTIFY_TRIALS: usize = 64;
/// Sparsification constant used to size the lemma's `m = βh/250`.
const BETA: f64 = 1e-4;

fn check_set(g: &Graph, w: &[usize]) -> Result<()> {
    let mut seen = vec![false; g.n() + 1];
    for &v in w {
        g.check_vertex(v)?;
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::Input(format!("vertex {v} listed twice")));
        }
    }
    Ok(())
}

/// Random subgraph of `g[w]`: every vertex keeps all its internal edges if
/// it has at most `d0` of them, otherwise a uniform `d0`-subset. The result
/// is the union over all vertices, on the vertex set of `g`.
pub fn sparsify(g: &Graph, w: &[usize], d0: usize, seed: u64) -> Result<Graph> {
    check_set(g, w)?;
    let mut inside = vec![false; g.n() + 1];
    for &v in w {
        inside[v] = true;
    }
    let mut rng = rng_from_seed(seed);
    let mut h = Graph::empty(g.n());
    for &v in w {
        let internal: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&x| inside[x])
            .collect();
        if internal.len() <= d0 {
            for &x in &internal {
                h.add_edge(v, x)?;
            }
        } else {
            for i in sample(&mut rng, internal.len(), d0) {
                h.add_edge(v, internal[i])?;
            }
        }
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonizeConfig {
    /// Per-vertex edge budget for sparsification; `None` picks
    /// `max(3, ⌈2 ln |W|⌉)`.
    pub d0: Option<usize>,
    pub seed: u64,
    /// Cap on booster rounds; never above `|W|`.
    pub max_rounds: Option<usize>,
}

impl HamiltonizeConfig {
    pub fn new(seed: u64) -> Self {
        HamiltonizeConfig {
            d0: None,
            seed,
            max_rounds: None,
        }
    }

    pub fn d0_for(&self, h: usize) -> usize {
        self.d0
            .unwrap_or_else(|| ((2.0 * (h.max(1) as f64).ln()).ceil() as usize).max(3))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonCycle {
    /// Cycle order, without repeating the first vertex.
    pub cycle: Vec<usize>,
    pub rounds: usize,
    /// Edges of `G[W]` added to the sparse graph, in order.
    pub boosters: Vec<(usize, usize)>,
    /// Edge count of the starting graph `H_0`.
    pub start_edges: usize,
    /// Whether the sparsified graph passed expander certification.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonizeFailure {
    pub stage: String,
    /// Edge count of the longest path found.
    pub longest_path_len: usize,
    pub rounds: usize,
    #[serde(skip)]
    pub path: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonizeOutcome {
    Cycle(HamiltonCycle),
    Failed(HamiltonizeFailure),
}

impl HamiltonizeOutcome {
    pub fn cycle(&self) -> Option<&HamiltonCycle> {
        match self {
            HamiltonizeOutcome::Cycle(c) => Some(c),
            HamiltonizeOutcome::Failed(_) => None,
        }
    }
}

/// Longest path found by extending `seed_path` and a few fresh starts;
/// a spanning path that closes in `h` comes back as a cycle.
fn long_path(h: &Graph, seed_path: Vec<usize>, starts: &[usize]) -> (Vec<usize>, bool) {
    let n = h.n();
    let mut best = extend_maximal(h, seed_path);
    let mut tried = 0;
    loop {
        if best.len() == n {
            if let Some(c) = close_to_cycle(h, &best) {
                return (c, true);
            }
        }
        let Some(&s) = starts.get(tried) else {
            return (best, false);
        };
        tried += 1;
        let p = extend_maximal(h, vec![s]);
        if p.len() > best.len() {
            best = p;
        }
    }
}

/// Rotates the cycle so that a vertex with a neighbour off the cycle comes
/// last, then appends that neighbour.
fn open_cycle(h: &Graph, cycle: &[usize]) -> Option<Vec<usize>> {
    let mut on = vec![false; h.n() + 1];
    for &v in cycle {
        on[v] = true;
    }
    let (i, x) = cycle
        .iter()
        .enumerate()
        .find_map(|(i, &v)| h.neighbors(v).iter().find(|&&x| !on[x]).map(|&x| (i, x)))?;
    let mut p: Vec<usize> = cycle[i + 1..].iter().chain(&cycle[..=i]).copied().collect();
    p.push(x);
    Some(p)
}

/// Turns `g[w]` into a Hamilton cycle by sparsifying, certifying and then
/// adding boosters from `g[w]` one at a time. Every returned cycle has been
/// checked edge by edge against `g`.
pub fn hamiltonize(
    g: &Graph,
    w: &[usize],
    config: &HamiltonizeConfig,
) -> Result<HamiltonizeOutcome> {
    check_set(g, w)?;
    if w.len() < 3 {
        return Err(Error::Input(format!("need |W| >= 3, got {}", w.len())));
    }
    let mut order = w.to_vec();
    order.sort_unstable();
    let size = order.len();
    let (gw, map) = g.induced(&order)?;
    let d0 = config.d0_for(size);
    let all: Vec<usize> = gw.vertices().collect();
    let sparse = sparsify(&gw, &all, d0, derive_seed(config.seed, "sparsify", 0))?;

    let certified = if size <= EXPANDER_EXACT_LIMIT {
        certify_expander(
            &sparse,
            size / 4,
            2.0,
            CertifyMethod::Direct,
            CertifyScope::Exact,
        )?
        .accepted
    } else {
        let m = ((BETA * size as f64 / 250.0).floor() as usize).max(1);
        certify_expander(
            &sparse,
            size / 4,
            2.0,
            CertifyMethod::Lemma { m, d: d0 },
            CertifyScope::Sampled {
                trials: CERTIFY_TRIALS,
                seed: derive_seed(config.seed, "certify", 0),
            },
        )?
        .accepted
    };
    let mut h = if certified { sparse } else { gw.clone() };
    let start_edges = h.m();

    let mut starts: Vec<usize> = all.clone();
    starts.shuffle(&mut rng_from_seed(derive_seed(config.seed, "restarts", 0)));
    starts.truncate(RESTARTS);

    let limit = config.max_rounds.unwrap_or(size).min(size);
    let mut boosters = Vec::new();
    let mut current = vec![starts[0]];
    let to_global = |p: &[usize]| p.iter().map(|&v| map[v - 1]).collect::<Vec<_>>();
    loop {
        let (p, closed) = long_path(&h, current, &starts[1..]);
        if closed {
            let cycle = to_global(&p);
            if !is_hamilton_cycle(g, w, &cycle) {
                return Err(Error::Input(
                    "internal: produced cycle failed verification".into(),
                ));
            }
            return Ok(HamiltonizeOutcome::Cycle(HamiltonCycle {
                cycle,
                rounds: boosters.len(),
                boosters,
                start_edges,
                certified,
            }));
        }
        let failure = |stage: &str, p: &[usize], rounds: usize| {
            Ok(HamiltonizeOutcome::Failed(HamiltonizeFailure {
                stage: stage.to_string(),
                longest_path_len: p.len() - 1,
                rounds,
                path: to_global(p),
            }))
        };
        if boosters.len() >= limit {
            return failure("round-limit", &p, boosters.len());
        }
        let pairs = rotation_pairs(&gw, &h, &p, SECOND_LEVEL);
        let (pair, next) = if let Some((pair, q)) = pairs.extend {
            (pair, q)
        } else if let Some((pair, q)) = pairs.close {
            // q's ends are joined by the new edge.
            let mut h2 = h.clone();
            h2.add_edge(pair.0, pair.1)?;
            let next = if q.len() == size {
                q
            } else {
                open_cycle(&h2, &q).unwrap_or(q)
            };
            (pair, next)
        } else if let Some(pair) = connecting_edge(&gw, &h, &p) {
            (pair, p.clone())
        } else {
            return failure("booster-exhausted", &p, boosters.len());
        };
        h.add_edge(pair.0, pair.1)?;
        boosters.push((
            map[pair.0 - 1].min(map[pair.1 - 1]),
            map[pair.0 - 1].max(map[pair.1 - 1]),
        ));
        debug_assert!(is_path(&h, &next));
        current = next;
    }
}

/// Smallest edge of `g` missing from `h` that leaves the vertex set of `p`.
fn connecting_edge(g: &Graph, h: &Graph, p: &[usize]) -> Option<(usize, usize)> {
    let mut on = vec![false; g.n() + 1];
    for &v in p {
        on[v] = true;
    }
    g.edges()
        .filter(|&(u, v)| on[u] != on[v] && !h.has_edge(u, v))
        .min()
}

/// Endpoints of Hamilton paths of `g[w]` starting at a fixed vertex, each
/// with a witness path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndpointSet {
    pub start: usize,
    pub cycle: Vec<usize>,
    pub paths: BTreeMap<usize, Vec<usize>>,
}

impl EndpointSet {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn endpoints(&self) -> Vec<usize> {
        self.paths.keys().copied().collect()
    }

    pub fn contains(&self, y: usize) -> bool {
        self.paths.contains_key(&y)
    }

    pub fn path_to(&self, y: usize) -> Option<&[usize]> {
        self.paths.get(&y).map(Vec::as_slice)
    }
}

/// Hamiltonizes `g[w]`, opens the cycle at `start` and collects every
/// endpoint reachable by rotations with `start` fixed.
pub fn hamilton_path_endpoints(
    g: &Graph,
    w: &[usize],
    start: usize,
    config: &HamiltonizeConfig,
) -> Result<std::result::Result<EndpointSet, HamiltonizeFailure>> {
    check_set(g, w)?;
    if !w.contains(&start) {
        return Err(Error::Input(format!("start vertex {start} is not in W")));
    }
    let cycle = match hamiltonize(g, w, config)? {
        HamiltonizeOutcome::Cycle(c) => c.cycle,
        HamiltonizeOutcome::Failed(f) => return Ok(Err(f)),
    };
    let i = cycle.iter().position(|&v| v == start).unwrap();
    let opened: Vec<usize> = cycle[i..].iter().chain(&cycle[..i]).copied().collect();

    let mut order = w.to_vec();
    order.sort_unstable();
    let (gw, map) = g.induced(&order)?;
    let local = |v: usize| order.binary_search(&v).unwrap() + 1;
    let p: Vec<usize> = opened.iter().map(|&v| local(v)).collect();
    let closure = rotation_closure(&gw, &p)?;
    let mut paths = BTreeMap::new();
    for y in closure.endpoints() {
        let q: Vec<usize> = closure
            .path_to(y)
            .unwrap()
            .iter()
            .map(|&v| map[v - 1])
            .collect();
        debug_assert!(is_path(g, &q) && q.len() == w.len());
        paths.insert(map[y - 1], q);
    }
    Ok(Ok(EndpointSet {
        start,
        cycle,
        paths,
    }))
}

/// A Hamilton path of `g[w]` from `start` to any vertex of `targets`, if
/// the endpoint set reaches one.
pub fn hamilton_path_from(
    g: &Graph,
    w: &[usize],
    start: usize,
    targets: &[usize],
    config: &HamiltonizeConfig,
) -> Result<Option<Vec<usize>>> {
    Ok(match hamilton_path_endpoints(g, w, start, config)? {
        Ok(r) => targets
            .iter()
            .find_map(|&y| r.path_to(y).map(<[usize]>::to_vec)),
        Err(_) => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample_gnp;

    #[test]
    fn sparsify_extremes() {
        let g = Graph::complete(10);
        let all: Vec<usize> = g.vertices().collect();
        assert_eq!(sparsify(&g, &all, 9, 1).unwrap(), g);
        assert_eq!(sparsify(&g, &all, 0, 1).unwrap().m(), 0);
        for seed in 0..100 {
            let h = sparsify(&g, &all, 3, seed).unwrap();
            assert!(h.min_degree() >= 3 && h.m() <= 30);
            assert!(h.edges().all(|(u, v)| g.has_edge(u, v)));
        }
    }

    #[test]
    fn sparsify_stays_inside_w() {
        let g = Graph::complete(8);
        let h = sparsify(&g, &[2, 4, 6], 5, 3).unwrap();
        assert_eq!(h.m(), 3);
        assert_eq!(h.degree(1), 0);
    }

    #[test]
    fn complete_graph_cycle() {
        let g = Graph::complete(5);
        let all: Vec<usize> = g.vertices().collect();
        let out = hamiltonize(&g, &all, &HamiltonizeConfig::new(7)).unwrap();
        let c = out.cycle().unwrap();
        assert_eq!(c.cycle.len(), 5);
        assert!(is_hamilton_cycle(&g, &all, &c.cycle));
    }

    #[test]
    fn path_graph_fails_without_boosters() {
        let g = Graph::path(6);
        let all: Vec<usize> = g.vertices().collect();
        match hamiltonize(&g, &all, &HamiltonizeConfig::new(1)).unwrap() {
            HamiltonizeOutcome::Failed(f) => {
                assert_eq!(f.stage, "booster-exhausted");
                assert_eq!(f.longest_path_len, 5);
                assert_eq!(f.rounds, 0);
                let json = serde_json::to_value(&f).unwrap();
                assert_eq!(
                    json,
                    serde_json::json!({"stage": "booster-exhausted", "longest_path_len": 5, "rounds": 0})
                );
            }
            HamiltonizeOutcome::Cycle(_) => {
                panic!("path graph has no cycle")
            }
        }
    }

    #[test]
    fn endpoints_of_small_graphs() {
        let k4 = Graph::complete(4);
        let r = hamilton_path_endpoints(&k4, &[1, 2, 3, 4], 1, &HamiltonizeConfig::new(0))
            .unwrap()
            .unwrap();
        assert_eq!(r.endpoints(), vec![2, 3, 4]);

        let c4 = Graph::cycle(4).unwrap();
        for w in 1..=4 {
            let r = hamilton_path_endpoints(&c4, &[1, 2, 3, 4], w, &HamiltonizeConfig::new(0))
                .unwrap()
                .unwrap();
            let mut expect: Vec<usize> = c4.neighbors(w).to_vec();
            expect.sort_unstable();
            assert_eq!(r.endpoints(), expect);
            for y in r.endpoints() {
                let p = r.path_to(y).unwrap();
                assert!(is_path(&c4, p) && p[0] == w && p[3] == y);
            }
        }
    }

    #[test]
    fn subset_w_uses_global_labels() {
        let g = sample_gnp(30, 0.5, 4).unwrap();
        let w: Vec<usize> = (5..=25).collect();
        let out = hamiltonize(&g, &w, &HamiltonizeConfig::new(2)).unwrap();
        let c = out.cycle().expect("dense graph is Hamiltonian");
        assert!(is_hamilton_cycle(&g, &w, &c.cycle));
    }

    #[test]
    fn rounds_add_one_edge_each() {
        for seed in 0..20 {
            let g = sample_gnp(40, 0.25, seed).unwrap();
            let all: Vec<usize> = g.vertices().collect();
            let cfg = HamiltonizeConfig {
                d0: Some(3),
                seed,
                max_rounds: None,
            };
            if let HamiltonizeOutcome::Cycle(c) = hamiltonize(&g, &all, &cfg).unwrap() {
                assert!(c.rounds <= 40);
                let mut b = c.boosters.clone();
                b.sort_unstable();
                b.dedup();
                assert_eq!(b.len(), c.rounds);
                assert!(c.boosters.iter().all(|&(u, v)| g.has_edge(u, v)));
            }
        }
    }
}

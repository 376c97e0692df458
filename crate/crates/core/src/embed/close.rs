use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{Comb, Embedding, Partition};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::KeyChainParams;
use crate::posa::{
    hamilton_path_endpoints, hamiltonize, rotation_walk, HamiltonizeConfig, HamiltonizeOutcome,
};
use crate::seed::{derive_seed, rng_from_seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CloseMethod {
    /// Hamilton paths in the two halves joined by a bridge edge.
    Split,
    /// One Hamilton path through everything outside the comb.
    Whole,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CloseFailure {
    /// `comb-too-large`, `no-z`, `hamilton-path`, `no-bridge` or `whole`.
    pub reason: String,
    pub detail: String,
}

/// Closes the comb into a spanning KeyChain: a Hamilton path through
/// `V \ X` from a neighbour of `w_1` to a neighbour of `w_t`.
///
/// The split construction is tried first. When either half is too sparse
/// for it, the path is found through the whole remainder instead, with
/// three gadget vertices pinning its ends next to `w_1` and `w_t`.
pub fn close_chain(
    g: &Graph,
    part: &Partition,
    comb: &Comb,
    params: &KeyChainParams,
    seed: u64,
) -> Result<std::result::Result<(Embedding, CloseMethod), CloseFailure>> {
    let n = g.n();
    let t = comb.keys.len();
    if t == 0 || params.n != n || params.t != t {
        return Err(Error::Parameter(
            "comb does not match the parameters".into(),
        ));
    }
    let fail = |reason: &str, detail: String| {
        Ok(Err(CloseFailure {
            reason: reason.into(),
            detail,
        }))
    };
    let x = comb.vertex_set();
    if 2 * x.len() > n {
        return fail(
            "comb-too-large",
            format!("|X| = {} exceeds n/2 = {}", x.len(), n / 2),
        );
    }
    let mut in_x = vec![false; n + 1];
    for &v in &x {
        in_x[v] = true;
    }
    let (w1, wt) = (comb.attachments[0], comb.attachments[t - 1]);

    let split = close_split(g, part, &in_x, (w1, wt), seed)?;
    let (chain, method) = match split {
        Ok(chain) => (chain, CloseMethod::Split),
        Err(split_failure) => match close_whole(g, &in_x, (w1, wt), seed)? {
            Ok(chain) => (chain, CloseMethod::Whole),
            Err(why) => {
                return fail(
                    &split_failure.reason,
                    format!("{}; whole remainder: {why}", split_failure.detail),
                )
            }
        },
    };
    Ok(Ok((assemble(comb, params, &chain), method)))
}

fn close_split(
    g: &Graph,
    part: &Partition,
    in_x: &[bool],
    (w1, wt): (usize, usize),
    seed: u64,
) -> Result<std::result::Result<Vec<usize>, CloseFailure>> {
    let fail = |reason: &str, detail: String| {
        Ok(Err(CloseFailure {
            reason: reason.into(),
            detail,
        }))
    };
    let mut rest: Vec<usize> = part.vprime.iter().copied().filter(|&v| !in_x[v]).collect();
    rest.shuffle(&mut rng_from_seed(derive_seed(seed, "close-split", 0)));
    let (a, b) = rest.split_at(rest.len().div_ceil(2));
    let mut halves = [a.to_vec(), b.to_vec()];
    halves[0].extend(part.u1.iter().filter(|&&v| !in_x[v]));
    halves[1].extend(part.u2.iter().filter(|&&v| !in_x[v]));
    for h in &mut halves {
        h.sort_unstable();
    }
    for (i, h) in halves.iter().enumerate() {
        let (gh, _) = g.induced(h)?;
        if h.len() < 3 || gh.min_degree() < 2 {
            return fail(
                "hamilton-path",
                format!(
                    "W_{} has {} vertices and minimum degree {}",
                    i + 1,
                    h.len(),
                    gh.min_degree()
                ),
            );
        }
    }
    let mut ends = Vec::with_capacity(2);
    for (i, (h, w)) in halves.iter().zip([w1, wt]).enumerate() {
        let Some(&z) = g.neighbors(w).iter().find(|v| h.binary_search(v).is_ok()) else {
            return fail(
                "no-z",
                format!("attachment {w} has no neighbour in W_{}", i + 1),
            );
        };
        let config = HamiltonizeConfig::new(derive_seed(seed, "close-half", i as u64));
        match hamilton_path_endpoints(g, h, z, &config)? {
            Ok(r) => ends.push(r),
            Err(f) => {
                return fail(
                    "hamilton-path",
                    format!("W_{}: {} after {} rounds", i + 1, f.stage, f.rounds),
                )
            }
        }
    }
    let bridge = ends[0].endpoints().into_iter().find_map(|y1| {
        g.neighbors(y1)
            .iter()
            .find(|&&y2| ends[1].contains(y2))
            .map(|&y2| (y1, y2))
    });
    let Some((y1, y2)) = bridge else {
        return fail(
            "no-bridge",
            format!(
                "no edge between |R_1| = {} and |R_2| = {}",
                ends[0].len(),
                ends[1].len()
            ),
        );
    };
    let mut chain = ends[0].path_to(y1).unwrap().to_vec();
    chain.extend(ends[1].path_to(y2).unwrap().iter().rev());
    Ok(Ok(chain))
}

/// Hamilton path of `G[V \ X]` from `N(w_1)` to `N(w_t)`: hamiltonize the
/// remainder plus a path `c_1 - m - c_2` with `c_1 ~ N(w_1)`, `c_2 ~ N(w_t)`,
/// then cut the gadget out of the cycle.
fn close_whole(
    g: &Graph,
    in_x: &[bool],
    (w1, wt): (usize, usize),
    seed: u64,
) -> Result<std::result::Result<Vec<usize>, String>> {
    let rest: Vec<usize> = g.vertices().filter(|&v| !in_x[v]).collect();
    let r = rest.len();
    if r == 0 {
        return Ok(Err("empty".into()));
    }
    let (gr, map) = g.induced(&rest)?;
    let local = |v: usize| rest.binary_search(&v).ok().map(|i| i + 1);
    let (c1, m, c2) = (r + 1, r + 2, r + 3);
    let mut aux = Graph::empty(r + 3);
    for (u, v) in gr.edges() {
        aux.add_edge(u, v)?;
    }
    for (c, w) in [(c1, w1), (c2, wt)] {
        for &z in g.neighbors(w) {
            if let Some(l) = local(z) {
                aux.add_edge(c, l)?;
            }
        }
    }
    aux.add_edge(c1, m)?;
    aux.add_edge(m, c2)?;
    if let Some(v) = aux.vertices().find(|&v| aux.degree(v) < 2) {
        let what = if v > r {
            "a gadget vertex".to_string()
        } else {
            format!("vertex {}", map[v - 1])
        };
        return Ok(Err(format!("{what} has fewer than two usable neighbours")));
    }
    let all: Vec<usize> = aux.vertices().collect();
    let config = HamiltonizeConfig::new(derive_seed(seed, "close-whole", 0));
    let cycle = match hamiltonize(&aux, &all, &config)? {
        HamiltonizeOutcome::Cycle(c) => c.cycle,
        HamiltonizeOutcome::Failed(f) => {
            let walked = rotation_walk(&aux, &all, WALK_STEPS_PER_VERTEX * all.len(), config.seed);
            match walked.or_else(|| cycle_search(&aux, [c1, m, c2], SEARCH_BUDGET)) {
                Some(c) => c,
                None => {
                    return Ok(Err(format!(
                        "{} after {} rounds, longest path {} of {}, rotation walk and backtracking search failed",
                        f.stage,
                        f.rounds,
                        f.longest_path_len,
                        r + 2
                    )))
                }
            }
        }
    };
    // `m` has degree 2, so the cycle reads c1 m c2 in one direction.
    let i = cycle.iter().position(|&v| v == m).unwrap();
    let len = cycle.len();
    let mut walk: Vec<usize> = (1..len).map(|k| cycle[(i + k) % len]).collect();
    if walk[0] == c1 {
        walk.reverse();
    }
    debug_assert_eq!((walk[0], walk[len - 2]), (c2, c1));
    let mut chain: Vec<usize> = walk[1..len - 2].iter().map(|&v| map[v - 1]).collect();
    chain.reverse();
    Ok(Ok(chain))
}

/// Step budget of the rotation walk, per vertex.
const WALK_STEPS_PER_VERTEX: usize = 2_000;
/// Node budget of the backtracking cycle search.
const SEARCH_BUDGET: usize = 2_000_000;

/// Backtracking search for a Hamilton cycle of `g` through the path
/// `start`. Extends from the last vertex, fewest onward options first, and
/// prunes as soon as an unvisited vertex is left with fewer than two
/// possible cycle neighbours.
fn cycle_search(g: &Graph, start: [usize; 3], budget: usize) -> Option<Vec<usize>> {
    let n = g.n();
    let head = start[0];
    let mut visited = vec![false; n + 1];
    // Unvisited neighbours of each vertex.
    let mut free: Vec<usize> = (0..=n)
        .map(|v| if v == 0 { 0 } else { g.degree(v) })
        .collect();
    let visit = |v: usize, visited: &mut Vec<bool>, free: &mut Vec<usize>| {
        visited[v] = true;
        for &y in g.neighbors(v) {
            free[y] -= 1;
        }
    };
    let unvisit = |v: usize, visited: &mut Vec<bool>, free: &mut Vec<usize>| {
        visited[v] = false;
        for &y in g.neighbors(v) {
            free[y] += 1;
        }
    };
    for &v in &start {
        visit(v, &mut visited, &mut free);
    }
    let mut path = start.to_vec();
    let options = |end: usize, visited: &[bool], free: &[usize]| {
        let mut nb: Vec<usize> = g
            .neighbors(end)
            .iter()
            .copied()
            .filter(|&x| !visited[x])
            .collect();
        nb.sort_by_key(|&x| (free[x], x));
        nb
    };
    let mut stack = vec![(options(start[2], &visited, &free), 0usize)];
    let mut budget = budget;
    while let Some((nb, idx)) = stack.last_mut() {
        if path.len() == n
            && g.has_edge(*path.last().unwrap(), head) {
                return Some(path);
            }
        let Some(&x) = nb.get(*idx).filter(|_| path.len() < n) else {
            stack.pop();
            if stack.is_empty() {
                break;
            }
            let v = path.pop().unwrap();
            unvisit(v, &mut visited, &mut free);
            continue;
        };
        *idx += 1;
        if budget == 0 {
            return None;
        }
        budget -= 1;
        let end = *path.last().unwrap();
        visit(x, &mut visited, &mut free);
        // `end` is now interior: its unvisited neighbours lose it.
        let stuck = g.neighbors(end).iter().any(|&y| {
            !visited[y]
                && free[y] + usize::from(g.has_edge(y, head)) + usize::from(g.has_edge(y, x)) < 2
        });
        if stuck {
            unvisit(x, &mut visited, &mut free);
            continue;
        }
        path.push(x);
        let next = options(x, &visited, &free);
        stack.push((next, 0));
    }
    None
}

/// Cycle order `w_1, P_1, w_2, …, w_t`, then the chain back to `w_1`,
/// placed so that `w_i` lands on cycle position `iℓ`.
fn assemble(comb: &Comb, params: &KeyChainParams, chain: &[usize]) -> Embedding {
    let (n, t, ell) = (params.n, params.t, params.ell);
    let c = n - t;
    let mut seq = vec![comb.attachments[0]];
    for p in &comb.paths {
        seq.extend(&p[1..]);
    }
    seq.extend(chain.iter().rev());
    debug_assert_eq!(seq.len(), c);
    let mut phi = vec![0; n];
    for pos in 1..=c {
        phi[pos - 1] = seq[(pos + c - ell % c) % c];
    }
    for (i, &k) in comb.keys.iter().enumerate() {
        phi[c + i] = k;
    }
    Embedding {
        params: params.clone(),
        phi,
    }
}

use serde::{Deserialize, Serialize};

use super::exact::{self, PATH_EXACT_LIMIT};
use super::rotation::{closure_until, extend_maximal, RotationClosure};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoosterMode {
    Exact,
    Rotation,
}

/// How many endpoints get a second-level closure of their own.
const SECOND_LEVEL: usize = 32;

fn ordered(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Non-edges of `h` that are edges of `g` and are boosters of `h`: adding
/// one makes `h` Hamiltonian or lengthens its longest path. A Hamiltonian
/// `h` has no boosters. Pairs are `(u, v)` with `u < v`, sorted.
pub fn find_boosters(g: &Graph, h: &Graph, mode: BoosterMode) -> Result<Vec<(usize, usize)>> {
    if g.n() != h.n() {
        return Err(Error::Input(format!(
            "graphs have {} and {} vertices",
            g.n(),
            h.n()
        )));
    }
    if let Some((u, v)) = h.edges().find(|&(u, v)| !g.has_edge(u, v)) {
        return Err(Error::Input(format!(
            "edge {{{u},{v}}} of H is missing from G"
        )));
    }
    match mode {
        BoosterMode::Exact => exact_boosters(g, h),
        BoosterMode::Rotation => Ok(rotation_boosters(g, h)),
    }
}

fn exact_boosters(g: &Graph, h: &Graph) -> Result<Vec<(usize, usize)>> {
    let n = h.n();
    if n > PATH_EXACT_LIMIT {
        return Err(Error::Capacity {
            what: "vertices for exact booster search",
            actual: n,
            limit: PATH_EXACT_LIMIT,
        });
    }
    if exact::is_hamiltonian(h)? {
        return Ok(Vec::new());
    }
    let candidates: Vec<(usize, usize)> = g.edges().filter(|&(u, v)| !h.has_edge(u, v)).collect();
    if candidates.is_empty() {
        return Ok(candidates);
    }
    let ends = exact::path_ends(h)?;
    let longest = (1..ends.len())
        .filter(|&m| ends[m] != 0)
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0);
    let full = (1usize << n) - 1;

    if longest == n {
        // A Hamilton path exists, so no path can get longer; only a
        // Hamilton cycle through the new edge helps.
        let mut out = Vec::new();
        let mut from: Vec<Option<Vec<u32>>> = vec![None; n + 1];
        for &(u, v) in &candidates {
            let reach = match &from[u] {
                Some(r) => r,
                None => from[u].insert(exact::paths_from(h, u)?),
            };
            if reach[full] >> (v - 1) & 1 == 1 {
                out.push((u, v));
            }
        }
        return Ok(out);
    }

    // best[x][c]: most vertices on a path ending at x inside the set c.
    let size = 1usize << n;
    let mut best = vec![vec![0u8; size]; n];
    for mask in 1..size {
        let mut e = ends[mask];
        while e != 0 {
            let x = e.trailing_zeros() as usize;
            best[x][mask] = mask.count_ones() as u8;
            e &= e - 1;
        }
    }
    for row in best.iter_mut() {
        for bit in 0..n {
            for mask in 0..size {
                if mask >> bit & 1 == 1 {
                    let sub = row[mask ^ 1 << bit];
                    if sub > row[mask] {
                        row[mask] = sub;
                    }
                }
            }
        }
    }

    let mut out = Vec::new();
    for &(u, v) in &candidates {
        let (bu, bv) = (u - 1, v - 1);
        let hit = (1..size).any(|a| {
            a >> bu & 1 == 1
                && a >> bv & 1 == 0
                && ends[a] >> bu & 1 == 1
                && a.count_ones() as usize + best[bv][full ^ a] as usize > longest
        });
        if hit {
            out.push((u, v));
        }
    }
    Ok(out)
}

/// Pairs that rotations expose around a path `p` of `h`, restricted to
/// edges of `g` missing from `h`. Extension pairs join a rotation endpoint
/// to a vertex off the path; closing pairs join the two ends of a
/// same-vertex-set path.
pub(crate) struct RotationPairs {
    pub extend: Option<((usize, usize), Vec<usize>)>,
    pub close: Option<((usize, usize), Vec<usize>)>,
    pub all_extend: Vec<(usize, usize)>,
    pub all_close: Vec<(usize, usize)>,
}

fn keep_min(
    slot: &mut Option<((usize, usize), Vec<usize>)>,
    pair: (usize, usize),
    path: impl FnOnce() -> Vec<usize>,
) {
    if slot.as_ref().is_none_or(|(best, _)| pair < *best) {
        *slot = Some((pair, path()));
    }
}

pub(crate) fn rotation_pairs(
    g: &Graph,
    h: &Graph,
    p: &[usize],
    second_level: usize,
) -> RotationPairs {
    let mut on = vec![false; h.n() + 1];
    for &v in p {
        on[v] = true;
    }
    let fresh = |u: usize, v: usize| g.has_edge(u, v) && !h.has_edge(u, v);
    let mut out = RotationPairs {
        extend: None,
        close: None,
        all_extend: Vec::new(),
        all_close: Vec::new(),
    };

    let mut rev = p.to_vec();
    rev.reverse();
    let sides: [RotationClosure; 2] = [
        closure_until(h, p, |_| false).0,
        closure_until(h, &rev, |_| false).0,
    ];
    for c in &sides {
        for y in c.endpoints() {
            for &x in g.neighbors(y) {
                if !on[x] && fresh(y, x) {
                    let pair = ordered(y, x);
                    out.all_extend.push(pair);
                    keep_min(&mut out.extend, pair, || {
                        let mut q = c.path_to(y).unwrap();
                        q.push(x);
                        q
                    });
                }
            }
        }
    }

    // A cycle on V(p) only helps if it spans, or if h leaves V(p).
    let useful = p.len() == h.n() || p.iter().any(|&v| h.neighbors(v).iter().any(|&x| !on[x]));
    if useful && p.len() >= 3 {
        let c = &sides[0];
        let start = c.start();
        for y in c.endpoints() {
            if fresh(start, y) {
                let pair = ordered(start, y);
                out.all_close.push(pair);
                keep_min(&mut out.close, pair, || c.path_to(y).unwrap());
            }
        }
        for y in c.discovered().take(second_level) {
            let mut q = c.path_to(y).unwrap();
            q.reverse();
            let cy = closure_until(h, &q, |_| false).0;
            for z in cy.endpoints() {
                if fresh(y, z) {
                    let pair = ordered(y, z);
                    out.all_close.push(pair);
                    keep_min(&mut out.close, pair, || cy.path_to(z).unwrap());
                }
            }
        }
    }
    out
}

fn rotation_boosters(g: &Graph, h: &Graph) -> Vec<(usize, usize)> {
    if h.n() == 0 {
        return Vec::new();
    }
    let p = extend_maximal(h, vec![1]);
    if p.len() == h.n() && super::close_to_cycle(h, &p).is_some() {
        return Vec::new();
    }
    let pairs = rotation_pairs(g, h, &p, SECOND_LEVEL);
    let mut out = pairs.all_extend;
    out.extend(pairs.all_close);
    out.sort_unstable();
    out.dedup();
    out
}

//! Exact subset dynamic programs for small graphs (`n ≤ 18`), used as
//! oracles for longest paths, Hamiltonicity and endpoint sets.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const PATH_EXACT_LIMIT: usize = 18;

fn check(g: &Graph) -> Result<()> {
    if g.n() > PATH_EXACT_LIMIT {
        return Err(Error::Capacity {
            what: "vertices for exact path search",
            actual: g.n(),
            limit: PATH_EXACT_LIMIT,
        });
    }
    Ok(())
}

/// Bit `u - 1` of entry `v - 1` is set when `{u, v}` is an edge.
pub fn adjacency_masks(g: &Graph) -> Vec<u32> {
    (1..=g.n())
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << (u - 1)))
        .collect()
}

fn grow(adj: &[u32], table: &mut [u32]) {
    let n = adj.len();
    for mask in 1..table.len() {
        let ends = table[mask];
        if ends == 0 {
            continue;
        }
        for (u, &a) in adj.iter().enumerate().take(n) {
            if mask >> u & 1 == 0 && a & ends != 0 {
                table[mask | 1 << u] |= 1 << u;
            }
        }
    }
}

/// `ends[mask]`: vertices (as bits) at which some path covering exactly
/// `mask` ends.
pub fn path_ends(g: &Graph) -> Result<Vec<u32>> {
    check(g)?;
    let adj = adjacency_masks(g);
    let mut t = vec![0u32; 1 << g.n()];
    for v in 0..g.n() {
        t[1 << v] = 1 << v;
    }
    grow(&adj, &mut t);
    Ok(t)
}

/// `reach[mask]`: ends of paths that start at `s` and cover exactly `mask`.
pub fn paths_from(g: &Graph, s: usize) -> Result<Vec<u32>> {
    check(g)?;
    g.check_vertex(s)?;
    let adj = adjacency_masks(g);
    let mut t = vec![0u32; 1 << g.n()];
    t[1 << (s - 1)] = 1 << (s - 1);
    grow(&adj, &mut t);
    Ok(t)
}

fn rebuild(adj: &[u32], ends: &[u32], mut mask: usize, mut v: usize) -> Vec<usize> {
    let mut out = vec![v + 1];
    mask &= !(1 << v);
    while mask != 0 {
        let cand = ends[mask] & adj[v];
        let u = cand.trailing_zeros() as usize;
        out.push(u + 1);
        mask &= !(1 << u);
        v = u;
    }
    out.reverse();
    out
}

/// A longest path (most vertices); on an empty graph, the empty sequence.
pub fn longest_path(g: &Graph) -> Result<Vec<usize>> {
    let ends = path_ends(g)?;
    let best = (1..ends.len())
        .filter(|&m| ends[m] != 0)
        .max_by_key(|&m| (m.count_ones(), std::cmp::Reverse(m)));
    let Some(mask) = best else {
        return Ok(Vec::new());
    };
    let v = ends[mask].trailing_zeros() as usize;
    Ok(rebuild(&adjacency_masks(g), &ends, mask, v))
}

/// Length (edge count) of a longest path.
pub fn longest_path_len(g: &Graph) -> Result<usize> {
    Ok(longest_path(g)?.len().saturating_sub(1))
}

/// Whether `g` has a Hamilton cycle. Graphs on fewer than 3 vertices
/// have none.
pub fn is_hamiltonian(g: &Graph) -> Result<bool> {
    if g.n() < 3 {
        check(g)?;
        return Ok(false);
    }
    let reach = paths_from(g, 1)?;
    let full = (1usize << g.n()) - 1;
    Ok(reach[full] & adjacency_masks(g)[0] != 0)
}

/// Lemma-style endpoint set of a path: all `y` such that some path from
/// `path[0]` to `y` has exactly the vertex set of `path`.
pub fn exact_endpoint_set(g: &Graph, path: &[usize]) -> Result<Vec<usize>> {
    if !super::is_path(g, path) {
        return Err(Error::Input("not a path of the graph".into()));
    }
    let reach = paths_from(g, path[0])?;
    let mask = path.iter().fold(0usize, |m, &v| m | 1 << (v - 1));
    let ends = reach[mask];
    Ok((0..g.n())
        .filter(|&i| ends >> i & 1 == 1)
        .map(|i| i + 1)
        .collect())
}

/// The booster definition for one pair, decided literally by recomputing
/// the longest path of `h + {u,v}`.
pub fn is_booster(h: &Graph, u: usize, v: usize) -> Result<bool> {
    let before = longest_path_len(h)?;
    let mut h2 = h.clone();
    h2.add_edge(u, v)?;
    Ok(is_hamiltonian(&h2)? || longest_path_len(&h2)? > before)
}

/// Plain backtracking search for a Hamilton cycle through vertex 1,
/// independent of the subset tables above.
pub fn hamilton_cycle_backtrack(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    if n < 3 {
        return None;
    }
    let mut path = vec![1usize];
    let mut used = vec![false; n + 1];
    used[1] = true;

    fn go(g: &Graph, path: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let n = g.n();
        let last = *path.last().unwrap();
        if path.len() == n {
            return g.has_edge(last, path[0]);
        }
        for &x in g.neighbors(last) {
            if !used[x] {
                used[x] = true;
                path.push(x);
                if go(g, path, used) {
                    return true;
                }
                path.pop();
                used[x] = false;
            }
        }
        false
    }

    go(g, &mut path, &mut used).then_some(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posa::is_path;

    #[test]
    fn longest_path_of_star() {
        let g = Graph::from_edges(5, (2..=5).map(|v| (1, v))).unwrap();
        let p = longest_path(&g).unwrap();
        assert_eq!(p.len(), 3);
        assert!(is_path(&g, &p));
    }

    #[test]
    fn hamiltonicity_small_cases() {
        assert!(is_hamiltonian(&Graph::cycle(6).unwrap()).unwrap());
        assert!(!is_hamiltonian(&Graph::path(6)).unwrap());
        assert!(!is_hamiltonian(&Graph::complete(2)).unwrap());
        // K_{2,3} has no Hamilton cycle.
        let k23 = Graph::from_edges(5, [(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]).unwrap();
        assert!(!is_hamiltonian(&k23).unwrap());
        assert!(hamilton_cycle_backtrack(&k23).is_none());
    }

    #[test]
    fn endpoint_set_of_k4() {
        let g = Graph::complete(4);
        assert_eq!(
            exact_endpoint_set(&g, &[1, 2, 3, 4]).unwrap(),
            vec![2, 3, 4]
        );
    }

    #[test]
    fn c5_endpoint_set_and_posa_bound() {
        // Every Hamilton path of C5 from vertex 1 ends at 2 or 5.
        let g = Graph::cycle(5).unwrap();
        let r = exact_endpoint_set(&g, &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(r, vec![2, 5]);
        let nr = crate::graph::neighborhood(&g, &r).unwrap();
        assert!(nr.len() < 2 * r.len());
    }

    #[test]
    fn capacity() {
        assert!(path_ends(&Graph::empty(19)).is_err());
    }
}

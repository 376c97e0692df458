use std::collections::BTreeSet;

use keychain_core::Graph;

use crate::{bits, ext};

/// `table[S]` is the set of `v` such that a path with vertex set exactly
/// `S` starts in `starts` and ends at `v`.
pub fn path_table(adj: &[u32], starts: u32) -> Vec<u32> {
    let n = adj.len();
    let mut table = vec![0u32; 1 << n];
    for s in bits(starts) {
        table[1 << s] |= 1 << s;
    }
    for mask in 1..table.len() {
        for v in bits(table[mask]) {
            for u in bits(adj[v] & !(mask as u32)) {
                table[mask | 1 << u] |= 1 << u;
            }
        }
    }
    table
}

/// Edge count of a longest path.
pub fn longest_len(adj: &[u32]) -> usize {
    let t = path_table(adj, (1u32 << adj.len()) - 1);
    (1..t.len())
        .filter(|&m| t[m] != 0)
        .map(|m| m.count_ones() as usize - 1)
        .max()
        .unwrap_or(0)
}

pub fn hamiltonian(adj: &[u32]) -> bool {
    let n = adj.len();
    n >= 3 && path_table(adj, 1)[(1 << n) - 1] & adj[0] != 0
}

/// Largest `k` with `|N(U)| ≥ 2|U|` for every non-empty `U`, `|U| ≤ k`.
pub fn expansion_k(adj: &[u32]) -> usize {
    let n = adj.len();
    let mut worst = vec![usize::MAX; n + 1];
    for set in 1u32..1 << n {
        let size = set.count_ones() as usize;
        worst[size] = worst[size].min(ext(adj, set).count_ones() as usize);
    }
    (1..=n).take_while(|&s| worst[s] >= 2 * s).count()
}

pub fn is_simple_path(g: &Graph, p: &[usize]) -> bool {
    let distinct: BTreeSet<_> = p.iter().collect();
    distinct.len() == p.len()
        && p.iter().all(|&v| g.contains_vertex(v))
        && p.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

/// Whether `cycle` lists every vertex once, consecutive entries adjacent
/// and the last adjacent to the first.
pub fn is_spanning_cycle(g: &Graph, cycle: &[usize]) -> bool {
    cycle.len() == g.n()
        && g.n() >= 3
        && is_simple_path(g, cycle)
        && g.has_edge(cycle[0], cycle[cycle.len() - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::masks;

    #[test]
    fn small_cases() {
        let c6 = masks(&Graph::cycle(6).unwrap());
        assert!(hamiltonian(&c6));
        assert_eq!(longest_len(&c6), 5);
        let p5 = masks(&Graph::path(5));
        assert!(!hamiltonian(&p5));
        assert_eq!(longest_len(&p5), 4);
        // K_{2,3}: longest path 2-3-1-4-... has 4 edges, no Hamilton cycle.
        let k23 = Graph::from_edges(5, [(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]).unwrap();
        assert!(!hamiltonian(&masks(&k23)));
        assert_eq!(longest_len(&masks(&k23)), 4);
    }

    #[test]
    fn endpoints_of_paths_from_one_vertex() {
        let k4 = masks(&Graph::complete(4));
        assert_eq!(path_table(&k4, 1)[0b1111], 0b1110);
        let p4 = masks(&Graph::path(4));
        assert_eq!(path_table(&p4, 1)[0b1111], 0b1000);
        assert_eq!(path_table(&p4, 0b0010)[0b1111], 0);
    }

    #[test]
    fn expansion_of_complete_graphs() {
        // |N(U)| = n - |U| >= 2|U| exactly when |U| <= n/3.
        assert_eq!(expansion_k(&masks(&Graph::complete(9))), 3);
        assert_eq!(expansion_k(&masks(&Graph::path(6))), 0);
    }

    #[test]
    fn cycle_checks() {
        let g = Graph::cycle(5).unwrap();
        assert!(is_spanning_cycle(&g, &[3, 4, 5, 1, 2]));
        assert!(!is_spanning_cycle(&g, &[1, 2, 3, 5, 4]));
        assert!(!is_simple_path(&g, &[1, 2, 1]));
    }
}

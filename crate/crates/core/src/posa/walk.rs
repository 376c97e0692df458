use rand::seq::IndexedRandom;
use rand::Rng;

use crate::graph::Graph;
use crate::seed::rng_from_seed;

const NONE: usize = usize::MAX;

/// Randomized rotation–extension walk for a Hamilton cycle of `g[w]`.
///
/// Extends the path from its end towards the unvisited neighbour with the
/// fewest unvisited neighbours. When stuck, rotates at a random pivot,
/// preferring pivots whose new end can extend (or close the cycle once the
/// path spans). Gives up after `steps` extensions and rotations.
pub fn rotation_walk(g: &Graph, w: &[usize], steps: usize, seed: u64) -> Option<Vec<usize>> {
    let n = g.n();
    let size = w.len();
    if size < 3 {
        return None;
    }
    let mut in_w = vec![false; n + 1];
    for &v in w {
        in_w[v] = true;
    }
    let deg = |v: usize| g.neighbors(v).iter().filter(|&&x| in_w[x]).count();
    if w.iter().any(|&v| deg(v) < 2) {
        return None;
    }
    let mut rng = rng_from_seed(seed);
    let mut pos = vec![NONE; n + 1];
    let mut free: Vec<usize> = (0..=n).map(|v| if in_w[v] { deg(v) } else { 0 }).collect();
    let mut path: Vec<usize> = Vec::with_capacity(size);
    let push = |v: usize, path: &mut Vec<usize>, pos: &mut Vec<usize>, free: &mut Vec<usize>| {
        pos[v] = path.len();
        path.push(v);
        for &x in g.neighbors(v) {
            if in_w[x] {
                free[x] -= 1;
            }
        }
    };
    // Start at a vertex of least degree, where the cycle has fewest choices.
    let min_deg = w.iter().map(|&v| deg(v)).min().unwrap();
    let lows: Vec<usize> = w.iter().copied().filter(|&v| deg(v) == min_deg).collect();
    push(
        *lows.choose(&mut rng).unwrap(),
        &mut path,
        &mut pos,
        &mut free,
    );

    for _ in 0..steps {
        let end = *path.last().unwrap();
        let open: Vec<usize> = g
            .neighbors(end)
            .iter()
            .copied()
            .filter(|&x| in_w[x] && pos[x] == NONE)
            .collect();
        if let Some(&best) = open.iter().min_by_key(|&&x| (free[x], rng.random::<u32>())) {
            push(best, &mut path, &mut pos, &mut free);
            continue;
        }
        if path.len() == size && g.has_edge(end, path[0]) {
            return Some(path);
        }
        // Rotation at pivot path[i] makes path[i + 1] the new end.
        let k = path.len() - 1;
        let pivots: Vec<usize> = g
            .neighbors(end)
            .iter()
            .filter(|&&x| in_w[x] && pos[x] != NONE && pos[x] + 1 < k)
            .map(|&x| pos[x])
            .collect();
        if pivots.is_empty() {
            path.reverse();
            for (i, &v) in path.iter().enumerate() {
                pos[v] = i;
            }
            continue;
        }
        let good = |i: usize| {
            let e = path[i + 1];
            if path.len() == size {
                g.has_edge(e, path[0])
            } else {
                free[e] > 0
            }
        };
        let preferred: Vec<usize> = pivots.iter().copied().filter(|&i| good(i)).collect();
        let i = if !preferred.is_empty() && rng.random_bool(0.9) {
            *preferred.choose(&mut rng).unwrap()
        } else {
            *pivots.choose(&mut rng).unwrap()
        };
        path[i + 1..].reverse();
        for (j, &v) in path.iter().enumerate().skip(i + 1) {
            pos[v] = j;
        }
        // Occasionally work from the other end.
        if rng.random_bool(0.05) {
            path.reverse();
            for (j, &v) in path.iter().enumerate() {
                pos[v] = j;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample_gnp;
    use crate::posa::is_hamilton_cycle;

    #[test]
    fn finds_cycles_in_dense_graphs() {
        for seed in 0..20 {
            let g = sample_gnp(60, 0.2, seed).unwrap();
            let w: Vec<usize> = g.vertices().collect();
            if g.min_degree() < 2 {
                continue;
            }
            let c = rotation_walk(&g, &w, 100_000, seed).expect("dense graphs are Hamiltonian");
            assert!(is_hamilton_cycle(&g, &w, &c));
        }
    }

    #[test]
    fn cycle_graph_and_degree_one() {
        let g = Graph::cycle(30).unwrap();
        let w: Vec<usize> = g.vertices().collect();
        assert!(is_hamilton_cycle(
            &g,
            &w,
            &rotation_walk(&g, &w, 1000, 1).unwrap()
        ));
        assert_eq!(
            rotation_walk(&Graph::path(5), &[1, 2, 3, 4, 5], 1000, 1),
            None
        );
    }
}

use keychain_core::Graph;

/// Maximum edge overlap over all bijections, by lexicographic permutation
/// enumeration.
pub fn mces_lex(g1: &Graph, g2: &Graph) -> usize {
    assert_eq!(g1.n(), g2.n());
    let n = g1.n();
    let e1: Vec<(usize, usize)> = g1.edges().collect();
    let mut perm: Vec<usize> = (1..=n).collect();
    let mut best = 0;
    loop {
        best = best.max(overlap(&e1, g2, &perm));
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return best;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

/// Edges `{u,v}` of `e1` with `{pi(u), pi(v)}` an edge of `g2`.
pub fn overlap(e1: &[(usize, usize)], g2: &Graph, pi: &[usize]) -> usize {
    e1.iter()
        .filter(|&&(u, v)| g2.has_edge(pi[u - 1], pi[v - 1]))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_overlaps() {
        let p4 = Graph::path(4);
        let star = Graph::from_edges(4, [(1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(mces_lex(&p4, &star), 2);
        assert_eq!(mces_lex(&Graph::cycle(5).unwrap(), &Graph::complete(5)), 5);
        assert_eq!(mces_lex(&Graph::empty(3), &Graph::complete(3)), 0);
        assert_eq!(mces_lex(&Graph::empty(1), &Graph::empty(1)), 0);
    }
}

use keychain_core::Graph;

fn encode(g: &Graph, r: usize, parent: usize) -> String {
    let mut kids: Vec<String> = g
        .neighbors(r)
        .iter()
        .filter(|&&x| x != parent)
        .map(|&x| encode(g, x, r))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// Canonical form of a tree: the least AHU encoding rooted at a centre.
/// Two trees are isomorphic exactly when their forms are equal.
pub fn tree_form(g: &Graph) -> String {
    assert!(
        g.n() >= 1 && g.m() + 1 == g.n() && g.is_connected(),
        "not a tree"
    );
    let mut deg: Vec<usize> = (0..=g.n())
        .map(|v| if v == 0 { 0 } else { g.degree(v) })
        .collect();
    let mut layer: Vec<usize> = g.vertices().filter(|&v| deg[v] <= 1).collect();
    let mut left = g.n();
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            deg[v] = 0;
            for &x in g.neighbors(v) {
                if deg[x] > 0 {
                    deg[x] -= 1;
                    if deg[x] == 1 {
                        next.push(x);
                    }
                }
            }
        }
        layer = next;
    }
    layer.iter().map(|&c| encode(g, c, 0)).min().unwrap()
}

/// Vertices left after repeatedly deleting leaves: the cycle of a
/// connected unicyclic graph.
pub fn core_size(g: &Graph) -> usize {
    let mut deg: Vec<usize> = (0..=g.n())
        .map(|v| if v == 0 { 0 } else { g.degree(v) })
        .collect();
    let mut stack: Vec<usize> = g.vertices().filter(|&v| deg[v] <= 1).collect();
    let mut peeled = 0;
    while let Some(v) = stack.pop() {
        peeled += 1;
        deg[v] = 0;
        for &x in g.neighbors(v) {
            if deg[x] > 0 {
                deg[x] -= 1;
                if deg[x] == 1 {
                    stack.push(x);
                }
            }
        }
    }
    g.n() - peeled
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelled_trees_share_a_form() {
        let a = Graph::from_edges(5, [(1, 2), (2, 3), (3, 4), (3, 5)]).unwrap();
        let b = Graph::from_edges(5, [(5, 4), (4, 1), (1, 2), (1, 3)]).unwrap();
        let star = Graph::from_edges(5, [(1, 2), (1, 3), (1, 4), (1, 5)]).unwrap();
        assert_eq!(tree_form(&a), tree_form(&b));
        assert_ne!(tree_form(&a), tree_form(&star));
        assert_ne!(tree_form(&Graph::path(5)), tree_form(&a));
    }

    #[test]
    fn core_of_a_lollipop() {
        let g = Graph::from_edges(6, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6)]).unwrap();
        assert_eq!(core_size(&g), 3);
        assert_eq!(core_size(&Graph::path(4)), 0);
    }
}

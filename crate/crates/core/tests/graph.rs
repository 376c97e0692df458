use keychain_core::graph::{
    degree_classes, edges_between, edges_within, keychain_graph, neighborhood, parse_edge_list,
    sample_gnp, serialize_edge_list, set_stats,
};
use keychain_core::{compute_parameters, Graph, Profile};
use proptest::prelude::*;

/// AHU encoding of the tree rooted at `r`.
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

/// Canonical form of a tree: the least AHU encoding over its centres.
fn tree_canon(g: &Graph) -> String {
    let n = g.n();
    let mut deg: Vec<usize> = (0..=n)
        .map(|v| if v == 0 { 0 } else { g.degree(v) })
        .collect();
    let mut layer: Vec<usize> = g.vertices().filter(|&v| deg[v] <= 1).collect();
    let mut left = n;
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

fn is_tree(g: &Graph) -> bool {
    g.m() + 1 == g.n() && g.is_connected()
}

/// Distinct isomorphism classes among the trees `KC − e`, `e` on the cycle.
fn spanning_tree_classes(n: usize, t: usize, ell: usize) -> usize {
    let kc = keychain_graph(n, t, ell).unwrap();
    let c = n - t;
    let mut forms = std::collections::BTreeSet::new();
    for i in 1..=c {
        let j = if i == c { 1 } else { i + 1 };
        let mut tree = kc.clone();
        assert!(tree.remove_edge(i, j));
        assert!(is_tree(&tree));
        forms.insert(tree_canon(&tree));
    }
    forms.len()
}

fn valid_shape() -> impl Strategy<Value = (usize, usize, usize)> {
    (0usize..6, 1usize..6, 3usize..40).prop_filter_map("shape", |(t, ell, c)| {
        let n = c + t;
        (t * ell <= c).then_some((n, t, ell))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn template_shape((n, t, ell) in valid_shape()) {
        let g = keychain_graph(n, t, ell).unwrap();
        prop_assert_eq!(g.m(), n);
        prop_assert!(g.is_connected());
        let count = |d: usize| g.vertices().filter(|&v| g.degree(v) == d).count();
        prop_assert_eq!(count(1), t);
        prop_assert_eq!(count(3), t);
        prop_assert_eq!(count(2), n - 2 * t);
        // Unicyclic: peeling leaves exposes a cycle of length n - t.
        let mut h = g.clone();
        for k in n - t + 1..=n {
            let nb = h.neighbors(k).to_vec();
            for v in nb {
                h.remove_edge(k, v);
            }
        }
        prop_assert!((1..=n - t).all(|v| h.degree(v) == 2));
        let degree_sum: usize = g.vertices().map(|v| g.degree(v)).sum();
        prop_assert_eq!(degree_sum, 2 * g.m());
    }

    #[test]
    fn desk_parameters(n in 50usize..20_000, growth in 1.5f64..6.0) {
        let profile = Profile::Desk { growth: Some(growth) };
        if let Ok(p) = compute_parameters(n, profile) {
            prop_assert!(p.a_seq.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(p.ell % 2, 0);
            prop_assert_eq!(p.ell, 2 * p.a_seq.len());
            prop_assert_eq!(p.a(1), Some(1));
            prop_assert!(p.t * (p.ell + 1) <= n);
            prop_assert_eq!(p.t, (n as f64).ln().floor() as usize);
            let target = (10.0 * n as f64 / (n as f64).ln()).ceil() as usize;
            prop_assert!(*p.a_seq.last().unwrap() >= target);
            if p.a_seq.len() > 1 {
                prop_assert!(p.a_seq[p.a_seq.len() - 2] < target);
            }
            prop_assert_eq!(p, compute_parameters(n, profile).unwrap());
        }
    }

    #[test]
    fn io_round_trip(n in 1usize..40, p in 0.0f64..1.0, s in any::<u64>()) {
        let g = sample_gnp(n, p, s).unwrap();
        let text = serialize_edge_list(&g);
        prop_assert_eq!(parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn edge_partition_recount(s in any::<u64>(), split in 0usize..50, cut in 0usize..50) {
        let g = sample_gnp(50, 0.2, s).unwrap();
        let (a, b) = (split.min(cut), split.max(cut));
        let u: Vec<usize> = (1..=a).collect();
        let w: Vec<usize> = (a + 1..=b).collect();
        let rest: Vec<usize> = (b + 1..=50).collect();
        let total = edges_within(&g, &u).unwrap()
            + edges_within(&g, &w).unwrap()
            + edges_within(&g, &rest).unwrap()
            + edges_between(&g, &u, &w).unwrap()
            + edges_between(&g, &u, &rest).unwrap()
            + edges_between(&g, &w, &rest).unwrap();
        prop_assert_eq!(total, g.m());
        let n_u = neighborhood(&g, &u).unwrap();
        prop_assert!(n_u.iter().all(|v| !u.contains(v)));
    }

    #[test]
    fn degree_classes_partition(s in any::<u64>(), threshold in 0usize..6) {
        let g = sample_gnp(100, 0.05, s).unwrap();
        let d = degree_classes(&g, threshold);
        let total: usize = d.classes.values().map(Vec::len).sum();
        prop_assert_eq!(total, 100);
        for (&deg, vs) in &d.classes {
            prop_assert!(vs.iter().all(|&v| g.degree(v) == deg));
        }
        let small: Vec<usize> = g.vertices().filter(|&v| g.degree(v) <= threshold).collect();
        prop_assert_eq!(d.small, small);
    }
}

#[test]
fn spanning_tree_classes_match_half_cycle() {
    // KeyChains built from a growth sequence have even spacing.
    let mut tested = 0;
    for n in 8..=30 {
        for t in 1..=3 {
            for ell in [2usize, 4] {
                if n < 2 * t * (ell + 1) {
                    continue;
                }
                assert_eq!(
                    spanning_tree_classes(n, t, ell),
                    (n - t).div_ceil(2),
                    "KC({n},{t},{ell})"
                );
                tested += 1;
            }
        }
    }
    assert!(tested >= 20);
}

#[test]
fn odd_spacing_can_add_a_class() {
    // The mirror symmetry x -> (t+1)ℓ - x of the cycle fixes two cycle edges
    // when n - t is even and (t+1)ℓ is odd, giving (n-t)/2 + 1 classes.
    for n in 8..=30 {
        for t in 1..=3 {
            for ell in [1usize, 3] {
                if n < 2 * t * (ell + 1) {
                    continue;
                }
                let c = n - t;
                let expected = if c % 2 == 0 && (t + 1) * ell % 2 == 1 {
                    c / 2 + 1
                } else {
                    c.div_ceil(2)
                };
                assert_eq!(
                    spanning_tree_classes(n, t, ell),
                    expected,
                    "KC({n},{t},{ell})"
                );
            }
        }
    }
    assert_eq!(spanning_tree_classes(8, 2, 1), 4);
}

#[test]
fn fig_one_template() {
    let g = keychain_graph(24, 5, 3).unwrap();
    assert_eq!((g.n(), g.m()), (24, 24));
    for (a, k) in [(3, 20), (6, 21), (9, 22), (12, 23), (15, 24)] {
        assert!(g.has_edge(a, k));
    }
}

#[test]
fn sampled_edge_counts_concentrate() {
    let pairs = 1000.0 * 999.0 / 2.0;
    let (mean, sd) = (pairs * 0.01, (pairs * 0.01 * 0.99f64).sqrt());
    for s in 0..100 {
        let m = sample_gnp(1000, 0.01, 7 + s).unwrap().m() as f64;
        assert!((m - mean).abs() <= 4.0 * sd, "seed {s}: {m}");
    }
    assert_eq!(
        sample_gnp(1000, 0.01, 7).unwrap(),
        sample_gnp(1000, 0.01, 7).unwrap()
    );
}

#[test]
fn set_stats_on_k4() {
    let g = Graph::complete(4);
    let s = set_stats(&g, &[1, 2], &[3, 4]).unwrap();
    assert_eq!((s.e_u, s.e_uw), (1, 4));
    assert_eq!(s.n_u, vec![3, 4]);
    assert!(set_stats(&g, &[1, 2], &[2, 3]).is_err());
}

#[test]
fn parse_errors_name_the_line() {
    assert!(parse_edge_list("3 1\n0 2\n").is_err());
    let err = parse_edge_list("3 2\n1 2\n1 2\n").unwrap_err().to_string();
    assert!(err.contains("line 3"), "{err}");
}

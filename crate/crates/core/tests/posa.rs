use keychain_core::graph::{neighborhood, sample_gnp};
use keychain_core::posa::exact::{
    exact_endpoint_set, hamilton_cycle_backtrack, is_booster, is_hamiltonian, longest_path,
};
use keychain_core::posa::{
    certify_expander, extend_maximal, find_boosters, hamilton_path_endpoints, hamiltonize,
    is_hamilton_cycle, is_path, rotation_closure, sparsify, BoosterMode, CertifyMethod,
    CertifyScope, HamiltonizeConfig, HamiltonizeOutcome,
};
use keychain_core::Graph;
use proptest::prelude::*;

fn small_graph() -> impl Strategy<Value = Graph> {
    (3usize..=11, 0.15f64..0.7, any::<u64>()).prop_map(|(n, p, s)| sample_gnp(n, p, s).unwrap())
}

/// Largest k such that every U with |U| <= k has |N(U)| >= 2|U|.
fn expansion_k(g: &Graph) -> usize {
    let mut k = 0;
    while k < g.n()
        && certify_expander(g, k + 1, 2.0, CertifyMethod::Direct, CertifyScope::Exact)
            .unwrap()
            .accepted
    {
        k += 1;
    }
    k
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn posa_inequality_on_longest_paths(g in small_graph()) {
        let p = longest_path(&g).unwrap();
        prop_assume!(p.len() >= 2);
        let r = exact_endpoint_set(&g, &p).unwrap();
        let nr = neighborhood(&g, &r).unwrap();
        prop_assert!(nr.len() < 2 * r.len());

        let rot = rotation_closure(&g, &p).unwrap();
        let rr = rot.endpoints();
        prop_assert!(rr.iter().all(|y| r.contains(y)));
        prop_assert!(neighborhood(&g, &rr).unwrap().len() < 2 * rr.len());
    }

    #[test]
    fn rotation_witnesses_revalidate(g in small_graph(), start in 1usize..=3) {
        let p = extend_maximal(&g, vec![start.min(g.n())]);
        let c = rotation_closure(&g, &p).unwrap();
        let mut sorted = p.clone();
        sorted.sort_unstable();
        for y in c.endpoints() {
            let q = c.path_to(y).unwrap();
            prop_assert!(is_path(&g, &q));
            prop_assert_eq!(q[0], p[0]);
            prop_assert_eq!(*q.last().unwrap(), y);
            let mut qs = q.clone();
            qs.sort_unstable();
            prop_assert_eq!(&qs, &sorted);
        }
    }

    #[test]
    fn exact_boosters_match_definition(h in small_graph()) {
        let g = Graph::complete(h.n());
        let found = find_boosters(&g, &h, BoosterMode::Exact).unwrap();
        let hamiltonian = is_hamiltonian(&h).unwrap();
        for (u, v) in g.edges().filter(|&(u, v)| !h.has_edge(u, v)) {
            let literal = !hamiltonian && is_booster(&h, u, v).unwrap();
            prop_assert_eq!(found.binary_search(&(u, v)).is_ok(), literal);
        }
    }

    #[test]
    fn rotation_boosters_sound_from_longest_path(h in small_graph()) {
        // Rotation pairs are boosters when the path they start from is a
        // longest path of a connected graph.
        let p = extend_maximal(&h, vec![1]);
        prop_assume!(h.is_connected() && p.len() == longest_path(&h).unwrap().len());
        let g = Graph::complete(h.n());
        let exact = find_boosters(&g, &h, BoosterMode::Exact).unwrap();
        for e in find_boosters(&g, &h, BoosterMode::Rotation).unwrap() {
            prop_assert!(exact.binary_search(&e).is_ok(), "{:?} not a booster", e);
        }
    }

    #[test]
    fn sparsify_postconditions(n in 4usize..30, p in 0.1f64..0.9, d0 in 0usize..6, seed: u64) {
        let g = sample_gnp(n, p, seed).unwrap();
        let w: Vec<usize> = (1..=n).filter(|v| v % 3 != 0).collect();
        let h = sparsify(&g, &w, d0, seed).unwrap();
        let (gw, _) = g.induced(&w).unwrap();
        let (hw, _) = h.induced(&w).unwrap();
        prop_assert_eq!(h.m(), hw.m());
        prop_assert!(h.m() <= w.len() * d0);
        prop_assert!(h.edges().all(|(u, v)| g.has_edge(u, v)));
        if !w.is_empty() {
            prop_assert!(hw.min_degree() >= d0.min(gw.min_degree()));
        }
    }

    #[test]
    fn hamiltonize_outputs_verify(n in 3usize..40, p in 0.1f64..0.8, seed: u64) {
        let g = sample_gnp(n, p, seed).unwrap();
        let w: Vec<usize> = g.vertices().collect();
        match hamiltonize(&g, &w, &HamiltonizeConfig::new(seed)).unwrap() {
            HamiltonizeOutcome::Cycle(c) => {
                prop_assert!(is_hamilton_cycle(&g, &w, &c.cycle));
                prop_assert!(c.rounds <= n);
                prop_assert_eq!(c.boosters.len(), c.rounds);
            }
            HamiltonizeOutcome::Failed(f) => {
                prop_assert!(f.rounds <= n);
                prop_assert!(is_path(&g, &f.path));
                prop_assert_eq!(f.path.len(), f.longest_path_len + 1);
            }
        }
    }
}

#[test]
fn four_path_boosters() {
    let h = Graph::path(4);
    let g = Graph::complete(4);
    assert_eq!(
        find_boosters(&g, &h, BoosterMode::Exact).unwrap(),
        vec![(1, 4)]
    );
}

#[test]
fn booster_count_on_expanders() {
    // Connected, non-Hamiltonian graphs with positive expansion, from a
    // fixed seed range; the Petersen graph is included as a classic case.
    let mut petersen = Graph::empty(10);
    for i in 0..5 {
        petersen.add_edge(i + 1, (i + 1) % 5 + 1).unwrap();
        petersen.add_edge(i + 1, i + 6).unwrap();
        petersen.add_edge(i + 6, (i + 2) % 5 + 6).unwrap();
    }
    let mut pool = vec![petersen];
    let mut seed = 0u64;
    while pool.len() < 40 {
        let n = 10 + (seed % 5) as usize;
        let g = sample_gnp(n, 0.3, seed).unwrap();
        seed += 1;
        if g.is_connected() && !is_hamiltonian(&g).unwrap() && expansion_k(&g) >= 1 {
            pool.push(g);
        }
    }
    for h in &pool {
        let k = expansion_k(h);
        let g = Graph::complete(h.n());
        let b = find_boosters(&g, h, BoosterMode::Exact).unwrap();
        assert!(
            2 * b.len() >= (k + 1) * (k + 1),
            "n = {}, k = {k}, {} boosters",
            h.n(),
            b.len()
        );
    }
}

#[test]
fn hamiltonize_agrees_with_backtracking_at_twelve() {
    let mut hamiltonian = 0;
    let mut found = 0;
    for seed in 0..300u64 {
        let g = sample_gnp(12, 0.6, 1000 + seed).unwrap();
        let w: Vec<usize> = g.vertices().collect();
        let oracle = hamilton_cycle_backtrack(&g).is_some();
        assert_eq!(oracle, is_hamiltonian(&g).unwrap());
        let out = hamiltonize(&g, &w, &HamiltonizeConfig::new(seed)).unwrap();
        if let HamiltonizeOutcome::Cycle(c) = &out {
            assert!(oracle);
            assert!(is_hamilton_cycle(&g, &w, &c.cycle));
            found += 1;
        }
        hamiltonian += usize::from(oracle);
    }
    assert!(found * 100 >= 95 * hamiltonian, "{found} of {hamiltonian}");
}

#[test]
fn endpoint_sets_are_large_on_expanders() {
    for seed in 0..60u64 {
        let g = sample_gnp(16, 0.45, seed).unwrap();
        let w: Vec<usize> = g.vertices().collect();
        let k = w.len() / 4;
        let cert =
            certify_expander(&g, k, 2.0, CertifyMethod::Direct, CertifyScope::Exact).unwrap();
        let Ok(r) = hamilton_path_endpoints(&g, &w, 1, &HamiltonizeConfig::new(seed)).unwrap()
        else {
            continue;
        };
        for y in r.endpoints() {
            let p = r.path_to(y).unwrap();
            assert!(is_path(&g, p) && p.len() == 16 && p[0] == 1);
        }
        if cert.accepted {
            assert!(r.len() > k, "seed {seed}: |R| = {}", r.len());
        }
    }
}

#[test]
fn direct_certification_matches_brute_force() {
    for seed in 0..10u64 {
        let g = sample_gnp(16, 3.0 / 15.0, seed).unwrap();
        let cert =
            certify_expander(&g, 4, 2.0, CertifyMethod::Direct, CertifyScope::Exact).unwrap();
        let mut brute = true;
        for mask in 1u32..1 << 16 {
            if mask.count_ones() > 4 {
                continue;
            }
            let u: Vec<usize> = (0..16)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| i + 1)
                .collect();
            if neighborhood(&g, &u).unwrap().len() < 2 * u.len() {
                brute = false;
                break;
            }
        }
        assert_eq!(cert.accepted, brute, "seed {seed}");
    }
}

use keychain_core::graph::sample_gnp;
use keychain_core::properties::{
    check_all, check_property, tail_bound_eval, witness_is_genuine, CheckMode, Constants,
    PropertyId, TailBoundQuery, Verdict,
};
use keychain_core::Graph;
use proptest::prelude::*;

/// Constants scaled so that P5–P8 quantify over non-empty families at n ≤ 10.
fn tight() -> Constants {
    Constants {
        label: "tight".into(),
        gamma: 1.0,
        p5_size: 1.0,
        p5_edges: 2.0,
        p5_neighbours: 1.5,
        p6_size: 2.0,
        p6_edges: 4.0,
        p7_lower: 0.5,
        p7_upper: 3.0,
        p7_target: 4.0,
        p8_size: 5.0,
        p8_density: 0.5,
        ..Constants::paper()
    }
}

struct Brute {
    n: usize,
    adj: Vec<Vec<bool>>,
    l: f64,
}

impl Brute {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let adj = (0..n)
            .map(|u| (0..n).map(|v| g.has_edge(u + 1, v + 1)).collect())
            .collect();
        Brute {
            n,
            adj,
            l: (n as f64).ln(),
        }
    }

    fn set(&self, mask: usize) -> Vec<usize> {
        (0..self.n).filter(|&i| mask >> i & 1 == 1).collect()
    }

    fn ext(&self, u: &[usize]) -> Vec<usize> {
        (0..self.n)
            .filter(|x| !u.contains(x) && u.iter().any(|&v| self.adj[v][*x]))
            .collect()
    }

    fn between(&self, u: &[usize], w: &[usize]) -> usize {
        u.iter()
            .map(|&a| w.iter().filter(|&&b| self.adj[a][b]).count())
            .sum()
    }

    fn inside(&self, u: &[usize]) -> usize {
        u.iter()
            .map(|&a| u.iter().filter(|&&b| a < b && self.adj[a][b]).count())
            .sum()
    }

    /// Whether some set (or disjoint pair) violates the property.
    fn violated(&self, which: PropertyId, c: &Constants) -> bool {
        let (n, l, nf) = (self.n, self.l, self.n as f64);
        let all = 1usize << n;
        match which {
            PropertyId::P5 => (1..all).any(|m| {
                let u = self.set(m);
                let k = u.len() as f64;
                let rest: Vec<usize> = (0..n).filter(|x| !u.contains(x)).collect();
                k <= c.p5_size * nf / l
                    && self.ext(&u).len() as f64 <= k * l / c.p5_neighbours
                    && self.between(&u, &rest) as f64 >= k * l / c.p5_edges
            }),
            PropertyId::P6 => (1..all).any(|m| {
                let u = self.set(m);
                let k = u.len() as f64;
                k <= c.gamma * nf / c.p6_size
                    && self.inside(&u) as f64 > c.gamma * l * k / c.p6_edges
            }),
            _ => (1..all).any(|a| {
                (1..all).filter(|b| a & b == 0).any(|b| {
                    let (u, w) = (self.set(a), self.set(b));
                    let (ku, kw) = (u.len() as f64, w.len() as f64);
                    if which == PropertyId::P7 {
                        let (lo, hi) = (c.p7_lower * nf / l, nf / c.p7_upper);
                        let (nu, nw) = (self.ext(&u), self.ext(&w));
                        let joint = nu.iter().filter(|x| nw.contains(x)).count();
                        [ku, kw].iter().all(|&k| lo <= k && k <= hi)
                            && (joint as f64) < nf / c.p7_target
                    } else {
                        let lo = c.gamma * nf / c.p8_size;
                        ku >= lo
                            && kw >= lo
                            && (self.between(&u, &w) as f64) < c.p8_density * ku * kw * l / nf
                    }
                })
            }),
        }
    }
}

const SET_PROPERTIES: [PropertyId; 4] = [
    PropertyId::P5,
    PropertyId::P6,
    PropertyId::P7,
    PropertyId::P8,
];

#[test]
fn exact_mode_matches_brute_force() {
    let mut violations = 0;
    for i in 0..100u64 {
        let n = 4 + (i % 7) as usize;
        let p = [0.15, 0.35, 0.6, 0.85][(i % 4) as usize];
        let g = sample_gnp(n, p, i).unwrap();
        let brute = Brute::new(&g);
        for c in [Constants::paper(), Constants::desk(), tight()] {
            for which in SET_PROPERTIES {
                let r = check_property(&g, which, CheckMode::Exact, &c).unwrap();
                assert_ne!(r.verdict, Verdict::Unknown);
                let expected = brute.violated(which, &c);
                assert_eq!(
                    r.verdict == Verdict::Violated,
                    expected,
                    "graph {i}, {which}, {}",
                    c.label
                );
                if expected {
                    violations += 1;
                    assert!(witness_is_genuine(&g, &r, &c));
                }
            }
        }
    }
    // The comparison is only meaningful if both verdicts occur.
    assert!(violations > 20);
}

#[test]
fn every_violation_is_genuine_at_moderate_n() {
    for s in 0..10 {
        let g = sample_gnp(300, 0.03, s).unwrap();
        for c in [Constants::paper(), Constants::desk()] {
            for r in check_all(
                &g,
                CheckMode::Sampled {
                    trials: 40,
                    seed: s,
                },
                &c,
            )
            .unwrap()
            {
                if r.verdict == Verdict::Violated {
                    assert!(witness_is_genuine(&g, &r, &c), "{:?}", r.property);
                }
            }
        }
    }
}

/// Frequency of `pred` among `trials` draws of the degree of vertex 1 in
/// `G(n, p)`.
fn degree_tail(n: usize, p: f64, trials: u64, pred: impl Fn(usize) -> bool) -> f64 {
    let hits = (0..trials)
        .filter(|&s| pred(sample_gnp(n, p, s).unwrap().degree(1)))
        .count();
    hits as f64 / trials as f64
}

#[test]
fn empirical_tails_stay_below_bounds() {
    let (n, p, trials) = (101usize, 0.1, 10_000u64);
    let mu = (n - 1) as f64 * p;
    let within = |freq: f64, bound: f64| {
        let sd = (bound * (1.0 - bound) / trials as f64)
            .sqrt()
            .max(1.0 / trials as f64);
        freq <= bound + 4.0 * sd
    };
    let alpha = 0.5;
    let lower = tail_bound_eval(TailBoundQuery::ChernoffLower { mu, alpha }).unwrap();
    assert!(within(
        degree_tail(n, p, trials, |d| d as f64 <= alpha * mu),
        lower
    ));
    let beta = 1.8;
    let upper = tail_bound_eval(TailBoundQuery::ChernoffUpper { mu, beta }).unwrap();
    assert!(within(
        degree_tail(n, p, trials, |d| d as f64 >= beta * mu),
        upper
    ));
    let k = 20.0;
    let claim_upper = tail_bound_eval(TailBoundQuery::BinomialUpper { n: 100, p, k }).unwrap();
    assert!(within(
        degree_tail(n, p, trials, |d| d as f64 >= k),
        claim_upper
    ));
    let k = 4.0;
    let claim_lower = tail_bound_eval(TailBoundQuery::BinomialLower { n: 100, p, k }).unwrap();
    assert!(within(
        degree_tail(n, p, trials, |d| d as f64 <= k),
        claim_lower
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_never_contradicts_exact(n in 4usize..=10, p in 0.1f64..0.9, s in any::<u64>(), trials in 1usize..30) {
        let g = sample_gnp(n, p, s).unwrap();
        let c = tight();
        for which in SET_PROPERTIES {
            let sampled = check_property(&g, which, CheckMode::Sampled { trials, seed: s }, &c).unwrap();
            if sampled.verdict == Verdict::Violated {
                prop_assert!(witness_is_genuine(&g, &sampled, &c));
                let exact = check_property(&g, which, CheckMode::Exact, &c).unwrap();
                prop_assert_eq!(exact.verdict, Verdict::Violated);
            }
        }
    }

    #[test]
    fn chernoff_lower_is_a_probability(mu in 0.0f64..1e6, alpha in 1e-9f64..=1.0) {
        let b = tail_bound_eval(TailBoundQuery::ChernoffLower { mu, alpha }).unwrap();
        prop_assert!((0.0..=1.0).contains(&b));
    }
}

//! Literal evaluation of the set-expansion properties P5–P8.

use keychain_core::properties::{Constants, PropertyId};

use crate::{bits, ext};

/// Whether `(u, w)` is a counterexample to the property; `w` is ignored
/// for P5 and P6, and sets must be non-empty.
pub fn counterexample(adj: &[u32], which: PropertyId, c: &Constants, u: u32, w: u32) -> bool {
    let n = adj.len() as f64;
    let l = n.ln();
    let (ku, kw) = (u.count_ones() as f64, w.count_ones() as f64);
    let between = |a: u32, b: u32| bits(a).map(|v| (adj[v] & b).count_ones()).sum::<u32>() as f64;
    match which {
        PropertyId::P5 => {
            let rest = ((1u32 << adj.len()) - 1) & !u;
            u != 0
                && ku <= c.p5_size * n / l
                && ext(adj, u).count_ones() as f64 <= ku * l / c.p5_neighbours
                && between(u, rest) >= ku * l / c.p5_edges
        }
        PropertyId::P6 => {
            u != 0
                && ku <= c.gamma * n / c.p6_size
                && between(u, u) / 2.0 > c.gamma * l * ku / c.p6_edges
        }
        PropertyId::P7 => {
            let (lo, hi) = (c.p7_lower * n / l, n / c.p7_upper);
            u != 0
                && w != 0
                && u & w == 0
                && [ku, kw].iter().all(|&k| lo <= k && k <= hi)
                && ((ext(adj, u) & ext(adj, w)).count_ones() as f64) < n / c.p7_target
        }
        PropertyId::P8 => {
            let lo = c.gamma * n / c.p8_size;
            u != 0
                && w != 0
                && u & w == 0
                && ku >= lo
                && kw >= lo
                && between(u, w) < c.p8_density * ku * kw * l / n
        }
        _ => panic!("{which} is not a set-expansion property"),
    }
}

/// Whether any set (P5, P6) or disjoint pair (P7, P8) is a counterexample.
pub fn any_counterexample(adj: &[u32], which: PropertyId, c: &Constants) -> bool {
    let all = 1u32 << adj.len();
    match which {
        PropertyId::P5 | PropertyId::P6 => (1..all).any(|u| counterexample(adj, which, c, u, 0)),
        _ => (1..all).any(|u| {
            (1..all)
                .filter(|w| u & w == 0)
                .any(|w| counterexample(adj, which, c, u, w))
        }),
    }
}

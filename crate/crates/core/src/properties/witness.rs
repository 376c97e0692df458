use std::collections::BTreeSet;

use super::{Constants, PropertyId, PropertyReport, Verdict};
use crate::graph::Graph;

// Recounts use plain set arithmetic on sorted vertex lists, deliberately
// avoiding the bitmask and incremental code of the checkers.

fn ln(n: usize) -> f64 {
    (n.max(1) as f64).ln()
}

fn as_set(g: &Graph, vs: &[usize]) -> Option<BTreeSet<usize>> {
    let s: BTreeSet<usize> = vs.iter().copied().collect();
    (s.len() == vs.len() && s.iter().all(|&v| g.contains_vertex(v))).then_some(s)
}

fn outer(g: &Graph, u: &BTreeSet<usize>) -> BTreeSet<usize> {
    u.iter()
        .flat_map(|&v| g.neighbors(v).iter().copied())
        .filter(|x| !u.contains(x))
        .collect()
}

fn spanned(g: &Graph, u: &BTreeSet<usize>) -> usize {
    g.edges()
        .filter(|(a, b)| u.contains(a) && u.contains(b))
        .count()
}

fn crossing(g: &Graph, u: &BTreeSet<usize>, w: &BTreeSet<usize>) -> usize {
    g.edges()
        .filter(|(a, b)| (u.contains(a) && w.contains(b)) || (u.contains(b) && w.contains(a)))
        .count()
}

fn small(g: &Graph, c: &Constants) -> BTreeSet<usize> {
    let t = c.small_threshold(g.n());
    g.vertices().filter(|&v| g.degree(v) <= t).collect()
}

/// Whether a `Violated` report's witness really violates the property.
/// Reports with another verdict return `false`.
pub fn witness_is_genuine(g: &Graph, r: &PropertyReport, c: &Constants) -> bool {
    if r.verdict != Verdict::Violated {
        return false;
    }
    let Some(w) = &r.witness else { return false };
    let n = g.n();
    let l = ln(n);
    match r.property {
        PropertyId::P1 => w
            .vertex
            .is_some_and(|v| g.contains_vertex(v) && g.degree(v) as f64 > c.max_degree * l),
        PropertyId::P2 => {
            let Some(set) = w.u.as_ref().and_then(|u| as_set(g, u)) else {
                return false;
            };
            let d1 = g.vertices().filter(|&v| g.degree(v) == 1).count();
            let d2 = g.vertices().filter(|&v| g.degree(v) == 2).count();
            let all_d1 = set.iter().all(|&v| g.degree(v) == 1) && set.len() == d1;
            let all_d2 = set.iter().all(|&v| g.degree(v) == 2) && set.len() == d2;
            (all_d1 && d1 as f64 > l) || (all_d2 && (d2 as f64) < l)
        }
        PropertyId::P3 => {
            let Some(path) = &w.path else { return false };
            if path.len() < 2 || n < 3 {
                return false;
            }
            let limit = ((c.short_path * l / l.ln()).floor() as usize).max(1);
            let len = path.len() - 1;
            let closed = path[0] == path[len];
            let inner = if closed { &path[..len] } else { &path[..] };
            let distinct = inner.iter().collect::<BTreeSet<_>>().len() == inner.len();
            let s = small(g, c);
            distinct
                && len <= limit
                && (!closed || len >= 3)
                && s.contains(&path[0])
                && s.contains(&path[len])
                && path.windows(2).all(|e| g.has_edge(e[0], e[1]))
        }
        PropertyId::P4 => {
            let Some(set) = w.u.as_ref().and_then(|u| as_set(g, u)) else {
                return false;
            };
            let s = small(g, c);
            let mut cover = outer(g, &s);
            cover.extend(s.iter().copied());
            cover == set && set.len() as f64 > (n as f64).powf(c.small_cover_exponent)
        }
        PropertyId::P5 => {
            let Some(u) = w.u.as_ref().and_then(|u| as_set(g, u)) else {
                return false;
            };
            let k = u.len() as f64;
            let rest: BTreeSet<usize> = g.vertices().filter(|v| !u.contains(v)).collect();
            !u.is_empty()
                && k <= c.p5_size * n as f64 / l
                && crossing(g, &u, &rest) as f64 >= k * l / c.p5_edges
                && outer(g, &u).len() as f64 <= k * l / c.p5_neighbours
        }
        PropertyId::P6 => {
            let Some(u) = w.u.as_ref().and_then(|u| as_set(g, u)) else {
                return false;
            };
            let k = u.len() as f64;
            !u.is_empty()
                && k <= c.gamma * n as f64 / c.p6_size
                && spanned(g, &u) as f64 > c.gamma * l * k / c.p6_edges
        }
        PropertyId::P7 | PropertyId::P8 => {
            let (Some(u), Some(wv)) = (
                w.u.as_ref().and_then(|u| as_set(g, u)),
                w.w.as_ref().and_then(|x| as_set(g, x)),
            ) else {
                return false;
            };
            if !u.is_disjoint(&wv) {
                return false;
            }
            let (ku, kw) = (u.len() as f64, wv.len() as f64);
            if r.property == PropertyId::P7 {
                let lo = c.p7_lower * n as f64 / l;
                let hi = n as f64 / c.p7_upper;
                let joint = outer(g, &u).intersection(&outer(g, &wv)).count();
                [ku, kw].iter().all(|&k| lo <= k && k <= hi)
                    && (joint as f64) < n as f64 / c.p7_target
            } else {
                let lo = c.gamma * n as f64 / c.p8_size;
                ku >= lo
                    && kw >= lo
                    && ku >= 1.0
                    && kw >= 1.0
                    && (crossing(g, &u, &wv) as f64) < c.p8_density * ku * kw * l / n as f64
            }
        }
    }
}

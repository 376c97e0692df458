use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KeyStrategy {
    /// All degree-1 vertices, topped up with degree-2 vertices.
    Paper,
    /// Vertices in order of degree (ties by index), skipping any that is
    /// adjacent to or shares a neighbour with an earlier pick, or has a
    /// neighbour of degree below 3.
    LowestDegree,
}

/// Picks `t` keys, sorted by index. Keys must have positive degree, be
/// pairwise non-adjacent and have disjoint neighbourhoods.
pub fn select_keys(g: &Graph, t: usize, strategy: KeyStrategy) -> Result<Vec<usize>> {
    let mut keys = match strategy {
        KeyStrategy::Paper => {
            let d1: Vec<usize> = g.vertices().filter(|&v| g.degree(v) == 1).collect();
            if d1.len() > t {
                return Err(Error::KeySelection(format!(
                    "{} vertices of degree 1 but only {t} keys",
                    d1.len()
                )));
            }
            let d2 = g.vertices().filter(|&v| g.degree(v) == 2);
            let keys: Vec<usize> = d1.iter().copied().chain(d2).take(t).collect();
            if keys.len() < t {
                return Err(Error::KeySelection(format!(
                    "only {} vertices of degree at most 2, need {t}",
                    keys.len()
                )));
            }
            keys
        }
        KeyStrategy::LowestDegree => {
            if t > g.n() {
                return Err(Error::KeySelection(format!(
                    "need {t} keys from {} vertices",
                    g.n()
                )));
            }
            let mut order: Vec<usize> = g.vertices().filter(|&v| g.degree(v) > 0).collect();
            order.sort_by_key(|&v| (g.degree(v), v));
            let mut blocked = vec![false; g.n() + 1];
            let mut keys = Vec::with_capacity(t);
            for v in order {
                if keys.len() == t {
                    break;
                }
                // A key's neighbours must keep two cycle edges once it is gone.
                let nb = g.neighbors(v);
                if blocked[v] || nb.iter().any(|&x| blocked[x] || g.degree(x) < 3) {
                    continue;
                }
                // Later keys may not touch v, N(v), or share a neighbour.
                blocked[v] = true;
                for &x in g.neighbors(v) {
                    blocked[x] = true;
                    for &y in g.neighbors(x) {
                        blocked[y] = true;
                    }
                }
                keys.push(v);
            }
            if keys.len() < t {
                return Err(Error::KeySelection(format!(
                    "only {} compatible keys among vertices of positive degree, need {t}",
                    keys.len()
                )));
            }
            keys
        }
    };
    keys.sort_unstable();
    check_keys(g, &keys)?;
    Ok(keys)
}

pub(crate) fn check_keys(g: &Graph, keys: &[usize]) -> Result<()> {
    let mut owner = vec![0usize; g.n() + 1];
    for &k in keys {
        if g.degree(k) == 0 {
            return Err(Error::KeySelection(format!("key {k} is isolated")));
        }
        owner[k] = k;
    }
    for &k in keys {
        for &x in g.neighbors(k) {
            if owner[x] == x && x != 0 {
                return Err(Error::KeySelection(format!(
                    "keys {k} and {x} are adjacent"
                )));
            }
        }
    }
    let mut seen = vec![0usize; g.n() + 1];
    for &k in keys {
        for &x in g.neighbors(k) {
            if seen[x] != 0 {
                return Err(Error::KeySelection(format!(
                    "keys {} and {k} share the neighbour {x}",
                    seen[x]
                )));
            }
            seen[x] = k;
        }
    }
    Ok(())
}

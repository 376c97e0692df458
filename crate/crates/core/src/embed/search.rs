use std::collections::VecDeque;

use rand::seq::SliceRandom;

use super::Embedding;
use crate::graph::Graph;
use crate::params::KeyChainParams;
use crate::seed::{derive_seed, rng_from_seed};

/// Outcome of [`search_keychain`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    Found(Embedding),
    /// The whole space was explored: no KeyChain with these keys.
    Exhausted,
    /// The node budget ran out first.
    GaveUp,
}

struct State<'a> {
    g: &'a Graph,
    params: &'a KeyChainParams,
    /// Key adjacent to each vertex, 0 if none.
    key_of: Vec<usize>,
    is_key: Vec<bool>,
    key_used: Vec<bool>,
    /// Unvisited non-key vertices adjacent to each key.
    key_free: Vec<usize>,
    visited: Vec<bool>,
    /// Unvisited non-key neighbours of each vertex.
    free: Vec<usize>,
    path: Vec<usize>,
    order: Vec<usize>,
    budget: usize,
    cycle_len: usize,
    /// Tie-break order among equally constrained candidates.
    rank: Vec<usize>,
}

impl State<'_> {
    fn visit(&mut self, v: usize) {
        self.visited[v] = true;
        for &y in self.g.neighbors(v) {
            self.free[y] -= 1;
        }
        if self.key_of[v] != 0 {
            self.key_free[self.key_of[v]] -= 1;
        }
    }

    fn unvisit(&mut self, v: usize) {
        self.visited[v] = false;
        for &y in self.g.neighbors(v) {
            self.free[y] += 1;
        }
        if self.key_of[v] != 0 {
            self.key_free[self.key_of[v]] += 1;
        }
    }

    /// Position of the next path vertex on the template cycle, counting
    /// `w_1` as 0; attachments sit at multiples of `ℓ` below `tℓ`.
    fn checkpoint(&self, pos: usize) -> bool {
        pos.is_multiple_of(self.params.ell) && pos / self.params.ell < self.params.t
    }

    fn dead(&self, end: usize, prev: usize) -> bool {
        let g = self.g;
        let head = self.path[0];
        // Unvisited vertices next to the old end lost a cycle neighbour.
        let starved = g.neighbors(prev).iter().any(|&y| {
            !self.is_key[y]
                && !self.visited[y]
                && self.free[y] + usize::from(g.has_edge(y, head)) + usize::from(g.has_edge(y, end))
                    < 2
        });
        if starved {
            return true;
        }
        // Every unused key needs an attachment left.
        let used = self.order.len();
        if used < self.params.t {
            let at_end = self.key_of[end];
            let missing = self
                .key_free
                .iter()
                .enumerate()
                .skip(1)
                .any(|(k, &f)| self.is_key[k] && !self.key_used[k] && f == 0 && at_end != k);
            if missing {
                return true;
            }
        }
        !self.reachable(end)
    }

    /// One BFS from the end through unvisited vertices: all of them must
    /// be reached, the head must be adjacent to the reached part, and the
    /// next attachment position must be within reach of a fresh key's
    /// neighbour.
    fn reachable(&self, end: usize) -> bool {
        let g = self.g;
        let left = self.cycle_len - self.path.len();
        if left == 0 {
            return true;
        }
        let pos = self.path.len() - 1;
        let ell = self.params.ell;
        let next_check = (pos / ell + 1) * ell;
        let want = (next_check / ell < self.params.t).then_some(next_check - pos);
        let mut dist = vec![usize::MAX; g.n() + 1];
        dist[end] = 0;
        let mut queue = VecDeque::from([end]);
        let mut reached = 0;
        let mut head_seen = false;
        let mut check_ok = want.is_none();
        while let Some(v) = queue.pop_front() {
            for &y in g.neighbors(v) {
                if y == self.path[0] {
                    head_seen = true;
                }
                if dist[y] == usize::MAX && !self.visited[y] && !self.is_key[y] {
                    dist[y] = dist[v] + 1;
                    reached += 1;
                    if let Some(d) = want {
                        let k = self.key_of[y];
                        if dist[y] <= d && k != 0 && !self.key_used[k] {
                            check_ok = true;
                        }
                    }
                    queue.push_back(y);
                }
            }
        }
        reached == left && head_seen && check_ok
    }

    fn run(&mut self) -> Option<bool> {
        let g = self.g;
        let end = *self.path.last().unwrap();
        let pos = self.path.len();
        if pos == self.cycle_len {
            return Some(g.has_edge(end, self.path[0]));
        }
        let mut next: Vec<usize> = g
            .neighbors(end)
            .iter()
            .copied()
            .filter(|&y| !self.visited[y] && !self.is_key[y])
            .filter(|&y| {
                !self.checkpoint(pos) || (self.key_of[y] != 0 && !self.key_used[self.key_of[y]])
            })
            .collect();
        next.sort_by_key(|&y| (self.free[y], self.rank[y]));
        for y in next {
            if self.budget == 0 {
                return None;
            }
            self.budget -= 1;
            let take_key = self.checkpoint(pos);
            self.visit(y);
            self.path.push(y);
            if take_key {
                self.key_used[self.key_of[y]] = true;
                self.order.push(self.key_of[y]);
            }
            if !self.dead(y, end) {
                match self.run() {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            if take_key {
                self.key_used[self.key_of[y]] = false;
                self.order.pop();
            }
            self.path.pop();
            self.unvisit(y);
        }
        Some(false)
    }
}

/// Depth-first search for a spanning KeyChain with the given keys, walking
/// the cycle from `w_1` and requiring a fresh key's neighbour at every
/// multiple of `ℓ`. Prunes on vertices left with fewer than two possible
/// cycle neighbours, keys left without an attachment, and disconnection
/// of the unvisited part.
///
/// The budget is spent in restarts of doubling size, the first with
/// smallest-index tie-breaking and later ones with random tie-breaking
/// drawn from `seed`. Only a restart that runs to completion can report
/// [`SearchResult::Exhausted`].
pub fn search_keychain(
    g: &Graph,
    keys: &[usize],
    params: &KeyChainParams,
    budget: usize,
    seed: u64,
) -> SearchResult {
    let n = g.n();
    let t = params.t;
    if t == 0 || keys.len() != t || params.n != n {
        return SearchResult::Exhausted;
    }
    let mut left = budget;
    let mut chunk = RESTART_BASE.min(budget);
    let mut round = 0u64;
    while left > 0 {
        let this = chunk.min(left);
        left -= this;
        let mut rank: Vec<usize> = (0..=n).collect();
        if round > 0 {
            rank[1..].shuffle(&mut rng_from_seed(derive_seed(seed, "search", round)));
        }
        match attempt(g, keys, params, this, rank) {
            SearchResult::GaveUp => {}
            done => return done,
        }
        chunk = chunk.saturating_mul(2);
        round += 1;
    }
    SearchResult::GaveUp
}

/// Nodes in the first restart.
const RESTART_BASE: usize = 10_000;

fn attempt(
    g: &Graph,
    keys: &[usize],
    params: &KeyChainParams,
    budget: usize,
    rank: Vec<usize>,
) -> SearchResult {
    let n = g.n();
    let t = params.t;
    let mut is_key = vec![false; n + 1];
    let mut key_of = vec![0; n + 1];
    let mut key_free = vec![0; n + 1];
    for &k in keys {
        is_key[k] = true;
    }
    for &k in keys {
        for &x in g.neighbors(k) {
            if !is_key[x] {
                key_of[x] = k;
                key_free[k] += 1;
            }
        }
    }
    let free: Vec<usize> = (0..=n)
        .map(|v| {
            if v == 0 {
                0
            } else {
                g.neighbors(v).iter().filter(|&&y| !is_key[y]).count()
            }
        })
        .collect();
    let mut st = State {
        g,
        params,
        key_of,
        is_key,
        key_used: vec![false; n + 1],
        key_free,
        visited: vec![false; n + 1],
        free,
        path: Vec::with_capacity(n),
        order: Vec::with_capacity(t),
        budget,
        cycle_len: n - t,
        rank,
    };
    // Try the key with the fewest attachments as x_1 first; every key may
    // be x_1, so all are tried.
    let mut firsts: Vec<usize> = keys.to_vec();
    firsts.sort_by_key(|&k| (st.key_free[k], st.rank[k]));
    for k in firsts {
        let mut starts: Vec<usize> = g
            .neighbors(k)
            .iter()
            .copied()
            .filter(|&x| !st.is_key[x])
            .collect();
        starts.sort_by_key(|&x| st.rank[x]);
        for w in starts {
            st.visit(w);
            st.path.push(w);
            st.key_used[k] = true;
            st.order.push(k);
            match st.run() {
                Some(true) => return SearchResult::Found(assemble(params, &st.path, &st.order)),
                None => return SearchResult::GaveUp,
                Some(false) => {}
            }
            st.order.pop();
            st.key_used[k] = false;
            st.path.pop();
            st.unvisit(w);
        }
    }
    SearchResult::Exhausted
}

fn assemble(params: &KeyChainParams, seq: &[usize], keys: &[usize]) -> Embedding {
    let (n, t, ell) = (params.n, params.t, params.ell);
    let c = n - t;
    let mut phi = vec![0; n];
    for pos in 1..=c {
        phi[pos - 1] = seq[(pos + c - ell % c) % c];
    }
    for (i, &k) in keys.iter().enumerate() {
        phi[c + i] = k;
    }
    Embedding {
        params: params.clone(),
        phi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::verify_embedding;
    use crate::graph::keychain_graph;

    #[test]
    fn finds_the_template() {
        let g = keychain_graph(24, 5, 3).unwrap();
        let params = KeyChainParams::new(24, 5, 3).unwrap();
        let keys: Vec<usize> = (20..=24).collect();
        let SearchResult::Found(e) = search_keychain(&g, &keys, &params, 100_000, 0) else {
            panic!("no embedding");
        };
        assert!(verify_embedding(&g, &e).ok);
    }

    #[test]
    fn wrong_spacing_is_exhausted() {
        // Keys spaced 3 apart admit no KeyChain with spacing 4.
        let g = keychain_graph(30, 5, 3).unwrap();
        let params = KeyChainParams::new(30, 5, 4).unwrap();
        let keys: Vec<usize> = (26..=30).collect();
        assert_eq!(
            search_keychain(&g, &keys, &params, 1_000_000, 0),
            SearchResult::Exhausted
        );
    }
}

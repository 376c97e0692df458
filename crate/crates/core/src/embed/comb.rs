use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use rand::seq::SliceRandom;

use super::Partition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::KeyChainParams;
use crate::seed::rng_from_seed;

/// Meeting vertices tried before a layered attempt gives up.
const MEETING_TRIES: usize = 64;
/// Node budget of the exact-length path search.
const SEARCH_BUDGET: usize = 400_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathMethod {
    /// Breadth-first layers grown from both ends, joined at a meeting vertex.
    Layers,
    /// Depth-first search for a path of the exact length.
    Search,
}

/// Keys `x_1..x_t` in chain order, their attachments `w_i`, and the paths
/// `P_i` from `w_i` to `w_{i+1}`, each with exactly `ℓ` edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comb {
    pub keys: Vec<usize>,
    pub attachments: Vec<usize>,
    pub paths: Vec<Vec<usize>>,
    pub methods: Vec<PathMethod>,
    /// Reservoir vertices taken onto paths when no path inside `V'` existed.
    pub borrowed: Vec<usize>,
}

impl Comb {
    /// Keys, attachments and path vertices, sorted.
    pub fn vertex_set(&self) -> Vec<usize> {
        let mut x: Vec<usize> = self
            .keys
            .iter()
            .chain(&self.attachments)
            .chain(self.paths.iter().flatten())
            .copied()
            .collect();
        x.sort_unstable();
        x.dedup();
        x
    }

    /// Structural audit against `g`: key edges, path lengths and endpoints,
    /// paths inside `vprime` plus the borrowed vertices, and the overlap
    /// pattern of consecutive paths.
    pub fn check(&self, g: &Graph, ell: usize, vprime: &[usize]) -> Vec<String> {
        let mut out = Vec::new();
        let t = self.keys.len();
        if self.attachments.len() != t || self.paths.len() != t.saturating_sub(1) {
            out.push("wrong number of attachments or paths".to_string());
            return out;
        }
        let mut in_vp = vec![false; g.n() + 1];
        for &v in vprime.iter().chain(&self.borrowed) {
            in_vp[v] = true;
        }
        for (&x, &w) in self.keys.iter().zip(&self.attachments) {
            if !g.has_edge(x, w) {
                out.push(format!("key {x} is not adjacent to its attachment {w}"));
            }
            if !in_vp[x] || !in_vp[w] {
                out.push(format!("key {x} or attachment {w} lies outside V'"));
            }
        }
        let mut owner = vec![usize::MAX; g.n() + 1];
        for (i, &x) in self.keys.iter().enumerate() {
            owner[x] = usize::MAX - 1 - i;
        }
        for (i, p) in self.paths.iter().enumerate() {
            let (a, b) = (self.attachments[i], self.attachments[i + 1]);
            if p.len() != ell + 1 || p[0] != a || p[ell] != b {
                out.push(format!(
                    "path {} does not run from {a} to {b} in {ell} steps",
                    i + 1
                ));
                continue;
            }
            if !super::super::posa::is_path(g, p) {
                out.push(format!("path {} is not a path of the host", i + 1));
            }
            for (k, &v) in p.iter().enumerate() {
                if !in_vp[v] {
                    out.push(format!("path {} uses {v} outside V'", i + 1));
                }
                let shared_end = (k == 0 && i > 0) || (k == ell && i + 1 < self.paths.len());
                let prev = owner[v];
                if prev != usize::MAX
                    && !(shared_end && (prev == i.wrapping_sub(1) || prev == i + 1))
                {
                    out.push(format!(
                        "vertex {v} appears on path {} and elsewhere",
                        i + 1
                    ));
                }
                if prev == usize::MAX || k == ell {
                    owner[v] = i;
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombFailure {
    /// 1-based index of the path that could not be built, 0 for setup.
    pub path: usize,
    /// Layer index at which the layered attempt starved, if it did.
    pub layer: Option<usize>,
    pub available: usize,
    pub message: String,
}

struct Builder<'a> {
    g: &'a Graph,
    in_vp: Vec<bool>,
    in_x: Vec<bool>,
    reserved: Vec<bool>,
    /// Neighbours outside `X`, plus one for each adjacency to an extreme
    /// attachment: the degree a vertex keeps in the closing graph.
    ext: Vec<usize>,
    stamp: Vec<usize>,
    pred: Vec<usize>,
    /// Tie-break order of the path search.
    rank: Vec<usize>,
}

impl Builder<'_> {
    fn free(&self, v: usize) -> bool {
        self.in_vp[v] && !self.in_x[v]
    }

    /// The closing graph keeps minimum degree 2 if `inner` joins `X`.
    fn keeps_degrees(&self, inner: &[usize], ends: (usize, usize)) -> bool {
        let mut hits: Vec<(usize, usize)> = Vec::new();
        let mut on = std::collections::HashSet::new();
        on.extend(inner.iter().copied());
        for &u in inner {
            for &v in self.g.neighbors(u) {
                if !self.in_x[v] && !on.contains(&v) {
                    hits.push((v, 1));
                }
            }
        }
        hits.sort_unstable();
        let mut i = 0;
        while i < hits.len() {
            let v = hits[i].0;
            let mut c = 0;
            while i < hits.len() && hits[i].0 == v {
                c += 1;
                i += 1;
            }
            if self.ext[v] >= 2 && self.ext[v] - c < 2 {
                return false;
            }
        }
        // The closing path needs somewhere to start and end.
        let outside = |w: usize| {
            self.g
                .neighbors(w)
                .iter()
                .filter(|&&z| !self.in_x[z] && !on.contains(&z))
                .count()
        };
        outside(ends.0) >= 1 && outside(ends.1) >= 1 && (ends.0 != ends.1 || outside(ends.0) >= 2)
    }

    fn commit(&mut self, inner: &[usize]) {
        for &u in inner {
            self.in_x[u] = true;
        }
        for &u in inner {
            for &v in self.g.neighbors(u) {
                if !self.in_x[v] {
                    self.ext[v] = self.ext[v].saturating_sub(1);
                }
            }
        }
    }

    fn layered(
        &mut self,
        i: usize,
        from: usize,
        to: usize,
        seeds: (&[usize], &[usize]),
        params: &KeyChainParams,
        extremes: (usize, usize),
    ) -> std::result::Result<Vec<usize>, (usize, usize)> {
        let half = params.ell / 2;
        let tag = i + 1;
        let open = |b: &Self, v: usize| b.free(v) && !b.reserved[v] && b.stamp[v] != tag;
        let avail = self.g.vertices().filter(|&v| open(self, v)).count();
        let cap = (avail / (4 * (half - 1).max(1))).max(1);

        let mut s: Vec<usize> = seeds.0.iter().copied().filter(|&v| !self.in_x[v]).collect();
        let mut t: Vec<usize> = seeds.1.iter().copied().filter(|&v| !self.in_x[v]).collect();
        if s.is_empty() || t.is_empty() {
            return Err((2, 0));
        }
        for &v in &s {
            self.stamp[v] = tag;
            self.pred[v] = from;
        }
        for &v in &t {
            self.stamp[v] = tag;
            self.pred[v] = to;
        }
        for j in 3..=half {
            let want = params.a(j).unwrap_or(1).min(cap);
            for side in [&mut s, &mut t] {
                let mut cand = Vec::new();
                for &u in side.iter() {
                    for &x in self.g.neighbors(u) {
                        if open(self, x) {
                            self.stamp[x] = tag;
                            self.pred[x] = u;
                            cand.push(x);
                        }
                    }
                }
                if cand.is_empty() {
                    return Err((j, 0));
                }
                cand.sort_unstable();
                // Unused candidates go back to the pool.
                for &x in &cand[want.min(cand.len())..] {
                    self.stamp[x] = 0;
                }
                cand.truncate(want);
                *side = cand;
            }
        }
        let mut mark = vec![false; self.g.n() + 1];
        for &u in &t {
            for &x in self.g.neighbors(u) {
                mark[x] = true;
            }
        }
        let mut meet: Vec<usize> = s
            .iter()
            .flat_map(|&u| self.g.neighbors(u).iter().copied())
            .filter(|&x| mark[x] && open(self, x))
            .collect();
        meet.sort_unstable();
        meet.dedup();
        let available = meet.len();
        for &m in meet.iter().take(MEETING_TRIES) {
            let a = *s.iter().filter(|&&u| self.g.has_edge(u, m)).min().unwrap();
            let b = *t.iter().filter(|&&u| self.g.has_edge(u, m)).min().unwrap();
            let (Some(mut left), Some(right)) =
                (self.trace(a, from, half), self.trace(b, to, half))
            else {
                continue;
            };
            left.reverse();
            let mut path = left;
            path.push(m);
            path.extend(right);
            debug_assert_eq!(path.len(), params.ell + 1);
            if self.keeps_degrees(&path[1..params.ell], extremes) {
                return Ok(path);
            }
        }
        Err((half + 1, available))
    }

    /// Follows predecessor links from `v` for `steps - 1` steps; `None`
    /// unless that lands on `end`.
    fn trace(&self, v: usize, end: usize, steps: usize) -> Option<Vec<usize>> {
        let mut out = vec![v];
        for _ in 1..steps {
            out.push(self.pred[*out.last().unwrap()]);
        }
        (*out.last().unwrap() == end).then_some(out)
    }

    fn search(
        &self,
        from: usize,
        to: usize,
        ell: usize,
        extremes: (usize, usize),
        borrow: bool,
    ) -> Option<Vec<usize>> {
        let g = self.g;
        let n = g.n();
        let allowed = |v: usize| !self.in_x[v] && (borrow || self.in_vp[v]);
        // Distances to `to` through allowed vertices.
        let mut dist = vec![usize::MAX; n + 1];
        dist[to] = 0;
        let mut queue = VecDeque::from([to]);
        while let Some(v) = queue.pop_front() {
            for &x in g.neighbors(v) {
                if dist[x] == usize::MAX && (allowed(x) || x == from) {
                    dist[x] = dist[v] + 1;
                    if x != from {
                        queue.push_back(x);
                    }
                }
            }
        }
        if dist[from] > ell {
            return None;
        }
        let order = |v: usize| {
            let mut nb: Vec<usize> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&x| x == to || allowed(x))
                .collect();
            nb.sort_by_key(|&x| (!self.in_vp[x], self.reserved[x], self.rank[x]));
            nb
        };
        let mut on = vec![false; n + 1];
        let mut path = vec![from];
        on[from] = true;
        // Usable neighbours each outside vertex has lost to the path so far.
        let mut lost = vec![0usize; n + 1];
        // Outside vertices that putting `x` on the path would starve. One of
        // them can still be rescued by stepping onto it next.
        let starved = |x: usize, lost: &[usize], on: &[bool]| -> Vec<usize> {
            g.neighbors(x)
                .iter()
                .copied()
                .filter(|&v| {
                    !self.in_x[v] && !on[v] && self.ext[v] >= 2 && self.ext[v] < lost[v] + 3
                })
                .collect()
        };
        let mut stack: Vec<(Vec<usize>, usize)> = vec![(order(from), 0)];
        let mut budget = SEARCH_BUDGET;
        while let Some((nb, idx)) = stack.last_mut() {
            if budget == 0 {
                return None;
            }
            budget -= 1;
            let Some(&x) = nb.get(*idx) else {
                stack.pop();
                let v = path.pop().unwrap();
                on[v] = false;
                if v != from {
                    g.neighbors(v).iter().for_each(|&y| lost[y] -= 1);
                }
                continue;
            };
            *idx += 1;
            let steps = path.len();
            let remaining = ell - steps;
            if on[x] || dist[x] > remaining || (x == to) != (remaining == 0) {
                continue;
            }
            if x == to {
                path.push(to);
                if self.keeps_degrees(&path[1..ell], extremes) {
                    return Some(path);
                }
                path.pop();
                continue;
            }
            let at_risk = starved(x, &lost, &on);
            let next = match at_risk.as_slice() {
                [] => order(x),
                [v] if remaining > 1 && allowed(*v) => vec![*v],
                _ => continue,
            };
            on[x] = true;
            g.neighbors(x).iter().for_each(|&y| lost[y] += 1);
            path.push(x);
            stack.push((next, 0));
        }
        None
    }
}

/// Nearest-neighbour ordering of the keys by the distance between their
/// attachments inside `V' \ K`, starting from the smallest attachment.
fn chain_order(g: &Graph, keys: &[usize], att: &[usize], open: &[bool]) -> Vec<usize> {
    let t = keys.len();
    let mut dists = Vec::with_capacity(t);
    for &w in att {
        let mut d = vec![usize::MAX; g.n() + 1];
        d[w] = 0;
        let mut queue = VecDeque::from([w]);
        while let Some(v) = queue.pop_front() {
            for &x in g.neighbors(v) {
                if d[x] == usize::MAX && (open[x] || att.contains(&x)) {
                    d[x] = d[v] + 1;
                    if open[x] {
                        queue.push_back(x);
                    }
                }
            }
        }
        dists.push(d);
    }
    let mut order = Vec::with_capacity(t);
    let mut used = vec![false; t];
    let mut cur = (0..t).min_by_key(|&i| att[i]).unwrap();
    loop {
        used[cur] = true;
        order.push(cur);
        let next = (0..t)
            .filter(|&j| !used[j])
            .min_by_key(|&j| (dists[cur][att[j]], att[j]));
        match next {
            Some(j) => cur = j,
            None => break,
        }
    }
    order
}

/// Builds the comb inside `V'`: attachments, reserved seed sets, then the
/// paths `P_1..P_{t-1}` one after another. Paths leave every vertex outside
/// the comb with at least two usable neighbours.
///
/// Ties go to the smallest index; with `shuffle` set, the fallback path
/// search breaks ties in a random order drawn from that seed instead.
pub fn build_comb(
    g: &Graph,
    part: &Partition,
    params: &KeyChainParams,
    shuffle: Option<u64>,
) -> Result<std::result::Result<Comb, CombFailure>> {
    let n = g.n();
    let t = params.t;
    let ell = params.ell;
    if params.n != n {
        return Err(Error::Parameter(format!(
            "parameters are for n = {}, host has {n}",
            params.n
        )));
    }
    if t == 0 || part.keys.len() != t {
        return Err(Error::Parameter(format!(
            "need t >= 1 keys matching the partition, got t = {t} and {} keys",
            part.keys.len()
        )));
    }
    let fail = |path: usize, layer: Option<usize>, available: usize, message: String| {
        Ok(Err(CombFailure {
            path,
            layer,
            available,
            message,
        }))
    };
    let mut in_vp = vec![false; n + 1];
    for &v in &part.vprime {
        in_vp[v] = true;
    }
    let mut is_key = vec![false; n + 1];
    for &k in &part.keys {
        is_key[k] = true;
    }

    let mut att = Vec::with_capacity(t);
    let mut taken = vec![false; n + 1];
    for &k in &part.keys {
        let w = g
            .neighbors(k)
            .iter()
            .copied()
            .find(|&x| in_vp[x] && !is_key[x] && !taken[x]);
        let Some(w) = w else {
            return fail(0, None, 0, format!("key {k} has no free attachment in V'"));
        };
        taken[w] = true;
        att.push(w);
    }
    let open: Vec<bool> = (0..=n)
        .map(|v| v > 0 && in_vp[v] && !is_key[v] && !taken[v])
        .collect();
    let order = chain_order(g, &part.keys, &att, &open);
    let keys: Vec<usize> = order.iter().map(|&i| part.keys[i]).collect();
    let att: Vec<usize> = order.iter().map(|&i| att[i]).collect();

    let a2 = params.a(2).unwrap_or(1);
    let mut seeds = Vec::with_capacity(t);
    let mut reserved = vec![false; n + 1];
    let mut seeded = vec![false; n + 1];
    for &w in &att {
        let free: Vec<usize> = g
            .neighbors(w)
            .iter()
            .copied()
            .filter(|&x| open[x] && !seeded[x])
            .collect();
        let y = a2.min(free.len() / 2);
        free[..2 * y].iter().for_each(|&x| seeded[x] = true);
        seeds.push((free[..y].to_vec(), free[y..2 * y].to_vec()));
    }
    for (i, (y, z)) in seeds.iter().enumerate() {
        if i + 1 < t {
            y.iter().for_each(|&v| reserved[v] = true);
        }
        if i > 0 {
            z.iter().for_each(|&v| reserved[v] = true);
        }
    }

    let mut in_x = vec![false; n + 1];
    for v in keys.iter().chain(&att) {
        in_x[*v] = true;
    }
    let extremes = (att[0], att[t - 1]);
    let ext: Vec<usize> = (0..=n)
        .map(|v| {
            if v == 0 || in_x[v] {
                return 0;
            }
            g.neighbors(v).iter().filter(|&&x| !in_x[x]).count()
                + usize::from(g.has_edge(v, extremes.0))
                + usize::from(g.has_edge(v, extremes.1))
        })
        .collect();
    let mut rank: Vec<usize> = (0..=n).collect();
    if let Some(seed) = shuffle {
        rank[1..].shuffle(&mut rng_from_seed(seed));
    }
    let mut b = Builder {
        g,
        in_vp,
        in_x,
        reserved,
        ext,
        stamp: vec![0; n + 1],
        rank,
        pred: vec![0; n + 1],
    };

    let layered_ok = params.ell.is_multiple_of(2) && params.ell >= 4 && !params.a_seq.is_empty();
    let mut paths = Vec::with_capacity(t - 1);
    let mut methods = Vec::with_capacity(t - 1);
    let mut borrowed = Vec::new();
    for i in 0..t - 1 {
        let (from, to) = (att[i], att[i + 1]);
        let mut starved = None;
        let mut found = None;
        if layered_ok {
            let seeds_i = (seeds[i].0.clone(), seeds[i + 1].1.clone());
            match b.layered(i, from, to, (&seeds_i.0, &seeds_i.1), params, extremes) {
                Ok(p) => found = Some((p, PathMethod::Layers)),
                Err(s) => starved = Some(s),
            }
        }
        for borrow in [false, true] {
            if found.is_none() {
                found = b
                    .search(from, to, ell, extremes, borrow)
                    .map(|p| (p, PathMethod::Search));
            }
        }
        let Some((p, method)) = found else {
            let (layer, available) = starved.map_or((None, 0), |(j, a)| (Some(j), a));
            return fail(
                i + 1,
                layer,
                available,
                format!("no path of length {ell} from {from} to {to}"),
            );
        };
        borrowed.extend(p.iter().copied().filter(|&v| !b.in_vp[v]));
        b.commit(&p[1..ell]);
        paths.push(p);
        methods.push(method);
    }
    Ok(Ok(Comb {
        keys,
        attachments: att,
        paths,
        methods,
        borrowed: {
            borrowed.sort_unstable();
            borrowed
        },
    }))
}

//! Simple undirected graphs on the vertex set `1..=n`.
//!
//! Vertex labels are 1-indexed throughout the crate. Adjacency lists are
//! kept sorted, so neighbourhood scans are deterministic and `has_edge`
//! is a binary search over a list of length at most the maximum degree.

mod classes;
mod io;
mod sample;
mod stats;
mod template;

pub use classes::{default_small_threshold, degree_classes, DegreeClasses};
pub use io::{parse_edge_list, serialize_edge_list};
pub use sample::{offset_probability, sample_gnp, sample_gnp_offset};
pub use stats::{
    common_neighborhood, edges_between, edges_within, neighborhood, set_stats, SetStats,
};
pub use template::{check_template_shape, keychain_graph, keychain_template};

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    n: usize,
    // adj[0] is unused so that adj[v] is the list of vertex v.
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n + 1],
            m: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut adj = vec![Vec::new(); n + 1];
        for (v, list) in adj.iter_mut().enumerate().skip(1) {
            list.extend((1..=n).filter(|&u| u != v));
        }
        Graph {
            n,
            adj,
            m: n * n.saturating_sub(1) / 2,
        }
    }

    /// The cycle 1-2-...-n-1. Requires `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter(format!(
                "a cycle needs 3 vertices, got {n}"
            )));
        }
        Graph::from_edges(n, (1..=n).map(|i| (i, i % n + 1)))
    }

    /// The path 1-2-...-n.
    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 1..n {
            g.insert_unchecked(i, i + 1);
        }
        g
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if !g.add_edge(u, v)? {
                return Err(Error::Input(format!("duplicate edge {{{u},{v}}}")));
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        (1..=self.n).contains(&v)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }

    /// Sorted neighbour list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == 0 || v == 0 || u > self.n || v > self.n {
            return false;
        }
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Inserts `{u, v}`; returns `false` when the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::Input(format!("self-loop at vertex {u}")));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos_v = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos_v, u);
                self.m += 1;
                Ok(true)
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        let pu = self.adj[u].binary_search(&v).unwrap();
        self.adj[u].remove(pu);
        let pv = self.adj[v].binary_search(&u).unwrap();
        self.adj[v].remove(pv);
        self.m -= 1;
        true
    }

    // Appends without checks; callers guarantee increasing order per list
    // or call `finish_unsorted` afterwards.
    pub(crate) fn insert_unchecked(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
        self.adj[v].push(u);
        self.m += 1;
    }

    pub(crate) fn finish_unsorted(&mut self) {
        for list in &mut self.adj {
            list.sort_unstable();
        }
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.n).flat_map(move |u| {
            self.adj[u]
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Number of neighbours of `v` inside the set marked by `mask`.
    pub fn degree_into(&self, v: usize, mask: &[bool]) -> usize {
        self.adj[v].iter().filter(|&&u| mask[u]).count()
    }

    /// Induced subgraph on `vertices`, relabelled to `1..=k` in the given
    /// order. Returns the subgraph and the map `local - 1 -> global`.
    pub fn induced(&self, vertices: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut local = vec![0usize; self.n + 1];
        for (i, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            if local[v] != 0 {
                return Err(Error::Input(format!("vertex {v} listed twice")));
            }
            local[v] = i + 1;
        }
        let mut h = Graph::empty(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &u in &self.adj[v] {
                let j = local[u];
                if j > i + 1 {
                    h.insert_unchecked(i + 1, j);
                }
            }
        }
        h.finish_unsorted();
        Ok((h, vertices.to_vec()))
    }

    /// Vertices reachable from `start`, in breadth-first order.
    pub fn bfs_order(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n + 1];
        let mut order = vec![start];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    order.push(u);
                    queue.push_back(u);
                }
            }
        }
        order
    }

    /// Breadth-first distances from `start`; `usize::MAX` when unreachable.
    pub fn distances_from(&self, start: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n + 1];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n + 1];
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen[v] {
                continue;
            }
            let comp = self.bfs_order(v);
            for &u in &comp {
                seen[u] = true;
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.bfs_order(1).len() == self.n
    }
}

/// Membership mask of length `n + 1` for a vertex list.
pub fn mask_of(n: usize, vertices: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n + 1];
    for &v in vertices {
        mask[v] = true;
    }
    mask
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_counts() {
        let g = Graph::complete(5);
        assert_eq!(g.m(), 10);
        assert_eq!(g.edges().count(), 10);
        assert!(g.vertices().all(|v| g.degree(v) == 4));
    }

    #[test]
    fn add_edge_rejects_loops_and_range() {
        let mut g = Graph::empty(3);
        assert!(g.add_edge(1, 1).is_err());
        assert!(g.add_edge(0, 2).is_err());
        assert!(g.add_edge(2, 4).is_err());
        assert!(g.add_edge(1, 2).unwrap());
        assert!(!g.add_edge(2, 1).unwrap());
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn induced_relabels_in_given_order() {
        let g = Graph::cycle(5).unwrap();
        let (h, map) = g.induced(&[3, 4, 5]).unwrap();
        assert_eq!(map, vec![3, 4, 5]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(1, 2), (2, 3)]);
    }

    #[test]
    fn remove_edge_keeps_symmetry() {
        let mut g = Graph::complete(4);
        assert!(g.remove_edge(2, 3));
        assert!(!g.has_edge(3, 2));
        assert_eq!(g.m(), 5);
        assert_eq!(g.neighbors(3), &[1, 4]);
    }

    #[test]
    fn components_of_two_triangles() {
        let g = Graph::from_edges(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)]).unwrap();
        assert!(!g.is_connected());
        assert_eq!(g.components().len(), 2);
    }
}

use std::collections::VecDeque;

use super::is_path;
use crate::error::{Error, Result};
use crate::graph::Graph;

const NONE: usize = usize::MAX;

/// Endpoints reachable from a path by rotations that keep its first vertex
/// fixed, each with a replayable witness path on the same vertex set.
///
/// States form a breadth-first tree. Each state stores its endpoint, its
/// parent state and the pivot vertex `v_i` of the rotation that produced
/// it, so a witness path is rebuilt by replaying pivots from the root.
#[derive(Clone, Debug)]
pub struct RotationClosure {
    root: Vec<usize>,
    states: Vec<(usize, usize, usize)>,
    slot: Vec<usize>,
}

impl RotationClosure {
    pub fn start(&self) -> usize {
        self.root[0]
    }

    pub fn root(&self) -> &[usize] {
        &self.root
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn contains(&self, y: usize) -> bool {
        self.slot.get(y).is_some_and(|&s| s != NONE)
    }

    /// Endpoints in the order they were discovered.
    pub fn discovered(&self) -> impl Iterator<Item = usize> + '_ {
        self.states.iter().map(|s| s.0)
    }

    /// Endpoints in increasing order.
    pub fn endpoints(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.discovered().collect();
        out.sort_unstable();
        out
    }

    fn materialize(&self, mut state: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        while state != 0 {
            let (_, parent, pivot) = self.states[state];
            pivots.push(pivot);
            state = parent;
        }
        let mut path = self.root.clone();
        for &pivot in pivots.iter().rev() {
            rotate(&mut path, pivot);
        }
        path
    }

    /// A path from the start to `y` on the root's vertex set.
    pub fn path_to(&self, y: usize) -> Option<Vec<usize>> {
        let s = *self.slot.get(y)?;
        (s != NONE).then(|| self.materialize(s))
    }
}

fn rotate(path: &mut [usize], pivot: usize) {
    let i = path
        .iter()
        .position(|&v| v == pivot)
        .expect("pivot on path");
    path[i + 1..].reverse();
}

/// The full rotation closure of `path` in `g`.
pub fn rotation_closure(g: &Graph, path: &[usize]) -> Result<RotationClosure> {
    if !is_path(g, path) {
        return Err(Error::Input("not a path of the graph".into()));
    }
    Ok(closure_until(g, path, |_| false).0)
}

/// Breadth-first rotation search that stops as soon as `stop(endpoint)`
/// holds, returning that endpoint too.
pub(crate) fn closure_until(
    g: &Graph,
    path: &[usize],
    mut stop: impl FnMut(usize) -> bool,
) -> (RotationClosure, Option<usize>) {
    let n = g.n();
    let mut c = RotationClosure {
        root: path.to_vec(),
        states: vec![(path[path.len() - 1], NONE, NONE)],
        slot: vec![NONE; n + 1],
    };
    let end = path[path.len() - 1];
    c.slot[end] = 0;
    if stop(end) {
        return (c, Some(end));
    }
    let mut pos = vec![NONE; n + 1];
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let p = c.materialize(s);
        for (i, &v) in p.iter().enumerate() {
            pos[v] = i;
        }
        let k = p.len() - 1;
        let y = p[k];
        for &x in g.neighbors(y) {
            let i = pos[x];
            if i == NONE || i + 1 >= k {
                continue;
            }
            let fresh = p[i + 1];
            if c.slot[fresh] != NONE {
                continue;
            }
            c.slot[fresh] = c.states.len();
            c.states.push((fresh, s, x));
            if stop(fresh) {
                for &v in &p {
                    pos[v] = NONE;
                }
                return (c, Some(fresh));
            }
            queue.push_back(c.states.len() - 1);
        }
        for &v in &p {
            pos[v] = NONE;
        }
    }
    (c, None)
}

/// Rotation-extension: grows `path` until no rotation from either end
/// exposes an endpoint with a neighbour off the path. Tie-breaking follows
/// the sorted adjacency lists, so the result is deterministic.
pub fn extend_maximal(g: &Graph, path: Vec<usize>) -> Vec<usize> {
    let mut path = path;
    let mut on = vec![false; g.n() + 1];
    for &v in &path {
        on[v] = true;
    }
    let outside = |on: &[bool], v: usize| g.neighbors(v).iter().copied().find(|&x| !on[x]);
    loop {
        if path.len() == g.n() {
            return path;
        }
        let end = path[path.len() - 1];
        if let Some(x) = outside(&on, end) {
            on[x] = true;
            path.push(x);
            continue;
        }
        if let Some(x) = outside(&on, path[0]) {
            on[x] = true;
            path.reverse();
            path.push(x);
            continue;
        }
        let mut grown = false;
        for _ in 0..2 {
            let (c, hit) = closure_until(g, &path, |y| outside(&on, y).is_some());
            if let Some(y) = hit {
                path = c.path_to(y).unwrap();
                let x = outside(&on, y).unwrap();
                on[x] = true;
                path.push(x);
                grown = true;
                break;
            }
            path.reverse();
        }
        if !grown {
            return path;
        }
    }
}

/// How many second-level closures `close_to_cycle` explores.
const SECOND_LEVEL: usize = 24;

/// Tries to turn `path` into a cycle on the same vertex set using rotations
/// from both ends. Returns the cycle as a vertex sequence whose first and
/// last vertices are adjacent.
pub fn close_to_cycle(g: &Graph, path: &[usize]) -> Option<Vec<usize>> {
    if path.len() < 3 {
        return None;
    }
    let start = path[0];
    let (c, hit) = closure_until(g, path, |y| g.has_edge(start, y));
    if let Some(y) = hit {
        return c.path_to(y);
    }
    // Fix each discovered endpoint in turn and rotate the other end.
    for y in c.discovered().take(SECOND_LEVEL) {
        let mut p = c.path_to(y).unwrap();
        p.reverse();
        let (cy, hit) = closure_until(g, &p, |z| g.has_edge(y, z));
        if let Some(z) = hit {
            return cy.path_to(z);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_has_only_its_end() {
        let g = Graph::path(4);
        let c = rotation_closure(&g, &[1, 2, 3, 4]).unwrap();
        assert_eq!(c.endpoints(), vec![4]);
    }

    #[test]
    fn k4_reaches_every_other_vertex() {
        let g = Graph::complete(4);
        let c = rotation_closure(&g, &[1, 2, 3, 4]).unwrap();
        assert_eq!(c.endpoints(), vec![2, 3, 4]);
        for y in c.endpoints() {
            let p = c.path_to(y).unwrap();
            assert!(is_path(&g, &p));
            assert_eq!((p[0], p[3]), (1, y));
        }
    }

    #[test]
    fn four_cycle_endpoints_are_the_neighbours() {
        let g = Graph::cycle(4).unwrap();
        let c = rotation_closure(&g, &[1, 2, 3, 4]).unwrap();
        assert_eq!(c.endpoints(), vec![2, 4]);
    }

    #[test]
    fn rejects_non_paths() {
        let g = Graph::path(4);
        assert!(rotation_closure(&g, &[1, 3]).is_err());
    }

    #[test]
    fn extension_finds_hamilton_path_of_cycle() {
        let g = Graph::cycle(7).unwrap();
        let p = extend_maximal(&g, vec![3]);
        assert_eq!(p.len(), 7);
        assert!(is_path(&g, &p));
        let c = close_to_cycle(&g, &p).unwrap();
        assert!(g.has_edge(c[0], c[6]));
    }

    #[test]
    fn extension_uses_rotations() {
        // Path 1-2-3-4 with a chord {4,2} and a pendant 5 at 3: the only way
        // to reach 5 is to rotate 4 to the front.
        let g = Graph::from_edges(5, [(1, 2), (2, 3), (3, 4), (2, 4), (3, 5)]).unwrap();
        let p = extend_maximal(&g, vec![1, 2, 3, 4]);
        assert_eq!(p.len(), 5);
        assert!(is_path(&g, &p));
    }
}

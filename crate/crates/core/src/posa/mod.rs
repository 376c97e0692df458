//! Pósa rotation-extension, boosters, expander certification and the
//! sparsify-then-augment Hamiltonicity procedure.
//!
//! Paths are vertex sequences `v_0, ..., v_k`. A rotation with fixed
//! endpoint `v_0` uses an edge `{v_k, v_i}` with `i < k - 1` and produces
//! `v_0, ..., v_i, v_k, v_{k-1}, ..., v_{i+1}`, whose new endpoint is
//! `v_{i+1}`.

mod booster;
pub mod exact;
mod expander;
mod hamilton;
mod rotation;
mod walk;

pub use booster::{find_boosters, BoosterMode};
pub use expander::{
    certify_expander, CertifyMethod, CertifyScope, ExpanderCertificate, EXPANDER_EXACT_LIMIT,
};
pub use hamilton::{
    hamilton_path_endpoints, hamilton_path_from, hamiltonize, sparsify, EndpointSet, HamiltonCycle,
    HamiltonizeConfig, HamiltonizeFailure, HamiltonizeOutcome,
};
pub use rotation::{close_to_cycle, extend_maximal, rotation_closure, RotationClosure};
pub use walk::rotation_walk;

use crate::graph::Graph;

/// Whether `p` is a path of `g`: distinct vertices, consecutive ones
/// adjacent. A single vertex is a path.
pub fn is_path(g: &Graph, p: &[usize]) -> bool {
    if p.is_empty() || p.iter().any(|&v| !g.contains_vertex(v)) {
        return false;
    }
    let mut seen = vec![false; g.n() + 1];
    for &v in p {
        if std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    p.windows(2).all(|e| g.has_edge(e[0], e[1]))
}

/// Whether `cycle` (listed without repeating its first vertex) is a Hamilton
/// cycle of `g[w]`. Requires `|w| ≥ 3`.
pub fn is_hamilton_cycle(g: &Graph, w: &[usize], cycle: &[usize]) -> bool {
    if w.len() < 3 || cycle.len() != w.len() || !is_path(g, cycle) {
        return false;
    }
    let mut a = w.to_vec();
    let mut b = cycle.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b && g.has_edge(cycle[0], cycle[cycle.len() - 1])
}

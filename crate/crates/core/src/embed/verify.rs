use serde::{Deserialize, Serialize};

use super::Embedding;
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnosis: Option<String>,
}

impl Verification {
    fn fail(msg: String) -> Self {
        Verification {
            ok: false,
            diagnosis: Some(msg),
        }
    }
}

/// Checks that `e.phi` maps the KeyChain described by `e.params` onto a
/// spanning subgraph of `g`. The template edges are rebuilt here from
/// `(n, t, ℓ)` alone.
pub fn verify_embedding(g: &Graph, e: &Embedding) -> Verification {
    let (n, t, ell) = (e.params.n, e.params.t, e.params.ell);
    if n < t + 3 || (t > 0 && (ell == 0 || t * (ell + 1) > n)) {
        return Verification::fail(format!("({n}, {t}, {ell}) is not a KeyChain shape"));
    }
    if g.n() != n {
        return Verification::fail(format!("host has {} vertices, template has {n}", g.n()));
    }
    if e.phi.len() != n {
        return Verification::fail(format!("map has {} entries, expected {n}", e.phi.len()));
    }
    let mut hit = vec![0usize; n + 1];
    for (a, &x) in e.phi.iter().enumerate() {
        if x == 0 || x > n {
            return Verification::fail(format!(
                "template vertex {} maps outside the host: {x}",
                a + 1
            ));
        }
        if hit[x] != 0 {
            return Verification::fail(format!(
                "template vertices {} and {} both map to {x}",
                hit[x],
                a + 1
            ));
        }
        hit[x] = a + 1;
    }
    let c = n - t;
    let phi = |a: usize| e.phi[a - 1];
    let ring = (1..=c).map(|i| (i, if i == c { 1 } else { i + 1 }));
    let keys = (1..=t).map(|i| (i * ell, c + i));
    for (a, b) in ring.chain(keys) {
        if !g.has_edge(phi(a), phi(b)) {
            return Verification::fail(format!(
                "template edge {{{a},{b}}} maps to {{{},{}}}, which is not a host edge",
                phi(a),
                phi(b)
            ));
        }
    }
    Verification {
        ok: true,
        diagnosis: None,
    }
}

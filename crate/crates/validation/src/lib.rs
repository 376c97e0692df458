//! Reference implementations used to cross-check `keychain-core`.
//!
//! Everything here works on small graphs (at most 31 vertices) with `u32`
//! bitmask adjacency, vertex `v` at bit `v - 1`. None of it shares code
//! paths with the library it checks.

pub mod paths;
pub mod perm;
pub mod sets;
pub mod trees;

use keychain_core::Graph;

/// Neighbour masks, index `v - 1`.
pub fn masks(g: &Graph) -> Vec<u32> {
    assert!(g.n() <= 31, "bitmask oracles take at most 31 vertices");
    (1..=g.n())
        .map(|u| g.neighbors(u).iter().fold(0u32, |m, &v| m | 1 << (v - 1)))
        .collect()
}

/// Zero-based indices of the set bits.
pub fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

pub fn to_mask(vertices: &[usize]) -> u32 {
    vertices.iter().fold(0, |m, &v| m | 1 << (v - 1))
}

/// External neighbourhood of `set`.
pub fn ext(adj: &[u32], set: u32) -> u32 {
    bits(set).fold(0, |m, v| m | adj[v]) & !set
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks_of_a_path() {
        let g = Graph::path(4);
        let adj = masks(&g);
        assert_eq!(adj, vec![0b0010, 0b0101, 0b1010, 0b0100]);
        assert_eq!(ext(&adj, to_mask(&[2, 3])), 0b1001);
        assert_eq!(bits(0b1010).collect::<Vec<_>>(), vec![1, 3]);
    }
}

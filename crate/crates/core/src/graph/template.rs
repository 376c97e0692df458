use super::Graph;
use crate::error::{Error, Result};
use crate::params::KeyChainParams;

/// Checks the size constraints of `KC(n, t, ℓ)`, naming the first one that
/// fails.
pub fn check_template_shape(n: usize, t: usize, ell: usize) -> Result<()> {
    if n < t + 3 {
        return Err(Error::Parameter(format!(
            "cycle length n - t = {} is below 3",
            n as i64 - t as i64
        )));
    }
    if t > 0 && ell == 0 {
        return Err(Error::Parameter(
            "ell must be at least 1 when t >= 1".into(),
        ));
    }
    if t * (ell + 1) > n {
        return Err(Error::Parameter(format!(
            "t(ell+1) <= n (equivalently t*ell <= n-t) fails: {}*{} > {n}",
            t,
            ell + 1
        )));
    }
    Ok(())
}

/// The KeyChain: the cycle `1, 2, ..., n-t, 1` plus the key edges
/// `{iℓ, n-t+i}` for `i` in `1..=t`.
pub fn keychain_template(params: &KeyChainParams) -> Result<Graph> {
    keychain_graph(params.n, params.t, params.ell)
}

pub fn keychain_graph(n: usize, t: usize, ell: usize) -> Result<Graph> {
    check_template_shape(n, t, ell)?;
    let c = n - t;
    let mut g = Graph::empty(n);
    for i in 1..c {
        g.insert_unchecked(i, i + 1);
    }
    g.insert_unchecked(1, c);
    for i in 1..=t {
        g.insert_unchecked(i * ell, c + i);
    }
    g.finish_unsorted();
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kc_24_5_3() {
        let g = keychain_graph(24, 5, 3).unwrap();
        assert_eq!((g.n(), g.m()), (24, 24));
        for (i, key) in (20..=24).enumerate() {
            assert_eq!(g.neighbors(key), &[3 * (i + 1)]);
        }
        assert!(g.has_edge(1, 19));
        assert!(!g.has_edge(19, 20));
    }

    #[test]
    fn no_keys_is_a_cycle() {
        assert_eq!(keychain_graph(9, 0, 4).unwrap(), Graph::cycle(9).unwrap());
    }

    #[test]
    fn degree_multiset_12_2_3() {
        let g = keychain_graph(12, 2, 3).unwrap();
        let mut degs: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
        degs.sort();
        assert_eq!(degs, [vec![1; 2], vec![2; 8], vec![3; 2]].concat());
        assert!(g.is_connected());
        assert_eq!(g.m(), g.n());
    }

    #[test]
    fn constraint_names() {
        let e = keychain_graph(10, 3, 3).unwrap_err();
        assert!(e.to_string().contains("t(ell+1)"), "{e}");
        assert!(keychain_graph(20, 4, 4).is_ok());
        assert!(keychain_graph(4, 2, 1).is_err());
    }
}

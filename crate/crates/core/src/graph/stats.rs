use std::collections::BTreeSet;

use super::{mask_of, Graph};
use crate::error::{Error, Result};

/// Edge counts and neighbourhoods for a pair of disjoint vertex sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetStats {
    pub e_u: usize,
    pub e_uw: usize,
    /// External neighbourhood of `U`, sorted.
    pub n_u: Vec<usize>,
    /// `N(U) ∩ N(W)`, sorted.
    pub joint: Vec<usize>,
}

fn check_set(g: &Graph, s: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; g.n() + 1];
    for &v in s {
        g.check_vertex(v)?;
        mask[v] = true;
    }
    Ok(mask)
}

fn check_disjoint(u: &[bool], w: &[usize]) -> Result<()> {
    match w.iter().find(|&&v| u[v]) {
        Some(&v) => Err(Error::Overlap(v)),
        None => Ok(()),
    }
}

/// Number of edges with both ends in `u`.
pub fn edges_within(g: &Graph, u: &[usize]) -> Result<usize> {
    let mask = check_set(g, u)?;
    let mut twice = 0;
    let mut seen = vec![false; g.n() + 1];
    for &v in u {
        if std::mem::replace(&mut seen[v], true) {
            continue;
        }
        twice += g.degree_into(v, &mask);
    }
    Ok(twice / 2)
}

/// Number of edges with one end in `u` and the other in `w`. The sets must
/// be disjoint.
pub fn edges_between(g: &Graph, u: &[usize], w: &[usize]) -> Result<usize> {
    let mu = check_set(g, u)?;
    let mw = check_set(g, w)?;
    check_disjoint(&mu, w)?;
    Ok(g.vertices()
        .filter(|&v| mu[v])
        .map(|v| g.degree_into(v, &mw))
        .sum())
}

/// External neighbourhood `N(U)`: vertices outside `U` with a neighbour in
/// `U`, sorted.
pub fn neighborhood(g: &Graph, u: &[usize]) -> Result<Vec<usize>> {
    let mask = check_set(g, u)?;
    Ok(external(g, &mask))
}

fn external(g: &Graph, mask: &[bool]) -> Vec<usize> {
    let mut out = BTreeSet::new();
    for v in g.vertices().filter(|&v| mask[v]) {
        out.extend(g.neighbors(v).iter().copied().filter(|&x| !mask[x]));
    }
    out.into_iter().collect()
}

/// `N(U) ∩ N(W)` for disjoint `U`, `W`.
pub fn common_neighborhood(g: &Graph, u: &[usize], w: &[usize]) -> Result<Vec<usize>> {
    let mu = check_set(g, u)?;
    let mw = check_set(g, w)?;
    check_disjoint(&mu, w)?;
    let nw = mask_of(g.n(), &external(g, &mw));
    Ok(external(g, &mu).into_iter().filter(|&v| nw[v]).collect())
}

pub fn set_stats(g: &Graph, u: &[usize], w: &[usize]) -> Result<SetStats> {
    Ok(SetStats {
        e_u: edges_within(g, u)?,
        e_uw: edges_between(g, u, w)?,
        n_u: neighborhood(g, u)?,
        joint: common_neighborhood(g, u, w)?,
    })
}

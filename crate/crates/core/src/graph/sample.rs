use rand::Rng;

use super::Graph;
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

/// Samples `G(n, p)`: each of the `n(n-1)/2` pairs is an edge independently
/// with probability `p`. Uses geometric skipping over the pair sequence, so
/// the cost is proportional to `n + m`. Deterministic in `(n, p, seed)`.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::Parameter("G(n,p) needs n >= 1".into()));
    }
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::Parameter(format!("probability {p} outside [0, 1]")));
    }
    if p == 1.0 {
        return Ok(Graph::complete(n));
    }
    let mut g = Graph::empty(n);
    if p == 0.0 {
        return Ok(g);
    }
    let mut rng = rng_from_seed(seed);
    let log_q = (1.0 - p).ln();
    // Pairs (v, w) with w < v, 0-based, visited in order v = 1, 2, ...
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.random();
        let skip = ((1.0 - r).ln() / log_q).floor();
        w += 1 + if skip.is_finite() {
            skip as i64
        } else {
            i64::MAX / 4
        };
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            g.insert_unchecked(w as usize + 1, v + 1);
        }
    }
    g.finish_unsorted();
    Ok(g)
}

/// `p = (ln n + c) / n`, clamped to `[0, 1]`.
pub fn offset_probability(n: usize, c: f64) -> f64 {
    (((n as f64).ln() + c) / n as f64).clamp(0.0, 1.0)
}

pub fn sample_gnp_offset(n: usize, c: f64, seed: u64) -> Result<Graph> {
    sample_gnp(n, offset_probability(n, c), seed)
}

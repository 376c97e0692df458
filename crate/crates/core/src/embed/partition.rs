use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::Profile;
use crate::seed::rng_from_seed;

/// Degree bounds required of non-small, non-key vertices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionBounds {
    /// Lower bound on `d(v, U_i)`; `None` disables it.
    pub lower: Option<f64>,
    /// Upper bound on `d(v, U_i)`.
    pub upper: f64,
    /// Lower bound on `d(v, V')`.
    pub vprime_min: f64,
    /// Whether (d) also applies to small vertices next to a key's
    /// neighbourhood, which the corrections keep out of `U1`.
    pub strict_small: bool,
}

impl PartitionBounds {
    /// `γ ln n/100 ≤ d(v, U_i) ≤ 100γ ln n` and `d(v, V') ≥ ln n/20`.
    pub fn paper(n: usize, gamma: f64) -> Self {
        let l = (n.max(2) as f64).ln();
        PartitionBounds {
            lower: Some(gamma * l / 100.0),
            upper: 100.0 * gamma * l,
            vprime_min: l / 20.0,
            strict_small: true,
        }
    }

    /// As [`paper`](Self::paper) without the reservoir lower bound, which
    /// reservoirs of a few dozen vertices cannot meet, and with small
    /// vertices allowed to touch `K ∪ N(K)`.
    pub fn desk(n: usize, gamma: f64) -> Self {
        PartitionBounds {
            lower: None,
            strict_small: false,
            ..Self::paper(n, gamma)
        }
    }

    pub fn for_profile(profile: Profile, n: usize, gamma: f64) -> Self {
        match profile {
            Profile::Paper => Self::paper(n, gamma),
            Profile::Desk { .. } => Self::desk(n, gamma),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionConfig {
    pub gamma: f64,
    pub small_threshold: usize,
    pub bounds: PartitionBounds,
    pub max_resamples: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub keys: Vec<usize>,
    pub u1: Vec<usize>,
    pub u2: Vec<usize>,
    pub vprime: Vec<usize>,
    pub small: Vec<usize>,
    /// The pair `(x¹_j, x²_j)` drawn in each blob.
    pub pairs: Vec<(usize, usize)>,
    pub resamples: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionFailure {
    pub violations: Vec<String>,
    pub resamples: usize,
}

struct Violation {
    vertex: usize,
    message: String,
    /// Resampling the blobs around `vertex` may fix it.
    local: bool,
}

struct State<'a> {
    g: &'a Graph,
    keys: &'a [usize],
    small: Vec<usize>,
    s: usize,
    r: usize,
    pairs: Vec<(usize, usize)>,
}

impl State<'_> {
    fn draw(&mut self, j: usize, rng: &mut ChaCha8Rng) {
        let pick = sample(rng, self.s, 2);
        let base = j * self.s;
        self.pairs[j] = (base + pick.index(0) + 1, base + pick.index(1) + 1);
    }

    fn blob_of(&self, v: usize) -> Option<usize> {
        let j = (v - 1) / self.s;
        (j < self.r).then_some(j)
    }

    /// Membership: 0 = V', 1 = U1, 2 = U2.
    fn assign(&self) -> Vec<u8> {
        let n = self.g.n();
        let mut k_plus = vec![false; n + 1];
        let mut s_plus = vec![false; n + 1];
        for &v in self.keys {
            k_plus[v] = true;
            for &x in self.g.neighbors(v) {
                k_plus[x] = true;
            }
        }
        for &v in &self.small {
            s_plus[v] = true;
            for &x in self.g.neighbors(v) {
                s_plus[x] = true;
            }
        }
        for v in 1..=n {
            s_plus[v] |= k_plus[v];
        }
        let mut side = vec![0u8; n + 1];
        for &(a, b) in &self.pairs {
            side[a] = 1;
            side[b] = 2;
        }
        for v in 1..=n {
            if side[v] == 2 && s_plus[v] {
                side[v] = 0;
            }
            if s_plus[v] {
                side[v] = 1;
            }
            if side[v] == 1 && k_plus[v] {
                side[v] = 0;
            }
        }
        side
    }

    fn violations(&self, side: &[u8], bounds: &PartitionBounds) -> Vec<Violation> {
        let g = self.g;
        let n = g.n();
        let mut is_key = vec![false; n + 1];
        for &k in self.keys {
            is_key[k] = true;
        }
        let mut is_small = vec![false; n + 1];
        for &v in &self.small {
            is_small[v] = true;
        }
        let mut out = Vec::new();
        for &k in self.keys {
            if side[k] != 0 {
                out.push(Violation {
                    vertex: k,
                    message: format!("(b) key {k} is not in V'"),
                    local: false,
                });
            }
            if let Some(&x) = g.neighbors(k).iter().find(|&&x| side[x] != 0 || is_key[x]) {
                out.push(Violation {
                    vertex: k,
                    message: format!("(b) key {k} has neighbour {x} outside V' minus K"),
                    local: false,
                });
            }
        }
        let mut k_plus = vec![false; n + 1];
        for &k in self.keys {
            k_plus[k] = true;
            g.neighbors(k).iter().for_each(|&x| k_plus[x] = true);
        }
        for &v in self.small.iter().filter(|&&v| !is_key[v]) {
            if let Some(&x) = std::iter::once(&v)
                .chain(g.neighbors(v))
                .find(|&&x| side[x] != 1 && (bounds.strict_small || !k_plus[x]))
            {
                out.push(Violation {
                    vertex: v,
                    message: format!("(d) small vertex {v}: {x} is not in U1"),
                    local: false,
                });
            }
        }
        for v in g.vertices().filter(|&v| !is_small[v] && !is_key[v]) {
            let mut d = [0usize; 3];
            for &x in g.neighbors(v) {
                d[side[x] as usize] += 1;
            }
            let bad = |x: usize| {
                bounds.lower.is_some_and(|lo| (x as f64) < lo) || x as f64 > bounds.upper
            };
            if bad(d[1]) || bad(d[2]) || (d[0] as f64) < bounds.vprime_min {
                out.push(Violation {
                    vertex: v,
                    message: format!(
                        "(c) vertex {v}: d(v,U1) = {}, d(v,U2) = {}, d(v,V') = {}",
                        d[1], d[2], d[0]
                    ),
                    local: true,
                });
            }
        }
        out
    }
}

/// Splits `V(g)` into reservoirs `U1`, `U2` and the remainder `V'` by
/// drawing one ordered pair per blob of `⌈1/γ⌉` consecutive vertices, then
/// moving small vertices and their neighbourhoods into `U1`. Violated
/// degree conditions are repaired by redrawing the pairs of the blobs that
/// meet the offending vertex's neighbourhood.
pub fn partition_vertices(
    g: &Graph,
    keys: &[usize],
    config: &PartitionConfig,
    seed: u64,
) -> Result<std::result::Result<Partition, PartitionFailure>> {
    let n = g.n();
    if !(config.gamma > 0.0 && config.gamma < 0.5) {
        return Err(Error::Parameter(format!(
            "gamma must lie in (0, 1/2), got {}",
            config.gamma
        )));
    }
    let s = (1.0 / config.gamma).ceil() as usize;
    if s > n {
        return Err(Error::Parameter(format!("blob size {s} exceeds n = {n}")));
    }
    for &k in keys {
        g.check_vertex(k)?;
    }
    let small: Vec<usize> = g
        .vertices()
        .filter(|&v| g.degree(v) <= config.small_threshold)
        .collect();
    let r = n / s;
    let mut st = State {
        g,
        keys,
        small,
        s,
        r,
        pairs: vec![(0, 0); r],
    };
    let mut rng = rng_from_seed(seed);
    for j in 0..r {
        st.draw(j, &mut rng);
    }
    let mut resamples = 0;
    loop {
        let side = st.assign();
        let bad = st.violations(&side, &config.bounds);
        let fatal = bad.iter().any(|v| !v.local);
        if bad.is_empty() || fatal || resamples >= config.max_resamples {
            if !bad.is_empty() {
                return Ok(Err(PartitionFailure {
                    violations: bad.into_iter().map(|v| v.message).collect(),
                    resamples,
                }));
            }
            let pick = |want: u8| g.vertices().filter(|&v| side[v] == want).collect();
            let mut sorted_keys = keys.to_vec();
            sorted_keys.sort_unstable();
            return Ok(Ok(Partition {
                keys: sorted_keys,
                u1: pick(1),
                u2: pick(2),
                vprime: pick(0),
                small: st.small,
                pairs: st.pairs,
                resamples,
            }));
        }
        // Redraw the blobs that can influence the first violated event.
        let v = bad[0].vertex;
        let mut blobs: Vec<usize> = g
            .neighbors(v)
            .iter()
            .filter_map(|&x| st.blob_of(x))
            .collect();
        blobs.sort_unstable();
        blobs.dedup();
        for j in blobs {
            st.draw(j, &mut rng);
        }
        resamples += 1;
    }
}

/// Re-checks the structural conditions of a partition: disjointness,
/// keys in `V'` with neighbourhoods in `V' \ K`, small non-keys with their
/// neighbourhoods in `U1`, and the degree bounds. Returns the violations.
pub fn check_partition(g: &Graph, p: &Partition, bounds: &PartitionBounds) -> Vec<String> {
    let n = g.n();
    let mut side = vec![u8::MAX; n + 1];
    let mut out = Vec::new();
    for (label, set) in [(0u8, &p.vprime), (1, &p.u1), (2, &p.u2)] {
        for &v in set {
            if side[v] != u8::MAX {
                out.push(format!("vertex {v} is in two parts"));
            }
            side[v] = label;
        }
    }
    if let Some(v) = g.vertices().find(|&v| side[v] == u8::MAX) {
        out.push(format!("vertex {v} is in no part"));
        return out;
    }
    let st = State {
        g,
        keys: &p.keys,
        small: p.small.clone(),
        s: 1,
        r: 0,
        pairs: Vec::new(),
    };
    out.extend(st.violations(&side, bounds).into_iter().map(|v| v.message));
    out
}

use serde::{Deserialize, Serialize};

/// Factor applied to the neighbourhood bound of P5 under the desk profile.
pub const DESK_MULTIPLIER: f64 = 4.0;

/// Every numeric constant appearing in P1–P8, in one place.
///
/// Fields named after a divisor `c` enter as `x / c`; the others as
/// `c · x`. All logarithms are natural.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub label: String,
    pub gamma: f64,
    /// `Small = D_{≤ ⌊ln n / c⌋}`.
    pub small_divisor: f64,
    /// P1: `Δ ≤ c ln n`.
    pub max_degree: f64,
    /// P3: paths of length at most `c ln n / ln ln n`.
    pub short_path: f64,
    /// P4: `|Small ∪ N(Small)| ≤ n^c`.
    pub small_cover_exponent: f64,
    /// P5: `|U| ≤ c n / ln n`.
    pub p5_size: f64,
    /// P5: `e(U, V∖U) ≥ |U| ln n / c`.
    pub p5_edges: f64,
    /// P5: `|N(U)| ≤ |U| ln n / c`.
    pub p5_neighbours: f64,
    /// P6: `|U| ≤ γ n / c`.
    pub p6_size: f64,
    /// P6: `e(U) ≤ γ ln n |U| / c`.
    pub p6_edges: f64,
    /// P7: `|U|, |W| ≥ c n / ln n`.
    pub p7_lower: f64,
    /// P7: `|U|, |W| ≤ n / c`.
    pub p7_upper: f64,
    /// P7: `|N(U) ∩ N(W)| ≥ n / c`.
    pub p7_target: f64,
    /// P8: `|U|, |W| ≥ γ n / c`.
    pub p8_size: f64,
    /// P8: `e(U, W) ≥ c |U||W| ln n / n`.
    pub p8_density: f64,
}

impl Constants {
    pub fn paper() -> Self {
        Constants {
            label: "paper".into(),
            gamma: 1e-4,
            small_divisor: 10.0,
            max_degree: 10.0,
            short_path: 0.2,
            small_cover_exponent: 0.6,
            p5_size: 10.0,
            p5_edges: 11.0,
            p5_neighbours: 18.0,
            p6_size: 5000.0,
            p6_edges: 1000.0,
            p7_lower: 10.0,
            p7_upper: 9.0,
            p7_target: 9.0,
            p8_size: 25000.0,
            p8_density: 0.5,
        }
    }

    /// The paper's constants with `γ = 0.01`, `Small = D_{≤ ⌊ln n / 4⌋}`
    /// and the P5 neighbourhood bound relaxed by [`DESK_MULTIPLIER`].
    pub fn desk() -> Self {
        Constants {
            label: "desk".into(),
            gamma: 0.01,
            small_divisor: 4.0,
            p5_neighbours: 18.0 / DESK_MULTIPLIER,
            ..Constants::paper()
        }
    }

    pub fn for_profile(name: &str) -> Option<Self> {
        match name {
            "paper" => Some(Self::paper()),
            "desk" => Some(Self::desk()),
            _ => None,
        }
    }

    pub fn small_threshold(&self, n: usize) -> usize {
        if n < 2 {
            return 0;
        }
        ((n as f64).ln() / self.small_divisor).floor() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_thresholds() {
        let d = Constants::desk();
        assert_eq!(d.small_threshold(3000), 2);
        assert_eq!(Constants::paper().small_threshold(3000), 0);
        assert_eq!(d.p5_neighbours, 4.5);
    }
}

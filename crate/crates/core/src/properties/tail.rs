use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A tail probability to bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailBoundQuery {
    /// `P(X ≤ αμ) ≤ exp(−μ(α ln α − α + 1))`, `0 < α ≤ 1`.
    ChernoffLower { mu: f64, alpha: f64 },
    /// `P(X ≥ βμ) ≤ exp(−μ(β ln β − β + 1))`, `β ≥ 1`.
    ChernoffUpper { mu: f64, beta: f64 },
    /// `X ~ Bin(n, p)`: `P(X ≥ k) ≤ (enp/k)^k`, `1 ≤ k ≤ n`.
    BinomialUpper { n: u64, p: f64, k: f64 },
    /// `X ~ Bin(n, p)`: `P(X ≤ k) ≤ (enp/(kq))^k e^{−np}`, `1 ≤ k ≤ np/q`.
    BinomialLower { n: u64, p: f64, k: f64 },
}

fn domain(msg: String) -> Error {
    Error::Parameter(msg)
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(domain(format!("probability {p} outside [0, 1]")))
    }
}

/// Natural log of the bound, before capping at 1.
pub fn log_tail_bound(q: TailBoundQuery) -> Result<f64> {
    match q {
        TailBoundQuery::ChernoffLower { mu, alpha } => {
            if !(mu >= 0.0 && alpha > 0.0 && alpha <= 1.0) {
                return Err(domain(format!(
                    "need mu >= 0 and 0 < alpha <= 1, got {mu}, {alpha}"
                )));
            }
            Ok(-mu * (alpha * alpha.ln() - alpha + 1.0))
        }
        TailBoundQuery::ChernoffUpper { mu, beta } => {
            if !(mu >= 0.0 && beta >= 1.0 && beta.is_finite()) {
                return Err(domain(format!(
                    "need mu >= 0 and beta >= 1, got {mu}, {beta}"
                )));
            }
            Ok(-mu * (beta * beta.ln() - beta + 1.0))
        }
        TailBoundQuery::BinomialUpper { n, p, k } => {
            check_p(p)?;
            if !(k >= 1.0 && k <= n as f64) {
                return Err(domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
            }
            let np = n as f64 * p;
            if np == 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            Ok(k * (1.0 + np.ln() - k.ln()))
        }
        TailBoundQuery::BinomialLower { n, p, k } => {
            check_p(p)?;
            let q = 1.0 - p;
            let np = n as f64 * p;
            if !(q > 0.0 && k >= 1.0 && k <= np / q) {
                return Err(domain(format!(
                    "need q > 0 and 1 <= k <= np/q, got k = {k}, np = {np}, q = {q}"
                )));
            }
            Ok(k * (1.0 + np.ln() - k.ln() - q.ln()) - np)
        }
    }
}

/// `min(1, bound)`, evaluated in log space.
pub fn tail_bound_eval(q: TailBoundQuery) -> Result<f64> {
    Ok(log_tail_bound(q)?.min(0.0).exp())
}

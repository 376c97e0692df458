//! KeyChain parameters `(n, t, ℓ)` and the growth sequence `a_j`.
//!
//! `t = ⌊ln n⌋`, `a_1 = 1`, `a_{j+1} = ⌈a_j · g⌉`, `j₀` is the first index
//! with `a_j ≥ ⌈10n / ln n⌉` and `ℓ = 2j₀`. The paper profile uses
//! `g = ln n / 100`; the desk profile takes an explicit `g > 1`, defaulting
//! to `max(ln n / 100, 2)`.
//!
//! All roundings are exact. `ln n` is evaluated in binary fixed point as an
//! interval, and the working precision doubles until every floor or ceiling
//! taken from it is unambiguous. Since `ln n` is irrational for `n ≥ 2`
//! this always terminates.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::check_template_shape;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Profile {
    Paper,
    Desk { growth: Option<f64> },
}

impl Profile {
    pub fn desk() -> Self {
        Profile::Desk { growth: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyChainParams {
    pub n: usize,
    pub t: usize,
    pub ell: usize,
    pub j0: Option<usize>,
    pub a_seq: Vec<usize>,
}

impl KeyChainParams {
    /// Explicit `(n, t, ℓ)` without a growth sequence.
    pub fn new(n: usize, t: usize, ell: usize) -> Result<Self> {
        check_template_shape(n, t, ell)?;
        Ok(KeyChainParams {
            n,
            t,
            ell,
            j0: None,
            a_seq: Vec::new(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        check_template_shape(self.n, self.t, self.ell)?;
        if let Some(j0) = self.j0 {
            if self.a_seq.len() != j0 || self.ell != 2 * j0 {
                return Err(Error::Parameter(format!(
                    "sequence of length {} does not match j0 = {j0}, ell = {}",
                    self.a_seq.len(),
                    self.ell
                )));
            }
        }
        Ok(())
    }

    /// `a_j` for `1 ≤ j ≤ j₀`.
    pub fn a(&self, j: usize) -> Option<usize> {
        j.checked_sub(1).and_then(|i| self.a_seq.get(i).copied())
    }
}

/// Parameters for arbitrarily large `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigParams {
    pub n: BigUint,
    pub t: BigUint,
    pub ell: usize,
    pub j0: usize,
    pub a_seq: Vec<BigUint>,
    /// `⌈10n / ln n⌉`.
    pub target: BigUint,
}

impl BigParams {
    pub fn to_small(&self) -> Option<KeyChainParams> {
        Some(KeyChainParams {
            n: self.n.to_usize()?,
            t: self.t.to_usize()?,
            ell: self.ell,
            j0: Some(self.j0),
            a_seq: self
                .a_seq
                .iter()
                .map(|a| a.to_usize())
                .collect::<Option<Vec<_>>>()?,
        })
    }

    /// JSON with every integer as a decimal string, for `n` beyond `u64`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n.to_string(),
            "t": self.t.to_string(),
            "ell": self.ell,
            "j0": self.j0,
            "a_seq": self.a_seq.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        })
    }
}

pub fn compute_parameters(n: usize, profile: Profile) -> Result<KeyChainParams> {
    let big = compute_parameters_big(&BigUint::from(n), profile)?;
    Ok(big.to_small().expect("values bounded by n fit in usize"))
}

pub fn compute_parameters_big(n: &BigUint, profile: Profile) -> Result<BigParams> {
    if *n < BigUint::from(3u32) {
        return Err(Error::Parameter(format!("n must be at least 3, got {n}")));
    }
    let mut ln = LnBounds::new(n);
    let growth = match profile {
        Profile::Paper => {
            if !ln.exceeds(100) {
                return Err(Error::NonProgress(format!(
                    "ln n / 100 ~ {:.4}",
                    ln.approx() / 100.0
                )));
            }
            Growth::LnOver100
        }
        Profile::Desk { growth: Some(g) } => {
            if !(g.is_finite() && g > 1.0) {
                return Err(Error::NonProgress(format!("{g}")));
            }
            Growth::dyadic(g)
        }
        Profile::Desk { growth: None } => {
            if ln.exceeds(200) {
                Growth::LnOver100
            } else {
                Growth::dyadic(2.0)
            }
        }
    };
    let t = ln.floor();
    let target = ln.ceil_ten_n_over_ln();
    let max_fraction = match profile {
        Profile::Paper => BigUint::one(),
        Profile::Desk { .. } => BigUint::from(2u32),
    };

    let infeasible = |ell: usize| {
        // t(ℓ+1) > n / f  ⟺  f·t(ℓ+1) > n
        &max_fraction * &t * BigUint::from(ell + 1) > *n
    };

    let mut a_seq = vec![BigUint::one()];
    while *a_seq.last().unwrap() < target {
        let next = growth.ceil_mul(a_seq.last().unwrap(), &mut ln);
        a_seq.push(next);
        if infeasible(2 * a_seq.len()) {
            break;
        }
    }
    let j0 = a_seq.len();
    let ell = 2 * j0;
    if infeasible(ell) {
        let bound = if max_fraction.is_one() { "n" } else { "n/2" };
        return Err(Error::Infeasible(format!(
            "t(ell+1) <= {bound} fails with t = {t}, ell >= {ell}"
        )));
    }
    if let (Some(ns), Some(ts)) = (n.to_usize(), t.to_usize()) {
        check_template_shape(ns, ts, ell)?;
    }
    Ok(BigParams {
        n: n.clone(),
        t,
        ell,
        j0,
        a_seq,
        target,
    })
}

enum Growth {
    /// `g = mant · 2^exp` exactly.
    Dyadic {
        mant: BigUint,
        exp: i32,
    },
    LnOver100,
}

impl Growth {
    fn dyadic(g: f64) -> Self {
        // Finite positive doubles are exactly mant · 2^exp.
        let bits = g.to_bits();
        let raw_exp = ((bits >> 52) & 0x7ff) as i32;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Growth::Dyadic {
            mant: BigUint::from(mant),
            exp,
        }
    }

    fn ceil_mul(&self, a: &BigUint, ln: &mut LnBounds) -> BigUint {
        match self {
            Growth::Dyadic { mant, exp } => {
                let prod = a * mant;
                if *exp >= 0 {
                    prod << (*exp as u32)
                } else {
                    ceil_div(&prod, &(BigUint::one() << (-*exp) as u32))
                }
            }
            Growth::LnOver100 => loop {
                let den = BigUint::from(100u32) << ln.w;
                let lo = ceil_div(&(a * &ln.lo), &den);
                let hi = ceil_div(&(a * &ln.hi), &den);
                if lo == hi {
                    return lo;
                }
                ln.refine();
            },
        }
    }
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    a.div_ceil(b)
}

/// `ln n ∈ [lo, hi] / 2^w`.
struct LnBounds {
    n: BigUint,
    w: u32,
    lo: BigUint,
    hi: BigUint,
}

impl LnBounds {
    fn new(n: &BigUint) -> Self {
        let w = n.bits() as u32 + 64;
        let (lo, hi) = ln_fixed(n, w);
        LnBounds {
            n: n.clone(),
            w,
            lo,
            hi,
        }
    }

    fn refine(&mut self) {
        self.w *= 2;
        let (lo, hi) = ln_fixed(&self.n, self.w);
        self.lo = lo;
        self.hi = hi;
    }

    fn approx(&self) -> f64 {
        let shift = self.w.saturating_sub(60);
        (&self.lo >> shift).to_f64().unwrap_or(f64::INFINITY) / 2f64.powi((self.w - shift) as i32)
    }

    /// Whether `ln n > c`.
    fn exceeds(&mut self, c: u32) -> bool {
        loop {
            let scaled = BigUint::from(c) << self.w;
            if self.lo > scaled {
                return true;
            }
            if self.hi < scaled {
                return false;
            }
            self.refine();
        }
    }

    fn floor(&mut self) -> BigUint {
        loop {
            let lo = &self.lo >> self.w;
            if lo == (&self.hi >> self.w) {
                return lo;
            }
            self.refine();
        }
    }

    fn ceil_ten_n_over_ln(&mut self) -> BigUint {
        loop {
            let num = (BigUint::from(10u32) * &self.n) << self.w;
            let lo = ceil_div(&num, &self.hi);
            let hi = ceil_div(&num, &self.lo);
            if lo == hi {
                return lo;
            }
            self.refine();
        }
    }
}

/// `2·atanh(num/den)` in fixed point with `w` fractional bits, for
/// `num/den ≤ 1/3`. Returns the value and an error bound in ulps.
fn two_atanh(num: &BigUint, den: &BigUint, w: u32) -> (BigUint, u64) {
    let y = (num << w) / den;
    let y2 = (&y * &y) >> w;
    let mut term = y;
    let mut sum = BigUint::zero();
    let mut i = 0u64;
    while !term.is_zero() {
        sum += &term / BigUint::from(2 * i + 1);
        term = (&term * &y2) >> w;
        i += 1;
    }
    // Truncation in y, y², each product and each division stays within a
    // few ulps per term because every term shrinks by at least 1/9.
    (sum << 1u32, 2 * (4 * i + 8))
}

fn ln_fixed(n: &BigUint, w: u32) -> (BigUint, BigUint) {
    let k = n.bits() - 1;
    let pow = BigUint::one() << k;
    let (ln2, e2) = two_atanh(&BigUint::one(), &BigUint::from(3u32), w);
    let (lnm, em) = two_atanh(&(n - &pow), &(n + &pow), w);
    let value = &ln2 * BigUint::from(k) + lnm;
    let err = BigUint::from(k * e2 + em + 1);
    let lo = if value > err {
        &value - &err
    } else {
        BigUint::zero()
    };
    (lo, value + err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_1024_growth_two() {
        let p = compute_parameters(1024, Profile::Desk { growth: Some(2.0) }).unwrap();
        assert_eq!(p.t, 6);
        assert_eq!(p.j0, Some(12));
        assert_eq!(p.ell, 24);
        assert_eq!(p.a_seq, (0..12).map(|i| 1usize << i).collect::<Vec<_>>());
        // ⌈10240 / ln 1024⌉ = 1478
        let big = compute_parameters_big(&BigUint::from(1024u32), Profile::desk()).unwrap();
        assert_eq!(big.target, BigUint::from(1478u32));
    }

    #[test]
    fn paper_profile_stalls_below_e_to_100() {
        // ln(10^21) ~ 48.4
        let n = BigUint::from(10u32).pow(21);
        let err = compute_parameters_big(&n, Profile::Paper).unwrap_err();
        assert!(matches!(err, Error::NonProgress(_)));
        assert!(matches!(
            compute_parameters(5000, Profile::Paper),
            Err(Error::NonProgress(_))
        ));
    }

    #[test]
    fn growth_at_most_one_rejected() {
        for g in [1.0, 0.5, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                compute_parameters(1000, Profile::Desk { growth: Some(g) }),
                Err(Error::NonProgress(_))
            ));
        }
    }

    #[test]
    fn desk_half_budget_rejection() {
        // n = 100, g = 2: t = 4, ℓ = 18, t(ℓ+1) = 76 > 50.
        let err = compute_parameters(100, Profile::desk()).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)), "{err}");
        let p = compute_parameters(100, Profile::Desk { growth: Some(4.0) }).unwrap();
        assert_eq!((p.t, p.ell), (4, 10));
    }

    #[test]
    fn floor_ln_near_e_powers() {
        // e^7 ~ 1096.63, e^8 ~ 2980.96
        assert_eq!(
            LnBounds::new(&BigUint::from(1096u32)).floor(),
            BigUint::from(6u32)
        );
        assert_eq!(
            LnBounds::new(&BigUint::from(1097u32)).floor(),
            BigUint::from(7u32)
        );
        assert_eq!(
            LnBounds::new(&BigUint::from(2980u32)).floor(),
            BigUint::from(7u32)
        );
        assert_eq!(
            LnBounds::new(&BigUint::from(2981u32)).floor(),
            BigUint::from(8u32)
        );
    }

    #[test]
    fn ln_interval_contains_float_value() {
        for n in [3u64, 10, 1000, 123_456_789, u64::MAX] {
            let b = LnBounds::new(&BigUint::from(n));
            let x = (n as f64).ln();
            assert!((b.approx() - x).abs() < 1e-12 * x.max(1.0), "n = {n}");
        }
    }

    #[test]
    fn dyadic_growth_is_exact() {
        let mut ln = LnBounds::new(&BigUint::from(10u32));
        let g = Growth::dyadic(1.5);
        assert_eq!(
            g.ceil_mul(&BigUint::from(3u32), &mut ln),
            BigUint::from(5u32)
        );
        assert_eq!(
            g.ceil_mul(&BigUint::from(4u32), &mut ln),
            BigUint::from(6u32)
        );
        // 1.1 as a double is slightly above 11/10, so 10·g rounds up to 12.
        let tenth = Growth::dyadic(1.1);
        assert_eq!(
            tenth.ceil_mul(&BigUint::from(10u32), &mut ln),
            BigUint::from(12u32)
        );
    }

    /// Independent decimal fixed-point oracle for `n = 2^k`, using
    /// `ln 2 = Σ 1/(i·2^i)`.
    fn oracle_j0_power_of_two(k: u32) -> (usize, Vec<BigUint>) {
        let digits = 400u32;
        let scale = BigUint::from(10u32).pow(digits);
        let terms = 4 * digits + 20;
        let mut ln2 = BigUint::zero();
        for i in 1..=terms {
            ln2 += &scale / (BigUint::from(i) << i);
        }
        // Each floor loses < 1 unit; the tail after `terms` is < 1 unit.
        let ln2_lo = ln2.clone();
        let ln2_hi = &ln2 + BigUint::from(terms + 1);
        let n = BigUint::one() << k;
        let ln_lo = &ln2_lo * k;
        let ln_hi = &ln2_hi * k;
        let ten_n = BigUint::from(10u32) * &n * &scale;
        let target = ten_n.div_ceil(&ln_hi);
        assert_eq!(target, ten_n.div_ceil(&ln_lo), "oracle precision too low");
        let hundred = BigUint::from(100u32) * &scale;
        let mut seq = vec![BigUint::one()];
        while *seq.last().unwrap() < target {
            let a = seq.last().unwrap();
            let lo = (a * &ln_lo).div_ceil(&hundred);
            let hi = (a * &ln_hi).div_ceil(&hundred);
            assert_eq!(lo, hi, "oracle precision too low");
            seq.push(lo);
        }
        (seq.len(), seq)
    }

    #[test]
    fn two_to_the_400_matches_decimal_oracle() {
        let n = BigUint::one() << 400u32;
        let p = compute_parameters_big(&n, Profile::Paper).unwrap();
        let (j0, seq) = oracle_j0_power_of_two(400);
        assert_eq!(p.j0, j0);
        assert_eq!(p.a_seq, seq);
        assert_eq!(p.t, BigUint::from(277u32));
        assert!(p.a_seq.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(p.ell, 2 * j0);
    }

    #[test]
    fn two_to_the_512_runs() {
        let n = BigUint::one() << 512u32;
        let p = compute_parameters_big(&n, Profile::Paper).unwrap();
        let (j0, seq) = oracle_j0_power_of_two(512);
        assert_eq!((p.j0, &p.a_seq), (j0, &seq));
    }
}

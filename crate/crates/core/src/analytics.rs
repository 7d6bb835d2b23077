//! Closed-form probabilities and expectations for `G(k, n, d)`, used as
//! oracles for the Monte Carlo experiments.
//!
//! Small inputs are evaluated exactly as big rationals. Ratios of binomial
//! coefficients whose arguments exceed [`EXACT_LIMIT`] are evaluated as
//! sums of log-factorials instead.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;
use thiserror::Error;

use crate::graph::{Direction, GraphParams, Ratio};

/// Largest binomial argument evaluated with exact arithmetic.
pub const EXACT_LIMIT: u64 = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalyticsError {
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
}

/// A probability with its exact value when that was computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probability {
    #[serde(with = "crate::output::opt_ratio_string")]
    pub exact: Option<BigRational>,
    pub value: f64,
}

impl Probability {
    pub fn exact(r: BigRational) -> Self {
        let value = ratio_to_f64(&r);
        Probability {
            exact: Some(r),
            value,
        }
    }

    pub fn approx(value: f64) -> Self {
        Probability { exact: None, value }
    }

    fn powi(&self, e: u32) -> Self {
        match &self.exact {
            Some(r) if e <= 4096 => Probability::exact(pow_ratio(r, e)),
            _ => Probability::approx(self.value.powi(e as i32)),
        }
    }
}

/// `lower ≤ exact ≤ upper` whenever the fields are present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityBound {
    pub lower: Option<Probability>,
    pub upper: Probability,
    pub exact: Option<Probability>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdValue {
    pub c: f64,
}

/// `c = kd²/n − ln(kd)`.
pub fn threshold_c(params: &GraphParams) -> ThresholdValue {
    let kd = params.kd() as u128;
    let d = params.d() as u128;
    let c = (kd * d) as f64 / params.n() as f64 - (params.kd() as f64).ln();
    ThresholdValue { c }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma21 {
    /// `E|Γ(y) ∩ Γ(y')| = kd(d−1)/(n−1)` for `y ≠ y'`.
    #[serde(with = "crate::output::ratio_string")]
    pub common_neighbors: BigRational,
    /// `E|Γ(y) ∩ B| = d|B|/n`.
    #[serde(with = "crate::output::opt_ratio_string")]
    pub hits_in_b: Option<BigRational>,
}

pub fn lemma21_expectations(
    params: &GraphParams,
    b_size: Option<usize>,
) -> Result<Lemma21, AnalyticsError> {
    if params.n() < 2 {
        return Err(AnalyticsError::OutOfRange(
            "n >= 2 is needed for two distinct vertices y, y'".into(),
        ));
    }
    let (kd, d, n) = (params.kd() as i64, params.d() as i64, params.n() as i64);
    let common_neighbors = rational(kd * (d - 1), n - 1);
    let hits_in_b = match b_size {
        None => None,
        Some(b) if b > params.kn() => {
            return Err(AnalyticsError::OutOfRange(format!(
                "|B| = {b} exceeds kn = {}",
                params.kn()
            )))
        }
        Some(b) => Some(rational(d * b as i64, n)),
    };
    Ok(Lemma21 {
        common_neighbors,
        hits_in_b,
    })
}

/// Exact probability that a single vertex misses a set of size `s`.
///
/// * `In`, unconditioned: `Pr(Γ⁻(z) ∩ S = ∅) = C(n−s, d)/C(n, d)`.
/// * `In`, conditioned on an edge `y → z` with `y ∉ S`:
///   `C(n−1−s, d−1)/C(n−1, d−1)`.
/// * `Out`, unconditioned: `Pr(Γ(y) ∩ T = ∅) = C(kn−s, kd)/C(kn, kd)`.
/// * `Out`, conditioned on `y → z` with `z ∉ T`:
///   `C(kn−1−s, kd−1)/C(kn−1, kd−1)`.
pub fn no_edge_exact(
    s: usize,
    params: &GraphParams,
    side: Direction,
    conditioned: bool,
) -> Result<BigRational, AnalyticsError> {
    let (pool, draws) = no_edge_shape(params, side, conditioned);
    if s > pool {
        return Err(AnalyticsError::OutOfRange(format!(
            "s = {s} exceeds the {pool} candidate vertices"
        )));
    }
    Ok(binomial_ratio_exact(pool - s, draws, pool, draws))
}

fn no_edge_shape(params: &GraphParams, side: Direction, conditioned: bool) -> (usize, usize) {
    let (pool, draws) = match side {
        Direction::In => (params.n(), params.d()),
        Direction::Out => (params.kn(), params.kd()),
    };
    if conditioned {
        (pool - 1, draws - 1)
    } else {
        (pool, draws)
    }
}

fn no_edge_single(
    s: usize,
    params: &GraphParams,
    side: Direction,
    conditioned: bool,
) -> Result<Probability, AnalyticsError> {
    let (pool, draws) = no_edge_shape(params, side, conditioned);
    if s > pool {
        return Err(AnalyticsError::OutOfRange(format!(
            "s = {s} exceeds the {pool} candidate vertices"
        )));
    }
    Ok(binomial_ratio(pool - s, draws, pool, draws))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoEdgeUpper {
    /// `upper` is the single-vertex probability raised to the number of
    /// independent-looking trials.
    pub bound: ProbabilityBound,
    /// `exp(−d·s·t/n)`, the leading-order closed form.
    pub exp_form: f64,
    /// A closed form that provably dominates `upper`: `exp(−d·s·t/n)` for
    /// unconditioned bounds, `exp(−(d−1)·s·t/(n−1))` for the in-side bound
    /// conditioned on an edge.
    pub exp_form_strict: f64,
}

/// Upper bound on `Pr(Γ(S) ∩ T = ∅)` with `|S| = s ⊆ Y`, `|T| = t ⊆ Z`.
///
/// * `In`: `Pr(Γ⁻(z) ∩ S = ∅)^t`, conditioned on `y → z₁` for some
///   `y ∉ S` and `z₁ ∈ T` when `conditioned`. Requires `s + d ≤ n`.
/// * `Out` (unconditioned only): `Pr(Γ(y) ∩ T = ∅)^s`. Requires
///   `t + kd ≤ kn`.
pub fn no_edge_upper(
    s: usize,
    t: usize,
    params: &GraphParams,
    side: Direction,
    conditioned: bool,
) -> Result<NoEdgeUpper, AnalyticsError> {
    let (n, d) = (params.n() as f64, params.d() as f64);
    let (single, power, strict) = match side {
        Direction::In => {
            if s + params.d() > params.n() {
                return Err(AnalyticsError::HypothesisViolated(format!(
                    "|S| + d = {} exceeds n = {}",
                    s + params.d(),
                    params.n()
                )));
            }
            if t > params.kn() {
                return Err(AnalyticsError::OutOfRange(format!("t = {t} exceeds kn")));
            }
            let strict = if conditioned {
                (-(d - 1.0) * s as f64 * t as f64 / (n - 1.0)).exp()
            } else {
                (-d * s as f64 * t as f64 / n).exp()
            };
            (no_edge_single(s, params, side, conditioned)?, t, strict)
        }
        Direction::Out => {
            if conditioned {
                return Err(AnalyticsError::HypothesisViolated(
                    "the out-side bound is only available unconditioned".into(),
                ));
            }
            if t + params.kd() > params.kn() {
                return Err(AnalyticsError::HypothesisViolated(format!(
                    "|T| + kd = {} exceeds kn = {}",
                    t + params.kd(),
                    params.kn()
                )));
            }
            if s > params.n() {
                return Err(AnalyticsError::OutOfRange(format!("s = {s} exceeds n")));
            }
            let strict = (-d * s as f64 * t as f64 / n).exp();
            (no_edge_single(t, params, side, false)?, s, strict)
        }
    };
    let upper = single.powi(power as u32);
    let exp_form = (-d * s as f64 * t as f64 / n).exp();
    if upper.value > strict * (1.0 + 1e-12) + 1e-300 {
        return Err(AnalyticsError::HypothesisViolated(format!(
            "product bound {} exceeds its closed form {strict}",
            upper.value
        )));
    }
    Ok(NoEdgeUpper {
        bound: ProbabilityBound {
            lower: None,
            upper,
            exact: None,
        },
        exp_form,
        exp_form_strict: strict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Asymptotic {
    pub value: f64,
    /// Informational: `d ≤ n^0.6`, where the leading term is expected to be
    /// accurate.
    pub in_regime: bool,
}

/// Leading term `exp(−kd²/n)` of `Pr(Γ⁻(z) ∩ A = {y})`.
pub fn isolated_prob_asymptotic(params: &GraphParams) -> Asymptotic {
    let kd2 = (params.kd() as u128 * params.d() as u128) as f64;
    Asymptotic {
        value: (-kd2 / params.n() as f64).exp(),
        in_regime: (params.d() as f64) <= (params.n() as f64).powf(0.6),
    }
}

/// Exact `E(A⁻) = kd · C(n−kd, d−1)/C(n−1, d−1)`: the expected number of
/// `z ∈ Γ(y)` whose only in-neighbor inside `A` (`|A| = kd`, `y ∈ A`) is
/// `y`.
pub fn a_minus_expectation(params: &GraphParams) -> Result<Probability, AnalyticsError> {
    let single = no_edge_single(params.kd() - 1, params, Direction::In, true)?;
    let kd = params.kd() as i64;
    Ok(match single.exact {
        Some(r) => Probability::exact(r * BigRational::from_integer(BigInt::from(kd))),
        None => Probability::approx(single.value * kd as f64),
    })
}

/// Exact `E(Q) = kd·(Pr(B⁺_y) + Pr(B⁻_z))`, the expected number of isolated
/// vertices in `G[A, B]` with `|A| = |B| = kd`.
pub fn q_expectation(params: &GraphParams) -> Probability {
    let (n, kn, d, kd) = (params.n(), params.kn(), params.d(), params.kd());
    let plus = binomial_ratio(kn - kd, kd, kn, kd);
    let minus = binomial_ratio(n - kd, d, n, d);
    let scale = kd as i64;
    match (plus.exact, minus.exact) {
        (Some(p), Some(m)) => {
            Probability::exact((p + m) * BigRational::from_integer(BigInt::from(scale)))
        }
        _ => Probability::approx(scale as f64 * (plus.value + minus.value)),
    }
}

/// Erdős–Rényi limit `exp(−2e^{−c})` for perfect matchings in `B(n, p)`
/// with `p = (ln n + c)/n`.
pub fn er_matching_prob(c: f64) -> f64 {
    (-2.0 * (-c).exp()).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommutativeBounds {
    /// Below this the stacked graph is non-commutative whp.
    pub d_low: f64,
    /// Above this it is commutative whp.
    pub d_high: f64,
    /// False when `d_high > m`, so no admissible `d` reaches the
    /// commutative regime.
    pub high_regime_attainable: bool,
}

/// `d_low = sqrt(k^{h−2} m ln(km) / 3)`,
/// `d_high = 3 sqrt(k^{h−2} m ln(h k^{h+1} m))`.
pub fn commutative_d_bounds(k: Ratio, m: usize, h: usize) -> CommutativeBounds {
    let k = k.to_f64();
    let m = m as f64;
    let h_f = h as f64;
    let scale = k.powi(h as i32 - 2) * m;
    let d_low = (scale * (k * m).ln() / 3.0).sqrt();
    let d_high = 3.0 * (scale * (h_f * k.powi(h as i32 + 1) * m).ln()).sqrt();
    CommutativeBounds {
        d_low,
        d_high,
        high_regime_attainable: d_high <= m,
    }
}

/// Bounds on `Pr(Γ(y) ∩ Γ(y') = ∅)`:
/// `C(kn−kd, kd)/C(kn, kd) ≤ · ≤ (C(n−2, d−1)/C(n−1, d−1))^{kd}`.
/// The lower bound is omitted when `2kd > kn`.
pub fn a_plus_bounds(params: &GraphParams) -> Result<ProbabilityBound, AnalyticsError> {
    let (n, kn, d, kd) = (params.n(), params.kn(), params.d(), params.kd());
    if n < 2 {
        return Err(AnalyticsError::OutOfRange("n >= 2 is needed".into()));
    }
    let lower = (2 * kd <= kn).then(|| binomial_ratio(kn - kd, kd, kn, kd));
    // C(n−2, d−1)/C(n−1, d−1) = (n−d)/(n−1)
    let base = if (n as u64) <= EXACT_LIMIT {
        Probability::exact(rational((n - d) as i64, (n - 1) as i64))
    } else {
        Probability::approx((n - d) as f64 / (n - 1) as f64)
    };
    let upper = if base.exact.is_some() && kd <= 4096 {
        base.powi(kd as u32)
    } else {
        Probability::approx((kd as f64 * ((n - d) as f64 / (n - 1) as f64).ln()).exp())
    };
    Ok(ProbabilityBound {
        lower,
        upper,
        exact: None,
    })
}

/// `(kd)² · exp(−kd²/(2n))`, the order of the union bound on
/// non-matching in the large-`c` regime.
pub fn nonmatching_diagnostic(params: &GraphParams) -> f64 {
    let kd = params.kd() as f64;
    let kd2 = (params.kd() as u128 * params.d() as u128) as f64;
    kd * kd * (-kd2 / (2.0 * params.n() as f64)).exp()
}

/// `C(a, b)/C(c, e)`, exactly when all arguments are at most
/// [`EXACT_LIMIT`].
pub fn binomial_ratio(a: usize, b: usize, c: usize, e: usize) -> Probability {
    if [a, b, c, e].iter().all(|&x| x as u64 <= EXACT_LIMIT) {
        Probability::exact(binomial_ratio_exact(a, b, c, e))
    } else {
        Probability::approx(binomial_ratio_log(a, b, c, e))
    }
}

pub fn binomial_ratio_exact(a: usize, b: usize, c: usize, e: usize) -> BigRational {
    let num = binomial(a as u64, b as u64);
    let den = binomial(c as u64, e as u64);
    assert!(!den.is_zero(), "C({c}, {e}) is zero");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn binomial_ratio_log(a: usize, b: usize, c: usize, e: usize) -> f64 {
    if b > a {
        return 0.0;
    }
    (ln_binomial(a as u64, b as u64) - ln_binomial(c as u64, e as u64)).exp()
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn pow_ratio(r: &BigRational, e: u32) -> BigRational {
    BigRational::new(
        num_traits::pow(r.numer().clone(), e as usize),
        num_traits::pow(r.denom().clone(), e as usize),
    )
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back to logarithms for huge numerators/denominators
        let ln = |x: &BigInt| {
            let bits = x.bits();
            let shift = bits.saturating_sub(64);
            let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
            top.ln() + shift as f64 * std::f64::consts::LN_2
        };
        if r.is_zero() {
            0.0
        } else {
            (ln(r.numer()) - ln(r.denom())).exp()
        }
    })
}

//! Posted prices for `n` buyers who arrive one at a time.
//!
//! An anonymous policy posts the same price to everyone; a
//! discriminatory policy may post a different price to each arrival.
//! The optimal discriminatory schedule comes from backward induction on
//! the number of buyers still to come: with continuation value `V_k`
//! after a pass, the current price maximizes
//! `p * P[v >= p] + P[v < p] * V_k`.
//!
//! All continuous optimization runs in quantile space `(0, 1]`, with the
//! sale probability taken as `1 - F(p-)` at the candidate price so that
//! atoms at the top of the support are priced correctly.

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::search;

/// Prices posted to buyers in arrival order.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceVector {
    prices: Vec<f64>,
}

impl PriceVector {
    /// At least one price, each finite and nonnegative.
    pub fn new(prices: Vec<f64>) -> Result<Self> {
        if prices.is_empty() {
            return Err(Error::InvalidParameter(
                "price vector must contain at least one price".to_string(),
            ));
        }
        for (i, &p) in prices.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "price {i} must be finite and nonnegative, got {p}"
                )));
            }
        }
        Ok(PriceVector { prices })
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// What a backward induction optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Revenue,
    Welfare,
}

/// Trace of a backward induction.
///
/// `continuation[k]` is the optimal value with `k` buyers left, so
/// `continuation[0] = 0` and `continuation[n]` is the value of the full
/// schedule.  `step_prices[k]` is the price posted when `k` buyers
/// remain after the current one; buyer `i` of `n` (arrival order,
/// 1-based) therefore sees `step_prices[n - i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionTable {
    pub objective: Objective,
    pub continuation: Vec<f64>,
    pub step_prices: Vec<f64>,
}

/// Expected revenue from posting the same price `p` to all `n` buyers:
/// `p * (1 - F(p-)^n)`.
pub fn anonymous_revenue(d: &DistributionSpec, n: usize, p: f64) -> f64 {
    debug_assert!(n >= 1);
    let fb = d.left_cdf(p);
    p * (1.0 - fb.powi(n as i32))
}

/// Expected revenue from posting `prices` in order until the first sale.
/// The survival product is cut off below 1e-300 to avoid underflow.
pub fn discriminatory_revenue(d: &DistributionSpec, prices: &PriceVector) -> f64 {
    let mut survive = 1.0;
    let mut total = 0.0;
    for &p in prices.prices() {
        let fb = d.left_cdf(p);
        total += survive * p * (1.0 - fb);
        survive *= fb;
        if survive < 1e-300 {
            break;
        }
    }
    total
}

/// Best anonymous price for `n` buyers, returned as `(price, revenue)`.
///
/// Discrete distributions are solved exactly by atom enumeration, ties
/// going to the larger atom; continuous ones by quantile-space search
/// accurate to about 1e-9 in both coordinates.
pub fn optimal_anonymous(d: &DistributionSpec, n: usize) -> Result<(f64, f64)> {
    require_buyers(n)?;
    check_finite_optimum(d)?;
    match d {
        DistributionSpec::Discrete(dd) => {
            let mut best = (dd.atoms()[0], f64::NEG_INFINITY);
            for (&a, &t) in dd.atoms().iter().zip(dd.tails()) {
                let val = a * (1.0 - (1.0 - t).powi(n as i32));
                if val >= best.1 {
                    best = (a, val);
                }
            }
            Ok(best)
        }
        _ => {
            let (q, val) = search::maximize(
                |q| {
                    let p = d.quantile_unchecked(q);
                    p * (1.0 - d.left_cdf(p).powi(n as i32))
                },
                1.0,
            );
            Ok((d.quantile_unchecked(q), val))
        }
    }
}

/// Optimal discriminatory schedule for `n` buyers, returned as the
/// prices in arrival order, the expected revenue, and the full
/// backward-induction table.
pub fn optimal_discriminatory(
    d: &DistributionSpec,
    n: usize,
) -> Result<(PriceVector, f64, RecursionTable)> {
    require_buyers(n)?;
    check_finite_optimum(d)?;
    let mut continuation = Vec::with_capacity(n + 1);
    let mut step_prices = Vec::with_capacity(n);
    continuation.push(0.0);
    for _ in 0..n {
        let (p, val) = optimize_step(d, *continuation.last().unwrap());
        step_prices.push(p);
        continuation.push(val);
    }
    let revenue = *continuation.last().unwrap();
    let prices = PriceVector::new(step_prices.iter().rev().copied().collect())?;
    let table = RecursionTable {
        objective: Objective::Revenue,
        continuation,
        step_prices,
    };
    Ok((prices, revenue, table))
}

/// Revenue-optimal price against a single buyer.
pub fn monopoly_price(d: &DistributionSpec) -> Result<f64> {
    check_finite_optimum(d)?;
    Ok(optimize_step(d, 0.0).0)
}

/// One step of the revenue recursion: the price maximizing
/// `p * (1 - F(p-)) + F(p-) * v`, and the maximum itself.
pub(crate) fn optimize_step(d: &DistributionSpec, v: f64) -> (f64, f64) {
    match d {
        DistributionSpec::Discrete(dd) => {
            let mut best = (dd.atoms()[0], f64::NEG_INFINITY);
            for (&a, &t) in dd.atoms().iter().zip(dd.tails()) {
                let val = a * t + (1.0 - t) * v;
                if val >= best.1 {
                    best = (a, val);
                }
            }
            best
        }
        _ => {
            let (q, val) = search::maximize(
                |q| {
                    let p = d.quantile_unchecked(q);
                    let fb = d.left_cdf(p);
                    p * (1.0 - fb) + fb * v
                },
                1.0,
            );
            (d.quantile_unchecked(q), val)
        }
    }
}

fn require_buyers(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "need at least one buyer".to_string(),
        ));
    }
    Ok(())
}

/// Rejects distributions whose revenue curve blows up as `q -> 0`, for
/// which no finite optimal price exists.  None of the built-in families
/// can trigger this; the probe guards future ones with heavier tails.
pub(crate) fn check_finite_optimum(d: &DistributionSpec) -> Result<()> {
    if matches!(d, DistributionSpec::Discrete(_)) {
        return Ok(());
    }
    let probes = [1e-3, 1e-6, 1e-9, 1e-12];
    let mut growing = true;
    for w in probes.windows(2) {
        if d.revenue_curve(w[1]) <= 2.0 * d.revenue_curve(w[0]) {
            growing = false;
            break;
        }
    }
    if growing {
        return Err(Error::NoFiniteOptimum);
    }
    Ok(())
}

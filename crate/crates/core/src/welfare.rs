//! Welfare-optimal thresholds and their connection to revenue-optimal
//! prices.
//!
//! With `k` buyers still to come and continuation welfare `W_k`, total
//! welfare is maximized by selling to the current buyer exactly when her
//! value exceeds `W_k`, so the welfare price is the continuation value
//! itself:
//!
//! `W_0 = 0`, `W_{k+1} = F(W_k) W_k + E[X; X >= W_k]`.
//!
//! For the generalized Pareto family (including its uniform and
//! exponential endpoints) the revenue recursion is the welfare recursion
//! shifted by one step: the revenue price with `i` buyers to come equals
//! the welfare price with `i + 1` to come.  The family is characterized
//! by `E[phi(X) | X >= y] = y`, with `phi` the virtual value; both
//! identities can be checked numerically here.

use std::ops::RangeInclusive;

use crate::dist::{DistributionSpec, Support};
use crate::error::{Error, Result};
use crate::pricing::{optimal_anonymous, optimize_step};
use crate::search;

/// Welfare recursion trace.  `w[k]` is the optimal expected welfare
/// with `k` buyers, and `p_w[k] = w[k]` is the price posted when `k`
/// buyers remain after the current one.
#[derive(Debug, Clone, PartialEq)]
pub struct WelfareTable {
    pub w: Vec<f64>,
    pub p_w: Vec<f64>,
}

/// Runs the welfare recursion for `n` buyers.  Defined for the three
/// continuous families, all of which have finite means; discrete and
/// piecewise-linear-revenue inputs are rejected.
pub fn welfare_prices(d: &DistributionSpec, n: usize) -> Result<WelfareTable> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "need at least one buyer".to_string(),
        ));
    }
    require_continuous_family(d, "welfare recursion")?;
    let mut w = Vec::with_capacity(n + 1);
    w.push(0.0);
    for k in 0..n {
        let wk = w[k];
        w.push(d.cdf(wk) * wk + tail_mean_integral(d, wk));
    }
    let p_w = w[..n].to_vec();
    Ok(WelfareTable { w, p_w })
}

/// `E[X; X >= y]`, the unconditional tail expectation, in closed form.
fn tail_mean_integral(d: &DistributionSpec, y: f64) -> f64 {
    match d {
        DistributionSpec::Uniform(u) => {
            if y <= u.lo() {
                0.5 * (u.lo() + u.hi())
            } else if y >= u.hi() {
                0.0
            } else {
                (u.hi() * u.hi() - y * y) / (2.0 * (u.hi() - u.lo()))
            }
        }
        DistributionSpec::Exponential(e) => {
            let y = y.max(0.0);
            (y + 1.0 / e.lambda()) * (-e.lambda() * y).exp()
        }
        DistributionSpec::GeneralizedPareto(g) => {
            let y = y.max(g.mu());
            if g.xi() > 0.0 {
                if y >= g.upper() {
                    return 0.0;
                }
                let u = 1.0 - g.xi() * g.lambda() * (y - g.mu());
                let scale = g.xi() * g.lambda();
                (g.mu() + 1.0 / scale) * u.powf(1.0 / g.xi())
                    - u.powf(1.0 + 1.0 / g.xi()) / (scale * (1.0 + g.xi()))
            } else {
                (y + 1.0 / g.lambda()) * (-g.lambda() * (y - g.mu())).exp()
            }
        }
        _ => unreachable!("callers gate on the continuous families"),
    }
}

fn require_continuous_family(d: &DistributionSpec, what: &str) -> Result<()> {
    match d {
        DistributionSpec::Uniform(_)
        | DistributionSpec::Exponential(_)
        | DistributionSpec::GeneralizedPareto(_) => Ok(()),
        _ => Err(Error::Unsupported(format!(
            "{what} needs a uniform, exponential or generalized Pareto distribution"
        ))),
    }
}

/// Largest deviation `|p^R_i - p^W_{i+1}|` over `i = 0..=i_max` between
/// the revenue price with `i` buyers to come and the welfare price with
/// `i + 1` to come.  Only defined for the generalized Pareto family and
/// its endpoints, where the deviation is zero in exact arithmetic.
pub fn check_shift_theorem(d: &DistributionSpec, i_max: usize) -> Result<f64> {
    require_continuous_family(d, "shift check")?;
    let (_, _, table) = crate::pricing::optimal_discriminatory(d, i_max + 1)?;
    let welfare = welfare_prices(d, i_max + 2)?;
    let mut worst = 0.0f64;
    for i in 0..=i_max {
        worst = worst.max((table.step_prices[i] - welfare.p_w[i + 1]).abs());
    }
    Ok(worst)
}

/// `E[phi(X) | X >= y]` by adaptive quadrature in quantile space, where
/// `phi` is the virtual value.  For the supported families this equals
/// `y` identically.  Rejects `y` outside the support or at its very top,
/// where the conditioning event has probability zero.
pub fn virtual_value_conditional_mean(d: &DistributionSpec, y: f64) -> Result<f64> {
    require_continuous_family(d, "conditional virtual value")?;
    let lo = match d.support() {
        Support::Interval { lo, .. } => lo,
        Support::Atoms(_) => unreachable!("gated to continuous families"),
    };
    let q_y = 1.0 - d.cdf(y);
    if y < lo || q_y <= 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "y = {y} is outside the support or leaves no tail to condition on"
        )));
    }
    let integrand = |u: f64| {
        let x = d.quantile_unchecked(u);
        d.virtual_value(x).unwrap_or(f64::NAN)
    };
    // The lower truncation at 1e-15 discards a sliver of mass whose
    // contribution is far below the quadrature tolerance.
    let integral = search::adaptive_simpson(&integrand, 1e-15, q_y, 1e-11);
    Ok(integral / q_y)
}

/// Exact harmonic number for small arguments, the asymptotic expansion
/// beyond.
fn harmonic(k: u64) -> f64 {
    if k <= 1_000_000 {
        (1..=k).rev().map(|j| 1.0 / j as f64).sum()
    } else {
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        (k as f64).ln() + EULER_GAMMA + 1.0 / (2.0 * k as f64)
    }
}

/// Two-sided bracket for the uniform(0, 1) welfare continuation value
/// `W_i`, the optimal-stopping threshold over `i` remaining draws:
///
/// `1 - 2/(H_{i+1} + i + 1.5 - 0.310) <= W_i <= 1 - 2/(H_{i+1} + i + 1.5 - 0.121)`
///
/// valid for `i >= 10`.  The bracket width shrinks like `i^-2`.
pub fn gilbert_mosteller_bracket(i: usize) -> Result<(f64, f64)> {
    if i < 10 {
        return Err(Error::InvalidParameter(format!(
            "the bracket is only valid for i >= 10, got {i}"
        )));
    }
    let base = harmonic(i as u64 + 1) + i as f64 + 1.5;
    Ok((1.0 - 2.0 / (base - 0.310), 1.0 - 2.0 / (base - 0.121)))
}

/// Family selector for [`gap_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapFamily {
    /// Uniform on [0, 1].
    Uniform,
    /// Exponential with rate 1.
    Exponential,
}

/// One row of a discriminatory-versus-anonymous gap table.
#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub n: usize,
    pub r_d: f64,
    pub r_a: f64,
    pub ratio: f64,
}

/// Tabulates `R_d / R_a` for every buyer count in `range` and returns
/// the rows together with the count where the ratio peaks (the smallest
/// such count on ties).  The revenue recursion is extended once and
/// shared by all rows.  The range must sit within `[1, 10_000]`.
pub fn gap_table(
    family: GapFamily,
    range: RangeInclusive<usize>,
) -> Result<(Vec<GapRow>, usize)> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo < 1 || hi > 10_000 || lo > hi {
        return Err(Error::InvalidParameter(format!(
            "buyer count range must sit within [1, 10000], got {lo}..={hi}"
        )));
    }
    let d = match family {
        GapFamily::Uniform => DistributionSpec::uniform(0.0, 1.0)?,
        GapFamily::Exponential => DistributionSpec::exponential(1.0)?,
    };
    let mut continuation = vec![0.0];
    for _ in 0..hi {
        let v = *continuation.last().unwrap();
        continuation.push(optimize_step(&d, v).1);
    }
    let mut rows = Vec::with_capacity(hi - lo + 1);
    let mut arg = lo;
    let mut peak = f64::NEG_INFINITY;
    for (n, &r_d) in continuation.iter().enumerate().skip(lo) {
        let (_, r_a) = optimal_anonymous(&d, n)?;
        let ratio = r_d / r_a;
        if ratio > peak {
            peak = ratio;
            arg = n;
        }
        rows.push(GapRow { n, r_d, r_a, ratio });
    }
    Ok((rows, arg))
}

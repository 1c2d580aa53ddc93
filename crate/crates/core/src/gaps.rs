//! Revenue gaps between discriminatory and anonymous posted pricing.
//!
//! For `n` buyers let `R_a` be the best anonymous revenue, `R_d` the
//! best discriminatory revenue and `R_x` the ex-ante relaxation value,
//! so `R_a <= R_d <= R_x`.  The ratio `R_x / R_a` is at most `2 - 1/n`
//! in general and at most `1 / (1 - (1 - 1/n)^n)` for regular
//! distributions, and both caps are tight: the constructions in this
//! module produce price schedules whose discriminatory revenue comes
//! within any `delta > 0` of the cap times the anonymous optimum.
//!
//! The upper bounds rest on a lottery argument: averaging the anonymous
//! candidates drawn from an ex-ante solution with the right weights
//! already collects a large share of `R_x`, so the best single
//! anonymous price cannot fall far behind.

use crate::dist::{
    effectively_regular, DiscreteDistribution, DistributionSpec, PiecewiseLinearRevenueDist,
};
use crate::error::{Error, Result};
use crate::exante::{exante_general, exante_regular, QuantileAllocation};
use crate::pricing::{
    anonymous_revenue, discriminatory_revenue, optimal_anonymous, optimal_discriminatory,
    PriceVector,
};

/// Default budget grid for the ex-ante dynamic program.
pub const DEFAULT_BUDGET_GRID: usize = 10_000;

/// How a reported number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodTag {
    /// Closed form.
    Analytic,
    /// Grid search or grid dynamic program.
    Grid,
    /// Exact enumeration over atoms.
    Enumerated,
    /// Monte Carlo estimate.
    Simulated,
}

impl MethodTag {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodTag::Analytic => "analytic",
            MethodTag::Grid => "grid",
            MethodTag::Enumerated => "enumerated",
            MethodTag::Simulated => "simulated",
        }
    }
}

impl std::fmt::Display for MethodTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The three revenue benchmarks for one distribution and buyer count,
/// their ratios, and the applicable caps.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub n: usize,
    pub r_a: f64,
    pub r_d: f64,
    pub r_x: f64,
    /// `r_d / r_a`.
    pub gap_da: f64,
    /// `r_x / r_a`.
    pub gap_xa: f64,
    /// `2 - 1/n`, valid for every distribution.
    pub bound_general: f64,
    /// `1 / (1 - (1 - 1/n)^n)`, present only when the distribution is
    /// regular.
    pub bound_regular: Option<f64>,
    pub method_r_a: MethodTag,
    pub method_r_d: MethodTag,
    pub method_r_x: MethodTag,
}

/// Cap on `R_x / R_a` for arbitrary distributions: `2 - 1/n`.
pub fn bound_general(n: usize) -> f64 {
    debug_assert!(n >= 1);
    2.0 - 1.0 / n as f64
}

/// Cap on `R_x / R_a` for regular distributions:
/// `1 / (1 - (1 - 1/n)^n)`, increasing from 4/3 at `n = 2` toward
/// `e / (e - 1)`.
pub fn bound_regular(n: usize) -> f64 {
    debug_assert!(n >= 1);
    1.0 / (1.0 - (1.0 - 1.0 / n as f64).powi(n as i32))
}

/// Computes all three benchmarks for `d` with `n` buyers.
///
/// Discrete distributions are handled exactly by enumeration.  For
/// continuous ones the one-dimensional optimizations are grid searches
/// accurate to about 1e-9, and an irregular continuous input falls back
/// to the budget-grid dynamic program for `r_x`.
pub fn gap(d: &DistributionSpec, n: usize) -> Result<GapReport> {
    let (_, r_a) = optimal_anonymous(d, n)?;
    let (_, r_d, _) = optimal_discriminatory(d, n)?;
    let regular = effectively_regular(d);
    let discrete = matches!(d, DistributionSpec::Discrete(_));
    let (r_x, method_r_x) = if discrete {
        let (_, v) = exante_general(d, n, DEFAULT_BUDGET_GRID)?;
        (v, MethodTag::Enumerated)
    } else if regular {
        let (_, v) = exante_regular(d, n)?;
        (v, MethodTag::Grid)
    } else {
        let (_, v) = exante_general(d, n, DEFAULT_BUDGET_GRID)?;
        (v, MethodTag::Grid)
    };
    let method = if discrete {
        MethodTag::Enumerated
    } else {
        MethodTag::Grid
    };
    Ok(GapReport {
        n,
        r_a,
        r_d,
        r_x,
        gap_da: r_d / r_a,
        gap_xa: r_x / r_a,
        bound_general: bound_general(n),
        bound_regular: regular.then(|| bound_regular(n)),
        method_r_a: method,
        method_r_d: method,
        method_r_x,
    })
}

/// Lottery over the anonymous prices induced by an ex-ante allocation.
///
/// Coordinate `i` contributes the price `p_i = quantile(q_i)` with
/// weight `alpha_i = q_i / (1 - F(p_i-)^n)`; coordinates with `q_i = 0`
/// get weight 0.  Returns the normalized weights' expected anonymous
/// revenue together with the weights.  The revenue equals
/// `sum p_i q_i / sum alpha_j` by construction; both evaluations are
/// compared to 1e-9 relative as an internal consistency check.
pub fn lottery_weights(
    d: &DistributionSpec,
    alloc: &QuantileAllocation,
    n: usize,
) -> Result<(Vec<f64>, f64)> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "need at least one buyer".to_string(),
        ));
    }
    let mut alpha = Vec::with_capacity(alloc.quantiles().len());
    let mut weighted = 0.0;
    let mut direct = 0.0;
    for &q in alloc.quantiles() {
        if q == 0.0 {
            alpha.push(0.0);
            continue;
        }
        let p = d.quantile_unchecked(q);
        let a = q / (1.0 - d.left_cdf(p).powi(n as i32));
        alpha.push(a);
        weighted += a * anonymous_revenue(d, n, p);
        direct += p * q;
    }
    let total: f64 = alpha.iter().sum();
    if total == 0.0 {
        return Ok((alpha, 0.0));
    }
    let revenue = weighted / total;
    let check = direct / total;
    if (revenue - check).abs() > 1e-9 * revenue.abs().max(1e-300) {
        return Err(Error::Numeric(format!(
            "lottery revenue {revenue} disagrees with sum p_i q_i / sum alpha = {check}"
        )));
    }
    Ok((alpha, revenue))
}

/// Best single price among the entries of `prices` when posted
/// anonymously to `n` buyers, returned with the ratio of the schedule's
/// discriminatory revenue to that anonymous revenue.  Ties go to the
/// earliest entry.  The ratio is NaN when every entry earns zero.
pub fn best_anonymous_among(
    d: &DistributionSpec,
    prices: &PriceVector,
    n: usize,
) -> (f64, f64) {
    debug_assert!(n >= 1);
    let mut best_i = 0;
    let mut best_r = f64::NEG_INFINITY;
    for (i, &p) in prices.prices().iter().enumerate() {
        let r = anonymous_revenue(d, n, p);
        if r > best_r {
            best_r = r;
            best_i = i;
        }
    }
    let r_d = discriminatory_revenue(d, prices);
    (prices.prices()[best_i], r_d / best_r)
}

/// Two-point distribution and schedule driving `R_d / R_a` toward the
/// general cap `2 - 1/n`.
///
/// Values are 1 with probability `1 - eps/n^2` and `n/eps` otherwise.
/// The schedule gambles the first `n - 1` prices on the rare high value
/// and posts 1 to the last buyer; as `eps` shrinks the ratio approaches
/// `2 - 1/n` from below.  Needs `eps < n` so the two atoms stay apart.
pub fn irregular_lower_construction(
    n: usize,
    eps: f64,
) -> Result<(DiscreteDistribution, PriceVector)> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "need at least one buyer".to_string(),
        ));
    }
    if !eps.is_finite() || eps <= 0.0 || eps >= n as f64 {
        return Err(Error::InvalidParameter(format!(
            "irregular construction needs eps in (0, n), got eps = {eps}"
        )));
    }
    let nf = n as f64;
    let high = nf / eps;
    let mass = eps / (nf * nf);
    let dist = DiscreteDistribution::new(vec![1.0, high], vec![1.0 - mass, mass])?;
    let mut prices = vec![high; n - 1];
    prices.push(1.0);
    Ok((dist, PriceVector::new(prices)?))
}

/// Regular distribution and schedule driving `R_d / R_a` toward the
/// regular cap `1 / (1 - (1 - 1/n)^n)`.
///
/// The revenue curve is piecewise linear with plateau `r` chosen so
/// that, at the symmetric quantile `q = 1/n`,
/// `r = n q^2 (1 - q)^(n-1) / (1 - (n q + 1)(1 - q)^n)`.
/// The schedule posts the top price `r / eps` to the first `n - 1`
/// buyers and 1 to the last.  Needs `n >= 2` and `eps < 1/n`.  The
/// plateau must land in `(0, 2/(n+1))` for the interior optimum to be
/// valid; anything else reports a numerical failure.
pub fn regular_lower_construction(
    n: usize,
    eps: f64,
) -> Result<(PiecewiseLinearRevenueDist, PriceVector)> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "regular construction needs at least two buyers".to_string(),
        ));
    }
    let nf = n as f64;
    if !eps.is_finite() || eps <= 0.0 || eps >= 1.0 / nf {
        return Err(Error::InvalidParameter(format!(
            "regular construction needs eps in (0, 1/n), got eps = {eps}"
        )));
    }
    let q = 1.0 / nf;
    let r = nf * q * q * (1.0 - q).powi(n as i32 - 1)
        / (1.0 - (nf * q + 1.0) * (1.0 - q).powi(n as i32));
    if !(r > 0.0 && r < 2.0 / (nf + 1.0)) {
        return Err(Error::Numeric(format!(
            "plateau r = {r} fell outside (0, 2/(n+1))"
        )));
    }
    let dist = PiecewiseLinearRevenueDist::new(r, eps)?;
    let mut prices = vec![dist.top(); n - 1];
    prices.push(1.0);
    Ok((dist, PriceVector::new(prices)?))
}

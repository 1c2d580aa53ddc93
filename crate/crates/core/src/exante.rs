//! Ex-ante relaxation: choose per-buyer sale probabilities first, prices
//! second.
//!
//! An allocation gives buyer `i` the item with probability `q_i`, subject
//! only to the budget `sum q_i <= 1`.  Coordinate `i` earns at most
//! `R(q_i)`, so the relaxed optimum is `max sum R(q_i)`.  Its value caps
//! the revenue of every sequential pricing policy, discriminatory or not.
//!
//! For a regular distribution the sum is maximized symmetrically and the
//! problem is one-dimensional.  For a discrete distribution `R` is
//! piecewise linear with kinks only at the atom tails, so an exact
//! optimum lies on a vertex of the feasible set: all but one coordinate
//! sit on atom tails and the last takes what remains of the budget.
//! The general fallback is a dynamic program over a discretized budget.

use crate::dist::{effectively_regular, DiscreteDistribution, DistributionSpec};
use crate::error::{Error, Result};
use crate::pricing::{check_finite_optimum, PriceVector};
use crate::search;

/// Per-buyer sale probabilities with total at most 1 (tolerance 1e-12).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileAllocation {
    q: Vec<f64>,
}

impl QuantileAllocation {
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidParameter(
                "allocation needs at least one coordinate".to_string(),
            ));
        }
        for (i, &qi) in q.iter().enumerate() {
            if !qi.is_finite() || !(0.0..=1.0).contains(&qi) {
                return Err(Error::InvalidParameter(format!(
                    "allocation coordinate {i} must lie in [0, 1], got {qi}"
                )));
            }
        }
        let total: f64 = q.iter().sum();
        if total > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "allocation total {total} exceeds the unit budget"
            )));
        }
        Ok(QuantileAllocation { q })
    }

    pub fn quantiles(&self) -> &[f64] {
        &self.q
    }

    pub fn total(&self) -> f64 {
        self.q.iter().sum()
    }
}

/// Ex-ante optimum for a regular distribution.
///
/// Concavity of `R` makes the symmetric allocation optimal, so this
/// maximizes `n * R(q)` over `q` in `(0, 1/n]` and returns
/// `(q_star, value)`.  Inputs that fail the concavity test are rejected.
pub fn exante_regular(d: &DistributionSpec, n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "need at least one buyer".to_string(),
        ));
    }
    if !effectively_regular(d) {
        return Err(Error::NotRegular);
    }
    check_finite_optimum(d)?;
    let (q, value) = search::maximize(|q| n as f64 * d.revenue_curve(q), 1.0 / n as f64);
    Ok((q, value))
}

/// Ex-ante optimum for any distribution, returned as the allocation and
/// its value.
///
/// Discrete distributions are solved exactly by enumerating budget
/// vertices; `budget_grid` is not used on that path.  The enumeration
/// visits at most `C(n - 1 + m, m)` vertices for `m` atoms, so it suits
/// small `n`.  Other distributions run a dynamic program on a budget
/// grid with `budget_grid` nodes; the value then undershoots the true
/// optimum by at most `n` times the largest rise of `R` between
/// neighboring grid nodes.
pub fn exante_general(
    d: &DistributionSpec,
    n: usize,
    budget_grid: usize,
) -> Result<(QuantileAllocation, f64)> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "need at least one buyer".to_string(),
        ));
    }
    if budget_grid < 100 {
        return Err(Error::InvalidParameter(format!(
            "budget grid needs at least 100 nodes, got {budget_grid}"
        )));
    }
    match d {
        DistributionSpec::Discrete(dd) => Ok(exante_discrete(d, dd, n)),
        _ => {
            check_finite_optimum(d)?;
            Ok(exante_grid(d, n, budget_grid))
        }
    }
}

/// Best single coordinate worth of revenue from budget `b`: either all
/// of `b`, or the largest affordable atom tail.  `R` rises linearly
/// within each tail segment, so nothing between these candidates can win.
fn best_single(d: &DistributionSpec, dd: &DiscreteDistribution, b: f64) -> (f64, f64) {
    let mut best = (b, d.revenue_curve(b));
    for (&a, &t) in dd.atoms().iter().zip(dd.tails()) {
        if t <= b {
            let v = t * a;
            if v > best.1 {
                best = (t, v);
            }
        }
    }
    best
}

fn exante_discrete(
    d: &DistributionSpec,
    dd: &DiscreteDistribution,
    n: usize,
) -> (QuantileAllocation, f64) {
    struct Best {
        value: f64,
        fixed: Vec<f64>,
        remainder: f64,
    }
    struct Search<'a> {
        d: &'a DistributionSpec,
        dd: &'a DiscreteDistribution,
        best: Best,
    }
    impl Search<'_> {
        fn visit(&mut self, start: usize, slots: usize, used: f64, acc: f64, fixed: &mut Vec<f64>) {
            let (q_rem, v_rem) = best_single(self.d, self.dd, 1.0 - used);
            if acc + v_rem > self.best.value {
                self.best = Best {
                    value: acc + v_rem,
                    fixed: fixed.clone(),
                    remainder: q_rem,
                };
            }
            if slots == 0 {
                return;
            }
            for k in start..self.dd.atoms().len() {
                let t = self.dd.tails()[k];
                if used + t <= 1.0 {
                    fixed.push(t);
                    self.visit(k, slots - 1, used + t, acc + t * self.dd.atoms()[k], fixed);
                    fixed.pop();
                }
            }
        }
    }

    let mut search = Search {
        d,
        dd,
        best: Best {
            value: f64::NEG_INFINITY,
            fixed: Vec::new(),
            remainder: 0.0,
        },
    };
    search.visit(0, n - 1, 0.0, 0.0, &mut Vec::new());
    let Best {
        value,
        fixed,
        remainder,
    } = search.best;
    let mut q = fixed;
    q.push(remainder);
    q.resize(n, 0.0);
    (QuantileAllocation { q }, value)
}

fn exante_grid(d: &DistributionSpec, n: usize, grid: usize) -> (QuantileAllocation, f64) {
    let step = 1.0 / grid as f64;
    let r: Vec<f64> = (0..=grid).map(|j| d.revenue_curve(j as f64 * step)).collect();

    // best[b] starts as the one-coordinate value max_{j <= b} r[j];
    // each round folds in one more coordinate.  choice[k][b] records the
    // grid quantile the (k + 1)-th coordinate takes from budget b.
    let mut choice = vec![vec![0u32; grid + 1]; n];
    let mut best = vec![0.0; grid + 1];
    let mut arg = 0u32;
    let mut run = f64::NEG_INFINITY;
    for b in 0..=grid {
        if r[b] > run {
            run = r[b];
            arg = b as u32;
        }
        best[b] = run;
        choice[0][b] = arg;
    }
    for row in choice.iter_mut().skip(1) {
        let prev = best.clone();
        for b in 0..=grid {
            let mut top = prev[b];
            let mut at = 0u32;
            for j in 1..=b {
                let v = r[j] + prev[b - j];
                if v > top {
                    top = v;
                    at = j as u32;
                }
            }
            best[b] = top;
            row[b] = at;
        }
    }

    let mut q = Vec::with_capacity(n);
    let mut b = grid;
    for k in (0..n).rev() {
        let j = choice[k][b] as usize;
        q.push(j as f64 * step);
        b -= j;
    }
    (QuantileAllocation { q }, best[grid])
}

/// Best ex-ante allocation when each coordinate must use one of the
/// given prices: coordinate `i` earns `p_i * q_i` with `q_i` capped by
/// the tail at `p_i`.  Greedy by price is exact since all coordinates
/// compete for one budget.  Returns the allocation in input order and
/// its value.
pub fn exante_restricted(
    d: &DistributionSpec,
    prices: &PriceVector,
) -> (QuantileAllocation, f64) {
    let ps = prices.prices();
    let mut order: Vec<usize> = (0..ps.len()).collect();
    order.sort_by(|&i, &j| ps[j].total_cmp(&ps[i]));
    let mut left = 1.0;
    let mut q = vec![0.0; ps.len()];
    let mut value = 0.0;
    for &i in &order {
        if left <= 0.0 {
            break;
        }
        let cap = 1.0 - d.left_cdf(ps[i]);
        let take = cap.min(left);
        q[i] = take;
        value += ps[i] * take;
        left -= take;
    }
    (QuantileAllocation { q }, value)
}

//! Value distributions for a single item sold by posted prices.
//!
//! Every family exposes the same small interface: the CDF `F`, its left
//! limit `F(x-)`, the tail quantile `quantile(q)` defined as the largest
//! price `p >= 0` with `P[v >= p] >= q`, and the revenue curve
//! `R(q) = q * quantile(q)`, the revenue from selling with ex-ante
//! probability exactly `q`.  A distribution is regular when `R` is
//! concave on `[0, 1]`.
//!
//! Prices and quantiles are linked through the tail: for every price `p`,
//! `P[v >= p] = 1 - F(p-)`, so `quantile` is the generalized inverse of
//! the left-limit CDF.  All optimization elsewhere in the crate runs in
//! quantile space, where the feasible set is always `(0, 1]`.

use std::fmt::Write as _;
use std::fs::File;
use std::io;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Regularity status fixed at construction time.
///
/// `Unknown` is reserved for families whose parameters do not settle the
/// question; the numeric [`DistributionSpec::regularity_check`] can then
/// be consulted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularity {
    Regular,
    Irregular,
    Unknown,
}

/// The closure of the set of values a draw can take.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    /// An interval `[lo, hi]`, with `hi = f64::INFINITY` when unbounded.
    Interval { lo: f64, hi: f64 },
    /// A finite set of atoms in increasing order.
    Atoms(Vec<f64>),
}

/// Uniform distribution on `[lo, hi]` with `0 <= lo < hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Uniform {
    lo: f64,
    hi: f64,
}

impl Uniform {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || lo >= hi {
            return Err(Error::InvalidParameter(format!(
                "uniform needs 0 <= lo < hi, got lo = {lo}, hi = {hi}"
            )));
        }
        Ok(Uniform { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

/// Exponential distribution with rate `lambda > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Exponential {
    lambda: f64,
}

impl Exponential {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "exponential needs lambda > 0, got {lambda}"
            )));
        }
        Ok(Exponential { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Generalized Pareto distribution with location `mu >= 0`, scale
/// `lambda > 0` and shape `xi >= 0`.
///
/// For `xi > 0` the CDF is `1 - (1 - xi * lambda * (x - mu))^(1/xi)` on
/// `[mu, mu + 1/(xi * lambda)]`; the limit `xi = 0` is the exponential
/// distribution shifted to start at `mu`.  The virtual value
/// `x - (1 - F(x)) / f(x)` is affine for every member of the family.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedPareto {
    mu: f64,
    lambda: f64,
    xi: f64,
}

impl GeneralizedPareto {
    pub fn new(mu: f64, lambda: f64, xi: f64) -> Result<Self> {
        if !mu.is_finite() || !lambda.is_finite() || !xi.is_finite() {
            return Err(Error::InvalidParameter(
                "generalized Pareto parameters must be finite".to_string(),
            ));
        }
        if mu < 0.0 || lambda <= 0.0 || xi < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "generalized Pareto needs mu >= 0, lambda > 0, xi >= 0, \
                 got mu = {mu}, lambda = {lambda}, xi = {xi}"
            )));
        }
        Ok(GeneralizedPareto { mu, lambda, xi })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Upper end of the support, infinite for `xi = 0`.
    pub fn upper(&self) -> f64 {
        if self.xi > 0.0 {
            self.mu + 1.0 / (self.xi * self.lambda)
        } else {
            f64::INFINITY
        }
    }
}

/// Distribution with finitely many atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    atoms: Vec<f64>,
    probs: Vec<f64>,
    /// `tails[k] = P[v >= atoms[k]]`, shared by `quantile` and
    /// `left_cdf` so the two stay bit-for-bit consistent.
    tails: Vec<f64>,
}

impl DiscreteDistribution {
    /// Builds a discrete distribution from atoms in strictly increasing
    /// order and positive probabilities summing to 1 within 1e-12.
    pub fn new(atoms: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != probs.len() {
            return Err(Error::InvalidParameter(
                "discrete distribution needs equally many atoms and probabilities, at least one"
                    .to_string(),
            ));
        }
        for (k, &a) in atoms.iter().enumerate() {
            if !a.is_finite() || a < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "atom {k} must be a finite nonnegative value, got {a}"
                )));
            }
            if k > 0 && a <= atoms[k - 1] {
                return Err(Error::InvalidParameter(
                    "atoms must be strictly increasing".to_string(),
                ));
            }
        }
        for (k, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "probability {k} must be positive, got {p}"
                )));
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "probabilities must sum to 1 within 1e-12, got {total}"
            )));
        }
        let mut tails = vec![0.0; probs.len()];
        let mut acc = 0.0;
        for k in (0..probs.len()).rev() {
            acc += probs[k];
            tails[k] = acc;
        }
        Ok(DiscreteDistribution { atoms, probs, tails })
    }

    /// Reads `value,prob` rows from a CSV file.
    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| {
            Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        })?;
        Self::from_csv_reader(file)
    }

    /// Reads `value,prob` rows from any reader.  The header row is
    /// required and the values must already be in increasing order.
    pub fn from_csv_reader<R: io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::InvalidParameter(format!("discrete csv: {e}")))?;
        if headers.len() != 2 || &headers[0] != "value" || &headers[1] != "prob" {
            return Err(Error::InvalidParameter(
                "discrete csv must start with the header `value,prob`".to_string(),
            ));
        }
        let mut atoms = Vec::new();
        let mut probs = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| {
                Error::InvalidParameter(format!("discrete csv row {}: {e}", row + 2))
            })?;
            let parse = |field: &str, name: &str| {
                field.parse::<f64>().map_err(|_| {
                    Error::InvalidParameter(format!(
                        "discrete csv row {}: {name} `{field}` is not a number",
                        row + 2
                    ))
                })
            };
            atoms.push(parse(&record[0], "value")?);
            probs.push(parse(&record[1], "prob")?);
        }
        Self::new(atoms, probs)
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Tail probabilities `P[v >= atoms[k]]`, decreasing in `k`.
    pub fn tails(&self) -> &[f64] {
        &self.tails
    }
}

/// Continuous distribution on `[1, r/eps]` with an atom of mass `eps`
/// at the top, built so that the revenue curve is piecewise linear:
/// `R(q) = r` for `q <= eps` and `R(q) = a*q + b` above, with
/// `a = (1 - r)/(1 - eps)` and `b = (r - eps)/(1 - eps)`.
///
/// The curve is concave exactly when `r >= eps`; other pairs are
/// rejected.  `R(1) = 1`, so the lowest value in the support is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearRevenueDist {
    r: f64,
    eps: f64,
    a: f64,
    b: f64,
}

impl PiecewiseLinearRevenueDist {
    pub fn new(r: f64, eps: f64) -> Result<Self> {
        if !r.is_finite() || !eps.is_finite() || !(0.0..=1.0).contains(&r) || eps <= 0.0 || eps >= 1.0
        {
            return Err(Error::InvalidParameter(format!(
                "piecewise linear revenue needs r in [0, 1] and eps in (0, 1), \
                 got r = {r}, eps = {eps}"
            )));
        }
        if r < eps {
            return Err(Error::InvalidParameter(format!(
                "r = {r} < eps = {eps} makes the revenue curve non-concave"
            )));
        }
        let a = (1.0 - r) / (1.0 - eps);
        let b = (r - eps) / (1.0 - eps);
        Ok(PiecewiseLinearRevenueDist { r, eps, a, b })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Top of the support, where the atom sits.
    pub fn top(&self) -> f64 {
        self.r / self.eps
    }
}

/// A value distribution from one of the supported families.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec {
    Uniform(Uniform),
    Exponential(Exponential),
    GeneralizedPareto(GeneralizedPareto),
    Discrete(DiscreteDistribution),
    PiecewiseLinearRevenue(PiecewiseLinearRevenueDist),
}

impl From<Uniform> for DistributionSpec {
    fn from(d: Uniform) -> Self {
        DistributionSpec::Uniform(d)
    }
}

impl From<Exponential> for DistributionSpec {
    fn from(d: Exponential) -> Self {
        DistributionSpec::Exponential(d)
    }
}

impl From<GeneralizedPareto> for DistributionSpec {
    fn from(d: GeneralizedPareto) -> Self {
        DistributionSpec::GeneralizedPareto(d)
    }
}

impl From<DiscreteDistribution> for DistributionSpec {
    fn from(d: DiscreteDistribution) -> Self {
        DistributionSpec::Discrete(d)
    }
}

impl From<PiecewiseLinearRevenueDist> for DistributionSpec {
    fn from(d: PiecewiseLinearRevenueDist) -> Self {
        DistributionSpec::PiecewiseLinearRevenue(d)
    }
}

impl DistributionSpec {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        Uniform::new(lo, hi).map(Into::into)
    }

    pub fn exponential(lambda: f64) -> Result<Self> {
        Exponential::new(lambda).map(Into::into)
    }

    pub fn generalized_pareto(mu: f64, lambda: f64, xi: f64) -> Result<Self> {
        GeneralizedPareto::new(mu, lambda, xi).map(Into::into)
    }

    pub fn discrete(atoms: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        DiscreteDistribution::new(atoms, probs).map(Into::into)
    }

    pub fn piecewise_linear_revenue(r: f64, eps: f64) -> Result<Self> {
        PiecewiseLinearRevenueDist::new(r, eps).map(Into::into)
    }

    /// The CDF `F(x) = P[v <= x]`.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            DistributionSpec::Uniform(u) => ((x - u.lo) / (u.hi - u.lo)).clamp(0.0, 1.0),
            DistributionSpec::Exponential(e) => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-e.lambda * x).exp_m1()
                }
            }
            DistributionSpec::GeneralizedPareto(g) => {
                if x <= g.mu {
                    0.0
                } else if g.xi > 0.0 {
                    if x >= g.upper() {
                        1.0
                    } else {
                        let u = (1.0 - g.xi * g.lambda * (x - g.mu)).max(0.0);
                        1.0 - u.powf(1.0 / g.xi)
                    }
                } else {
                    -(-g.lambda * (x - g.mu)).exp_m1()
                }
            }
            DistributionSpec::Discrete(d) => {
                // First atom strictly above x starts the surviving tail.
                let k = d.atoms.partition_point(|&a| a <= x);
                match d.tails.get(k) {
                    Some(&t) => (1.0 - t).clamp(0.0, 1.0),
                    None => 1.0,
                }
            }
            DistributionSpec::PiecewiseLinearRevenue(p) => {
                if x < 1.0 {
                    0.0
                } else if x >= p.top() {
                    1.0
                } else {
                    (1.0 - p.b / (x - p.a)).clamp(0.0, 1.0)
                }
            }
        }
    }

    /// The left limit `F(x-) = P[v < x]`, so that the probability of a
    /// sale at price `p` is `1 - left_cdf(p)`.
    pub fn left_cdf(&self, x: f64) -> f64 {
        match self {
            DistributionSpec::Discrete(d) => {
                // First atom at or above x; everything from it survives.
                let k = d.atoms.partition_point(|&a| a < x);
                match d.tails.get(k) {
                    Some(&t) => (1.0 - t).clamp(0.0, 1.0),
                    None => 1.0,
                }
            }
            DistributionSpec::PiecewiseLinearRevenue(p) => {
                let top = p.top();
                if x > top {
                    1.0
                } else if x == top {
                    // Exactly the atom mass survives at the top price.
                    1.0 - p.eps
                } else {
                    self.cdf(x)
                }
            }
            _ => self.cdf(x),
        }
    }

    /// Largest price `p >= 0` with `P[v >= p] >= q`, for `q` in `(0, 1]`.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "quantile needs q in (0, 1], got {q}"
            )));
        }
        Ok(self.quantile_unchecked(q))
    }

    pub(crate) fn quantile_unchecked(&self, q: f64) -> f64 {
        debug_assert!(q > 0.0 && q <= 1.0);
        match self {
            DistributionSpec::Uniform(u) => u.hi - q * (u.hi - u.lo),
            DistributionSpec::Exponential(e) => -q.ln() / e.lambda,
            DistributionSpec::GeneralizedPareto(g) => {
                if g.xi > 0.0 {
                    g.mu + (1.0 - q.powf(g.xi)) / (g.xi * g.lambda)
                } else {
                    g.mu - q.ln() / g.lambda
                }
            }
            DistributionSpec::Discrete(d) => {
                // Count of leading tails >= q; the last of them is the
                // largest atom whose tail still covers q.
                let k = d.tails.partition_point(|&t| t >= q);
                if k == 0 {
                    d.atoms[0]
                } else {
                    d.atoms[k - 1]
                }
            }
            DistributionSpec::PiecewiseLinearRevenue(p) => {
                if q <= p.eps {
                    p.top()
                } else {
                    p.a + p.b / q
                }
            }
        }
    }

    /// Revenue curve `R(q) = q * quantile(q)`, extended by `R(0) = 0`.
    /// Arguments are clamped to `[0, 1]`.
    pub fn revenue_curve(&self, q: f64) -> f64 {
        let q = q.clamp(0.0, 1.0);
        if q == 0.0 {
            0.0
        } else {
            q * self.quantile_unchecked(q)
        }
    }

    /// Virtual value `x - (1 - F(x)) / f(x)` at a point of positive
    /// density.  Rejects discrete distributions and points outside the
    /// continuous part of the support.
    pub fn virtual_value(&self, x: f64) -> Result<f64> {
        let outside = |name: &str| {
            Err(Error::InvalidParameter(format!(
                "x = {x} is outside the part of the {name} support with positive density"
            )))
        };
        match self {
            DistributionSpec::Uniform(u) => {
                if x < u.lo || x > u.hi {
                    return outside("uniform");
                }
                Ok(2.0 * x - u.hi)
            }
            DistributionSpec::Exponential(e) => {
                if x < 0.0 {
                    return outside("exponential");
                }
                Ok(x - 1.0 / e.lambda)
            }
            DistributionSpec::GeneralizedPareto(g) => {
                if x < g.mu || x > g.upper() {
                    return outside("generalized Pareto");
                }
                Ok((1.0 + g.xi) * x - (1.0 / g.lambda + g.xi * g.mu))
            }
            DistributionSpec::Discrete(_) => Err(Error::Unsupported(
                "virtual value of a discrete distribution".to_string(),
            )),
            DistributionSpec::PiecewiseLinearRevenue(p) => {
                if p.b == 0.0 {
                    return Err(Error::Unsupported(
                        "virtual value of a point mass".to_string(),
                    ));
                }
                if x < 1.0 || x >= p.top() {
                    return outside("piecewise linear revenue");
                }
                Ok(p.a)
            }
        }
    }

    /// Numerically tests concavity of the revenue curve by comparing
    /// every grid pair's midpoint value against the chord, with absolute
    /// tolerance 1e-9.  `grid_points` below 3 is raised to 3.
    pub fn regularity_check(&self, grid_points: usize) -> bool {
        let g = grid_points.max(3);
        let q = |i: usize| i as f64 / (g - 1) as f64;
        let r: Vec<f64> = (0..g).map(|i| self.revenue_curve(q(i))).collect();
        for i in 0..g {
            for j in (i + 1)..g {
                let mid = 0.5 * (q(i) + q(j));
                if self.revenue_curve(mid) < 0.5 * (r[i] + r[j]) - 1e-9 {
                    return false;
                }
            }
        }
        true
    }

    /// Regularity as known from the family and its parameters.
    ///
    /// The three continuous families have concave revenue curves for all
    /// accepted parameters, as does the piecewise linear family by
    /// construction.  A discrete distribution with two or more atoms has
    /// a discontinuous revenue curve, hence is irregular; a single atom
    /// gives a linear curve.
    pub fn regular_flag(&self) -> Regularity {
        match self {
            DistributionSpec::Uniform(_)
            | DistributionSpec::Exponential(_)
            | DistributionSpec::GeneralizedPareto(_)
            | DistributionSpec::PiecewiseLinearRevenue(_) => Regularity::Regular,
            DistributionSpec::Discrete(d) => {
                if d.atoms.len() == 1 {
                    Regularity::Regular
                } else {
                    Regularity::Irregular
                }
            }
        }
    }

    pub fn support(&self) -> Support {
        match self {
            DistributionSpec::Uniform(u) => Support::Interval { lo: u.lo, hi: u.hi },
            DistributionSpec::Exponential(_) => Support::Interval {
                lo: 0.0,
                hi: f64::INFINITY,
            },
            DistributionSpec::GeneralizedPareto(g) => Support::Interval {
                lo: g.mu,
                hi: g.upper(),
            },
            DistributionSpec::Discrete(d) => Support::Atoms(d.atoms.clone()),
            DistributionSpec::PiecewiseLinearRevenue(p) => Support::Interval {
                lo: 1.0,
                hi: p.top(),
            },
        }
    }
}

pub(crate) const REGULARITY_GRID: usize = 257;

/// Regular either by construction or by the numeric concavity test.
/// Used wherever an operation needs regularity but the flag alone is
/// inconclusive.
pub(crate) fn effectively_regular(d: &DistributionSpec) -> bool {
    match d.regular_flag() {
        Regularity::Regular => true,
        Regularity::Irregular | Regularity::Unknown => d.regularity_check(REGULARITY_GRID),
    }
}

/// Parses `uniform:<lo>,<hi>`, `exp:<lambda>`, `gpd:<mu>,<lambda>,<xi>`,
/// `plr:<r>,<eps>` or `discrete:<csv path>`.
impl FromStr for DistributionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let grammar = "expected uniform:<lo>,<hi> | exp:<lambda> | gpd:<mu>,<lambda>,<xi> \
                       | plr:<r>,<eps> | discrete:<csv path>";
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidParameter(format!("`{s}`: {grammar}")))?;
        match kind {
            "uniform" => {
                let f = parse_fields(rest, 2)?;
                DistributionSpec::uniform(f[0], f[1])
            }
            "exp" => {
                let f = parse_fields(rest, 1)?;
                DistributionSpec::exponential(f[0])
            }
            "gpd" => {
                let f = parse_fields(rest, 3)?;
                DistributionSpec::generalized_pareto(f[0], f[1], f[2])
            }
            "plr" => {
                let f = parse_fields(rest, 2)?;
                DistributionSpec::piecewise_linear_revenue(f[0], f[1])
            }
            "discrete" => DiscreteDistribution::from_csv_path(rest).map(Into::into),
            _ => Err(Error::InvalidParameter(format!(
                "unknown distribution kind `{kind}`: {grammar}"
            ))),
        }
    }
}

fn parse_fields(rest: &str, want: usize) -> Result<Vec<f64>> {
    let fields: Vec<&str> = rest.split(',').collect();
    if fields.len() != want {
        return Err(Error::InvalidParameter(format!(
            "expected {want} comma separated numbers, got `{rest}`"
        )));
    }
    fields
        .iter()
        .map(|f| {
            f.trim().parse::<f64>().map_err(|_| {
                Error::InvalidParameter(format!("`{f}` is not a number in `{rest}`"))
            })
        })
        .collect()
}

/// Renders a distribution back into its `kind:params` string.  Discrete
/// distributions render inline as `discrete:{v@p, ...}` since the file
/// they came from may be gone.
impl std::fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DistributionSpec::Uniform(u) => write!(f, "uniform:{},{}", u.lo, u.hi),
            DistributionSpec::Exponential(e) => write!(f, "exp:{}", e.lambda),
            DistributionSpec::GeneralizedPareto(g) => {
                write!(f, "gpd:{},{},{}", g.mu, g.lambda, g.xi)
            }
            DistributionSpec::PiecewiseLinearRevenue(p) => write!(f, "plr:{},{}", p.r, p.eps),
            DistributionSpec::Discrete(d) => {
                let mut body = String::new();
                for (k, (&a, &p)) in d.atoms.iter().zip(&d.probs).enumerate() {
                    if k > 0 {
                        body.push_str(", ");
                    }
                    let _ = write!(body, "{a}@{p}");
                }
                write!(f, "discrete:{{{body}}}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point() -> DistributionSpec {
        DistributionSpec::discrete(vec![1.0, 20.0], vec![0.875, 0.125]).unwrap()
    }

    #[test]
    fn uniform_basics() {
        let d = DistributionSpec::uniform(0.0, 1.0).unwrap();
        assert_eq!(d.cdf(0.3), 0.3);
        assert_eq!(d.cdf(-1.0), 0.0);
        assert_eq!(d.cdf(2.0), 1.0);
        assert_eq!(d.quantile(0.25).unwrap(), 0.75);
        assert_eq!(d.quantile(1.0).unwrap(), 0.0);
        assert_eq!(d.revenue_curve(0.5), 0.25);
        assert_eq!(d.virtual_value(0.75).unwrap(), 0.5);
        assert!(d.regularity_check(65));
        assert_eq!(d.regular_flag(), Regularity::Regular);
    }

    #[test]
    fn uniform_rejects_bad_parameters() {
        assert!(Uniform::new(1.0, 1.0).is_err());
        assert!(Uniform::new(-0.5, 1.0).is_err());
        assert!(Uniform::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn exponential_basics() {
        let d = DistributionSpec::exponential(1.0).unwrap();
        assert!((d.quantile(0.25).unwrap() - 4.0f64.ln()).abs() < 1e-15);
        assert!((d.cdf(1.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert_eq!(d.virtual_value(1.0).unwrap(), 0.0);
        assert_eq!(d.left_cdf(2.0), d.cdf(2.0));
        let d2 = DistributionSpec::exponential(2.0).unwrap();
        assert!((d2.quantile(0.5).unwrap() - 2.0f64.ln() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn generalized_pareto_basics() {
        let d = DistributionSpec::generalized_pareto(0.0, 1.0, 2.0).unwrap();
        assert!((d.cdf(0.375) - 0.5).abs() < 1e-15);
        assert!((d.quantile(0.25).unwrap() - 0.46875).abs() < 1e-15);
        assert_eq!(d.cdf(0.5), 1.0);
        assert_eq!(d.cdf(0.7), 1.0);
        // phi(x) = 3x - 1 for this member.
        assert!((d.virtual_value(1.0 / 3.0).unwrap()).abs() < 1e-15);
        assert_eq!(
            d.support(),
            Support::Interval { lo: 0.0, hi: 0.5 }
        );
    }

    #[test]
    fn generalized_pareto_xi_zero_is_shifted_exponential() {
        let g = DistributionSpec::generalized_pareto(2.0, 1.5, 0.0).unwrap();
        let e = DistributionSpec::exponential(1.5).unwrap();
        for x in [2.0, 2.5, 3.0, 5.0] {
            assert!((g.cdf(x) - e.cdf(x - 2.0)).abs() < 1e-15);
        }
        for q in [0.1, 0.5, 0.9, 1.0] {
            assert!((g.quantile(q).unwrap() - (e.quantile(q).unwrap() + 2.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn discrete_basics() {
        let d = two_point();
        assert_eq!(d.quantile(1.0).unwrap(), 1.0);
        assert_eq!(d.quantile(0.125).unwrap(), 20.0);
        assert_eq!(d.quantile(0.2).unwrap(), 1.0);
        assert_eq!(d.revenue_curve(0.125), 2.5);
        assert_eq!(d.revenue_curve(1.0), 1.0);
        assert_eq!(d.left_cdf(20.0), 0.875);
        assert_eq!(d.cdf(20.0), 1.0);
        assert_eq!(d.left_cdf(1.0), 0.0);
        assert_eq!(d.cdf(1.0), 0.875);
        assert_eq!(d.cdf(0.5), 0.0);
        assert!(d.virtual_value(1.0).is_err());
        assert_eq!(d.regular_flag(), Regularity::Irregular);
        assert!(!d.regularity_check(257));
    }

    #[test]
    fn single_atom_is_regular() {
        let d = DistributionSpec::discrete(vec![3.0], vec![1.0]).unwrap();
        assert_eq!(d.regular_flag(), Regularity::Regular);
        assert!(d.regularity_check(65));
        assert_eq!(d.quantile(0.4).unwrap(), 3.0);
    }

    #[test]
    fn discrete_rejects_bad_input() {
        assert!(DiscreteDistribution::new(vec![2.0, 1.0], vec![0.5, 0.5]).is_err());
        assert!(DiscreteDistribution::new(vec![1.0, 1.0], vec![0.5, 0.5]).is_err());
        assert!(DiscreteDistribution::new(vec![1.0], vec![0.9]).is_err());
        assert!(DiscreteDistribution::new(vec![1.0, 2.0], vec![1.0, 0.0]).is_err());
        assert!(DiscreteDistribution::new(vec![], vec![]).is_err());
    }

    #[test]
    fn piecewise_linear_revenue_basics() {
        let d = DistributionSpec::piecewise_linear_revenue(0.5, 0.1).unwrap();
        assert_eq!(d.quantile(0.05).unwrap(), 5.0);
        assert_eq!(d.quantile(0.1).unwrap(), 5.0);
        assert_eq!(d.revenue_curve(0.1), 0.5);
        assert!((d.revenue_curve(1.0) - 1.0).abs() < 1e-15);
        assert_eq!(d.left_cdf(5.0), 0.9);
        assert_eq!(d.cdf(5.0), 1.0);
        assert_eq!(d.cdf(0.5), 0.0);
        assert!(d.regularity_check(257));
        // Interior virtual value is the constant slope a.
        let a = (1.0 - 0.5) / (1.0 - 0.1);
        assert!((d.virtual_value(2.0).unwrap() - a).abs() < 1e-15);
        assert!(d.virtual_value(5.0).is_err());
        assert!(DistributionSpec::piecewise_linear_revenue(0.05, 0.1).is_err());
    }

    #[test]
    fn quantile_rejects_out_of_range() {
        let d = DistributionSpec::uniform(0.0, 1.0).unwrap();
        assert!(d.quantile(0.0).is_err());
        assert!(d.quantile(1.0 + 1e-9).is_err());
        assert!(d.quantile(f64::NAN).is_err());
        assert!(d.quantile(-0.3).is_err());
    }

    #[test]
    fn parses_spec_strings() {
        let d: DistributionSpec = "uniform:0,1".parse().unwrap();
        assert_eq!(d, DistributionSpec::uniform(0.0, 1.0).unwrap());
        let d: DistributionSpec = "exp:2.5".parse().unwrap();
        assert_eq!(d, DistributionSpec::exponential(2.5).unwrap());
        let d: DistributionSpec = "gpd:0,1,2".parse().unwrap();
        assert_eq!(d, DistributionSpec::generalized_pareto(0.0, 1.0, 2.0).unwrap());
        let d: DistributionSpec = "plr:0.5,0.1".parse().unwrap();
        assert_eq!(d, DistributionSpec::piecewise_linear_revenue(0.5, 0.1).unwrap());
        assert!("uniform:1".parse::<DistributionSpec>().is_err());
        assert!("weird:1".parse::<DistributionSpec>().is_err());
        assert!("exp:zero".parse::<DistributionSpec>().is_err());
        assert!("no-colon".parse::<DistributionSpec>().is_err());
    }

    #[test]
    fn reads_discrete_csv() {
        let csv = "value,prob\n1,0.875\n20,0.125\n";
        let d = DiscreteDistribution::from_csv_reader(csv.as_bytes()).unwrap();
        assert_eq!(d.atoms(), &[1.0, 20.0]);
        assert_eq!(d.probs(), &[0.875, 0.125]);
        assert_eq!(d.tails(), &[1.0, 0.125]);

        let bad_header = "v,p\n1,1\n";
        assert!(DiscreteDistribution::from_csv_reader(bad_header.as_bytes()).is_err());
        let bad_value = "value,prob\none,1\n";
        assert!(DiscreteDistribution::from_csv_reader(bad_value.as_bytes()).is_err());
    }

    #[test]
    fn quantile_inverts_left_cdf() {
        let dists = [
            DistributionSpec::uniform(0.5, 2.0).unwrap(),
            DistributionSpec::exponential(0.7).unwrap(),
            DistributionSpec::generalized_pareto(1.0, 0.5, 3.0).unwrap(),
            DistributionSpec::piecewise_linear_revenue(0.4, 0.2).unwrap(),
            two_point(),
        ];
        for d in &dists {
            for i in 1..=40 {
                let q = i as f64 / 40.0;
                let p = d.quantile(q).unwrap();
                // The tail at the quantile price covers q, up to
                // round-trip dust in the continuous families.
                assert!(
                    1.0 - d.left_cdf(p) >= q - 1e-12,
                    "{d}: tail at quantile({q}) too small"
                );
            }
        }
    }

    #[test]
    fn display_round_trips() {
        let d: DistributionSpec = "gpd:0.5,2,1.5".parse().unwrap();
        assert_eq!(d.to_string(), "gpd:0.5,2,1.5");
        assert_eq!(two_point().to_string(), "discrete:{1@0.875, 20@0.125}");
    }
}

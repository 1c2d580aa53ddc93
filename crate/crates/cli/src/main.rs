//! Command line front end for the posted-price toolkit.
//!
//! Each subcommand parses its inputs, calls into `ppp-core`, and emits
//! one machine-readable table, CSV by default or JSON with
//! `--format json`.  Exit status is 0 on success, 2 on usage errors
//! (malformed flags, courtesy of clap), and 1 when a computation or
//! input fails.  Set `PPP_THREADS` to cap the worker pool used by the
//! simulator.

mod table;

use std::env;
use std::error::Error;
use std::path::PathBuf;
use std::process;

use clap::{Parser, Subcommand, ValueEnum};
use ppp_core::dist::{DistributionSpec, Regularity};
use ppp_core::exante::{exante_general, exante_regular, exante_restricted};
use ppp_core::gaps::{
    bound_general, bound_regular, gap, irregular_lower_construction,
    regular_lower_construction, MethodTag, DEFAULT_BUDGET_GRID,
};
use ppp_core::pricing::{
    discriminatory_revenue, optimal_anonymous, optimal_discriminatory, PriceVector,
};
use ppp_core::sim::{simulate_revenue, simulate_welfare, RNG_NAME};
use ppp_core::welfare::{gap_table, welfare_prices, GapFamily};

use table::{Cell, Format, Table};

#[derive(Parser)]
#[command(name = "ppp", version, about = "Sequential posted pricing toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the table to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal price schedule for n buyers arriving in order.
    Prices {
        /// Value distribution, e.g. uniform:0,1 or exp:1.5.
        #[arg(long)]
        dist: String,
        /// Number of buyers.
        #[arg(long)]
        n: usize,
        /// What the schedule maximizes.
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Revenue)]
        objective: ObjectiveArg,
    },
    /// Anonymous, discriminatory, and ex-ante benchmarks with ratios.
    Gap {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        n: usize,
    },
    /// Closed-form caps on the benchmark ratios.
    Bounds {
        /// Buyer count, or the start of a range when --n-max is given.
        #[arg(long)]
        n: usize,
        /// Tabulate every count from n up to this one.
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Ex-ante optimal quantile allocation.
    Exante {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        n: usize,
        /// Budget grid resolution for irregular continuous inputs.
        #[arg(long, default_value_t = DEFAULT_BUDGET_GRID)]
        budget_grid: usize,
        /// Restrict the allocation to these prices (comma separated,
        /// one per buyer; overrides --n).
        #[arg(long)]
        prices: Option<String>,
    },
    /// Constructions whose ratios approach the closed-form caps.
    Lowerbound {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        /// Construction parameter; smaller values tighten the ratio.
        #[arg(long)]
        eps: f64,
    },
    /// Welfare recursion table.
    Welfare {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        n: usize,
    },
    /// Monte Carlo estimate for a fixed price schedule.
    Simulate {
        #[arg(long)]
        dist: String,
        /// Comma separated prices, one per buyer in arrival order.
        #[arg(long)]
        prices: String,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Revenue)]
        objective: ObjectiveArg,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Regenerate the tables behind the headline numbers.
    Reproduce {
        #[command(subcommand)]
        experiment: Experiment,
    },
}

#[derive(Subcommand)]
enum Experiment {
    /// Discriminatory over anonymous revenue, uniform values, n = 1..30.
    UniformGap,
    /// The same table for exponential values, n = 1..400.
    ExponentialGap,
    /// Two-point construction approaching the general cap.
    IrregularLb,
    /// Piecewise-linear-revenue construction approaching the regular cap.
    RegularLb,
    /// Both closed-form caps over a spread of buyer counts.
    BoundTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Revenue,
    Welfare,
}

impl ObjectiveArg {
    fn as_str(self) -> &'static str {
        match self {
            ObjectiveArg::Revenue => "revenue",
            ObjectiveArg::Welfare => "welfare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Irregular,
    Regular,
}

impl FamilyArg {
    fn as_str(self) -> &'static str {
        match self {
            FamilyArg::Irregular => "irregular",
            FamilyArg::Regular => "regular",
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        process::exit(1);
    }
}

fn run(cli: Cli) -> Result<(), Box<dyn Error>> {
    init_threads()?;
    let table = build(cli.command)?;
    table.emit(cli.format, cli.output.as_deref())
}

/// Caps the global worker pool when `PPP_THREADS` is set.  Must run
/// before anything touches the pool.
fn init_threads() -> Result<(), Box<dyn Error>> {
    let Ok(raw) = env::var("PPP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("PPP_THREADS must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    Ok(())
}

fn build(command: Command) -> Result<Table, Box<dyn Error>> {
    match command {
        Command::Prices { dist, n, objective } => {
            prices_table(&dist.parse()?, n, objective)
        }
        Command::Gap { dist, n } => gap_report_table(&dist.parse()?, n),
        Command::Bounds { n, n_max } => bounds_table(n, n_max),
        Command::Exante {
            dist,
            n,
            budget_grid,
            prices,
        } => exante_table(&dist.parse()?, n, budget_grid, prices.as_deref()),
        Command::Lowerbound { family, n, eps } => {
            construction_table(family, &[n], eps)
        }
        Command::Welfare { dist, n } => welfare_recursion_table(&dist.parse()?, n),
        Command::Simulate {
            dist,
            prices,
            objective,
            trials,
            seed,
        } => simulate_table(&dist.parse()?, &prices, objective, trials, seed),
        Command::Reproduce { experiment } => reproduce_table(experiment),
    }
}

/// One row per buyer in arrival order.  `value_to_go` is the expected
/// objective collected from this buyer onward, so the first row carries
/// the value of the whole schedule.
fn prices_table(
    d: &DistributionSpec,
    n: usize,
    objective: ObjectiveArg,
) -> Result<Table, Box<dyn Error>> {
    let mut t = Table::new(vec!["position", "price", "value_to_go"]);
    match objective {
        ObjectiveArg::Revenue => {
            let (schedule, _, rec) = optimal_discriminatory(d, n)?;
            for (i, &p) in schedule.prices().iter().enumerate() {
                t.push(vec![
                    Cell::UInt(i as u64 + 1),
                    Cell::Float(p),
                    Cell::Float(rec.continuation[n - i]),
                ]);
            }
        }
        ObjectiveArg::Welfare => {
            let rec = welfare_prices(d, n)?;
            for i in 1..=n {
                t.push(vec![
                    Cell::UInt(i as u64),
                    Cell::Float(rec.p_w[n - i]),
                    Cell::Float(rec.w[n - i + 1]),
                ]);
            }
        }
    }
    Ok(t)
}

fn gap_report_table(d: &DistributionSpec, n: usize) -> Result<Table, Box<dyn Error>> {
    let report = gap(d, n)?;
    let mut t = Table::new(vec![
        "n",
        "r_a",
        "r_d",
        "r_x",
        "gap_da",
        "gap_xa",
        "bound_general",
        "bound_regular",
        "method_r_a",
        "method_r_d",
        "method_r_x",
    ]);
    t.push(vec![
        Cell::UInt(report.n as u64),
        Cell::Float(report.r_a),
        Cell::Float(report.r_d),
        Cell::Float(report.r_x),
        Cell::Float(report.gap_da),
        Cell::Float(report.gap_xa),
        Cell::Float(report.bound_general),
        report.bound_regular.map_or(Cell::Null, Cell::Float),
        method_cell(report.method_r_a),
        method_cell(report.method_r_d),
        method_cell(report.method_r_x),
    ]);
    Ok(t)
}

fn method_cell(tag: MethodTag) -> Cell {
    Cell::Str(tag.as_str().to_string())
}

fn bounds_table(n: usize, n_max: Option<usize>) -> Result<Table, Box<dyn Error>> {
    if n < 1 {
        return Err("buyer count must be at least 1".into());
    }
    let hi = n_max.unwrap_or(n);
    if hi < n {
        return Err(format!("--n-max {hi} is below --n {n}").into());
    }
    let mut t = Table::new(vec!["n", "general", "regular"]);
    for k in n..=hi {
        t.push(vec![
            Cell::UInt(k as u64),
            Cell::Float(bound_general(k)),
            Cell::Float(bound_regular(k)),
        ]);
    }
    Ok(t)
}

/// One row per schedule slot.  Without `--prices` the price column is
/// the quantile's price level and empty for unserved slots; with
/// `--prices` it echoes the given schedule and the contribution is the
/// price times the quantile bought at it.
fn exante_table(
    d: &DistributionSpec,
    n: usize,
    budget_grid: usize,
    prices: Option<&str>,
) -> Result<Table, Box<dyn Error>> {
    let mut t = Table::new(vec![
        "index",
        "quantile",
        "price",
        "contribution",
        "total_value",
    ]);
    match prices {
        Some(list) => {
            let schedule = PriceVector::new(parse_prices(list)?)?;
            let (alloc, value) = exante_restricted(d, &schedule);
            let pairs = alloc.quantiles().iter().zip(schedule.prices());
            for (i, (&q, &p)) in pairs.enumerate() {
                t.push(vec![
                    Cell::UInt(i as u64 + 1),
                    Cell::Float(q),
                    Cell::Float(p),
                    Cell::Float(p * q),
                    Cell::Float(value),
                ]);
            }
        }
        None => {
            let (quantiles, value) = if d.regular_flag() == Regularity::Regular {
                let (q, v) = exante_regular(d, n)?;
                (vec![q; n], v)
            } else {
                let (alloc, v) = exante_general(d, n, budget_grid)?;
                (alloc.quantiles().to_vec(), v)
            };
            for (i, &q) in quantiles.iter().enumerate() {
                let price = if q > 0.0 {
                    Cell::Float(d.quantile(q)?)
                } else {
                    Cell::Null
                };
                t.push(vec![
                    Cell::UInt(i as u64 + 1),
                    Cell::Float(q),
                    price,
                    Cell::Float(d.revenue_curve(q)),
                    Cell::Float(value),
                ]);
            }
        }
    }
    Ok(t)
}

/// Builds the requested construction for each buyer count and reports
/// its discriminatory-over-anonymous ratio next to the cap it chases.
fn construction_table(
    family: FamilyArg,
    counts: &[usize],
    eps: f64,
) -> Result<Table, Box<dyn Error>> {
    let mut t = Table::new(vec![
        "family", "n", "eps", "r_d", "r_a", "ratio", "bound",
    ]);
    for &n in counts {
        let (d, schedule, bound) = match family {
            FamilyArg::Irregular => {
                let (dist, schedule) = irregular_lower_construction(n, eps)?;
                (DistributionSpec::from(dist), schedule, bound_general(n))
            }
            FamilyArg::Regular => {
                let (dist, schedule) = regular_lower_construction(n, eps)?;
                (DistributionSpec::from(dist), schedule, bound_regular(n))
            }
        };
        let r_d = discriminatory_revenue(&d, &schedule);
        let (_, r_a) = optimal_anonymous(&d, n)?;
        t.push(vec![
            Cell::Str(family.as_str().to_string()),
            Cell::UInt(n as u64),
            Cell::Float(eps),
            Cell::Float(r_d),
            Cell::Float(r_a),
            Cell::Float(r_d / r_a),
            Cell::Float(bound),
        ]);
    }
    Ok(t)
}

fn welfare_recursion_table(
    d: &DistributionSpec,
    n: usize,
) -> Result<Table, Box<dyn Error>> {
    let rec = welfare_prices(d, n)?;
    let mut t = Table::new(vec!["k", "welfare", "price_with_k_remaining"]);
    for (k, &w) in rec.w.iter().enumerate() {
        let price = rec.p_w.get(k).map_or(Cell::Null, |&p| Cell::Float(p));
        t.push(vec![Cell::UInt(k as u64), Cell::Float(w), price]);
    }
    Ok(t)
}

fn simulate_table(
    d: &DistributionSpec,
    prices: &str,
    objective: ObjectiveArg,
    trials: u64,
    seed: u64,
) -> Result<Table, Box<dyn Error>> {
    let schedule = PriceVector::new(parse_prices(prices)?)?;
    let result = match objective {
        ObjectiveArg::Revenue => simulate_revenue(d, &schedule, trials, seed)?,
        ObjectiveArg::Welfare => simulate_welfare(d, &schedule, trials, seed)?,
    };
    let mut t = Table::new(vec![
        "objective",
        "trials",
        "seed",
        "rng",
        "mean",
        "std_error",
        "method",
    ]);
    t.push(vec![
        Cell::Str(objective.as_str().to_string()),
        Cell::UInt(result.trials),
        Cell::UInt(result.seed),
        Cell::Str(RNG_NAME.to_string()),
        Cell::Float(result.mean),
        Cell::Float(result.std_error),
        method_cell(MethodTag::Simulated),
    ]);
    Ok(t)
}

fn reproduce_table(experiment: Experiment) -> Result<Table, Box<dyn Error>> {
    match experiment {
        Experiment::UniformGap => family_gap_table(GapFamily::Uniform, 30),
        Experiment::ExponentialGap => family_gap_table(GapFamily::Exponential, 400),
        Experiment::IrregularLb => {
            construction_table(FamilyArg::Irregular, &[2, 5, 10], 1e-6)
        }
        Experiment::RegularLb => {
            construction_table(FamilyArg::Regular, &[2, 4, 8], 1e-5)
        }
        Experiment::BoundTable => {
            let counts = (1..=20).chain([30, 50, 100, 1000]);
            bounds_rows(counts)
        }
    }
}

fn family_gap_table(family: GapFamily, n_max: usize) -> Result<Table, Box<dyn Error>> {
    let (rows, argmax) = gap_table(family, 1..=n_max)?;
    let mut t = Table::new(vec!["n", "r_d", "r_a", "ratio", "argmax"]);
    for row in rows {
        t.push(vec![
            Cell::UInt(row.n as u64),
            Cell::Float(row.r_d),
            Cell::Float(row.r_a),
            Cell::Float(row.ratio),
            Cell::Bool(row.n == argmax),
        ]);
    }
    Ok(t)
}

fn bounds_rows(counts: impl Iterator<Item = usize>) -> Result<Table, Box<dyn Error>> {
    let mut t = Table::new(vec!["n", "general", "regular"]);
    for n in counts {
        t.push(vec![
            Cell::UInt(n as u64),
            Cell::Float(bound_general(n)),
            Cell::Float(bound_regular(n)),
        ]);
    }
    Ok(t)
}

fn parse_prices(list: &str) -> Result<Vec<f64>, Box<dyn Error>> {
    list.split(',')
        .map(|field| {
            let field = field.trim();
            field
                .parse::<f64>()
                .map_err(|_| format!("`{field}` is not a number in the price list").into())
        })
        .collect()
}

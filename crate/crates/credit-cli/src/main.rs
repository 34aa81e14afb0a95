//! Batch analytics front end: file ingestion, command dispatch and
//! JSON/CSV/table output.
//!
//! Prices cross this boundary per 100 face and spreads in basis points;
//! the engine works per unit face and in decimals. Exit codes: 0 success,
//! 2 input/parse error, 3 numerical failure.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use credit_engine::io::{
    default_accuracy, load_bond_records, load_discount_curve, load_hazard_curve, load_hedge_file,
    BondRecord, MarketQuote,
};
use credit_engine::pricer::{price_continuous, price_exact, price_naive_continuous};
use credit_engine::risk::{risk_report, RiskReport};
use credit_engine::{
    bcds, calibrate_flat_hazard, calibrate_oasf, conventional_spread_approx,
    conventional_spread_exact, solve_hedge, solve_spread_based_barbell, treasury_factors,
    yield_and_modified_duration, z_spread, Bond, DiscountCurve, EngineError, HazardCurve,
    HedgeProblem, PricingInputs,
};
use output::{Cell, Table};

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "credit-cli", version, about = "Survival-based credit bond analytics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Bond records, JSON array or CSV with header.
    #[arg(long)]
    bonds: PathBuf,
    /// Discount curve JSON.
    #[arg(long)]
    discount: PathBuf,
    /// Hazard curve JSON.
    #[arg(long)]
    hazard: PathBuf,
    /// Override OASF for all bonds, in basis points.
    #[arg(long)]
    oasf_bp: Option<f64>,
    #[command(flatten)]
    out: OutOpts,
}

#[derive(Args)]
struct OutOpts {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Exact, continuous and naive clean prices per bond.
    Price(CommonOpts),
    /// Full sensitivity report per bond.
    Risk(CommonOpts),
    /// Calibrated spreads per bond: OASF, flat hazard, BCDS, Z-spread, yield.
    Implied(CommonOpts),
    /// Zero-cost market-neutral long-short weights.
    Hedge(HedgeOpts),
    /// Risk measures along a flat-hazard grid for the first bond.
    Scan(ScanOpts),
    /// Conventional-spread bias: exact vs credit-triangle approximation.
    Bias(BiasOpts),
    /// Treasury shift/twist factors from five benchmark yield changes.
    Factors(FactorsOpts),
}

#[derive(Args)]
struct HedgeOpts {
    /// Pre-computed sensitivity problem (JSON). Alternative to
    /// --bonds/--discount/--hazard.
    #[arg(long, conflicts_with_all = ["bonds", "discount", "hazard"])]
    problem: Option<PathBuf>,
    #[arg(long, required_unless_present = "problem")]
    bonds: Option<PathBuf>,
    #[arg(long, required_unless_present = "problem")]
    discount: Option<PathBuf>,
    #[arg(long, required_unless_present = "problem")]
    hazard: Option<PathBuf>,
    /// Comma-separated risk keys to neutralize (e.g. d_r,d_h,vod).
    #[arg(long, value_delimiter = ',', default_values_t = vec![
        "d_r".to_string(), "d_h".to_string(), "vod".to_string()
    ])]
    risks: Vec<String>,
    /// Per-risk target accuracies, same order as --risks. Defaults: 0.1
    /// per duration row, 0.01 for vod.
    #[arg(long, value_delimiter = ',')]
    accuracy: Option<Vec<f64>>,
    /// Also print the conventional duration-neutral barbell (3 bonds,
    /// middle bond as body).
    #[arg(long)]
    spread_based: bool,
    #[command(flatten)]
    out: OutOpts,
}

#[derive(Args)]
struct ScanOpts {
    #[command(flatten)]
    common: CommonOpts,
    /// Grid start, decimal per annum.
    #[arg(long, default_value_t = 0.0)]
    h_min: f64,
    /// Grid end, decimal per annum.
    #[arg(long, default_value_t = 1.0)]
    h_max: f64,
    /// Grid step, decimal per annum.
    #[arg(long, default_value_t = 0.005)]
    h_step: f64,
}

#[derive(Args)]
struct BiasOpts {
    /// Comma-separated flat rates, decimal per annum.
    #[arg(long, value_delimiter = ',')]
    r_grid: Vec<f64>,
    /// Comma-separated flat hazards, decimal per annum.
    #[arg(long, value_delimiter = ',')]
    h_grid: Vec<f64>,
    /// Annual coupon, decimal.
    #[arg(long)]
    coupon: f64,
    /// Maturity in years.
    #[arg(long)]
    maturity: f64,
    /// Principal recovery fraction.
    #[arg(long)]
    recovery: f64,
    #[command(flatten)]
    out: OutOpts,
}

#[derive(Args)]
struct FactorsOpts {
    /// Benchmark yield changes in bp: 2y, 5y, 10y, 20y, 30y.
    #[arg(long, num_args = 1, action = clap::ArgAction::Append)]
    dy: Vec<f64>,
    #[command(flatten)]
    out: OutOpts,
}

struct CliError {
    code: u8,
    message: String,
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        let code = match e {
            EngineError::Invalid(_) => EXIT_INPUT,
            EngineError::Domain(_)
            | EngineError::Bracket { .. }
            | EngineError::DegenerateTrade => EXIT_NUMERICAL,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { code: EXIT_INPUT, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Price(opts) => cmd_price(opts),
        Command::Risk(opts) => cmd_risk(opts),
        Command::Implied(opts) => cmd_implied(opts),
        Command::Hedge(opts) => cmd_hedge(opts),
        Command::Scan(opts) => cmd_scan(opts),
        Command::Bias(opts) => cmd_bias(opts),
        Command::Factors(opts) => cmd_factors(opts),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct Market {
    records: Vec<BondRecord>,
    discount: DiscountCurve,
    hazard: HazardCurve,
    oasf_override: Option<f64>,
}

/// One bond pinned to the market: either the quoted price with its
/// calibrated OASF, or the quoted OASF with its model price.
struct Pinned {
    id: String,
    bond: Bond,
    oasf: f64,
    price: f64,
}

impl Market {
    fn load(opts: &CommonOpts) -> Result<Self, CliError> {
        Ok(Market {
            records: load_bond_records(&opts.bonds)?,
            discount: load_discount_curve(&opts.discount)?,
            hazard: load_hazard_curve(&opts.hazard)?,
            oasf_override: opts.oasf_bp.map(|x| x / 10_000.0),
        })
    }

    fn pin(&self, record: &BondRecord) -> Result<Pinned, CliError> {
        let bond = record.to_bond()?;
        let (oasf, price) = match (self.oasf_override, record.quote()?) {
            (Some(oasf), _) | (None, MarketQuote::Oasf(oasf)) => {
                let price = price_exact(&PricingInputs {
                    bond: &bond,
                    discount: &self.discount,
                    hazard: &self.hazard,
                    oasf,
                });
                (oasf, price)
            }
            (None, MarketQuote::CleanPrice(price)) => {
                let oasf = calibrate_oasf(&bond, &self.discount, &self.hazard, price)?;
                (oasf, price)
            }
        };
        Ok(Pinned { id: record.id.clone(), bond, oasf, price })
    }
}

fn cmd_price(opts: CommonOpts) -> Result<(), CliError> {
    let market = Market::load(&opts)?;
    let mut table = Table::new(&[
        "id",
        "clean_price_per100",
        "oasf_bp",
        "price_exact_per100",
        "price_continuous_per100",
        "price_naive_per100",
        "continuous_gap_per100",
        "naive_gap_per100",
    ]);
    for record in &market.records {
        let p = market.pin(record)?;
        let inputs = PricingInputs {
            bond: &p.bond,
            discount: &market.discount,
            hazard: &market.hazard,
            oasf: p.oasf,
        };
        let exact = price_exact(&inputs);
        let continuous = price_continuous(&inputs);
        let naive = price_naive_continuous(&inputs);
        table.row(vec![
            Cell::text(&p.id),
            Cell::num(100.0 * p.price),
            Cell::num(10_000.0 * p.oasf),
            Cell::num(100.0 * exact),
            Cell::num(100.0 * continuous),
            Cell::num(100.0 * naive),
            Cell::num(100.0 * (continuous - exact)),
            Cell::num(100.0 * (naive - exact)),
        ]);
    }
    table.emit(&opts.out)
}

fn cmd_risk(opts: CommonOpts) -> Result<(), CliError> {
    let market = Market::load(&opts)?;
    let mut table = Table::new(&[
        "id",
        "price_per100",
        "oasf_bp",
        "d_r",
        "gamma_r",
        "d_h",
        "gamma_h",
        "d_bcds",
        "d_recovery",
        "vod",
        "rpv01",
        "bcds_bp",
        "mod_duration",
        "z_spread_bp",
    ]);
    for record in &market.records {
        let p = market.pin(record)?;
        let r: RiskReport = risk_report(&p.bond, &market.discount, &market.hazard, p.oasf)?;
        table.row(vec![
            Cell::text(&p.id),
            Cell::num(100.0 * r.price),
            Cell::num(10_000.0 * p.oasf),
            Cell::num(r.d_r),
            Cell::num(r.gamma_r),
            Cell::num(r.d_h),
            Cell::num(r.gamma_h),
            Cell::num(r.d_bcds),
            Cell::num(r.d_recovery),
            Cell::num(r.vod),
            Cell::num(r.rpv01),
            Cell::num(10_000.0 * r.bcds),
            Cell::num(r.mod_duration),
            Cell::num(10_000.0 * r.z_spread),
        ]);
    }
    table.emit(&opts.out)
}

fn cmd_implied(opts: CommonOpts) -> Result<(), CliError> {
    let market = Market::load(&opts)?;
    let mut table = Table::new(&[
        "id",
        "price_per100",
        "oasf_bp",
        "flat_hazard_bp",
        "bcds_bp",
        "z_spread_bp",
        "yield_pct",
    ]);
    for record in &market.records {
        let p = market.pin(record)?;
        let flat_h =
            calibrate_flat_hazard(&p.bond, &market.discount, p.price, p.bond.recovery_principal)?;
        let spread = bcds(
            &market.discount,
            &market.hazard,
            p.bond.maturity,
            p.bond.recovery_principal,
            p.oasf,
        )?;
        let zs = z_spread(&p.bond, &market.discount, p.price)?;
        let (y, _) = yield_and_modified_duration(&p.bond, p.price)?;
        table.row(vec![
            Cell::text(&p.id),
            Cell::num(100.0 * p.price),
            Cell::num(10_000.0 * p.oasf),
            Cell::num(10_000.0 * flat_h),
            Cell::num(10_000.0 * spread),
            Cell::num(10_000.0 * zs),
            Cell::num(100.0 * y),
        ]);
    }
    table.emit(&opts.out)
}

fn cmd_hedge(opts: HedgeOpts) -> Result<(), CliError> {
    let (ids, risk_keys, rows, accuracies, mod_durations) = if let Some(path) = &opts.problem {
        let file = load_hedge_file(path)?;
        let keys: Vec<String> = opts
            .risks
            .iter()
            .filter(|k| file.sensitivities.contains_key(*k))
            .cloned()
            .collect();
        if keys.is_empty() {
            return Err(CliError {
                code: EXIT_INPUT,
                message: format!(
                    "none of the requested risks {:?} present in {}",
                    opts.risks,
                    path.display()
                ),
            });
        }
        let rows: Vec<Vec<f64>> = keys.iter().map(|k| file.sensitivities[k].clone()).collect();
        let accs = resolve_accuracies(&keys, &opts.accuracy)?;
        let mods = file.sensitivities.get("mod_duration").cloned();
        (file.bond_ids, keys, rows, accs, mods)
    } else {
        let common = CommonOpts {
            bonds: opts.bonds.clone().unwrap(),
            discount: opts.discount.clone().unwrap(),
            hazard: opts.hazard.clone().unwrap(),
            oasf_bp: None,
            out: OutOpts { out: None, format: Format::Table },
        };
        let market = Market::load(&common)?;
        let mut ids = Vec::new();
        let mut reports = Vec::new();
        for record in &market.records {
            let p = market.pin(record)?;
            ids.push(p.id.clone());
            reports.push(risk_report(&p.bond, &market.discount, &market.hazard, p.oasf)?);
        }
        let mut rows = Vec::new();
        for key in &opts.risks {
            let row: Option<Vec<f64>> = reports.iter().map(|r| r.field(key)).collect();
            rows.push(row.ok_or_else(|| CliError {
                code: EXIT_INPUT,
                message: format!("unknown risk key {key:?}"),
            })?);
        }
        let accs = resolve_accuracies(&opts.risks, &opts.accuracy)?;
        let mods = Some(reports.iter().map(|r| r.mod_duration).collect());
        (ids, opts.risks.clone(), rows, accs, mods)
    };

    let solution = solve_hedge(&HedgeProblem::new(rows, accuracies)?)?;

    let mut table = Table::new(&["id", "weight_pct"]);
    for (id, w) in ids.iter().zip(&solution.weights) {
        table.row(vec![Cell::text(id), Cell::num(100.0 * w)]);
    }
    table.row(vec![Cell::text("cash"), Cell::num(100.0 * solution.cash)]);
    for (key, residual) in risk_keys.iter().zip(&solution.residuals) {
        table.row(vec![Cell::text(&format!("residual {key}")), Cell::num(*residual)]);
    }
    if solution.rank_deficient {
        table.row(vec![Cell::text("warning"), Cell::text("rank-deficient: minimum-norm solution")]);
    }

    if opts.spread_based {
        let mods = mod_durations.ok_or_else(|| CliError {
            code: EXIT_INPUT,
            message: "spread-based comparison needs mod_duration data".into(),
        })?;
        let three: [f64; 3] = mods.as_slice().try_into().map_err(|_| CliError {
            code: EXIT_INPUT,
            message: "spread-based barbell needs exactly 3 bonds".into(),
        })?;
        let w = solve_spread_based_barbell(&three, 1)?;
        for (id, w) in ids.iter().zip(&w) {
            table.row(vec![
                Cell::text(&format!("spread-based {id}")),
                Cell::num(100.0 * w),
            ]);
        }
    }
    table.emit(&opts.out)
}

fn resolve_accuracies(keys: &[String], given: &Option<Vec<f64>>) -> Result<Vec<f64>, CliError> {
    match given {
        Some(accs) => {
            if accs.len() != keys.len() {
                return Err(CliError {
                    code: EXIT_INPUT,
                    message: format!(
                        "{} accuracies for {} risks",
                        accs.len(),
                        keys.len()
                    ),
                });
            }
            Ok(accs.clone())
        }
        None => Ok(keys.iter().map(|k| default_accuracy(k)).collect()),
    }
}

fn cmd_scan(opts: ScanOpts) -> Result<(), CliError> {
    let market = Market::load(&opts.common)?;
    let record = &market.records[0];
    let bond = record.to_bond()?;
    if !(opts.h_step > 0.0) || opts.h_max < opts.h_min {
        return Err(CliError { code: EXIT_INPUT, message: "empty hazard grid".into() });
    }
    let mut table = Table::new(&[
        "h", "bcds_bp", "price_per100", "d_r", "d_h", "d_recovery", "rpv01", "vod",
    ]);
    let mut h = opts.h_min;
    while h <= opts.h_max + 1e-12 {
        let hazard = HazardCurve::flat(h).map_err(CliError::from)?;
        let r = risk_report(&bond, &market.discount, &hazard, 0.0)?;
        table.row(vec![
            Cell::num(h),
            Cell::num(10_000.0 * r.bcds),
            Cell::num(100.0 * r.price),
            Cell::num(r.d_r),
            Cell::num(r.d_h),
            Cell::num(r.d_recovery),
            Cell::num(r.rpv01),
            Cell::num(r.vod),
        ]);
        h += opts.h_step;
    }
    table.emit(&opts.common.out)
}

fn cmd_bias(opts: BiasOpts) -> Result<(), CliError> {
    if opts.r_grid.is_empty() || opts.h_grid.is_empty() {
        return Err(CliError { code: EXIT_INPUT, message: "empty r/h grid".into() });
    }
    let mut table = Table::new(&[
        "r",
        "h",
        "spread_exact_bp",
        "spread_approx_bp",
        "gap_bp",
        "dspread_dr_sign",
    ]);
    for &h in &opts.h_grid {
        // exact spread across the r grid, to sign the co-movement by
        // forward difference
        let exact: Vec<f64> = opts
            .r_grid
            .iter()
            .map(|&r| conventional_spread_exact(opts.coupon, r, h, opts.recovery, opts.maturity))
            .collect::<Result<_, _>>()?;
        for (i, &r) in opts.r_grid.iter().enumerate() {
            let approx = conventional_spread_approx(opts.coupon, r, h, opts.recovery, opts.maturity);
            let sign = if i + 1 < exact.len() {
                let diff = exact[i + 1] - exact[i];
                if diff > 1e-12 {
                    "+"
                } else if diff < -1e-12 {
                    "-"
                } else {
                    "0"
                }
            } else {
                "."
            };
            table.row(vec![
                Cell::num(r),
                Cell::num(h),
                Cell::num(10_000.0 * exact[i]),
                Cell::num(10_000.0 * approx),
                Cell::num(10_000.0 * (approx - exact[i])),
                Cell::text(sign),
            ]);
        }
    }
    table.emit(&opts.out)
}

fn cmd_factors(opts: FactorsOpts) -> Result<(), CliError> {
    let dy: [f64; 5] = opts.dy.as_slice().try_into().map_err(|_| CliError {
        code: EXIT_INPUT,
        message: format!("need exactly five --dy values, got {}", opts.dy.len()),
    })?;
    let (shift, twist) = treasury_factors(&dy);
    let mut table = Table::new(&["factor", "bp"]);
    table.row(vec![Cell::text("shift"), Cell::num(shift)]);
    table.row(vec![Cell::text("twist"), Cell::num(twist)]);
    table.emit(&opts.out)
}

impl OutOpts {
    fn render(&self, table: &Table) -> String {
        match self.format {
            Format::Json => table.to_json(),
            Format::Csv => table.to_csv(),
            Format::Table => table.to_text(),
        }
    }
}

impl Table {
    fn emit(&self, opts: &OutOpts) -> Result<(), CliError> {
        let rendered = opts.render(self);
        match &opts.out {
            Some(path) => std::fs::write(path, rendered)?,
            None => print!("{rendered}"),
        }
        Ok(())
    }
}

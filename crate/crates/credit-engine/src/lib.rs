//! Survival-based credit bond analytics.
//!
//! The engine prices fixed-coupon bonds off a risk-free discount curve
//! and an issuer hazard (default intensity) curve, both piecewise-flat in
//! the instantaneous rate, with a continuously compounded option-adjusted
//! spread to forwards (OASF) picking up the bond-specific basis. On top
//! of the pricing kernel it provides:
//!
//! - survival-adjusted and credit-consistent durations and convexities
//!   (interest-rate, hazard-rate, spread, recovery),
//! - value-on-default and bond-implied CDS spreads,
//! - implied-spread calibrations (OASF, flat hazard, yield, Z-spread,
//!   conventional spread) via bracketed root finding,
//! - portfolio aggregation and least-squares market-neutral hedge
//!   construction, plus Treasury shift/twist factors.
//!
//! All prices inside the library are clean, per unit face; rates and
//! spreads are decimal per annum. Per-100 prices and basis points exist
//! only at the file/CLI boundary (see [`io`]).

pub mod bond;
pub mod curves;
pub mod error;
pub mod io;
pub mod portfolio;
pub mod pricer;
pub mod risk;
pub mod rootfind;

pub use bond::{Bond, CouponDate, Position};
pub use curves::{CurveNode, DiscountCurve, HazardCurve};
pub use error::{EngineError, Result};
pub use io::{BondRecord, CurveFile, HedgeFile, MarketQuote};
pub use portfolio::{
    solve_hedge, solve_spread_based_barbell, treasury_factors, HedgeProblem, HedgeSolution,
    Portfolio,
};
pub use pricer::{
    bcds, calibrate_flat_hazard, calibrate_oasf, conventional_spread_approx,
    conventional_spread_exact, price_continuous, price_exact, price_naive_continuous, rpv01,
    yield_and_modified_duration, z_spread, PricingInputs,
};
pub use risk::{
    continuous_sensitivities, duration_bcds, duration_hazard, duration_recovery,
    duration_survival, risk_report, vod, ContinuousSensitivities, RiskReport,
};

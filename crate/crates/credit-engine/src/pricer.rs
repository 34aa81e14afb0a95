//! Bond present value under the survival framework.
//!
//! Two pricing routes are kept side by side: the exact discrete sum over
//! the coupon schedule, and a continuous-time approximation with explicit
//! coupon-loss and early-discount corrections. The continuous route is
//! evaluated in closed form per piecewise-flat segment (the integrand is
//! exponential-affine on each segment), never by quadrature.

use crate::bond::Bond;
use crate::curves::{CurveNode, DiscountCurve, HazardCurve};
use crate::error::{EngineError, Result};
use crate::rootfind::brent;

#[derive(Debug, Clone, Copy)]
pub struct PricingInputs<'a> {
    pub bond: &'a Bond,
    pub discount: &'a DiscountCurve,
    pub hazard: &'a HazardCurve,
    /// Issue-specific OAS-to-Fit, continuously compounded; may be negative.
    pub oasf: f64,
}

/// Clean price from the discrete survival-weighted cash-flow sum.
///
/// Coupons and principal are weighted by survival to the payment date;
/// recovery `R_p` of face is paid at the end of the default interval.
/// No recovery of the accrued coupon in this route.
pub fn price_exact(inputs: &PricingInputs) -> f64 {
    let bond = inputs.bond;
    let schedule = bond.schedule();
    let t_n = bond.maturity;
    let zq = |t: f64| -> (f64, f64) {
        (
            inputs.discount.discount_factor(t).unwrap() * (-inputs.oasf * t).exp(),
            inputs.hazard.survival_prob(t).unwrap(),
        )
    };
    let (z_n, q_n) = zq(t_n);
    let mut price = z_n * q_n;
    let mut q_prev = 1.0;
    for c in &schedule {
        let (z, q) = zq(c.time);
        price += c.amount * z * q;
        price += bond.recovery_principal * z * (q_prev - q);
        q_prev = q;
    }
    price
}

/// Closed-form segment integrals of the credit discount kernel up to a
/// horizon T:
///
/// a_k = ∫₀ᵀ uᵏ e^(-∫₀ᵘ (r+h+oasf))du,  b_k = ∫₀ᵀ uᵏ h(u) e^(-∫₀ᵘ (r+h+oasf))du,
/// tail = e^(-∫₀ᵀ (r+h+oasf)).
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CreditIntegrals {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub tail: f64,
}

pub(crate) fn credit_integrals(
    discount: &DiscountCurve,
    hazard: &HazardCurve,
    oasf: f64,
    horizon: f64,
) -> CreditIntegrals {
    debug_assert!(horizon >= 0.0);
    let mut breaks: Vec<f64> = discount
        .node_times()
        .into_iter()
        .chain(hazard.node_times())
        .filter(|&t| t > 0.0 && t < horizon)
        .collect();
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    breaks.push(horizon);

    let mut out = CreditIntegrals::default();
    let mut accumulated = 0.0_f64; // ∫₀^{u0} (r+h+oasf)
    let mut u0 = 0.0;
    for &u1 in &breaks {
        let dt = u1 - u0;
        if dt <= 0.0 {
            u0 = u1;
            continue;
        }
        let h = hazard.hazard_rate(u0).unwrap();
        let a = discount.forward_rate(u0).unwrap() + h + oasf;
        let (j0, j1, j2) = segment_moments(a, dt);
        let d0 = (-accumulated).exp();
        let m0 = d0 * j0;
        let m1 = d0 * (u0 * j0 + j1);
        let m2 = d0 * (u0 * u0 * j0 + 2.0 * u0 * j1 + j2);
        out.a0 += m0;
        out.a1 += m1;
        out.a2 += m2;
        out.b0 += h * m0;
        out.b1 += h * m1;
        out.b2 += h * m2;
        accumulated += a * dt;
        u0 = u1;
    }
    out.tail = (-accumulated).exp();
    out
}

/// (∫₀^dt e^{-a s} ds, ∫₀^dt s e^{-a s} ds, ∫₀^dt s² e^{-a s} ds).
fn segment_moments(a: f64, dt: f64) -> (f64, f64, f64) {
    let x = a * dt;
    if x.abs() < 1e-5 {
        // series in x to avoid cancellation near a = 0
        let j0 = dt * (1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0);
        let j1 = dt * dt * (0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0);
        let j2 = dt * dt * dt * (1.0 / 3.0 - x / 4.0 + x * x / 10.0 - x * x * x / 36.0);
        (j0, j1, j2)
    } else {
        let em = (-x).exp();
        let j0 = (1.0 - em) / a;
        let j1 = (1.0 - (1.0 + x) * em) / (a * a);
        let j2 = (2.0 - (2.0 + 2.0 * x + x * x) * em) / (a * a * a);
        (j0, j1, j2)
    }
}

/// Effective recovery used by the continuous route: the expected accrued
/// coupon lost on default, net of its recovered fraction, is folded into
/// the principal recovery.
pub(crate) fn effective_recovery(bond: &Bond) -> f64 {
    bond.recovery_principal
        - (1.0 - bond.recovery_coupon) * bond.coupon / (2.0 * bond.frequency as f64)
}

/// Continuous-time clean-price approximation with both bias corrections:
/// the early-discount correction on the coupon stream and the expected
/// accrued-coupon loss folded into the recovery term. OASF enters every
/// exponent alongside r + h.
pub fn price_continuous(inputs: &PricingInputs) -> f64 {
    let bond = inputs.bond;
    let ints = credit_integrals(inputs.discount, inputs.hazard, inputs.oasf, bond.maturity);
    let c = bond.coupon;
    let half_period_coupon = c / (2.0 * bond.frequency as f64);
    c * ints.a0 + ints.tail - half_period_coupon * (1.0 - ints.tail)
        + effective_recovery(bond) * ints.b0
}

/// Uncorrected continuously compounded price: coupon annuity + principal
/// survival + recovery, with OASF added uniformly to r + h. Overestimates
/// the discrete price; kept for bias demonstrations.
pub fn price_naive_continuous(inputs: &PricingInputs) -> f64 {
    let bond = inputs.bond;
    let ints = credit_integrals(inputs.discount, inputs.hazard, inputs.oasf, bond.maturity);
    bond.coupon * ints.a0 + ints.tail + bond.recovery_principal * ints.b0
}

/// Risky PV01: ∫₀ᵀ e^(-∫₀ᵘ (r+h+oasf)) du, in years. Set oasf = 0 for the
/// plain CDS risky annuity.
pub fn rpv01(discount: &DiscountCurve, hazard: &HazardCurve, horizon: f64, oasf: f64) -> Result<f64> {
    if !(horizon >= 0.0) {
        return Err(EngineError::Domain(format!("horizon {horizon} < 0")));
    }
    Ok(credit_integrals(discount, hazard, oasf, horizon).a0)
}

/// Bond-implied CDS spread:
/// (1 - R_p) · ∫ h e^(-∫(r+h)) / ∫ e^(-∫(r+h)) + oasf.
pub fn bcds(
    discount: &DiscountCurve,
    hazard: &HazardCurve,
    horizon: f64,
    recovery_principal: f64,
    oasf: f64,
) -> Result<f64> {
    if !(horizon > 0.0) {
        return Err(EngineError::Domain(format!("horizon {horizon} must be > 0")));
    }
    let ints = credit_integrals(discount, hazard, 0.0, horizon);
    Ok((1.0 - recovery_principal) * ints.b0 / ints.a0 + oasf)
}

pub const OASF_BRACKET: (f64, f64) = (-0.5, 5.0);
pub const FLAT_HAZARD_BRACKET: (f64, f64) = (0.0, 20.0);

/// OASF such that the exact discrete price matches an observed clean price.
/// price_exact is strictly decreasing in OASF, so the bracket endpoints
/// bound the attainable range.
pub fn calibrate_oasf(
    bond: &Bond,
    discount: &DiscountCurve,
    hazard: &HazardCurve,
    market_price: f64,
) -> Result<f64> {
    let (lo, hi) = OASF_BRACKET;
    let priced = |oasf: f64| price_exact(&PricingInputs { bond, discount, hazard, oasf });
    if market_price > priced(lo) || market_price < priced(hi) {
        return Err(EngineError::Bracket { what: "OASF".into(), lo, hi });
    }
    brent(|x| priced(x) - market_price, lo, hi, "OASF")
}

/// Flat hazard rate repricing the bond at OASF = 0.
pub fn calibrate_flat_hazard(
    bond: &Bond,
    discount: &DiscountCurve,
    market_price: f64,
    recovery_principal: f64,
) -> Result<f64> {
    let (lo, hi) = FLAT_HAZARD_BRACKET;
    let mut bond = bond.clone();
    bond.recovery_principal = recovery_principal;
    let priced = |h: f64| {
        let hazard = HazardCurve::new(vec![CurveNode { t: 1.0, rate: h }]).unwrap();
        price_exact(&PricingInputs { bond: &bond, discount, hazard: &hazard, oasf: 0.0 })
    };
    if market_price > priced(lo) || market_price < priced(hi) {
        return Err(EngineError::Bracket { what: "flat hazard".into(), lo, hi });
    }
    brent(|h| priced(h) - market_price, lo, hi, "flat hazard")
}

fn flat_annuity(a: f64, horizon: f64) -> f64 {
    if a.abs() < 1e-12 {
        horizon
    } else {
        (1.0 - (-a * horizon).exp()) / a
    }
}

/// Continuous strippable-cash-flow price at flat rate r + spread s.
fn strippable_price_continuous(coupon: f64, r: f64, s: f64, horizon: f64) -> f64 {
    coupon * flat_annuity(r + s, horizon) + (-(r + s) * horizon).exp()
}

/// Conventional spread S solving the flat-curve identity: strippable
/// continuous price at spread S equals the survival price with recovery.
pub fn conventional_spread_exact(
    coupon: f64,
    r: f64,
    h: f64,
    recovery_principal: f64,
    horizon: f64,
) -> Result<f64> {
    if !(horizon > 0.0) {
        return Err(EngineError::Domain(format!("horizon {horizon} must be > 0")));
    }
    let target = (coupon + h * recovery_principal) * flat_annuity(r + h, horizon)
        + (-(r + h) * horizon).exp();
    brent(
        |s| strippable_price_continuous(coupon, r, s, horizon) - target,
        -1.0,
        10.0,
        "conventional spread",
    )
}

/// Credit-triangle spread with the premium-at-risk correction:
/// h(1-R_p) + ½ R_p h T (C - r - h(1-R_p)).
pub fn conventional_spread_approx(
    coupon: f64,
    r: f64,
    h: f64,
    recovery_principal: f64,
    horizon: f64,
) -> f64 {
    let triangle = h * (1.0 - recovery_principal);
    triangle + 0.5 * recovery_principal * h * horizon * (coupon - r - triangle)
}

/// Textbook yield (compounded at the coupon frequency) and modified
/// duration for a given clean price.
pub fn yield_and_modified_duration(bond: &Bond, market_price: f64) -> Result<(f64, f64)> {
    if !(market_price > 0.0) {
        return Err(EngineError::Domain(format!("price {market_price} <= 0")));
    }
    let f = bond.frequency as f64;
    let schedule = bond.schedule();
    let pv = |y: f64| -> f64 {
        let base = 1.0 + y / f;
        schedule.iter().map(|c| c.amount * base.powf(-f * c.time)).sum::<f64>()
            + base.powf(-f * bond.maturity)
    };
    let y = brent(|y| pv(y) - market_price, -0.9 * f, 10.0, "yield")?;
    let base = 1.0 + y / f;
    let macaulay = (schedule
        .iter()
        .map(|c| c.time * c.amount * base.powf(-f * c.time))
        .sum::<f64>()
        + bond.maturity * base.powf(-f * bond.maturity))
        / market_price;
    Ok((y, macaulay / base))
}

/// Constant spread over the instantaneous forwards that reprices the bond
/// as a strippable (default-free) cash-flow stream.
pub fn z_spread(bond: &Bond, discount: &DiscountCurve, market_price: f64) -> Result<f64> {
    if !(market_price > 0.0) {
        return Err(EngineError::Domain(format!("price {market_price} <= 0")));
    }
    let schedule = bond.schedule();
    let pv = |s: f64| -> f64 {
        schedule
            .iter()
            .map(|c| c.amount * discount.discount_factor(c.time).unwrap() * (-s * c.time).exp())
            .sum::<f64>()
            + discount.discount_factor(bond.maturity).unwrap() * (-s * bond.maturity).exp()
    };
    brent(|s| pv(s) - market_price, -1.0, 10.0, "z-spread")
}

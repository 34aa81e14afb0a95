//! Consistent sensitivity measures for credit bonds.
//!
//! Discrete-sum measures (`duration_survival`, `convexity_survival`) are
//! derivatives of the exact discrete price with respect to OASF; the
//! hazard/recovery measures are analytic derivatives of the continuous
//! price approximation. Each analytic number is finite-difference
//! validated against its own pricing function in the tests, never against
//! the other basis.

use serde::{Deserialize, Serialize};

use crate::bond::Bond;
use crate::curves::{DiscountCurve, HazardCurve};
use crate::error::{EngineError, Result};
use crate::pricer::{
    self, bcds, credit_integrals, effective_recovery, price_continuous, price_exact,
    yield_and_modified_duration, z_spread, PricingInputs,
};

fn check_price(price: f64) -> Result<()> {
    if !(price > 0.0) {
        return Err(EngineError::Domain(format!("price {price} <= 0")));
    }
    Ok(())
}

/// Survival-based duration: cash-flow times weighted by discounted
/// survival (and default-interval recovery) probabilities, over the
/// discrete price. Equals -(1/P) ∂P/∂OASF = -(1/P) ∂P/∂(parallel forward
/// shift).
pub fn duration_survival(inputs: &PricingInputs) -> Result<f64> {
    weighted_time_moment(inputs, 1)
}

/// (1/P) ∂²P/∂OASF² of the discrete price: the t² analogue of the
/// survival-based duration.
pub fn convexity_survival(inputs: &PricingInputs) -> Result<f64> {
    weighted_time_moment(inputs, 2)
}

fn weighted_time_moment(inputs: &PricingInputs, power: i32) -> Result<f64> {
    let price = price_exact(inputs);
    check_price(price)?;
    let bond = inputs.bond;
    let t_n = bond.maturity;
    let zq = |t: f64| -> (f64, f64) {
        (
            inputs.discount.discount_factor(t).unwrap() * (-inputs.oasf * t).exp(),
            inputs.hazard.survival_prob(t).unwrap(),
        )
    };
    let (z_n, q_n) = zq(t_n);
    let mut sum = t_n.powi(power) * z_n * q_n;
    let mut q_prev = 1.0;
    for c in &bond.schedule() {
        let (z, q) = zq(c.time);
        let w = c.time.powi(power);
        sum += w * c.amount * z * q;
        sum += w * bond.recovery_principal * z * (q_prev - q);
        q_prev = q;
    }
    Ok(sum / price)
}

/// Analytic sensitivities of the continuous-time price: all derived from
/// the same closed-form segment integrals.
#[derive(Debug, Clone, Copy)]
pub struct ContinuousSensitivities {
    pub price: f64,
    /// -(1/P) ∂P/∂r (parallel forward shift) = -(1/P) ∂P/∂OASF.
    pub d_r: f64,
    /// (1/P) ∂²P/∂r².
    pub gamma_r: f64,
    /// -(1/P) ∂P/∂h (parallel hazard shift).
    pub d_h: f64,
    /// (1/P) ∂²P/∂h².
    pub gamma_h: f64,
    /// +(1/P) ∂P/∂R_p.
    pub d_recovery: f64,
    /// ∫₀ᵀ e^(-∫(r+h+oasf)) du.
    pub rpv01: f64,
    /// ∂RPV01/∂h for a parallel hazard shift (= -∫ u e^(-∫(r+h+oasf)) du).
    pub drpv01_dh: f64,
}

pub fn continuous_sensitivities(inputs: &PricingInputs) -> Result<ContinuousSensitivities> {
    let bond = inputs.bond;
    let ints = credit_integrals(inputs.discount, inputs.hazard, inputs.oasf, bond.maturity);
    let c = bond.coupon;
    let half = c / (2.0 * bond.frequency as f64);
    let rec = effective_recovery(bond);
    let t = bond.maturity;

    let price = c * ints.a0 + ints.tail - half * (1.0 - ints.tail) + rec * ints.b0;
    check_price(price)?;

    let dp_dr = -c * ints.a1 - t * (1.0 + half) * ints.tail - rec * ints.b1;
    let d2p_dr2 = c * ints.a2 + t * t * (1.0 + half) * ints.tail + rec * ints.b2;
    let dp_dh = dp_dr + rec * ints.a0;
    let d2p_dh2 = d2p_dr2 - 2.0 * rec * ints.a1;

    Ok(ContinuousSensitivities {
        price,
        d_r: -dp_dr / price,
        gamma_r: d2p_dr2 / price,
        d_h: -dp_dh / price,
        gamma_h: d2p_dh2 / price,
        d_recovery: ints.b0 / price,
        rpv01: ints.a0,
        drpv01_dh: -ints.a1,
    })
}

/// Hazard-rate duration -(1/P) ∂P/∂h on the continuous price:
/// D_r minus the effective-recovery RPV01 term.
pub fn duration_hazard(inputs: &PricingInputs) -> Result<f64> {
    Ok(continuous_sensitivities(inputs)?.d_h)
}

/// Hazard convexity (1/P) ∂²P/∂h² on the continuous price.
pub fn convexity_hazard(inputs: &PricingInputs) -> Result<f64> {
    Ok(continuous_sensitivities(inputs)?.gamma_h)
}

/// Ballpark hazard duration D_r (1 - R_p P).
pub fn duration_hazard_ballpark(d_r: f64, recovery_principal: f64, price: f64) -> f64 {
    d_r * (1.0 - recovery_principal * price)
}

/// BCDS duration approximation (1 - R_p P) / (1 - R_p) · D_r.
///
/// Relies on ∂BCDS/∂h ≈ 1 - R_p; the hazard-rate duration is the safer
/// measure when that assumption is in doubt. See [`duration_bcds_fd`] for
/// the bump-and-reprice alternative.
pub fn duration_bcds(d_r: f64, recovery_principal: f64, price: f64) -> Result<f64> {
    check_price(price)?;
    if recovery_principal >= 1.0 {
        return Err(EngineError::Domain("BCDS duration undefined at R_p = 1".into()));
    }
    Ok((1.0 - recovery_principal * price) / (1.0 - recovery_principal) * d_r)
}

/// FD-exact BCDS duration: bump the hazard curve, recompute both the
/// continuous price and the BCDS spread, and take the ratio of changes.
pub fn duration_bcds_fd(inputs: &PricingInputs, bump: f64) -> Result<f64> {
    let up = inputs.hazard.shifted(bump);
    let down = inputs.hazard.shifted(-bump);
    let reprice = |hazard: &HazardCurve| -> Result<(f64, f64)> {
        let i = PricingInputs { hazard, ..*inputs };
        let p = price_continuous(&i);
        let s = bcds(
            inputs.discount,
            hazard,
            inputs.bond.maturity,
            inputs.bond.recovery_principal,
            inputs.oasf,
        )?;
        Ok((p, s))
    };
    let (p_up, s_up) = reprice(&up)?;
    let (p_down, s_down) = reprice(&down)?;
    let p0 = price_continuous(inputs);
    check_price(p0)?;
    let ds = s_up - s_down;
    if ds.abs() < 1e-300 {
        return Err(EngineError::Domain("BCDS insensitive to hazard bump".into()));
    }
    Ok(-(p_up - p_down) / ds / p0)
}

/// The three recovery-sensitivity readings of the same quantity.
#[derive(Debug, Clone, Copy)]
pub struct RecoveryDuration {
    /// (1/P) ∫ h e^(-∫(r+h+oasf)) du, the exact derivative.
    pub exact: f64,
    /// RPV01 (BCDS - OASF) / ((1 - R_p) P).
    pub bcds_form: f64,
    /// (1 - P) / ((1 - R_p) P); works best for distressed bonds.
    pub ballpark: f64,
}

pub fn duration_recovery(inputs: &PricingInputs) -> Result<RecoveryDuration> {
    let sens = continuous_sensitivities(inputs)?;
    let bond = inputs.bond;
    let rp = bond.recovery_principal;
    let spread = bcds(inputs.discount, inputs.hazard, bond.maturity, rp, inputs.oasf)?;
    let p = sens.price;
    let rpv01_plain = pricer::rpv01(inputs.discount, inputs.hazard, bond.maturity, 0.0)?;
    Ok(RecoveryDuration {
        exact: sens.d_recovery,
        bcds_form: rpv01_plain * (spread - inputs.oasf) / ((1.0 - rp) * p),
        ballpark: (1.0 - p) / ((1.0 - rp) * p),
    })
}

/// Value-on-default: fractional price loss on instantaneous default,
/// 1 - R_p / P.
pub fn vod(price: f64, recovery_principal: f64) -> Result<f64> {
    check_price(price)?;
    Ok(1.0 - recovery_principal / price)
}

/// Second-order price ratio under an OASF move: 1 - DΔ + ½ΓΔ².
pub fn price_impact_oasf(duration: f64, convexity: f64, delta_oasf: f64) -> f64 {
    1.0 - duration * delta_oasf + 0.5 * convexity * delta_oasf * delta_oasf
}

/// Price ratio under a parallel shift plus a linear twist of the forward
/// curve; the twist duration equals half the shift convexity.
pub fn price_impact_shift_twist(
    duration: f64,
    convexity: f64,
    delta_shift: f64,
    delta_twist: f64,
) -> f64 {
    price_impact_oasf(duration, convexity, delta_shift) - 0.5 * convexity * delta_twist
}

pub const FD_BUMP_FIRST: f64 = 1e-6;
pub const FD_BUMP_SECOND: f64 = 1e-4;

/// Central first difference, the oracle for every analytic first-order
/// sensitivity.
pub fn fd_first<F: Fn(f64) -> f64>(f: F, x: f64, bump: f64) -> f64 {
    (f(x + bump) - f(x - bump)) / (2.0 * bump)
}

/// Central second difference.
pub fn fd_second<F: Fn(f64) -> f64>(f: F, x: f64, bump: f64) -> f64 {
    (f(x + bump) - 2.0 * f(x) + f(x - bump)) / (bump * bump)
}

/// Full per-bond sensitivity record.
///
/// `price`, `d_r`, `gamma_r`, `d_bcds`, `vod` come from the discrete
/// price; `d_h`, `gamma_h`, `d_recovery`, `rpv01`, `bcds` from the
/// continuous analytics; `mod_duration` and `z_spread` are the
/// conventional comparators at the same price.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    /// Clean price per unit face (discrete route).
    pub price: f64,
    pub d_r: f64,
    pub gamma_r: f64,
    pub d_h: f64,
    pub gamma_h: f64,
    pub d_bcds: f64,
    pub d_recovery: f64,
    pub vod: f64,
    pub rpv01: f64,
    pub bcds: f64,
    pub mod_duration: f64,
    pub z_spread: f64,
}

impl RiskReport {
    pub fn field(&self, key: &str) -> Option<f64> {
        Some(match key {
            "price" => self.price,
            "d_r" => self.d_r,
            "gamma_r" => self.gamma_r,
            "d_h" => self.d_h,
            "gamma_h" => self.gamma_h,
            "d_bcds" => self.d_bcds,
            "d_recovery" => self.d_recovery,
            "vod" => self.vod,
            "rpv01" => self.rpv01,
            "bcds" => self.bcds,
            "mod_duration" => self.mod_duration,
            "z_spread" => self.z_spread,
            _ => return None,
        })
    }

    pub const FIELDS: [&'static str; 12] = [
        "price",
        "d_r",
        "gamma_r",
        "d_h",
        "gamma_h",
        "d_bcds",
        "d_recovery",
        "vod",
        "rpv01",
        "bcds",
        "mod_duration",
        "z_spread",
    ];
}

/// Assemble the report for one bond. Conventional measures (yield
/// duration, z-spread) are computed at the model price so the whole row
/// refers to one price.
pub fn risk_report(
    bond: &Bond,
    discount: &DiscountCurve,
    hazard: &HazardCurve,
    oasf: f64,
) -> Result<RiskReport> {
    let inputs = PricingInputs { bond, discount, hazard, oasf };
    let price = price_exact(&inputs);
    check_price(price)?;
    let d_r = duration_survival(&inputs)?;
    let cont = continuous_sensitivities(&inputs)?;
    let recovery = duration_recovery(&inputs)?;
    let (_, mod_duration) = yield_and_modified_duration(bond, price)?;
    Ok(RiskReport {
        price,
        d_r,
        gamma_r: convexity_survival(&inputs)?,
        d_h: cont.d_h,
        gamma_h: cont.gamma_h,
        d_bcds: duration_bcds(d_r, bond.recovery_principal, price)?,
        d_recovery: recovery.exact,
        vod: vod(price, bond.recovery_principal)?,
        rpv01: cont.rpv01,
        bcds: bcds(discount, hazard, bond.maturity, bond.recovery_principal, oasf)?,
        mod_duration,
        z_spread: z_spread(bond, discount, price)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::CurveNode;
    use approx::assert_relative_eq;

    fn flat_setup(
        c: f64,
        t: f64,
        r: f64,
        h: f64,
        rp: f64,
    ) -> (Bond, DiscountCurve, HazardCurve) {
        (
            Bond::new(c, 2, t, rp, 0.0).unwrap(),
            DiscountCurve::flat(r),
            HazardCurve::flat(h).unwrap(),
        )
    }

    #[test]
    fn zero_coupon_riskless_duration_is_maturity() {
        let (bond, disc, haz) = flat_setup(0.0, 5.0, 0.04, 0.0, 0.4);
        let i = PricingInputs { bond: &bond, discount: &disc, hazard: &haz, oasf: 0.0 };
        assert_relative_eq!(duration_survival(&i).unwrap(), 5.0, epsilon = 1e-12);
        assert_relative_eq!(convexity_survival(&i).unwrap(), 25.0, epsilon = 1e-12);
    }

    #[test]
    fn riskless_duration_is_macaulay_under_continuous_forwards() {
        let (bond, disc, haz) = flat_setup(0.05, 5.0, 0.04, 0.0, 0.4);
        let i = PricingInputs { bond: &bond, discount: &disc, hazard: &haz, oasf: 0.0 };
        let p = price_exact(&i);
        let macaulay = (bond
            .schedule()
            .iter()
            .map(|c| c.time * c.amount * (-0.04 * c.time).exp())
            .sum::<f64>()
            + 5.0 * (-0.2f64).exp())
            / p;
        assert_relative_eq!(duration_survival(&i).unwrap(), macaulay, epsilon = 1e-13);
    }

    #[test]
    fn survival_duration_matches_fd_in_oasf() {
        let (bond, disc, haz) = flat_setup(0.05, 5.0, 0.04, 0.05, 0.4);
        let i = PricingInputs { bond: &bond, discount: &disc, hazard: &haz, oasf: 0.0 };
        let p = price_exact(&i);
        let fd = -fd_first(
            |x| price_exact(&PricingInputs { oasf: x, ..i }),
            0.0,
            FD_BUMP_FIRST,
        ) / p;
        assert_relative_eq!(duration_survival(&i).unwrap(), fd, max_relative = 1e-6);
        let fd2 = fd_second(
            |x| price_exact(&PricingInputs { oasf: x, ..i }),
            0.0,
            FD_BUMP_SECOND,
        ) / p;
        assert_relative_eq!(convexity_survival(&i).unwrap(), fd2, max_relative = 1e-4);
    }

    #[test]
    fn distressed_convexity_collapses() {
        let (bond, disc, h0) = flat_setup(0.05, 10.0, 0.04, 0.0, 0.4);
        let i0 = PricingInputs { bond: &bond, discount: &disc, hazard: &h0, oasf: 0.0 };
        let stressed = HazardCurve::flat(0.50).unwrap();
        let i1 = PricingInputs { hazard: &stressed, ..i0 };
        assert!(convexity_survival(&i1).unwrap() < 0.5 * convexity_survival(&i0).unwrap());
    }

    #[test]
    fn hazard_duration_equals_rate_duration_without_recovery_terms() {
        // R_p = 0 and C = 0 kill the RPV01 term
        let (bond, disc, haz) = flat_setup(0.0, 5.0, 0.04, 0.05, 0.0);
        let i = PricingInputs { bond: &bond, discount: &disc, hazard: &haz, oasf: 0.0 };
        let s = continuous_sensitivities(&i).unwrap();
        assert_relative_eq!(s.d_h, s.d_r, epsilon = 1e-13);
        assert_relative_eq!(s.gamma_h, s.gamma_r, epsilon = 1e-13);
    }

    #[test]
    fn hazard_duration_below_rate_duration_with_recovery() {
        let (bond, disc, _) = flat_setup(0.05, 5.0, 0.04, 0.0, 0.4);
        for h in [0.01, 0.05, 0.2, 0.8] {
            let haz = HazardCurve::flat(h).unwrap();
            let i = PricingInputs { bond: &bond, discount: &disc, hazard: &haz, oasf: 0.0 };
            let s = continuous_sensitivities(&i).unwrap();
            assert!(s.d_h < s.d_r, "h = {h}");
        }
    }

    #[test]
    fn hazard_measures_match_fd_on_continuous_price() {
        let bond = Bond::new(0.06, 2, 7.0, 0.4, 0.1).unwrap();
        let disc = DiscountCurve::new(vec![
            CurveNode { t: 2.0, rate: 0.02 },
            CurveNode { t: 6.0, rate: 0.05 },
        ])
        .unwrap();
        let haz = HazardCurve::flat(0.04).unwrap();
        let i = PricingInputs { bond: &bond, discount: &disc, hazard: &haz, oasf: 0.004 };
        let s = continuous_sensitivities(&i).unwrap();
        let p = s.price;
        let bumped = |eps: f64| {
            let shifted = haz.shifted(eps);
            price_continuous(&PricingInputs { hazard: &shifted, ..i })
        };
        let fd1 = -fd_first(bumped, 0.0, FD_BUMP_FIRST) / p;
        assert_relative_eq!(s.d_h, fd1, max_relative = 1e-6);
        let fd2 = fd_second(bumped, 0.0, FD_BUMP_SECOND) / p;
        assert_relative_eq!(s.gamma_h, fd2, max_relative = 1e-4);

        let rec_fd = fd_first(
            |rp| {
                let mut b = bond.clone();
                b.recovery_principal = rp;
                price_continuous(&PricingInputs { bond: &b, ..i })
            },
            0.4,
            FD_BUMP_FIRST,
        ) / p;
        assert_relative_eq!(s.d_recovery, rec_fd, max_relative = 1e-6);
    }

    #[test]
    fn ballpark_hazard_duration_on_published_rows() {
        assert!((duration_hazard_ballpark(2.22, 0.4, 1.029) - 1.32).abs() < 0.02);
        assert!((duration_hazard_ballpark(6.24, 0.4, 1.049) - 3.60).abs() < 0.03);
        assert_eq!(duration_hazard_ballpark(6.24, 0.0, 1.049), 6.24);
    }

    #[test]
    fn bcds_duration_premium_discount_ordering() {
        // at par the BCDS duration equals the rate duration
        assert_relative_eq!(duration_bcds(4.0, 0.4, 1.0).unwrap(), 4.0, epsilon = 1e-15);
        let premium = duration_bcds(6.24, 0.4, 1.049).unwrap();
        assert_relative_eq!(premium, (1.0 - 0.4196) / 0.6 * 6.24, epsilon = 1e-12);
        assert!(premium < 6.24);
        let discount_bond = duration_bcds(6.24, 0.4, 0.80).unwrap();
        assert_relative_eq!(discount_bond, 7.072, epsilon = 1e-12);
        assert!(discount_bond > 6.24);
        assert!(duration_bcds(4.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn bcds_duration_fd_close_to_approximation() {
        let (bond, disc, haz) = flat_setup(0.05, 5.0, 0.04, 0.03, 0.4);
        let i = PricingInputs { bond: &bond, discount: &disc, hazard: &haz, oasf: 0.0 };
        let p = price_continuous(&i);
        let approx = duration_bcds(continuous_sensitivities(&i).unwrap().d_r, 0.4, p).unwrap();
        let fd = duration_bcds_fd(&i, 1e-6).unwrap();
        // Eq-13-style approximation vs the bump-and-reprice value: same
        // ballpark, no tight tolerance claimed.
        assert!((approx - fd).abs() / fd < 0.15, "approx {approx} fd {fd}");
    }

    #[test]
    fn recovery_duration_cases() {
        let (bond, disc, h0) = flat_setup(0.05, 5.0, 0.04, 0.0, 0.4);
        let i = PricingInputs { bond: &bond, discount: &disc, hazard: &h0, oasf: 0.0 };
        assert_eq!(duration_recovery(&i).unwrap().exact, 0.0);

        // distressed: ballpark within 25% of exact
        let stressed = HazardCurve::flat(0.35).unwrap();
        let bond2 = Bond::new(0.05, 2, 10.0, 0.4, 0.0).unwrap();
        let i2 = PricingInputs { bond: &bond2, discount: &disc, hazard: &stressed, oasf: 0.0 };
        let rd = duration_recovery(&i2).unwrap();
        assert!(price_continuous(&i2) < 0.6);
        assert!((rd.ballpark - rd.exact).abs() / rd.exact < 0.25);
        // BCDS form agrees closely with the exact derivative at OASF = 0
        assert_relative_eq!(rd.bcds_form, rd.exact, max_relative = 1e-10);
    }

    #[test]
    fn vod_values() {
        assert!((vod(1.029, 0.4).unwrap() - 0.611).abs() < 5e-4);
        assert!((vod(1.0044, 0.4).unwrap() - 0.602).abs() < 5e-4);
        assert_eq!(vod(0.4, 0.4).unwrap(), 0.0);
        assert!(vod(0.0, 0.4).is_err());
    }

    #[test]
    fn price_impact_formulas() {
        assert_eq!(price_impact_oasf(2.22, 7.0, 0.0), 1.0);
        assert_relative_eq!(price_impact_oasf(2.22, 7.0, 0.01), 0.97815, epsilon = 1e-12);
        assert_relative_eq!(
            price_impact_shift_twist(2.22, 7.0, 0.0, 0.001),
            1.0 - 0.0035,
            epsilon = 1e-12
        );
        assert_eq!(
            price_impact_shift_twist(2.22, 7.0, 0.01, 0.0),
            price_impact_oasf(2.22, 7.0, 0.01)
        );
    }

    #[test]
    fn price_impact_third_order_accuracy() {
        let (bond, disc, haz) = flat_setup(0.05, 5.0, 0.04, 0.02, 0.4);
        let i = PricingInputs { bond: &bond, discount: &disc, hazard: &haz, oasf: 0.0 };
        let p0 = price_exact(&i);
        let d = duration_survival(&i).unwrap();
        let g = convexity_survival(&i).unwrap();
        let mut bound: Option<f64> = None;
        for delta in [1e-2, 5e-3, 2.5e-3] {
            let exact = price_exact(&PricingInputs { oasf: delta, ..i }) / p0;
            let ratio = (price_impact_oasf(d, g, delta) - exact).abs() / delta.powi(3);
            if let Some(b) = bound {
                assert!(ratio < 2.0 * b, "third-order coefficient not bounded");
            }
            bound = Some(bound.map_or(ratio, |b: f64| b.max(ratio)));
        }
    }

    #[test]
    fn twist_first_order_against_full_reprice() {
        let (bond, disc, haz) = flat_setup(0.05, 5.0, 0.04, 0.02, 0.4);
        let i = PricingInputs { bond: &bond, discount: &disc, hazard: &haz, oasf: 0.0 };
        let p0 = price_exact(&i);
        let d = duration_survival(&i).unwrap();
        let g = convexity_survival(&i).unwrap();
        let error_at = |slope: f64| {
            let twisted = disc.twisted(slope, bond.maturity, 1e-3).unwrap();
            let exact = price_exact(&PricingInputs { discount: &twisted, ..i }) / p0;
            (price_impact_shift_twist(d, g, 0.0, slope) - exact).abs()
        };
        // first-order in the twist: error is O(slope^2)
        let (e1, e2) = (error_at(0.001), error_at(0.0005));
        assert!(e1 < 1e-4, "twist error {e1}");
        let shrink = e1 / e2;
        assert!((3.0..5.0).contains(&shrink), "shrink ratio {shrink}");
    }

    #[test]
    fn fd_helpers_on_closed_forms() {
        assert_relative_eq!(fd_first(|x| 3.0 * x + 1.0, 0.7, 1e-6), 3.0, epsilon = 1e-9);
        assert!(fd_second(|x| 3.0 * x + 1.0, 0.7, 1e-4).abs() < 1e-6);
        let t = 4.0;
        let x0 = 0.03;
        let f = |x: f64| (-t * x).exp();
        assert_relative_eq!(fd_first(f, x0, 1e-6), -t * (-t * x0).exp(), max_relative = 1e-8);
    }

    #[test]
    fn eq16_identity_all_analytic() {
        let bond = Bond::new(0.05, 2, 5.0, 0.4, 0.0).unwrap();
        let disc = DiscountCurve::flat(0.04);
        let haz = HazardCurve::flat(0.06).unwrap();
        let i = PricingInputs { bond: &bond, discount: &disc, hazard: &haz, oasf: 0.002 };
        let s = continuous_sensitivities(&i).unwrap();
        let rec = effective_recovery(&bond);
        let rhs = s.gamma_r + 2.0 * rec * s.drpv01_dh / s.price;
        assert!((s.gamma_h - rhs).abs() <= 1e-10);
    }

    #[test]
    fn report_assembles_consistently() {
        let bond = Bond::new(0.0625, 2, 7.92, 0.4, 0.0).unwrap();
        let disc = DiscountCurve::flat(0.048);
        let haz = HazardCurve::flat(0.011).unwrap();
        let rep = risk_report(&bond, &disc, &haz, 0.0).unwrap();
        assert!(rep.price > 0.9 && rep.price < 1.2);
        assert!(rep.d_h < rep.d_r);
        assert!(rep.gamma_h <= rep.gamma_r);
        assert!(rep.d_r <= rep.mod_duration + 0.25);
        assert_relative_eq!(rep.vod, 1.0 - 0.4 / rep.price, epsilon = 1e-15);
        for key in RiskReport::FIELDS {
            assert!(rep.field(key).is_some());
        }
        assert!(rep.field("nope").is_none());
    }
}

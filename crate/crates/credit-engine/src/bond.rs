//! Fixed-coupon bullet bond and its cash-flow schedule.
//!
//! Face is normalized to 1 and all prices are clean, per unit face.
//! Schedules are generated backward from maturity so the final coupon
//! date always coincides with T; a short first stub pays the full C/f
//! coupon (no proration).

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bond {
    /// Per-annum coupon rate, decimal.
    pub coupon: f64,
    /// Coupon payments per year.
    pub frequency: u32,
    /// Years from valuation date to maturity.
    pub maturity: f64,
    /// Fraction of face recovered on default.
    pub recovery_principal: f64,
    /// Fraction of accrued coupon recovered on default.
    pub recovery_coupon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouponDate {
    pub time: f64,
    pub amount: f64,
}

impl Bond {
    pub fn new(
        coupon: f64,
        frequency: u32,
        maturity: f64,
        recovery_principal: f64,
        recovery_coupon: f64,
    ) -> Result<Self> {
        let b = Self { coupon, frequency, maturity, recovery_principal, recovery_coupon };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.maturity > 0.0) {
            return Err(EngineError::Invalid(format!("maturity {} <= 0", self.maturity)));
        }
        if self.frequency < 1 {
            return Err(EngineError::Invalid("frequency must be >= 1".into()));
        }
        if !(self.coupon >= 0.0) {
            return Err(EngineError::Invalid(format!("coupon {} < 0", self.coupon)));
        }
        for (name, r) in [
            ("recovery_principal", self.recovery_principal),
            ("recovery_coupon", self.recovery_coupon),
        ] {
            if !(0.0..=1.0).contains(&r) {
                return Err(EngineError::Invalid(format!("{name} {r} outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// Number of remaining coupon dates, N = ceil(T * f).
    pub fn num_coupons(&self) -> usize {
        let x = self.maturity * self.frequency as f64;
        // guard against T * f landing epsilon above an integer
        if (x - x.round()).abs() < 1e-9 {
            x.round() as usize
        } else {
            x.ceil() as usize
        }
    }

    /// Coupon dates t_i = T - (N - i)/f, i = 1..N, each paying C/f.
    /// Principal 1 is due at the last date.
    pub fn schedule(&self) -> Vec<CouponDate> {
        let n = self.num_coupons();
        let f = self.frequency as f64;
        let amount = self.coupon / f;
        (1..=n)
            .map(|i| CouponDate { time: self.maturity - (n - i) as f64 / f, amount })
            .collect()
    }
}

/// A signed holding of one bond at an observed clean price per unit face.
#[derive(Debug, Clone, PartialEq)]
pub struct Position {
    pub bond: Bond,
    /// Face units; negative means short.
    pub quantity: f64,
    /// Clean market price per unit face.
    pub market_price: f64,
}

impl Position {
    pub fn new(bond: Bond, quantity: f64, market_price: f64) -> Result<Self> {
        if !(market_price > 0.0) {
            return Err(EngineError::Invalid(format!("market price {market_price} <= 0")));
        }
        Ok(Self { bond, quantity, market_price })
    }

    pub fn market_value(&self) -> f64 {
        self.quantity * self.market_price
    }
}

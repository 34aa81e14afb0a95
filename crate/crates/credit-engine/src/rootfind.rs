//! Bracketed scalar root finding (Brent's method).
//!
//! Every calibration in this crate targets a function that is monotone on
//! its bracket, so a sign check on the endpoints is a full existence test.

use crate::error::{EngineError, Result};

pub const XTOL: f64 = 1e-12;
pub const MAX_ITER: usize = 200;

/// Find x in [a, b] with f(x) = 0 via Brent's method.
///
/// `what` names the quantity being solved for in error messages.
pub fn brent<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, what: &str) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.sign_differs(fb) {
        // proceed
    } else {
        return Err(EngineError::Bracket { what: what.to_string(), lo: a, hi: b });
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut mflag = true;
    let mut d = c;

    for _ in 0..MAX_ITER {
        if fb == 0.0 || (b - a).abs() < XTOL {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            // inverse quadratic interpolation
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };

        let lo = (3.0 * a + b) / 4.0;
        let between = (lo.min(b)..=lo.max(b)).contains(&s);
        let cond = !between
            || (mflag && (s - b).abs() >= (b - c).abs() / 2.0)
            || (!mflag && (s - b).abs() >= (c - d).abs() / 2.0)
            || (mflag && (b - c).abs() < XTOL)
            || (!mflag && (c - d).abs() < XTOL);
        if cond {
            s = (a + b) / 2.0;
            mflag = true;
        } else {
            mflag = false;
        }

        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa.sign_differs(fs) {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Ok(b)
}

trait SignDiffers {
    fn sign_differs(self, other: f64) -> bool;
}

impl SignDiffers for f64 {
    fn sign_differs(self, other: f64) -> bool {
        (self < 0.0 && other > 0.0) || (self > 0.0 && other < 0.0)
    }
}

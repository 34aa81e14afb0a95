//! Piecewise-flat term structures of instantaneous forward rates and
//! default hazard rates.
//!
//! A curve is a list of `(time, rate)` nodes with strictly increasing
//! times. The rate of node `j` applies on `[t_{j-1}, t_j)` with `t_0 = 0`;
//! the last rate is flat-extrapolated beyond the last node. At a node
//! boundary the right-hand segment's rate applies. All rates are
//! continuously compounded, per annum; time is a pure year fraction.
//! Integrals over a piecewise-flat curve are computed in closed form,
//! segment by segment.

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveNode {
    pub t: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct PiecewiseFlat {
    nodes: Vec<CurveNode>,
}

impl PiecewiseFlat {
    fn new(nodes: Vec<CurveNode>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(EngineError::Invalid("curve needs at least one node".into()));
        }
        let mut prev = -1.0;
        for n in &nodes {
            if !n.t.is_finite() || !n.rate.is_finite() {
                return Err(EngineError::Invalid("curve node not finite".into()));
            }
            if n.t < 0.0 {
                return Err(EngineError::Invalid(format!("node time {} < 0", n.t)));
            }
            if n.t <= prev {
                return Err(EngineError::Invalid(
                    "node times must be strictly increasing".into(),
                ));
            }
            prev = n.t;
        }
        Ok(Self { nodes })
    }

    /// Right-continuous piecewise rate; flat extrapolation on both ends.
    fn rate_at(&self, t: f64) -> f64 {
        for n in &self.nodes {
            if t < n.t {
                return n.rate;
            }
        }
        self.nodes.last().unwrap().rate
    }

    /// Exact integral of the rate over [0, t].
    fn integral(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        let mut prev = 0.0;
        for n in &self.nodes {
            if t <= prev {
                return acc;
            }
            let seg = t.min(n.t) - prev;
            if seg > 0.0 {
                acc += n.rate * seg;
            }
            prev = n.t;
        }
        if t > prev {
            acc += self.nodes.last().unwrap().rate * (t - prev);
        }
        acc
    }

    fn shifted(&self, delta: f64) -> Self {
        Self {
            nodes: self
                .nodes
                .iter()
                .map(|n| CurveNode { t: n.t, rate: n.rate + delta })
                .collect(),
        }
    }

    fn node_times(&self) -> impl Iterator<Item = f64> + '_ {
        self.nodes.iter().map(|n| n.t)
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) {
        return Err(EngineError::Domain(format!("time {t} < 0")));
    }
    Ok(())
}

/// Term structure of credit-risk-free instantaneous forward rates r(s).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscountCurve {
    pub(crate) curve: PiecewiseFlat,
}

impl DiscountCurve {
    pub fn new(nodes: Vec<CurveNode>) -> Result<Self> {
        Ok(Self { curve: PiecewiseFlat::new(nodes)? })
    }

    pub fn flat(rate: f64) -> Self {
        Self::new(vec![CurveNode { t: 1.0, rate }]).unwrap()
    }

    /// Z(t) = exp(-∫₀ᵗ r(s) ds).
    pub fn discount_factor(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok((-self.curve.integral(t)).exp())
    }

    /// The piecewise-flat instantaneous forward rate at t.
    pub fn forward_rate(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.curve.rate_at(t))
    }

    /// ∫_{t1}^{t2} r(s) ds.
    pub fn integral_between(&self, t1: f64, t2: f64) -> Result<f64> {
        check_time(t1)?;
        if t2 < t1 {
            return Err(EngineError::Domain(format!("interval [{t1}, {t2}] reversed")));
        }
        Ok(self.curve.integral(t2) - self.curve.integral(t1))
    }

    /// Parallel shift of all forward rates. Used for twist/shift scenarios
    /// and finite-difference bumps; the result is not re-validated.
    pub fn shifted(&self, delta: f64) -> Self {
        Self { curve: self.curve.shifted(delta) }
    }

    /// Linear steepening r(t) -> r(t) + t * slope, discretized on a fine
    /// grid so the result stays piecewise flat.
    pub fn twisted(&self, slope: f64, horizon: f64, step: f64) -> Result<Self> {
        check_time(horizon)?;
        let mut nodes = Vec::new();
        let mut t = step;
        while t < horizon + step {
            // mid-segment rate keeps the integral of the linear twist exact
            let mid = t - step / 2.0;
            nodes.push(CurveNode { t, rate: self.curve.rate_at(mid) + mid * slope });
            t += step;
        }
        Self::new(nodes)
    }

    pub fn node_times(&self) -> Vec<f64> {
        self.curve.node_times().collect()
    }
}

/// Term structure of default hazard rates h(s).
#[derive(Debug, Clone, PartialEq)]
pub struct HazardCurve {
    pub(crate) curve: PiecewiseFlat,
}

impl HazardCurve {
    pub fn new(nodes: Vec<CurveNode>) -> Result<Self> {
        for n in &nodes {
            if n.rate < 0.0 {
                return Err(EngineError::Invalid(format!("hazard rate {} < 0", n.rate)));
            }
        }
        Ok(Self { curve: PiecewiseFlat::new(nodes)? })
    }

    pub fn flat(rate: f64) -> Result<Self> {
        Self::new(vec![CurveNode { t: 1.0, rate }])
    }

    /// Q(t) = exp(-∫₀ᵗ h(s) ds).
    pub fn survival_prob(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok((-self.curve.integral(t)).exp())
    }

    /// Q(t1) - Q(t2): probability of default inside [t1, t2].
    pub fn default_prob_interval(&self, t1: f64, t2: f64) -> Result<f64> {
        check_time(t1)?;
        if t2 < t1 {
            return Err(EngineError::Domain(format!("interval [{t1}, {t2}] reversed")));
        }
        Ok(self.survival_prob(t1)? - self.survival_prob(t2)?)
    }

    pub fn hazard_rate(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.curve.rate_at(t))
    }

    /// Parallel shift h(s) -> h(s) + delta. Not re-validated: sensitivity
    /// bumps may push rates slightly negative.
    pub fn shifted(&self, delta: f64) -> Self {
        Self { curve: self.curve.shifted(delta) }
    }

    pub fn node_times(&self) -> Vec<f64> {
        self.curve.node_times().collect()
    }
}

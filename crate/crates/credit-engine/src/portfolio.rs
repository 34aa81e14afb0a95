//! Market-value aggregation and market-neutral trade construction.
//!
//! Portfolio durations, convexities and VOD aggregate as market-value
//! weighted averages of the per-bond measures (sign convention: -1 for
//! interest and hazard rate durations, +1 for recovery duration, already
//! baked into the per-bond numbers). The hedge solver treats the
//! neutrality conditions plus a unit-budget row as a least-squares
//! problem in non-normalized position weights, then rescales so the
//! larger of the gross long / gross short legs is exactly 1 and a cash
//! leg closes the zero-cost constraint.

use nalgebra::{DMatrix, DVector};

use crate::bond::Position;
use crate::error::{EngineError, Result};

#[derive(Debug, Clone)]
pub struct Portfolio {
    pub positions: Vec<Position>,
}

impl Portfolio {
    pub fn new(positions: Vec<Position>) -> Self {
        Self { positions }
    }

    /// Σ q_i P_i.
    pub fn market_value(&self) -> f64 {
        self.positions.iter().map(|p| p.market_value()).sum()
    }

    /// Market-value weights w_i = q_i P_i / MV.
    pub fn weights(&self) -> Result<Vec<f64>> {
        let mv = self.market_value();
        if mv == 0.0 {
            return Err(EngineError::Domain("zero portfolio market value".into()));
        }
        Ok(self.positions.iter().map(|p| p.market_value() / mv).collect())
    }

    /// Market-value weighted average of per-bond durations (or
    /// convexities; the rule is identical).
    pub fn aggregate_duration(&self, per_bond: &[f64]) -> Result<f64> {
        let w = self.weights()?;
        if per_bond.len() != w.len() {
            return Err(EngineError::Invalid(format!(
                "{} values for {} positions",
                per_bond.len(),
                w.len()
            )));
        }
        Ok(w.iter().zip(per_bond).map(|(w, d)| w * d).sum())
    }

    /// Σ w_i VOD_i = 1 - Σ q_i R_i / MV: percentage loss on simultaneous
    /// default of every position. Only meaningful for bonds of a single
    /// issuer (or a common default driver).
    pub fn aggregate_vod(&self) -> Result<f64> {
        let vods: Vec<f64> = self
            .positions
            .iter()
            .map(|p| 1.0 - p.bond.recovery_principal / p.market_price)
            .collect();
        self.aggregate_duration(&vods)
    }
}

/// Neutrality targets for a long-short trade: K sensitivity rows over N
/// bonds, each row divided by its target accuracy before solving.
#[derive(Debug, Clone)]
pub struct HedgeProblem {
    /// K rows of N raw sensitivities δ_i^k.
    pub sensitivities: Vec<Vec<f64>>,
    /// Per-row normalizers in the same units as the row.
    pub target_accuracy: Vec<f64>,
}

pub const DEFAULT_DURATION_ACCURACY: f64 = 0.1;
pub const DEFAULT_VOD_ACCURACY: f64 = 0.01;

impl HedgeProblem {
    pub fn new(sensitivities: Vec<Vec<f64>>, target_accuracy: Vec<f64>) -> Result<Self> {
        if sensitivities.len() != target_accuracy.len() {
            return Err(EngineError::Invalid(
                "one target accuracy required per sensitivity row".into(),
            ));
        }
        let n = sensitivities.first().map_or(0, |r| r.len());
        for row in &sensitivities {
            if row.len() != n {
                return Err(EngineError::Invalid("ragged sensitivity matrix".into()));
            }
        }
        for &acc in &target_accuracy {
            if !(acc > 0.0) {
                return Err(EngineError::Invalid(format!("normalizer {acc} must be > 0")));
            }
        }
        Ok(Self { sensitivities, target_accuracy })
    }

    fn num_bonds(&self) -> usize {
        self.sensitivities.first().map_or(0, |r| r.len())
    }
}

#[derive(Debug, Clone)]
pub struct HedgeSolution {
    /// Normalized signed bond weights w_i = v_i / W.
    pub weights: Vec<f64>,
    /// Cash weight w_0 = -(Σ v_i)/W, closing the zero-cost constraint.
    pub cash: f64,
    /// Non-normalized least-squares weights v_i.
    pub raw: Vec<f64>,
    /// W = max(gross long, gross short) of the raw weights.
    pub normalizer: f64,
    /// Achieved portfolio sensitivities Σ w_i δ_i^k in raw units,
    /// directly comparable to the target accuracies.
    pub residuals: Vec<f64>,
    /// Set when the stacked system is rank deficient and the minimum-norm
    /// solution was reported.
    pub rank_deficient: bool,
}

const SVD_RANK_TOL: f64 = 1e-10;
// Both orientations of a long-short trade fit equally well when the
// budget row is unsatisfiable along the neutral direction; accept a flip
// within this residual slack.
const ORIENTATION_SLACK: f64 = 1.05;

/// Solve for the zero-cost, unlevered long-short portfolio that drives
/// the selected aggregated sensitivities to zero in the least-squares
/// sense.
///
/// The stacked system is the K normalized sensitivity rows plus a row of
/// ones with target 1. Rank-deficient systems get the minimum-norm
/// solution and a warning flag rather than a failure. When the budget row
/// cannot be met (the usual market-neutral regime) the overall sign of
/// the solution is arbitrary; the convention here makes the position with
/// the largest absolute weight long.
pub fn solve_hedge(problem: &HedgeProblem) -> Result<HedgeSolution> {
    let n = problem.num_bonds();
    let k = problem.sensitivities.len();
    if n < 1 {
        return Err(EngineError::Invalid("hedge problem has no bonds".into()));
    }

    let mut stacked = DMatrix::zeros(k + 1, n);
    for (row, (sens, acc)) in problem
        .sensitivities
        .iter()
        .zip(&problem.target_accuracy)
        .enumerate()
    {
        for (col, &delta) in sens.iter().enumerate() {
            stacked[(row, col)] = delta / acc;
        }
    }
    for col in 0..n {
        stacked[(k, col)] = 1.0;
    }
    let mut target = DVector::zeros(k + 1);
    target[k] = 1.0;

    let svd = stacked.clone().svd(true, true);
    let rank = svd.rank(SVD_RANK_TOL * svd.singular_values.max());
    let rank_deficient = rank < n.min(k + 1);
    let mut v = svd
        .solve(&target, SVD_RANK_TOL * svd.singular_values.max())
        .map_err(|e| EngineError::Invalid(format!("SVD solve failed: {e}")))?;

    if v.amax() < 1e-14 {
        return Err(EngineError::DegenerateTrade);
    }

    // orientation: flip only when it costs (almost) nothing
    let residual_plus = (&stacked * &v - &target).norm();
    let residual_minus = (&stacked * (-&v) - &target).norm();
    if residual_minus <= ORIENTATION_SLACK * residual_plus {
        let dominant = v.iter().map(|x| x.abs()).enumerate().fold(
            (0usize, f64::NEG_INFINITY),
            |best, (i, a)| if a > best.1 { (i, a) } else { best },
        );
        if v[dominant.0] < 0.0 {
            v = -v;
        }
    }

    let gross_long: f64 = v.iter().filter(|x| **x > 0.0).sum();
    let gross_short: f64 = -v.iter().filter(|x| **x < 0.0).sum::<f64>();
    let normalizer = gross_long.max(gross_short);
    let weights: Vec<f64> = v.iter().map(|x| x / normalizer).collect();
    let cash = -v.sum() / normalizer;
    let residuals = problem
        .sensitivities
        .iter()
        .map(|row| row.iter().zip(&weights).map(|(d, w)| d * w).sum())
        .collect();

    Ok(HedgeSolution {
        weights,
        cash,
        raw: v.iter().copied().collect(),
        normalizer,
        residuals,
        rank_deficient,
    })
}

/// Conventional three-bond barbell: body bond long 100%, wing weights
/// solving zero aggregate modified duration and zero total price weight
/// (no cash leg).
pub fn solve_spread_based_barbell(mod_durations: &[f64; 3], body: usize) -> Result<[f64; 3]> {
    if body > 2 {
        return Err(EngineError::Invalid(format!("body index {body} out of range")));
    }
    let wings: Vec<usize> = (0..3).filter(|&i| i != body).collect();
    let (i, j) = (wings[0], wings[1]);
    let det = mod_durations[i] - mod_durations[j];
    if det.abs() < 1e-12 {
        return Err(EngineError::Domain("equal wing durations: singular barbell".into()));
    }
    // w_i D_i + w_j D_j = -D_body,  w_i + w_j = -1
    let w_i = (mod_durations[j] - mod_durations[body]) / det;
    let w_j = -1.0 - w_i;
    let mut out = [0.0; 3];
    out[body] = 1.0;
    out[i] = w_i;
    out[j] = w_j;
    Ok(out)
}

/// Treasury curve shift/twist factors from benchmark 2/5/10/20/30y yield
/// changes: shift is the plain mean, twist weights the wings
/// (2, 1, 0, -1, -2)/10.
pub fn treasury_factors(yield_changes: &[f64; 5]) -> (f64, f64) {
    let shift = yield_changes.iter().sum::<f64>() / 5.0;
    let twist = (2.0 * yield_changes[0] + yield_changes[1]
        - yield_changes[3]
        - 2.0 * yield_changes[4])
        / 10.0;
    (shift, twist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bond::Bond;
    use approx::assert_relative_eq;

    fn bond(rp: f64) -> Bond {
        Bond::new(0.05, 2, 5.0, rp, 0.0).unwrap()
    }

    #[test]
    fn aggregation_rules() {
        let single = Portfolio::new(vec![Position::new(bond(0.4), 2.0, 1.01).unwrap()]);
        assert_relative_eq!(single.aggregate_duration(&[3.3]).unwrap(), 3.3, epsilon = 1e-15);

        let equal_mv = Portfolio::new(vec![
            Position::new(bond(0.4), 1.0, 1.0).unwrap(),
            Position::new(bond(0.4), 2.0, 0.5).unwrap(),
        ]);
        assert_relative_eq!(equal_mv.aggregate_duration(&[2.0, 6.0]).unwrap(), 4.0, epsilon = 1e-15);

        let zero_mv = Portfolio::new(vec![
            Position::new(bond(0.4), 1.0, 1.0).unwrap(),
            Position::new(bond(0.4), -1.0, 1.0).unwrap(),
        ]);
        assert!(zero_mv.aggregate_duration(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn published_portfolio_row_aggregates() {
        // weights -0.5923 / 0.9744 / -0.4077 on IR durations 2.22/6.24/11.64
        let prices = [1.029, 1.049, 1.0044];
        let weights = [-0.5923, 0.9744, -0.4077];
        let durations = [2.22, 6.24, 11.64];
        let positions: Vec<Position> = prices
            .iter()
            .zip(&weights)
            .map(|(&p, &w)| Position::new(bond(0.4), w / p, p).unwrap())
            .collect();
        // quantities above are scaled so q_i P_i = w_i and MV = Σ w_i
        let port = Portfolio::new(positions);
        let mv = port.market_value();
        let agg = port.aggregate_duration(&durations).unwrap() * mv; // undo MV normalization
        assert!((agg - 0.02).abs() < 0.005, "aggregate {agg}");
        let vod = port.aggregate_vod().unwrap() * mv;
        assert!(vod.abs() < 0.005, "aggregate VOD {vod}");
    }

    #[test]
    fn vod_aggregation_bounds() {
        let at_recovery = Portfolio::new(vec![Position::new(bond(0.4), 1.0, 0.4).unwrap()]);
        assert_relative_eq!(at_recovery.aggregate_vod().unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn single_bond_budget_only() {
        let empty = HedgeProblem { sensitivities: vec![], target_accuracy: vec![] };
        assert!(solve_hedge(&empty).is_err());

        let one = HedgeProblem::new(vec![vec![0.0]], vec![1.0]).unwrap();
        let s = solve_hedge(&one).unwrap();
        assert_relative_eq!(s.weights[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(s.normalizer, 1.0, epsilon = 1e-12);
        assert_relative_eq!(s.cash, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn exact_solution_when_square_and_nonsingular() {
        // N = K + 1 = 3
        let problem = HedgeProblem::new(
            vec![vec![2.0, 5.0, 9.0], vec![0.5, 0.7, 0.3]],
            vec![0.1, 0.01],
        )
        .unwrap();
        let s = solve_hedge(&problem).unwrap();
        assert!(!s.rank_deficient);
        for r in &s.residuals {
            assert!(r.abs() <= 1e-10);
        }
        let raw_sum: f64 = s.raw.iter().sum();
        assert_relative_eq!(raw_sum, 1.0, epsilon = 1e-10);
        assert_relative_eq!(s.weights.iter().sum::<f64>() + s.cash, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn identical_bonds_get_symmetric_minimum_norm_split() {
        let problem = HedgeProblem::new(vec![vec![3.0, 3.0]], vec![0.1]).unwrap();
        let s = solve_hedge(&problem).unwrap();
        assert!(s.rank_deficient);
        assert_relative_eq!(s.raw[0], s.raw[1], epsilon = 1e-12);
    }

    #[test]
    fn unlevered_and_zero_cost_invariants() {
        let problem = HedgeProblem::new(
            vec![vec![1.0, -2.0, 4.0, 0.5], vec![0.3, 0.9, -0.2, 0.6]],
            vec![0.1, 0.1],
        )
        .unwrap();
        let s = solve_hedge(&problem).unwrap();
        let gross_long: f64 = s.weights.iter().filter(|w| **w > 0.0).sum();
        let gross_short: f64 = -s.weights.iter().filter(|w| **w < 0.0).sum::<f64>();
        assert_relative_eq!(gross_long.max(gross_short), 1.0, epsilon = 1e-14);
        assert_relative_eq!(s.weights.iter().sum::<f64>() + s.cash, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn spread_based_barbell_published_row() {
        let w = solve_spread_based_barbell(&[2.23, 6.34, 12.53], 1).unwrap();
        assert!((w[0] + 0.6004).abs() < 1e-3);
        assert_eq!(w[1], 1.0);
        assert!((w[2] + 0.3996).abs() < 1e-3);
        // residual duration of the published weights is ~0
        let resid: f64 = -0.6004 * 2.23 + 6.34 - 0.3996 * 12.53;
        assert!(resid.abs() < 0.01);
    }

    #[test]
    fn spread_based_barbell_symmetric_and_singular() {
        let w = solve_spread_based_barbell(&[4.0, 8.0, 12.0], 1).unwrap();
        assert_relative_eq!(w[0], -0.5, epsilon = 1e-12);
        assert_relative_eq!(w[2], -0.5, epsilon = 1e-12);
        assert!(solve_spread_based_barbell(&[4.0, 8.0, 4.0], 1).is_err());
    }

    #[test]
    fn treasury_factor_values() {
        let (s, t) = treasury_factors(&[10.0, 10.0, 10.0, 10.0, 10.0]);
        assert_relative_eq!(s, 10.0, epsilon = 1e-15);
        assert_relative_eq!(t, 0.0, epsilon = 1e-15);
        let (s, t) = treasury_factors(&[2.0, 5.0, 10.0, 20.0, 30.0]);
        assert_relative_eq!(s, 13.4, epsilon = 1e-12);
        assert_relative_eq!(t, -7.1, epsilon = 1e-12);
        // pure steepener
        let (s, t) = treasury_factors(&[-10.0, -5.0, 0.0, 5.0, 10.0]);
        assert_relative_eq!(s, 0.0, epsilon = 1e-12);
        assert_relative_eq!(t, -5.0, epsilon = 1e-12);
    }
}

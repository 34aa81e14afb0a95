//! Python bindings for the credit analytics engine.
//!
//! Thin wrappers over the core types plus module-level functions for
//! pricing, sensitivity reports, hedge construction and Treasury factors.
//! Same conventions as the core: prices per unit face, rates decimal per
//! annum.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use credit_engine as engine;
use engine::{CurveNode, EngineError, PricingInputs};

fn err(e: EngineError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn nodes(pairs: Vec<(f64, f64)>) -> Vec<CurveNode> {
    pairs.into_iter().map(|(t, rate)| CurveNode { t, rate }).collect()
}

/// Piecewise-flat instantaneous forward (discount) curve.
#[pyclass(name = "DiscountCurve")]
struct PyDiscountCurve {
    inner: engine::DiscountCurve,
}

#[pymethods]
impl PyDiscountCurve {
    /// Build from [(t, rate), ...] node pairs.
    #[new]
    fn new(pairs: Vec<(f64, f64)>) -> PyResult<Self> {
        Ok(Self { inner: engine::DiscountCurve::new(nodes(pairs)).map_err(err)? })
    }

    #[staticmethod]
    fn flat(rate: f64) -> Self {
        Self { inner: engine::DiscountCurve::flat(rate) }
    }

    fn discount_factor(&self, t: f64) -> PyResult<f64> {
        self.inner.discount_factor(t).map_err(err)
    }

    fn forward_rate(&self, t: f64) -> PyResult<f64> {
        self.inner.forward_rate(t).map_err(err)
    }
}

/// Piecewise-flat default intensity curve.
#[pyclass(name = "HazardCurve")]
struct PyHazardCurve {
    inner: engine::HazardCurve,
}

#[pymethods]
impl PyHazardCurve {
    #[new]
    fn new(pairs: Vec<(f64, f64)>) -> PyResult<Self> {
        Ok(Self { inner: engine::HazardCurve::new(nodes(pairs)).map_err(err)? })
    }

    #[staticmethod]
    fn flat(rate: f64) -> PyResult<Self> {
        Ok(Self { inner: engine::HazardCurve::flat(rate).map_err(err)? })
    }

    fn survival_prob(&self, t: f64) -> PyResult<f64> {
        self.inner.survival_prob(t).map_err(err)
    }

    fn hazard_rate(&self, t: f64) -> PyResult<f64> {
        self.inner.hazard_rate(t).map_err(err)
    }
}

/// Fixed-coupon bullet bond, face normalized to 1.
#[pyclass(name = "Bond")]
struct PyBond {
    inner: engine::Bond,
}

#[pymethods]
impl PyBond {
    #[new]
    #[pyo3(signature = (coupon, frequency, maturity, recovery_principal, recovery_coupon = 0.0))]
    fn new(
        coupon: f64,
        frequency: u32,
        maturity: f64,
        recovery_principal: f64,
        recovery_coupon: f64,
    ) -> PyResult<Self> {
        Ok(Self {
            inner: engine::Bond::new(coupon, frequency, maturity, recovery_principal, recovery_coupon)
                .map_err(err)?,
        })
    }

    #[getter]
    fn maturity(&self) -> f64 {
        self.inner.maturity
    }

    fn schedule(&self) -> Vec<(f64, f64)> {
        self.inner.schedule().iter().map(|c| (c.time, c.amount)).collect()
    }
}

fn inputs<'a>(
    bond: &'a PyBond,
    discount: &'a PyDiscountCurve,
    hazard: &'a PyHazardCurve,
    oasf: f64,
) -> PricingInputs<'a> {
    PricingInputs { bond: &bond.inner, discount: &discount.inner, hazard: &hazard.inner, oasf }
}

/// Exact discrete survival-based clean price.
#[pyfunction]
#[pyo3(signature = (bond, discount, hazard, oasf = 0.0))]
fn price_exact(bond: &PyBond, discount: &PyDiscountCurve, hazard: &PyHazardCurve, oasf: f64) -> f64 {
    engine::price_exact(&inputs(bond, discount, hazard, oasf))
}

/// Continuous-time price approximation with bias corrections.
#[pyfunction]
#[pyo3(signature = (bond, discount, hazard, oasf = 0.0))]
fn price_continuous(
    bond: &PyBond,
    discount: &PyDiscountCurve,
    hazard: &PyHazardCurve,
    oasf: f64,
) -> f64 {
    engine::price_continuous(&inputs(bond, discount, hazard, oasf))
}

/// OASF that reprices the bond at the observed clean price (per unit face).
#[pyfunction]
fn calibrate_oasf(
    bond: &PyBond,
    discount: &PyDiscountCurve,
    hazard: &PyHazardCurve,
    clean_price: f64,
) -> PyResult<f64> {
    engine::calibrate_oasf(&bond.inner, &discount.inner, &hazard.inner, clean_price).map_err(err)
}

/// Bond-implied CDS spread.
#[pyfunction]
#[pyo3(signature = (discount, hazard, horizon, recovery_principal, oasf = 0.0))]
fn bcds(
    discount: &PyDiscountCurve,
    hazard: &PyHazardCurve,
    horizon: f64,
    recovery_principal: f64,
    oasf: f64,
) -> PyResult<f64> {
    engine::bcds(&discount.inner, &hazard.inner, horizon, recovery_principal, oasf).map_err(err)
}

/// Full per-bond sensitivity report as a dict.
#[pyfunction]
#[pyo3(signature = (bond, discount, hazard, oasf = 0.0))]
fn risk_report<'py>(
    py: Python<'py>,
    bond: &PyBond,
    discount: &PyDiscountCurve,
    hazard: &PyHazardCurve,
    oasf: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let report =
        engine::risk_report(&bond.inner, &discount.inner, &hazard.inner, oasf).map_err(err)?;
    let dict = PyDict::new(py);
    for key in engine::RiskReport::FIELDS {
        dict.set_item(key, report.field(key).expect("static field list"))?;
    }
    Ok(dict)
}

/// Zero-cost market-neutral hedge from raw sensitivity rows.
#[pyfunction]
fn solve_hedge<'py>(
    py: Python<'py>,
    sensitivities: Vec<Vec<f64>>,
    target_accuracy: Vec<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let problem = engine::HedgeProblem::new(sensitivities, target_accuracy).map_err(err)?;
    let s = engine::solve_hedge(&problem).map_err(err)?;
    let dict = PyDict::new(py);
    dict.set_item("weights", s.weights)?;
    dict.set_item("cash", s.cash)?;
    dict.set_item("residuals", s.residuals)?;
    dict.set_item("rank_deficient", s.rank_deficient)?;
    Ok(dict)
}

/// (shift, twist) in the units of the five benchmark yield changes.
#[pyfunction]
fn treasury_factors(yield_changes: [f64; 5]) -> (f64, f64) {
    engine::treasury_factors(&yield_changes)
}

#[pymodule]
fn credit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDiscountCurve>()?;
    m.add_class::<PyHazardCurve>()?;
    m.add_class::<PyBond>()?;
    m.add_function(wrap_pyfunction!(price_exact, m)?)?;
    m.add_function(wrap_pyfunction!(price_continuous, m)?)?;
    m.add_function(wrap_pyfunction!(calibrate_oasf, m)?)?;
    m.add_function(wrap_pyfunction!(bcds, m)?)?;
    m.add_function(wrap_pyfunction!(risk_report, m)?)?;
    m.add_function(wrap_pyfunction!(solve_hedge, m)?)?;
    m.add_function(wrap_pyfunction!(treasury_factors, m)?)?;
    Ok(())
}

//! File formats: curve JSON, bond records (JSON or CSV), and raw hedge
//! problem files.
//!
//! Prices cross this boundary per 100 face and spreads in basis points;
//! everything past it is per unit face and decimal per annum.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bond::Bond;
use crate::curves::{CurveNode, DiscountCurve, HazardCurve};
use crate::error::{EngineError, Result};
use crate::portfolio::{DEFAULT_DURATION_ACCURACY, DEFAULT_VOD_ACCURACY};

/// On-disk curve: `{"kind": "discount"|"hazard", "nodes": [{"t":…,"rate":…}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveFile {
    pub kind: String,
    pub nodes: Vec<CurveNode>,
}

impl CurveFile {
    pub fn into_discount(self) -> Result<DiscountCurve> {
        if self.kind != "discount" {
            return Err(EngineError::Invalid(format!(
                "expected a discount curve, file says kind = {:?}",
                self.kind
            )));
        }
        DiscountCurve::new(self.nodes)
    }

    pub fn into_hazard(self) -> Result<HazardCurve> {
        if self.kind != "hazard" {
            return Err(EngineError::Invalid(format!(
                "expected a hazard curve, file says kind = {:?}",
                self.kind
            )));
        }
        HazardCurve::new(self.nodes)
    }
}

pub fn load_discount_curve(path: &Path) -> Result<DiscountCurve> {
    parse_curve_file(&read(path)?)?.into_discount()
}

pub fn load_hazard_curve(path: &Path) -> Result<HazardCurve> {
    parse_curve_file(&read(path)?)?.into_hazard()
}

pub fn parse_curve_file(text: &str) -> Result<CurveFile> {
    serde_json::from_str(text).map_err(|e| EngineError::Invalid(format!("curve file: {e}")))
}

/// One bond row as it appears in input files. Exactly one of
/// `clean_price_per100` / `oasf_bp` must be present.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BondRecord {
    pub id: String,
    pub coupon: f64,
    pub frequency: u32,
    pub maturity_years: f64,
    pub recovery_principal: f64,
    pub recovery_coupon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clean_price_per100: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oasf_bp: Option<f64>,
}

/// What pins the bond to the market: an observed clean price (per unit
/// face) or a known spread (decimal per annum).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MarketQuote {
    CleanPrice(f64),
    Oasf(f64),
}

impl BondRecord {
    pub fn to_bond(&self) -> Result<Bond> {
        Bond::new(
            self.coupon,
            self.frequency,
            self.maturity_years,
            self.recovery_principal,
            self.recovery_coupon,
        )
        .map_err(|e| EngineError::Invalid(format!("bond {:?}: {e}", self.id)))
    }

    /// Per-unit / decimal quote, enforcing the exactly-one-of rule.
    pub fn quote(&self) -> Result<MarketQuote> {
        match (self.clean_price_per100, self.oasf_bp) {
            (Some(p), None) => {
                if !(p > 0.0) {
                    return Err(EngineError::Invalid(format!(
                        "bond {:?}: clean_price_per100 {p} <= 0",
                        self.id
                    )));
                }
                Ok(MarketQuote::CleanPrice(p / 100.0))
            }
            (None, Some(s)) => Ok(MarketQuote::Oasf(s / 10_000.0)),
            (Some(_), Some(_)) | (None, None) => Err(EngineError::Invalid(format!(
                "bond {:?}: exactly one of clean_price_per100 / oasf_bp required",
                self.id
            ))),
        }
    }
}

/// Load bond records from a `.json` array or a `.csv` file with a header
/// row (file extension decides).
pub fn load_bond_records(path: &Path) -> Result<Vec<BondRecord>> {
    let text = read(path)?;
    let records = match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => parse_bond_csv(&text)?,
        _ => parse_bond_json(&text)?,
    };
    if records.is_empty() {
        return Err(EngineError::Invalid(format!("{}: no bonds", path.display())));
    }
    for r in &records {
        r.to_bond()?;
        r.quote()?;
    }
    Ok(records)
}

pub fn parse_bond_json(text: &str) -> Result<Vec<BondRecord>> {
    serde_json::from_str(text).map_err(|e| EngineError::Invalid(format!("bond file: {e}")))
}

pub fn parse_bond_csv(text: &str) -> Result<Vec<BondRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    // empty CSV cells must deserialize as None, which csv+serde handles
    // for Option fields as long as the column exists; missing columns are
    // also None because of the serde defaults
    let mut out = Vec::new();
    for row in reader.deserialize::<BondRecord>() {
        out.push(row.map_err(|e| EngineError::Invalid(format!("bond csv: {e}")))?);
    }
    Ok(out)
}

/// A pre-computed hedge problem: named risk rows over identified bonds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HedgeFile {
    pub bond_ids: Vec<String>,
    /// risk key -> row of raw sensitivities, one per bond
    pub sensitivities: BTreeMap<String, Vec<f64>>,
    /// risk key -> normalizer; missing keys fall back to defaults
    #[serde(default)]
    pub target_accuracy: BTreeMap<String, f64>,
}

pub fn load_hedge_file(path: &Path) -> Result<HedgeFile> {
    let file: HedgeFile = serde_json::from_str(&read(path)?)
        .map_err(|e| EngineError::Invalid(format!("hedge file: {e}")))?;
    let n = file.bond_ids.len();
    if n == 0 {
        return Err(EngineError::Invalid("hedge file: no bonds".into()));
    }
    for (key, row) in &file.sensitivities {
        if row.len() != n {
            return Err(EngineError::Invalid(format!(
                "hedge file: row {key:?} has {} values for {n} bonds",
                row.len()
            )));
        }
    }
    Ok(file)
}

/// Default neutrality normalizer for a risk key: 0.01 for VOD (a pure
/// fraction), 0.1 for everything else (durations, in years).
pub fn default_accuracy(risk_key: &str) -> f64 {
    if risk_key == "vod" {
        DEFAULT_VOD_ACCURACY
    } else {
        DEFAULT_DURATION_ACCURACY
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| EngineError::Invalid(format!("{}: {e}", path.display())))
}

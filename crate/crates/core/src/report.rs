//! Machine-readable verification reports.
//!
//! A report records one lemma/theorem check: its inputs (including every
//! tolerance, under `tol_<residual>`), the computed quantities, the named
//! residuals, and a pass flag that is true iff every residual is at most its
//! declared tolerance.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::io::to_canonical_json;

/// An input parameter: integer, real, or text (e.g. `p = "inf"`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    UInt(u64),
    Real(f64),
    Text(String),
}

impl std::fmt::Display for Param {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Param::Int(v) => write!(f, "{v}"),
            Param::UInt(v) => write!(f, "{v}"),
            Param::Real(v) => write!(f, "{v:.16e}"),
            Param::Text(v) => write!(f, "{v}"),
        }
    }
}

/// A computed quantity: real, or complex as an `[re, im]` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Real(f64),
    Complex([f64; 2]),
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Quantity::Real(v) => write!(f, "{v:.16e}"),
            Quantity::Complex([re, im]) => write!(f, "{re:.16e}+{im:.16e}i"),
        }
    }
}

/// Outcome of one verification check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub inputs: BTreeMap<String, Param>,
    pub quantities: BTreeMap<String, Quantity>,
    pub residuals: BTreeMap<String, f64>,
    pub passed: bool,
    pub elapsed_ms: f64,
}

impl VerificationReport {
    pub fn new(check_name: impl Into<String>) -> Self {
        Self {
            check_name: check_name.into(),
            inputs: BTreeMap::new(),
            quantities: BTreeMap::new(),
            residuals: BTreeMap::new(),
            passed: true,
            elapsed_ms: 0.0,
        }
    }

    pub fn input_int(&mut self, key: &str, value: i64) -> &mut Self {
        self.inputs.insert(key.into(), Param::Int(value));
        self
    }

    pub fn input_uint(&mut self, key: &str, value: u64) -> &mut Self {
        self.inputs.insert(key.into(), Param::UInt(value));
        self
    }

    pub fn input_real(&mut self, key: &str, value: f64) -> &mut Self {
        self.inputs.insert(key.into(), Param::Real(value));
        self
    }

    pub fn input_text(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.inputs.insert(key.into(), Param::Text(value.into()));
        self
    }

    /// Records an exponent, as a real for finite p and as `"inf"` otherwise.
    pub fn input_exponent(&mut self, key: &str, p: crate::schatten::Exponent) -> &mut Self {
        if p.is_infinite() {
            self.input_text(key, "inf")
        } else {
            self.input_real(key, p.value())
        }
    }

    pub fn quantity(&mut self, key: &str, value: f64) -> &mut Self {
        self.quantities.insert(key.into(), Quantity::Real(value));
        self
    }

    pub fn quantity_complex(&mut self, key: &str, value: Complex64) -> &mut Self {
        self.quantities
            .insert(key.into(), Quantity::Complex([value.re, value.im]));
        self
    }

    /// Records a residual with its tolerance. The tolerance lands in the
    /// inputs under `tol_<name>`; the pass flag clears when the residual
    /// exceeds it (a NaN residual always fails).
    pub fn residual(&mut self, name: &str, value: f64, tol: f64) -> &mut Self {
        self.inputs.insert(format!("tol_{name}"), Param::Real(tol));
        self.residuals.insert(name.into(), value);
        if !(value <= tol) {
            self.passed = false;
        }
        self
    }

    pub fn set_elapsed_ms(&mut self, elapsed_ms: f64) -> &mut Self {
        self.elapsed_ms = elapsed_ms;
        self
    }

    /// Single-line JSON with canonical float formatting.
    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    /// Largest ratio residual/tolerance over all residuals (0 when empty);
    /// handy for summaries.
    pub fn worst_ratio(&self) -> f64 {
        self.residuals
            .iter()
            .map(|(name, &value)| {
                let tol = match self.inputs.get(&format!("tol_{name}")) {
                    Some(Param::Real(t)) if *t > 0.0 => *t,
                    _ => 1.0,
                };
                value / tol
            })
            .fold(0.0f64, f64::max)
    }
}

/// Aggregate emitted after a stream of reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let passed = reports.iter().filter(|r| r.passed).count();
        Self {
            total: reports.len(),
            passed,
            failed: reports.len() - passed,
        }
    }

    pub fn to_json(&self) -> String {
        format!("{{\"summary\":{}}}", to_canonical_json(self))
    }
}

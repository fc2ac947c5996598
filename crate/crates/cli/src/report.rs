//! Report files. Field order is fixed by the struct definitions and no
//! field depends on time or environment, so identical input gives identical
//! bytes.

use hypint_core::verify::ResidualReport;
use serde::{Deserialize, Serialize};

use crate::problem::{Param, C};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub problem: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: C,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorEntry {
    pub kind: String,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub operator: String,
    pub center: Vec<C>,
    pub step: f64,
    pub residual: C,
    pub value: C,
    pub largest_term: f64,
    pub relative: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correction: Option<C>,
}

impl From<&ResidualReport> for ResidualEntry {
    fn from(r: &ResidualReport) -> Self {
        ResidualEntry {
            operator: r.operator.clone(),
            center: r.center.iter().map(|&z| z.into()).collect(),
            step: r.step,
            residual: r.residual.into(),
            value: r.value.into(),
            largest_term: r.largest_term,
            relative: r.relative,
            tolerance: r.tolerance,
            passed: r.passed,
            correction: r.correction.map(Into::into),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    /// Powers of the series variables.
    pub powers: Vec<u32>,
    /// Γ arguments `ρ` of the base variables; empty for oracle terms.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exponents: Vec<Param>,
    pub coefficient: Param,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesDump {
    /// `gamma` for closed Γ-product coefficients, `oracle` for quadrature.
    pub provenance: String,
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<usize>>,
    pub variables: Vec<String>,
    pub order: u32,
    pub terms: Vec<TermEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointEntry {
    pub point: Vec<C>,
    pub series: C,
    pub oracle: C,
    pub tail: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonEntry {
    pub kappa: C,
    pub max_deviation: f64,
    pub kappa_spread: f64,
    pub points: Vec<PointEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub tool: String,
    pub version: String,
    pub command: CommandEcho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<NamedValue>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub operators: Vec<OperatorEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<ResidualEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesDump>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ReportFile {
    pub fn new(command: CommandEcho) -> Self {
        ReportFile {
            tool: "hypint".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            passed: None,
            values: Vec::new(),
            operators: Vec::new(),
            residuals: Vec::new(),
            series: None,
            comparison: None,
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
